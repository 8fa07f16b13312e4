//! Runs both pipelines over families of test classes and compares them.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::bamboo::BambooClass;
use crate::chain::{DecoratedChain, Vertex};
use crate::correlators::Correlators;
use crate::error::{Error, Result};
use crate::hain::HainClass;
use crate::monomial::{compositions, KappaMonomial, PsiKappaMonomial};
use crate::omega::TestClass;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub include_kappa: bool,
    pub include_boundary: bool,
}

/// Partitions of `n` as ascending part lists, in lexicographic order:
/// `3 -> [1,1,1], [1,2], [3]`.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(n: u32, min: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in min..=n {
            prefix.push(part);
            rec(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 1, &mut Vec::new(), &mut out);
    out
}

fn kappa_monomials(degree: u32, include_kappa: bool) -> Vec<KappaMonomial> {
    if degree > 0 && !include_kappa {
        return Vec::new();
    }
    partitions(degree)
        .into_iter()
        .map(|parts| KappaMonomial::from_pairs(parts.into_iter().map(|p| (p, 1))).unwrap())
        .collect()
}

/// Monomials `ψ₁^{d1} ψ₂^{d2} κ` of the given codimension, ordered by κ
/// degree, then by decreasing `d1`, then by κ partition.
pub fn monomials_of_codim(codim: u32, include_kappa: bool) -> Vec<PsiKappaMonomial> {
    let mut out = Vec::new();
    for kdeg in 0..=codim {
        let kappas = kappa_monomials(kdeg, include_kappa);
        for d1 in (0..=codim - kdeg).rev() {
            for k in &kappas {
                out.push(PsiKappaMonomial::new(d1, codim - kdeg - d1, k.clone()));
            }
        }
    }
    out
}

/// Decorated two-vertex chains `[g1|α]-[g2|β]` with `deg α + deg β = g - 2`.
fn boundary_classes(g: u32, include_kappa: bool) -> Vec<DecoratedChain> {
    let mut out = Vec::new();
    if g < 2 {
        return out;
    }
    let total = g - 2;
    for g1 in 1..g {
        for split in compositions(total, 2) {
            for a in monomials_of_codim(split[0], include_kappa) {
                for b in monomials_of_codim(split[1], include_kappa) {
                    let vertices = vec![
                        Vertex::decorated(g1, a.d1, a.d2, a.kappa.clone()),
                        Vertex::decorated(g - g1, b.d1, b.d2, b.kappa),
                    ];
                    out.push(DecoratedChain::new(vertices, Rational::one()).unwrap());
                }
            }
        }
    }
    out
}

/// Test classes of codimension `g - 1`: monomials first, then (optionally)
/// decorated two-vertex boundary classes.
pub fn enumerate_omegas(g: u32, include_kappa: bool, include_boundary: bool) -> Vec<TestClass> {
    if g == 0 {
        return Vec::new();
    }
    let mut out: Vec<TestClass> = monomials_of_codim(g - 1, include_kappa)
        .into_iter()
        .map(TestClass::Monomial)
        .collect();
    if include_boundary {
        out.extend(boundary_classes(g, include_kappa).into_iter().map(TestClass::Chain));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub omega: String,
    pub bamboo: Option<Rational>,
    pub dr: Option<Rational>,
    pub equal: bool,
    pub ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub genus: u32,
    pub records: Vec<Record>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.equal).count()
    }

    pub fn failed(&self) -> usize {
        self.records.len() - self.passed()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per record: `omega,bamboo,dr,equal,ms`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("omega,bamboo,dr,equal,ms\n");
        let show = |r: &Option<Rational>| r.as_ref().map(|v| v.to_string()).unwrap_or_default();
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.omega,
                show(&r.bamboo),
                show(&r.dr),
                r.equal,
                r.ms
            ));
        }
        out
    }

    /// The report with timings zeroed, for comparing runs.
    pub fn without_timing(&self) -> VerificationReport {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.ms = 0;
        }
        r
    }
}

/// Both pipelines for one genus, built once and shared across records.
pub struct Verifier<'a> {
    genus: u32,
    wk: &'a Correlators,
    bamboo: BambooClass,
    dr: HainClass,
}

impl<'a> Verifier<'a> {
    pub fn new(genus: u32, wk: &'a Correlators) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidGenus { genus, min: 1 });
        }
        Ok(Verifier {
            genus,
            wk,
            bamboo: BambooClass::new(genus)?,
            dr: HainClass::new(genus)?,
        })
    }

    pub fn bamboo_side(&self, omega: &TestClass) -> Result<Rational> {
        self.bamboo.pair(self.wk, omega)
    }

    pub fn dr_side(&self, omega: &TestClass) -> Result<Rational> {
        self.dr.pair(omega)
    }

    pub fn record(&self, omega: &TestClass) -> Record {
        let start = Instant::now();
        let result = self
            .bamboo_side(omega)
            .and_then(|b| self.dr_side(omega).map(|d| (b, d)));
        let ms = start.elapsed().as_millis() as u64;
        match result {
            Ok((b, d)) => Record {
                omega: omega.to_string(),
                equal: b == d,
                bamboo: Some(b),
                dr: Some(d),
                ms,
                error: None,
            },
            Err(e) => Record {
                omega: omega.to_string(),
                bamboo: None,
                dr: None,
                equal: false,
                ms,
                error: Some(e.to_string()),
            },
        }
    }

    pub fn run(&self, omegas: &[TestClass]) -> VerificationReport {
        let records: Vec<Record> = omegas.par_iter().map(|o| self.record(o)).collect();
        let pass = !records.is_empty() && records.iter().all(|r| r.equal);
        VerificationReport {
            genus: self.genus,
            records,
            pass,
        }
    }
}

/// Enumerates the test classes for `g` and checks every one.
pub fn verify(g: u32, options: VerifyOptions, wk: &Correlators) -> Result<VerificationReport> {
    let verifier = Verifier::new(g, wk)?;
    let omegas = enumerate_omegas(g, options.include_kappa, options.include_boundary);
    Ok(verifier.run(&omegas))
}
