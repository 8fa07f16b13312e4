//! ψ/κ monomials on the two-pointed moduli space.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::rational::{multinomial, Rational};

/// A monomial `∏ κ_i^{c_i}` stored as a sorted map `i -> c_i` without zero
/// exponents, so equal monomials are structurally equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KappaMonomial(BTreeMap<u32, u32>);

impl KappaMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds from `(index, exponent)` pairs. Index 0 is rejected: κ₀ is a
    /// scalar and never appears as a decoration.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self, Error> {
        let mut map = BTreeMap::new();
        for (index, exp) in pairs {
            if index == 0 {
                return Err(Error::Parse("kappa index must be at least 1".into()));
            }
            if exp > 0 {
                *map.entry(index).or_insert(0) += exp;
            }
        }
        Ok(KappaMonomial(map))
    }

    /// Convenience for tests and literals; panics on index 0.
    pub fn of(pairs: &[(u32, u32)]) -> Self {
        Self::from_pairs(pairs.iter().copied()).expect("kappa index 0")
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(i, c)| i * c).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().map(|(&i, &c)| (i, c))
    }

    /// The factors as a flat, sorted list of indices: `κ₁²κ₃ -> [1, 1, 3]`.
    pub fn factors(&self) -> Vec<u32> {
        self.iter()
            .flat_map(|(i, c)| std::iter::repeat_n(i, c as usize))
            .collect()
    }

    pub fn mul(&self, other: &KappaMonomial) -> KappaMonomial {
        let mut map = self.0.clone();
        for (i, c) in other.iter() {
            *map.entry(i).or_insert(0) += c;
        }
        KappaMonomial(map)
    }

    /// All ways to write this monomial as an ordered product of `parts`
    /// monomials, each with its multinomial coefficient. This is the
    /// restriction of `∏ κ_i^{c_i}` to a stratum with `parts` vertices, where
    /// each `κ_i` restricts to the sum of the vertex κ-classes.
    pub fn distribute(&self, parts: usize) -> Vec<(Rational, Vec<KappaMonomial>)> {
        assert!(parts > 0, "cannot distribute over zero vertices");
        let mut out = vec![(Rational::one(), vec![KappaMonomial::one(); parts])];
        for (index, exp) in self.iter() {
            let mut next = Vec::new();
            for comp in compositions(exp, parts) {
                let coeff = Rational::from(multinomial(exp, &comp));
                for (c, monos) in &out {
                    let mut monos = monos.clone();
                    for (m, &e) in monos.iter_mut().zip(&comp) {
                        if e > 0 {
                            m.0.insert(index, e);
                        }
                    }
                    next.push((c * &coeff, monos));
                }
            }
            out = next;
        }
        out
    }
}

/// Weak compositions of `total` into `parts` non-negative entries, in
/// lexicographic order.
pub(crate) fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    } else if total == 0 {
        out.push(Vec::new());
    }
    out
}

/// `ψ₁^{d1} ψ₂^{d2} ∏ κ_i^{c_i}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PsiKappaMonomial {
    pub d1: u32,
    pub d2: u32,
    pub kappa: KappaMonomial,
}

impl PsiKappaMonomial {
    pub fn new(d1: u32, d2: u32, kappa: KappaMonomial) -> Self {
        PsiKappaMonomial { d1, d2, kappa }
    }

    pub fn psi(d1: u32, d2: u32) -> Self {
        Self::new(d1, d2, KappaMonomial::one())
    }

    pub fn one() -> Self {
        Self::default()
    }

    pub fn codim(&self) -> u32 {
        self.d1 + self.d2 + self.kappa.degree()
    }

    pub fn mul(&self, other: &PsiKappaMonomial) -> PsiKappaMonomial {
        PsiKappaMonomial {
            d1: self.d1 + other.d1,
            d2: self.d2 + other.d2,
            kappa: self.kappa.mul(&other.kappa),
        }
    }

    /// Exchanges the two markings.
    pub fn swapped(&self) -> PsiKappaMonomial {
        PsiKappaMonomial::new(self.d2, self.d1, self.kappa.clone())
    }
}

/// Free function form of [`PsiKappaMonomial::codim`].
pub fn monomial_codim(m: &PsiKappaMonomial) -> u32 {
    m.codim()
}

fn write_factor(out: &mut Vec<String>, name: &str, exp: u32) {
    match exp {
        0 => {}
        1 => out.push(name.to_string()),
        e => out.push(format!("{name}^{e}")),
    }
}

/// `psi1^a psi2^b kappa1^c ...`; exponent 1 omitted, the unit prints as `1`.
impl fmt::Display for PsiKappaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        write_factor(&mut parts, "psi1", self.d1);
        write_factor(&mut parts, "psi2", self.d2);
        for (i, c) in self.kappa.iter() {
            write_factor(&mut parts, &format!("kappa{i}"), c);
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// Parses the whitespace-separated grammar `psi1^a psi2^b kappa1^c ...`.
/// Factors may repeat (exponents add) and `1` stands for the unit.
impl FromStr for PsiKappaMonomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut m = PsiKappaMonomial::one();
        let mut kappa = Vec::new();
        for token in s.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((name, exp)) => {
                    let exp = exp
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {token:?}")))?;
                    (name, exp)
                }
                None => (token, 1),
            };
            match name {
                "psi1" => m.d1 += exp,
                "psi2" => m.d2 += exp,
                _ => {
                    let index = name
                        .strip_prefix("kappa")
                        .and_then(|i| i.parse::<u32>().ok())
                        .ok_or_else(|| Error::Parse(format!("unknown factor {token:?}")))?;
                    kappa.push((index, exp));
                }
            }
        }
        m.kappa = KappaMonomial::from_pairs(kappa)?;
        Ok(m)
    }
}
