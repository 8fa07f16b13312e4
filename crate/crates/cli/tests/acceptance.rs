//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use gdr_core::hain::{expand_word, multiply_by_divisor, DivisorTerm, HainDivisor};
use gdr_core::kappa::integrate_with;
use gdr_core::monomial::KappaMonomial;
use gdr_core::verify::{enumerate_omegas, Verifier};
use gdr_core::{
    lambda_g_constant, pair_bamboo_side, psi_lambda_g_integral, Correlators, DecoratedChain,
    PsiKappaMonomial, Rational, TestClass,
};

type Check = Result<String, String>;
type Criterion = fn() -> Check;
type Values = Vec<(String, Rational, Rational)>;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gdr(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gdr"));
    cmd.args(args).env_remove("GDR_CACHE");
    match cache {
        Some(p) => cmd.arg("--cache").arg(p),
        None => cmd.arg("--no-cache"),
    };
    cmd.output().expect("run gdr")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON report on stdout")
}

/// Runs `verify` for one genus on a cold cache and checks every record.
fn verify_family(
    g: u32,
    omegas: &[TestClass],
    limit: Duration,
) -> Result<(Values, Duration), String> {
    let start = Instant::now();
    let wk = Correlators::new();
    let report = Verifier::new(g, &wk)
        .map_err(|e| e.to_string())?
        .run(omegas);
    let elapsed = start.elapsed();
    let mut values = Vec::new();
    for r in &report.records {
        if let Some(e) = &r.error {
            return Err(format!("g={g} {}: {e}", r.omega));
        }
        let (b, d) = (r.bamboo.clone().unwrap(), r.dr.clone().unwrap());
        ensure(r.equal && b == d, || format!("g={g} {}: {b} != {d}", r.omega))?;
        values.push((r.omega.clone(), b, d));
    }
    ensure(report.pass, || format!("g={g} report not passing"))?;
    ensure(elapsed < limit, || format!("g={g} took {elapsed:?} (limit {limit:?})"))?;
    Ok((values, elapsed))
}

fn ac1_genus_one() -> Check {
    let start = Instant::now();
    let out = gdr(&["verify", "--genus", "1"], None);
    let elapsed = start.elapsed();
    ensure(out.status.success(), || format!("exit status {}", out.status))?;
    let report = json(&out);
    let rec = &report["records"][0];
    ensure(report["records"].as_array().map(Vec::len) == Some(1), || "expected one record".into())?;
    ensure(rec["omega"] == "1", || format!("omega {}", rec["omega"]))?;
    ensure(rec["bamboo"] == "1/24" && rec["dr"] == "1/24", || {
        format!("bamboo {} dr {}", rec["bamboo"], rec["dr"])
    })?;
    ensure(rec["equal"] == true && report["pass"] == true, || "not equal".into())?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("both sides 1/24 in {elapsed:?}"))
}

fn ac2_genus_two() -> Check {
    let omegas = enumerate_omegas(2, true, false);
    let (values, elapsed) = verify_family(2, &omegas, Duration::from_secs(5))?;
    let names: Vec<&str> = values.iter().map(|v| v.0.as_str()).collect();
    ensure(names == ["psi1", "psi2", "kappa1"], || format!("classes {names:?}"))?;
    for (name, b, _) in &values[..2] {
        ensure(*b == q(1, 1152), || format!("{name} = {b}, expected 1/1152"))?;
    }
    Ok(format!(
        "psi1, psi2 = 1/1152; kappa1 = {} on both sides; {elapsed:?}",
        values[2].1
    ))
}

fn ac3_genus_three_and_four() -> Check {
    let g3_monomials = enumerate_omegas(3, true, false);
    ensure(g3_monomials.len() == 7, || format!("{} monomials at g=3", g3_monomials.len()))?;
    let (_, t3) = verify_family(3, &g3_monomials, Duration::from_secs(30))?;

    let g3_boundary: Vec<TestClass> = enumerate_omegas(3, true, true)
        .into_iter()
        .filter(|o| matches!(o, TestClass::Chain(_)))
        .collect();
    ensure(g3_boundary.len() >= 5, || format!("{} boundary classes", g3_boundary.len()))?;
    let (_, tb) = verify_family(3, &g3_boundary, Duration::from_secs(30))?;

    // All monomials ψ₁^a ψ₂^b κ_λ with a + b + |λ| = 3.
    let g4_monomials = enumerate_omegas(4, true, false);
    ensure(g4_monomials.len() == 14, || format!("{} monomials at g=4", g4_monomials.len()))?;
    let (_, t4) = verify_family(4, &g4_monomials, Duration::from_secs(600))?;
    Ok(format!(
        "g=3: 7 monomials ({t3:?}), {} boundary classes ({tb:?}); g=4: 14 monomials ({t4:?})",
        g3_boundary.len()
    ))
}

/// Sorted exponent lists of length n with the given sum.
fn multisets(sum: u32, n: usize, min: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if sum == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in min..=sum {
        for mut rest in multisets(sum - first, n - 1, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn ac4_correlators() -> Check {
    let wk = Correlators::new();
    for (g, exps, expected) in [
        (0, vec![0, 0, 0], q(1, 1)),
        (1, vec![0, 2], q(1, 24)),
        (2, vec![4], q(1, 1152)),
        (2, vec![1, 4], q(1, 384)),
    ] {
        let got = wk.eval(g, &exps);
        ensure(got == expected, || format!("<{exps:?}>_{g} = {got}, expected {expected}"))?;
    }
    let mut checked = 0usize;
    for g in 0..=3u32 {
        for n in 1..=6usize {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            let dim = 3 * g + n as u32 - 3;
            for ks in multisets(dim, n, 0) {
                let value = wk.eval(g, &ks);
                // Symmetry: every rotation and the reversal.
                for r in 0..n {
                    let mut p = ks.clone();
                    p.rotate_left(r);
                    p.reverse();
                    ensure(wk.eval(g, &p) == value, || format!("symmetry at g={g} {ks:?}"))?;
                }
                // String equation.
                if g >= 1 || n + 1 >= 4 {
                    let mut with_zero = ks.clone();
                    with_zero.push(0);
                    let lowered: Rational = (0..n)
                        .filter(|&j| ks[j] > 0)
                        .map(|j| {
                            let mut l = ks.clone();
                            l[j] -= 1;
                            wk.eval(g, &l)
                        })
                        .sum();
                    ensure(wk.eval(g, &with_zero) == lowered, || {
                        format!("string equation at g={g} {ks:?}")
                    })?;
                }
                // Dilaton equation.
                let mut with_one = ks.clone();
                with_one.push(1);
                let factor = Rational::from(2 * g as i64 - 2 + n as i64);
                ensure(wk.eval(g, &with_one) == factor * value.clone(), || {
                    format!("dilaton equation at g={g} {ks:?}")
                })?;
                // Dimension vanishing one step off the locus.
                let mut off = ks.clone();
                off[0] += 1;
                ensure(wk.eval(g, &off).is_zero(), || format!("nonzero off dimension {off:?}"))?;
                if ks.iter().any(|&k| k > 0) {
                    let mut under = ks.clone();
                    *under.iter_mut().find(|k| **k > 0).unwrap() -= 1;
                    ensure(wk.eval(g, &under).is_zero(), || format!("nonzero off dimension {under:?}"))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("golden values exact; string/dilaton/symmetry/vanishing on {checked} keys"))
}

fn ac5_lambda_constants() -> Check {
    for (g, expected) in [(1, q(1, 24)), (2, q(7, 5760)), (3, q(31, 967680))] {
        let got = lambda_g_constant(g);
        ensure(got == expected, || format!("b_{g} = {got}, expected {expected}"))?;
    }
    for (g, n) in [(1u32, 2usize), (2, 2), (2, 3)] {
        let degree = 2 * g + n as u32 - 3;
        let mut sum = Rational::zero();
        // Ordered exponent vectors: all compositions of degree into n parts.
        let mut stack = vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            let used: u32 = prefix.iter().sum();
            if prefix.len() == n {
                if used == degree {
                    sum += psi_lambda_g_integral(g, &prefix);
                }
                continue;
            }
            for k in 0..=degree - used {
                let mut p = prefix.clone();
                p.push(k);
                stack.push(p);
            }
        }
        let expected = Rational::from((n as i64).pow(degree)) * lambda_g_constant(g);
        ensure(sum == expected, || format!("(g,n)=({g},{n}): {sum} != {expected}"))?;
    }
    Ok("b1 = 1/24, b2 = 7/5760, b3 = 31/967680; multinomial sums hold".into())
}

/// Brute force: push forward one κ at a time with `κ_c ↦ κ_c - ψ_new^c`.
fn iterated_pushforward(psi: &[u32], kappas: &[u32], leaf: &dyn Fn(&[u32]) -> Rational) -> Rational {
    let Some((&first, rest)) = kappas.split_first() else {
        return leaf(psi);
    };
    let mut total = Rational::zero();
    for mask in 0u32..(1 << rest.len()) {
        let mut new_psi = first + 1;
        let mut remaining = Vec::new();
        let mut sign = 1i64;
        for (i, &c) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                new_psi += c;
                sign = -sign;
            } else {
                remaining.push(c);
            }
        }
        let mut extended = psi.to_vec();
        extended.push(new_psi);
        total += Rational::from(sign) * iterated_pushforward(&extended, &remaining, leaf);
    }
    total
}

fn ac6_kappa_oracle() -> Check {
    let wk = Correlators::new();
    let mut kappa_lists = Vec::new();
    for a in 1..=8u32 {
        kappa_lists.push(vec![a]);
        for b in a..=8 - a {
            kappa_lists.push(vec![a, b]);
            for c in b..=8u32.saturating_sub(a + b) {
                if c >= b {
                    kappa_lists.push(vec![a, b, c]);
                }
            }
        }
    }
    let mut checked = 0usize;
    for kappas in &kappa_lists {
        let degree: u32 = kappas.iter().sum();
        let monomial = KappaMonomial::from_pairs(kappas.iter().map(|&b| (b, 1))).unwrap();
        for g in 0..=3u32 {
            for n in 1..=3usize {
                let dim = 3 * g as i64 - 3 + n as i64;
                if 2 * g as i64 - 2 + n as i64 <= 0 || dim < degree as i64 {
                    continue;
                }
                for psi in multisets((dim - degree as i64) as u32, n, 0) {
                    let leaf = |e: &[u32]| wk.eval(g, e);
                    let expected = iterated_pushforward(&psi, kappas, &leaf);
                    let got = integrate_with(&psi, &monomial, leaf);
                    ensure(got == expected, || {
                        format!("g={g} psi={psi:?} kappa={kappas:?}: {got} != {expected}")
                    })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{} kappa monomials, {checked} integrals", kappa_lists.len()))
}

fn ac7_swap_symmetry() -> Check {
    let wk = Correlators::new();
    let mut checked = 0;
    for g in 1..=4u32 {
        for a in 0..g {
            let b = g - 1 - a;
            let lhs = pair_bamboo_side(&wk, g, &PsiKappaMonomial::psi(a, b)).map_err(|e| e.to_string())?;
            let rhs = pair_bamboo_side(&wk, g, &PsiKappaMonomial::psi(b, a)).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("g={g}: psi1^{a} psi2^{b} gives {lhs}, swapped {rhs}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (a, b) pairs for g <= 4"))
}

fn ac8_strata_laws() -> Check {
    fn permutations(items: &[DivisorTerm]) -> Vec<Vec<DivisorTerm>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let head = rest.remove(i);
            for mut p in permutations(&rest) {
                p.insert(0, head);
                out.push(p);
            }
        }
        out
    }
    let mut words_checked = 0;
    for g in 1..=3u32 {
        let terms: Vec<DivisorTerm> = HainDivisor::new(g)
            .map_err(|e| e.to_string())?
            .surviving_terms()
            .into_iter()
            .map(|(t, _)| t)
            .collect();
        let mut words: Vec<Vec<DivisorTerm>> = vec![vec![]];
        for _ in 0..g {
            words = words
                .into_iter()
                .flat_map(|w| {
                    terms.iter().map(move |t| {
                        let mut w = w.clone();
                        w.push(*t);
                        w
                    })
                })
                .collect();
        }
        for word in &words {
            let reference = expand_word(g, word).map_err(|e| e.to_string())?;
            for perm in permutations(word) {
                let other = expand_word(g, &perm).map_err(|e| e.to_string())?;
                ensure(other == reference, || format!("g={g}: {word:?} vs {perm:?}"))?;
            }
            words_checked += 1;
        }
    }

    // δ₁² on M̄_{2,2}: split, then excess -ψ' - ψ'' on the new node.
    let split = expand_word(2, &[DivisorTerm::Delta(1)]).map_err(|e| e.to_string())?;
    let chain = split.chains().next().unwrap();
    ensure(chain.to_string() == "[1|1]-[1|1]", || format!("split gave {chain}"))?;
    let excess = multiply_by_divisor(&chain, DivisorTerm::Delta(1)).map_err(|e| e.to_string())?;
    let shown: Vec<String> = excess.iter().map(|c| format!("{} {}", c.coefficient(), c)).collect();
    ensure(
        shown == ["-1/1 [1|psi2]-[1|1]", "-1/1 [1|1]-[1|psi1]"],
        || format!("excess terms {shown:?}"),
    )?;
    let trivial = DecoratedChain::trivial(2).unwrap();
    let squared = expand_word(2, &[DivisorTerm::Delta(1), DivisorTerm::Delta(1)]).map_err(|e| e.to_string())?;
    ensure(squared.len() == 2 && squared.chains().all(|c| c.vertices().len() == 2), || {
        "delta1^2 left the two-vertex stratum".into()
    })?;
    ensure(trivial.genus() == 2, || "trivial chain genus".into())?;
    Ok(format!("{words_checked} divisor words order-independent; delta^2 excess rule holds"))
}

fn ac9_cache() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("wk.cache");
    let strip = |v: &mut serde_json::Value| {
        for r in v["records"].as_array_mut().unwrap() {
            r["ms"] = 0.into();
        }
    };
    let args = ["verify", "--genus", "3", "--kappa", "--boundary"];

    let cold = gdr(&args, Some(&path));
    ensure(cold.status.success(), || "cold run failed".into())?;
    let bytes = fs::read(&path).map_err(|e| e.to_string())?;
    ensure(!bytes.is_empty(), || "cache not written".into())?;

    let warm = gdr(&args, Some(&path));
    ensure(warm.status.success(), || "warm run failed".into())?;
    ensure(fs::read(&path).map_err(|e| e.to_string())? == bytes, || {
        "warm run changed the cache file".into()
    })?;

    let uncached = gdr(&args, None);
    let (mut a, mut b, mut c) = (json(&cold), json(&warm), json(&uncached));
    strip(&mut a);
    strip(&mut b);
    strip(&mut c);
    ensure(a == b && b == c, || "cold, warm and uncached reports differ".into())?;

    let mut corrupted = bytes.clone();
    corrupted.extend_from_slice(b"2;4;1/11x\n");
    fs::write(&path, &corrupted).map_err(|e| e.to_string())?;
    let recovered = gdr(&["verify", "--genus", "2", "--kappa"], Some(&path));
    let stderr = String::from_utf8_lossy(&recovered.stderr);
    ensure(stderr.contains("corrupted cache"), || format!("no diagnostic: {stderr}"))?;
    ensure(recovered.status.success() && json(&recovered)["pass"] == true, || {
        "run with corrupted cache did not pass".into()
    })?;
    let rewritten = fs::read_to_string(&path).map_err(|e| e.to_string())?;
    ensure(gdr_core::correlators::parse_cache(&rewritten).is_ok(), || {
        "cache not rewritten cleanly after recovery".into()
    })?;
    Ok(format!(
        "{} cached correlators; warm == cold == uncached; corrupted cache rejected and recomputed",
        bytes.iter().filter(|&&b| b == b'\n').count()
    ))
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("AC1 genus-1 base case", ac1_genus_one),
        ("AC2 identity at g=2", ac2_genus_two),
        ("AC3 identity at g=3 and g=4", ac3_genus_three_and_four),
        ("AC4 correlator values and laws", ac4_correlators),
        ("AC5 lambda_g constants", ac5_lambda_constants),
        ("AC6 kappa expansion vs pushforward", ac6_kappa_oracle),
        ("AC7 marking-swap symmetry", ac7_swap_symmetry),
        ("AC8 strata-algebra laws", ac8_strata_laws),
        ("AC9 cache round-trip and independence", ac9_cache),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
