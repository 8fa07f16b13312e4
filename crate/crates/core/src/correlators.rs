//! Witten–Kontsevich intersection numbers `⟨τ_{k₁}⋯τ_{k_n}⟩_g`.
//!
//! Evaluation order: dimension check, genus-0 closed form, string equation,
//! dilaton equation, then the DVV (Virasoro) recursion on the largest
//! exponent. Every value computed for a key that passes the dimension check
//! is memoized in a table shared by all callers.
//!
//! The memo can be persisted as text, one record per line:
//!
//! ```text
//! g;k1,k2,...,kn;num/den
//! ```
//!
//! with exponents sorted ascending and no whitespace.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::io::ErrorKind;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::One;
use parking_lot::RwLock;

use crate::error::{Error, Result};
use crate::rational::{factorial, Rational};

/// Genus plus the multiset of ψ exponents. Exponents are kept sorted so
/// correlator symmetry is structural.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CorrelatorKey {
    genus: u32,
    exponents: Vec<u32>,
}

impl CorrelatorKey {
    pub fn new(genus: u32, mut exponents: Vec<u32>) -> Self {
        exponents.sort_unstable();
        CorrelatorKey { genus, exponents }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Whether `Σ k_i = 3g - 3 + n` and the moduli space is nonempty.
    pub fn satisfies_dimension(&self) -> bool {
        let n = self.exponents.len() as i64;
        let g = self.genus as i64;
        if n == 0 || 2 * g - 2 + n <= 0 {
            return false;
        }
        self.exponents.iter().map(|&k| k as i64).sum::<i64>() == 3 * g - 3 + n
    }

    fn without(&self, index: usize) -> Vec<u32> {
        let mut rest = self.exponents.clone();
        rest.remove(index);
        rest
    }
}

impl fmt::Display for CorrelatorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps: Vec<String> = self.exponents.iter().map(u32::to_string).collect();
        write!(f, "{};{}", self.genus, exps.join(","))
    }
}

pub type MemoTable = BTreeMap<CorrelatorKey, Rational>;

/// `(2m - 1)!!`, with `(-1)!! = 1`.
fn odd_double_factorial(m: u32) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, i| acc * BigInt::from(2 * i - 1))
}

/// Memoizing evaluator. Cheap to share by reference across threads: lookups
/// take a read lock, insertions a short write lock, and two workers racing on
/// the same key write the same value.
#[derive(Default)]
pub struct Correlators {
    memo: RwLock<HashMap<CorrelatorKey, Rational>>,
}

impl Correlators {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_table(table: MemoTable) -> Self {
        Correlators {
            memo: RwLock::new(table.into_iter().collect()),
        }
    }

    /// Loads a cache file into a fresh evaluator. A corrupted file is
    /// rejected as a whole; the evaluator then starts empty and the error is
    /// returned alongside it for reporting.
    pub fn with_cache(path: &Path) -> (Self, Option<Error>) {
        match cache_load(path) {
            Ok(table) => (Self::from_table(table), None),
            Err(e) => (Self::new(), Some(e)),
        }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().len()
    }

    pub fn snapshot(&self) -> MemoTable {
        self.memo.read().iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub fn store(&self, path: &Path) -> Result<()> {
        cache_store(path, &self.snapshot())
    }

    /// `⟨τ_{k₁}⋯τ_{k_n}⟩_g` for insertions in any order.
    pub fn eval(&self, genus: u32, exponents: &[u32]) -> Rational {
        self.correlator(&CorrelatorKey::new(genus, exponents.to_vec()))
    }

    pub fn correlator(&self, key: &CorrelatorKey) -> Rational {
        if !key.satisfies_dimension() {
            return Rational::zero();
        }
        if key.genus == 0 {
            return genus_zero(&key.exponents);
        }
        if let Some(v) = self.memo.read().get(key) {
            return v.clone();
        }
        let value = self.compute(key);
        self.memo.write().insert(key.clone(), value.clone());
        value
    }

    fn compute(&self, key: &CorrelatorKey) -> Rational {
        let g = key.genus;
        let exps = &key.exponents;
        let n = exps.len();

        if g == 1 && exps.as_slice() == [1] {
            return Rational::new(1, 24).unwrap();
        }

        // Exponents are sorted, so a zero or one would sit at the front.
        if exps[0] == 0 && n >= 2 {
            let rest = key.without(0);
            return (0..rest.len())
                .filter(|&j| rest[j] > 0)
                .map(|j| {
                    let mut lowered = rest.clone();
                    lowered[j] -= 1;
                    self.eval(g, &lowered)
                })
                .sum();
        }

        if let Some(pos) = exps.iter().position(|&k| k == 1) {
            if n >= 2 {
                let rest = key.without(pos);
                let factor = Rational::from(2 * g as i64 - 2 + rest.len() as i64);
                return factor * self.eval(g, &rest);
            }
        }

        self.dvv(g, exps)
    }

    /// DVV recursion removing the largest insertion `τ_{k+1}`:
    ///
    /// ```text
    /// (2k+3)!! ⟨τ_{k+1} τ_S⟩_g
    ///   = Σ_j (2k+2k_j+1)!!/(2k_j-1)!! ⟨τ_{k+k_j} τ_{S\j}⟩_g
    ///   + ½ Σ_{r+s=k-1} (2r+1)!!(2s+1)!! ⟨τ_r τ_s τ_S⟩_{g-1}
    ///   + ½ Σ_{r+s=k-1} (2r+1)!!(2s+1)!! Σ_{g₁+g₂=g, I⊔J=S} ⟨τ_r τ_I⟩_{g₁} ⟨τ_s τ_J⟩_{g₂}
    /// ```
    ///
    /// Unstable or out-of-dimension summands vanish through `correlator`.
    fn dvv(&self, g: u32, exps: &[u32]) -> Rational {
        let top = *exps.last().expect("nonempty insertion list");
        debug_assert!(top >= 2);
        let k = top - 1;
        let rest = &exps[..exps.len() - 1];
        let mut total = Rational::zero();

        for j in 0..rest.len() {
            let kj = rest[j];
            let coeff = Rational::new(odd_double_factorial(k + kj + 1), odd_double_factorial(kj))
                .unwrap();
            let mut merged: Vec<u32> = rest.to_vec();
            merged[j] = k + kj;
            total += coeff * self.eval(g, &merged);
        }

        let half = Rational::new(1, 2).unwrap();
        for r in 0..k {
            let s = k - 1 - r;
            let weight = Rational::from(odd_double_factorial(r + 1) * odd_double_factorial(s + 1));
            let mut acc = Rational::zero();

            if g >= 1 {
                let mut loop_exps = rest.to_vec();
                loop_exps.push(r);
                loop_exps.push(s);
                acc += self.eval(g - 1, &loop_exps);
            }

            let m = rest.len();
            for mask in 0u32..(1 << m) {
                let (left, right): (Vec<u32>, Vec<u32>) = {
                    let mut l = vec![r];
                    let mut rr = vec![s];
                    for (i, &e) in rest.iter().enumerate() {
                        if mask & (1 << i) != 0 {
                            l.push(e);
                        } else {
                            rr.push(e);
                        }
                    }
                    (l, rr)
                };
                for g1 in 0..=g {
                    let a = self.eval(g1, &left);
                    if a.is_zero() {
                        continue;
                    }
                    acc += a * self.eval(g - g1, &right);
                }
            }

            total += weight * half.clone() * acc;
        }

        let norm = Rational::from(odd_double_factorial(k + 2));
        &total / &norm
    }
}

/// `⟨τ_{k₁}⋯τ_{k_n}⟩_0 = (n-3)! / ∏ k_i!` on the dimension locus.
fn genus_zero(exps: &[u32]) -> Rational {
    let n = exps.len() as u32;
    let denom: Rational = exps.iter().map(|&k| factorial(k)).product();
    &factorial(n - 3) / &denom
}

/// Free-function form of [`Correlators::correlator`] on a throwaway memo.
pub fn correlator(key: &CorrelatorKey) -> Rational {
    Correlators::new().correlator(key)
}

/// Serializes a memo table. Records are sorted by key so the output is
/// byte-for-byte determined by the table contents.
pub fn format_cache(table: &MemoTable) -> String {
    let mut out = String::new();
    for (key, value) in table {
        out.push_str(&format!("{key};{value}\n"));
    }
    out
}

/// Parses cache text. Any malformed line rejects the whole input.
pub fn parse_cache(text: &str) -> std::result::Result<MemoTable, (usize, String)> {
    let mut table = MemoTable::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let fail = |reason: &str| (lineno, reason.to_string());
        let mut fields = line.split(';');
        let (Some(g), Some(exps), Some(value), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(fail("expected three ';'-separated fields"));
        };
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !digits(g) {
            return Err(fail("malformed genus"));
        }
        let genus: u32 = g.parse().map_err(|_| fail("genus out of range"))?;
        let mut exponents = Vec::new();
        for e in exps.split(',') {
            if !digits(e) {
                return Err(fail("malformed exponent list"));
            }
            exponents.push(e.parse::<u32>().map_err(|_| fail("exponent out of range"))?);
        }
        if exponents.windows(2).any(|w| w[0] > w[1]) {
            return Err(fail("exponents not sorted ascending"));
        }
        let value: Rational = value.parse().map_err(|_| fail("malformed fraction"))?;
        let key = CorrelatorKey { genus, exponents };
        if !key.satisfies_dimension() {
            return Err(fail("key violates the dimension constraint"));
        }
        if table.insert(key, value).is_some() {
            return Err(fail("duplicate key"));
        }
    }
    Ok(table)
}

/// Reads a cache file. A missing file is an empty cache.
pub fn cache_load(path: &Path) -> Result<MemoTable> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == ErrorKind::NotFound => return Ok(MemoTable::new()),
        Err(source) => {
            return Err(Error::Io {
                path: path.to_owned(),
                source,
            })
        }
    };
    parse_cache(&text).map_err(|(line, reason)| Error::CorruptCache {
        path: path.to_owned(),
        line,
        reason,
    })
}

pub fn cache_store(path: &Path, table: &MemoTable) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io)?;
    }
    fs::write(path, format_cache(table)).map_err(io)
}
