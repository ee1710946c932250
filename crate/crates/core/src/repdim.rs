//! Dimensions of irreducible SO(n, ℂ)-modules in exact arithmetic.
//!
//! Highest weights are nonincreasing half-integer sequences `μ` of length
//! `m = ⌊n/2⌋`; they are stored doubled so every entry is an integer. The
//! Weyl dimension formula is
//!
//! ```text
//! n = 2m+1:  Π_{i<j} (μ_i − μ_j − i + j)/(j − i) · Π_{i≤j} (μ_i + μ_j + n − i − j)/(n − i − j)
//! n = 2m:    Π_{i<j} (μ_i − μ_j − i + j)/(j − i) · (μ_i + μ_j + n − i − j)/(n − i − j)
//! ```
//!
//! Each factor is evaluated on doubled entries (numerator and denominator
//! both doubled), the numerator and denominator products are accumulated as
//! big integers, and the quotient is checked for exact divisibility. No
//! floating point is used anywhere in this module.
//!
//! On top of the formula sit the checks behind the low-dimensional
//! classification for `n ≥ 17`: the only irreducible modules of dimension at
//! most `(n−1)(n+2)/2` have highest weights `0`, `(1)`, `(1,1)` and `(2)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest `n` the classification holds for.
pub const CLASSIFICATION_MIN_N: usize = 17;
/// Default enumeration box `μ₁ ≤ 4`, doubled.
pub const DEFAULT_MU1_CAP_DOUBLED: i64 = 8;

/// Dominant highest weight of SO(n), stored as `(2μ₁, …, 2μ_m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "WeightRepr", into = "WeightRepr")]
pub struct HighestWeight {
    n: usize,
    doubled: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct WeightRepr {
    n: usize,
    weight: String,
}

impl TryFrom<WeightRepr> for HighestWeight {
    type Error = Error;

    fn try_from(r: WeightRepr) -> Result<Self> {
        HighestWeight::parse(r.n, &r.weight)
    }
}

impl From<HighestWeight> for WeightRepr {
    fn from(w: HighestWeight) -> Self {
        WeightRepr {
            n: w.n,
            weight: w.to_string(),
        }
    }
}

/// `⌊n/2⌋`.
pub fn rank(n: usize) -> usize {
    n / 2
}

fn check_ambient(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::AmbientTooSmall { n, min: 3 });
    }
    Ok(())
}

impl HighestWeight {
    /// Validates parity, monotonicity and dominance of a doubled weight.
    pub fn new(n: usize, doubled: Vec<i64>) -> Result<Self> {
        check_ambient(n)?;
        let m = rank(n);
        if doubled.len() != m {
            return Err(Error::WeightLength {
                n,
                expected: m,
                got: doubled.len(),
            });
        }
        let parity = doubled[0].rem_euclid(2);
        if doubled.iter().any(|d| d.rem_euclid(2) != parity) {
            return Err(Error::MixedParity);
        }
        if let Some(w) = doubled.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::NotDominant {
                reason: format!("entry {} is smaller than entry {}", w + 1, w + 2),
            });
        }
        let last = doubled[m - 1];
        if n % 2 == 1 && last < 0 {
            return Err(Error::NotDominant {
                reason: "last entry is negative".into(),
            });
        }
        if n.is_multiple_of(2) && doubled[m - 2] < last.abs() {
            return Err(Error::NotDominant {
                reason: "second-to-last entry is below |last entry|".into(),
            });
        }
        Ok(Self { n, doubled })
    }

    /// Integral weight from its (undoubled) entries; missing trailing
    /// entries are zero.
    pub fn integral(n: usize, entries: &[i64]) -> Result<Self> {
        let mut doubled: Vec<i64> = entries.iter().map(|e| 2 * e).collect();
        doubled.resize(rank(n).max(doubled.len()), 0);
        Self::new(n, doubled)
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::integral(n, &[])
    }

    /// Parses comma-separated entries, each an integer or `q/2`. Missing
    /// trailing entries are padded with zeros.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        check_ambient(n)?;
        let mut doubled = Vec::new();
        for raw in text.split(',') {
            let entry = raw.trim();
            let bad = || Error::WeightParse {
                entry: entry.to_string(),
            };
            let d = match entry.split_once('/') {
                Some((num, "2")) => num.trim().parse::<i64>().map_err(|_| bad())?,
                Some(_) => return Err(bad()),
                None => entry.parse::<i64>().map_err(|_| bad())?.checked_mul(2).ok_or_else(bad)?,
            };
            doubled.push(d);
        }
        if doubled.len() < rank(n) {
            doubled.resize(rank(n), 0);
        }
        Self::new(n, doubled)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn doubled(&self) -> &[i64] {
        &self.doubled
    }

    /// All entries half-odd.
    pub fn is_spin(&self) -> bool {
        self.doubled[0].rem_euclid(2) == 1
    }

    pub fn is_zero(&self) -> bool {
        self.doubled.iter().all(|&d| d == 0)
    }

    /// Whether the complex module is the complexification of a real
    /// irreducible one by the criterion `μ_m = 0` (odd `n`) or
    /// `μ_{m−1} = μ_m = 0` (even `n`), in which case real and complex
    /// dimensions agree.
    pub fn has_real_form(&self) -> bool {
        let m = self.doubled.len();
        if self.n % 2 == 1 {
            self.doubled[m - 1] == 0
        } else {
            self.doubled[m - 1] == 0 && self.doubled[m - 2] == 0
        }
    }

    /// For even `n` with `μ_m ≠ 0`, the weight with `μ_m` negated.
    pub fn sign_conjugate(&self) -> Option<Self> {
        let m = self.doubled.len();
        if self.n % 2 == 1 || self.doubled[m - 1] == 0 {
            return None;
        }
        let mut doubled = self.doubled.clone();
        doubled[m - 1] = -doubled[m - 1];
        Some(Self { n: self.n, doubled })
    }
}

impl fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.doubled.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if d % 2 == 0 {
                write!(f, "{}", d / 2)?;
            } else {
                write!(f, "{d}/2")?;
            }
        }
        Ok(())
    }
}

/// Exact value of the Weyl product on an arbitrary doubled tuple, as
/// `(numerator, denominator)` with positive denominator.
fn weyl_product(n: usize, doubled: &[i64]) -> (BigInt, BigInt) {
    let m = doubled.len();
    let odd = n % 2 == 1;
    let n = n as i64;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=m {
        for j in i..=m {
            let (di, dj) = (doubled[i - 1], doubled[j - 1]);
            let (ii, jj) = (i as i64, j as i64);
            if i < j {
                num *= di - dj + 2 * (jj - ii);
                den *= 2 * (jj - ii);
            }
            if i < j || odd {
                num *= di + dj + 2 * (n - ii - jj);
                den *= 2 * (n - ii - jj);
            }
        }
    }
    (num, den)
}

fn compare_products(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> Ordering {
    (&a.0 * &b.1).cmp(&(&b.0 * &a.1))
}

/// Dimension of the irreducible module with highest weight `w`.
pub fn weyl_dim(w: &HighestWeight) -> Result<BigUint> {
    let (num, den) = weyl_product(w.n, &w.doubled);
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() || q.sign() != Sign::Plus {
        return Err(Error::NonIntegralDimension {
            numerator: num.to_string(),
            denominator: den.to_string(),
        });
    }
    Ok(q.magnitude().clone())
}

/// Fundamental weight `ω_i`, `1 ≤ i ≤ m`.
pub fn fundamental_weight(n: usize, i: usize) -> Result<HighestWeight> {
    check_ambient(n)?;
    let m = rank(n);
    if i == 0 || i > m {
        return Err(Error::IndexOutOfRange { i, m });
    }
    let mut doubled = vec![0i64; m];
    let spin_from = if n % 2 == 1 { m } else { m - 1 };
    if i < spin_from {
        doubled[..i].iter_mut().for_each(|d| *d = 2);
    } else {
        doubled.iter_mut().for_each(|d| *d = 1);
        if n.is_multiple_of(2) && i == m - 1 {
            doubled[m - 1] = -1;
        }
    }
    HighestWeight::new(n, doubled)
}

/// The spin node(s): `ω_m` for odd `n`, `ω_{m−1}` and `ω_m` for even `n`.
pub fn spin_weights(n: usize) -> Result<Vec<HighestWeight>> {
    check_ambient(n)?;
    let m = rank(n);
    if n % 2 == 1 {
        Ok(vec![fundamental_weight(n, m)?])
    } else {
        Ok(vec![fundamental_weight(n, m - 1)?, fundamental_weight(n, m)?])
    }
}

/// `2^m` for `n = 2m+1`, `2^{m−1}` for `n = 2m`.
pub fn spin_dimension(n: usize) -> Result<BigUint> {
    check_ambient(n)?;
    let m = rank(n);
    let exp = if n % 2 == 1 { m } else { m - 1 };
    Ok(BigUint::one() << exp)
}

fn binomial(top: u64, k: u64) -> BigUint {
    let mut c = BigUint::one();
    for i in 1..=k {
        c = c * BigUint::from(top - k + i) / BigUint::from(i);
    }
    c
}

/// Closed form for `dim U_{(s,0,…,0)}`:
/// `(1 + 2s/(n−2))·C(n−3+s, s)` for odd `n`,
/// `(1 + s/(m−1))·C(n−3+s, s)` for even `n = 2m`.
pub fn single_row_dim(n: usize, s: u64) -> Result<BigUint> {
    check_ambient(n)?;
    let c = binomial(n as u64 - 3 + s, s);
    let (scale, base) = if n % 2 == 1 {
        (n as u64 - 2 + 2 * s, n as u64 - 2)
    } else {
        let m = rank(n) as u64;
        (m - 1 + s, m - 1)
    };
    let num = c * BigUint::from(scale);
    let (q, r) = num.div_rem(&BigUint::from(base));
    if !r.is_zero() {
        return Err(Error::NonIntegralDimension {
            numerator: num.to_string(),
            denominator: base.to_string(),
        });
    }
    Ok(q)
}

/// Outcome of one monotonicity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftCheck {
    /// `w` with `δ` subtracted from every entry up to the last nonzero one,
    /// doubled. Need not be a valid weight (parity may mix).
    pub shifted: Vec<i64>,
    /// Whether the Weyl product strictly decreased.
    pub decreased: bool,
}

/// Subtracts `δ` (given doubled) from `μ₁, …, μ_k`, `μ_k` the last nonzero
/// entry, and compares the Weyl products exactly. Requires `0 < δ ≤ μ_k`.
pub fn shift_decrease(w: &HighestWeight, delta_doubled: i64) -> Result<ShiftCheck> {
    let out_of_range = || Error::DeltaOutOfRange {
        delta: half_integer(delta_doubled),
    };
    let k = w.doubled.iter().rposition(|&d| d != 0).ok_or_else(out_of_range)?;
    let last = w.doubled[k];
    if delta_doubled <= 0 || delta_doubled > last {
        return Err(out_of_range());
    }
    let mut shifted = w.doubled.clone();
    shifted[..=k].iter_mut().for_each(|d| *d -= delta_doubled);
    let before = weyl_product(w.n, &w.doubled);
    let after = weyl_product(w.n, &shifted);
    Ok(ShiftCheck {
        decreased: compare_products(&before, &after) == Ordering::Greater,
        shifted,
    })
}

/// Whether the shifted weight has strictly smaller dimension; see
/// [`shift_decrease`].
pub fn shift_decrease_check(w: &HighestWeight, delta_doubled: i64) -> Result<bool> {
    shift_decrease(w, delta_doubled).map(|c| c.decreased)
}

fn half_integer(doubled: i64) -> String {
    if doubled % 2 == 0 {
        (doubled / 2).to_string()
    } else {
        format!("{doubled}/2")
    }
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        BigUint::parse_bytes(text.as_bytes(), 10)
            .ok_or_else(|| D::Error::custom(format!("not a decimal integer: {text:?}")))
    }
}

/// Bounds of the exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox {
    /// Largest allowed `2μ₁`.
    pub mu1_cap_doubled: i64,
    pub integral: bool,
    pub spin: bool,
    /// Whether negative `μ_m` was explored (even `n`).
    pub negative_last: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationHit {
    pub weight: HighestWeight,
    #[serde(with = "decimal")]
    pub dim: BigUint,
    /// The `μ_m`-negated weight, folded into this row because its dimension
    /// is identical.
    pub conjugate: Option<HighestWeight>,
    /// Real and complex dimensions agree (see [`HighestWeight::has_real_form`]).
    pub real_form: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub n: usize,
    #[serde(with = "decimal")]
    pub max_dim: BigUint,
    pub hits: Vec<EnumerationHit>,
    pub search_box: SearchBox,
    /// Number of weights whose dimension was evaluated.
    pub visited: usize,
}

impl EnumerationReport {
    pub fn dims(&self) -> Vec<BigUint> {
        self.hits.iter().map(|h| h.dim.clone()).collect()
    }
}

/// Every dominant weight (integral and spin; both signs of `μ_m` for even
/// `n`) with `μ₁ ≤ cap` and dimension at most `max_dim`, sorted by dimension
/// and then lexicographically by weight.
pub fn enumerate_low_dim(n: usize, max_dim: &BigUint, mu1_cap_doubled: i64) -> Result<EnumerationReport> {
    check_ambient(n)?;
    if mu1_cap_doubled < 4 {
        return Err(Error::CapTooSmall {
            cap: half_integer(mu1_cap_doubled),
        });
    }
    let m = rank(n);
    let even = n.is_multiple_of(2);
    let mut hits: Vec<EnumerationHit> = Vec::new();
    let mut visited = 0;

    for parity in [0i64, 1] {
        let top = if (mu1_cap_doubled - parity) % 2 == 0 {
            mu1_cap_doubled
        } else {
            mu1_cap_doubled - 1
        };
        let mut current = Vec::with_capacity(m);
        let mut leaves = Vec::new();
        nonincreasing(m, parity, top, &mut current, &mut leaves);
        for doubled in leaves {
            let w = HighestWeight::new(n, doubled)?;
            visited += 1;
            let dim = weyl_dim(&w)?;
            let conjugate = match w.sign_conjugate() {
                Some(c) if even => {
                    visited += 1;
                    let cdim = weyl_dim(&c)?;
                    if cdim != dim {
                        if cdim <= *max_dim {
                            hits.push(EnumerationHit {
                                real_form: c.has_real_form(),
                                weight: c,
                                dim: cdim,
                                conjugate: None,
                            });
                        }
                        None
                    } else {
                        Some(c)
                    }
                }
                _ => None,
            };
            if dim <= *max_dim {
                hits.push(EnumerationHit {
                    real_form: w.has_real_form(),
                    weight: w,
                    dim,
                    conjugate,
                });
            }
        }
    }
    hits.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.weight.doubled.cmp(&b.weight.doubled)));
    Ok(EnumerationReport {
        n,
        max_dim: max_dim.clone(),
        hits,
        search_box: SearchBox {
            mu1_cap_doubled,
            integral: true,
            spin: true,
            negative_last: even,
        },
        visited,
    })
}

/// Nonincreasing sequences of length `len` with entries `≡ parity (mod 2)`
/// in `[parity, top]`.
fn nonincreasing(len: usize, parity: i64, top: i64, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if current.len() == len {
        out.push(current.clone());
        return;
    }
    let mut v = top;
    while v >= parity {
        current.push(v);
        nonincreasing(len, parity, v, current, out);
        current.pop();
        v -= 2;
    }
}

/// `(n−1)(n+2)/2`, the dimension of traceless symmetric matrices.
pub fn traceless_symmetric_dim(n: usize) -> BigUint {
    BigUint::from(n - 1) * BigUint::from(n + 2) / 2u32
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub n: usize,
    #[serde(with = "decimal")]
    pub bound: BigUint,
    pub enumeration: EnumerationReport,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl ClassificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// [`verify_classification_with_cap`] with the default box `μ₁ ≤ 4`.
pub fn verify_classification(n: usize) -> Result<ClassificationReport> {
    verify_classification_with_cap(n, DEFAULT_MU1_CAP_DOUBLED)
}

/// Mechanically checks, for `n ≥ 17`, that the irreducible SO(n)-modules of
/// dimension at most `(n−1)(n+2)/2` are exactly those with highest weights
/// `0`, `(1)`, `(1,1)`, `(2)`, and that only `(2)` attains the bound.
///
/// The exhaustive search covers `μ₁ ≤ cap`. Outside it, the argument rests
/// on monotonicity under shifts plus a short list of comparison weights,
/// which are evaluated here: spin nodes, `(2,1)`, `(2,1,1)`, `(2,1^{q−1})`,
/// `(1^q)`, `(2,2,1)`, `(2,2,1^{q−2})` and the single rows `(3)`, `(4)`.
pub fn verify_classification_with_cap(n: usize, mu1_cap_doubled: i64) -> Result<ClassificationReport> {
    if n < CLASSIFICATION_MIN_N {
        return Err(Error::HypothesisViolated { n });
    }
    let m = rank(n);
    let bound = traceless_symmetric_dim(n);
    let mut checks = Vec::new();
    let mut check = |name: String, passed: bool, detail: String| {
        checks.push(Check { name, passed, detail });
    };

    let spin = spin_dimension(n)?;
    let mut spin_ok = spin > bound;
    for w in spin_weights(n)? {
        spin_ok &= weyl_dim(&w)? == spin;
    }
    check(
        "spin_exceeds_bound".into(),
        spin_ok,
        format!("spin dimension {spin} vs bound {bound}"),
    );

    let expected: Vec<(HighestWeight, BigUint)> = vec![
        (HighestWeight::zero(n)?, BigUint::one()),
        (HighestWeight::integral(n, &[1])?, BigUint::from(n)),
        (HighestWeight::integral(n, &[1, 1])?, BigUint::from(n * (n - 1) / 2)),
        (HighestWeight::integral(n, &[2])?, bound.clone()),
    ];
    let mut named_ok = true;
    for (w, d) in &expected {
        named_ok &= weyl_dim(w)? == *d;
    }
    check(
        "named_module_dimensions".into(),
        named_ok,
        format!("1, {n}, {}, {bound}", n * (n - 1) / 2),
    );

    let enumeration = enumerate_low_dim(n, &bound, mu1_cap_doubled)?;
    let mut found: Vec<(HighestWeight, BigUint)> = enumeration
        .hits
        .iter()
        .map(|h| (h.weight.clone(), h.dim.clone()))
        .collect();
    found.sort();
    let mut want = expected.clone();
    want.sort();
    check(
        "enumeration_matches".into(),
        found == want,
        format!(
            "{} hits within mu1 <= {}: [{}]",
            enumeration.hits.len(),
            half_integer(mu1_cap_doubled),
            enumeration
                .hits
                .iter()
                .map(|h| format!("({}) -> {}", h.weight, h.dim))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    check(
        "hits_have_real_forms".into(),
        enumeration.hits.iter().all(|h| h.real_form),
        "complex and real dimensions agree on every hit".into(),
    );
    let at_bound: Vec<_> = enumeration.hits.iter().filter(|h| h.dim == bound).collect();
    check(
        "bound_attained_only_by_(2)".into(),
        at_bound.len() == 1 && at_bound[0].weight == expected[3].0,
        format!("{} weight(s) of dimension exactly {bound}", at_bound.len()),
    );

    let mut comparisons: Vec<(String, Vec<i64>)> = vec![
        ("(2,1)".into(), vec![2, 1]),
        ("(2,1,1)".into(), vec![2, 1, 1]),
        ("(2,2,1)".into(), vec![2, 2, 1]),
    ];
    for q in 4..=m {
        let mut two_ones = vec![2];
        two_ones.extend(std::iter::repeat_n(1, q - 1));
        comparisons.push((format!("(2,1^{})", q - 1), two_ones));
        let mut two_two = vec![2, 2];
        two_two.extend(std::iter::repeat_n(1, q - 2));
        comparisons.push((format!("(2,2,1^{})", q - 2), two_two));
    }
    for q in 3..=m {
        comparisons.push((format!("(1^{q})"), vec![1; q]));
    }
    for (name, entries) in comparisons {
        let d = weyl_dim(&HighestWeight::integral(n, &entries)?)?;
        check(
            format!("comparison_{name}"),
            d > bound,
            format!("dim {d} vs bound {bound}"),
        );
    }
    let below = weyl_dim(&expected[2].0)?;
    check(
        "exception_(1,1)_below_bound".into(),
        below < bound,
        format!("dim {below} vs bound {bound}"),
    );

    for s in [3u64, 4] {
        let closed = single_row_dim(n, s)?;
        let direct = weyl_dim(&HighestWeight::integral(n, &[s as i64])?)?;
        check(
            format!("single_row_({s})"),
            closed == direct && closed > bound,
            format!("closed form {closed}, Weyl formula {direct}, bound {bound}"),
        );
    }

    let passed = checks.iter().all(|c| c.passed);
    Ok(ClassificationReport {
        n,
        bound,
        enumeration,
        checks,
        passed,
    })
}
