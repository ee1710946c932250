//! Domain types shared by the rest of the crate.
//!
//! A flag `W₁ ⊆ … ⊆ W_p` in ℝⁿ with `dim W_i = k_i` is described by a
//! [`FlagSignature`]. Points of the flag manifold are stored as a
//! representative `Q ∈ SO(n)` ([`FlagPoint`]) whose consecutive column blocks
//! of sizes `n_i = k_i − k_{i−1}` span the increments of the flag. Such a
//! representative is only defined modulo the block stabilizer
//! `S(O(n₁) × … × O(n_{p+1}))`, so two points are compared through their
//! embedded images (see [`flags_equal`]).

use std::ops::Range;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::embed;
use crate::error::{Error, Result};

/// Numerical tolerances used across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Bound on `‖QᵀQ − I‖_F` and `|det Q − 1|`.
    pub orth: f64,
    /// Bound on `‖X − Xᵀ‖_F`.
    pub sym: f64,
    /// Bound on `|tr X|` for traceless objects.
    pub trace: f64,
    /// Minimum separation between spectrum values, and between sorted
    /// eigenvalues at block boundaries.
    pub spectrum_gap: f64,
    /// Eigenvalue matching tolerance used by recovery.
    pub eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orth: 1e-10,
            sym: 1e-10,
            trace: 1e-10,
            spectrum_gap: 1e-8,
            eig: 1e-8,
        }
    }
}

/// Dimensions `0 < k₁ < … < k_p < n` of a flag in ℝⁿ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SignatureRepr", into = "SignatureRepr")]
pub struct FlagSignature {
    n: usize,
    ks: Vec<usize>,
    blocks: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SignatureRepr {
    n: usize,
    ks: Vec<usize>,
}

impl TryFrom<SignatureRepr> for FlagSignature {
    type Error = Error;

    fn try_from(r: SignatureRepr) -> Result<Self> {
        FlagSignature::new(r.n, r.ks)
    }
}

impl From<FlagSignature> for SignatureRepr {
    fn from(s: FlagSignature) -> Self {
        SignatureRepr { n: s.n, ks: s.ks }
    }
}

impl FlagSignature {
    pub fn new(n: usize, ks: Vec<usize>) -> Result<Self> {
        if n < 2 {
            return Err(Error::AmbientTooSmall { n, min: 2 });
        }
        if ks.is_empty() {
            return Err(Error::EmptyKs);
        }
        if let Some(&k) = ks.iter().find(|&&k| k == 0 || k >= n) {
            return Err(Error::KOutOfRange { k, n });
        }
        if ks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NonIncreasingKs { ks });
        }
        let mut blocks = Vec::with_capacity(ks.len() + 1);
        let mut prev = 0;
        for &k in ks.iter().chain(std::iter::once(&n)) {
            blocks.push(k - prev);
            prev = k;
        }
        Ok(Self { n, ks, blocks })
    }

    /// The Grassmannian `Gr(k, ℝⁿ)`.
    pub fn grassmannian(k: usize, n: usize) -> Result<Self> {
        Self::new(n, vec![k])
    }

    /// Complete flags `Flag(1, 2, …, n−1, ℝⁿ)`.
    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (1..n).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ks(&self) -> &[usize] {
        &self.ks
    }

    /// Number `p` of proper subspaces in the flag.
    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }

    /// Block sizes `n_i = k_i − k_{i−1}`, `p + 1` of them, summing to `n`.
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Row/column ranges of the diagonal blocks.
    pub fn block_ranges(&self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.blocks
            .iter()
            .map(|&b| {
                let r = start..start + b;
                start += b;
                r
            })
            .collect()
    }

    /// Index of the block containing row `row`.
    pub fn block_of(&self, row: usize) -> usize {
        let mut acc = 0;
        for (i, &b) in self.blocks.iter().enumerate() {
            acc += b;
            if row < acc {
                return i;
            }
        }
        self.blocks.len() - 1
    }

    pub fn is_grassmannian(&self) -> bool {
        self.ks.len() == 1
    }
}

/// Distinct eigenvalues `a₁, …, a_{p+1}` attached to the blocks of a signature.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    signature: FlagSignature,
}

impl Spectrum {
    /// Validates length, finiteness and pairwise separation of `values`.
    pub fn new(signature: FlagSignature, values: Vec<f64>, gap_tol: f64) -> Result<Self> {
        if values.len() != signature.num_blocks() {
            return Err(Error::SpectrumLength {
                expected: signature.num_blocks(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSpectrum);
        }
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                let gap = (values[i] - values[j]).abs();
                if gap <= gap_tol {
                    return Err(Error::SpectrumNotDistinct { i, j, gap });
                }
            }
        }
        Ok(Self { values, signature })
    }

    /// Canonical traceless spectrum.
    ///
    /// Starts from the ladder `c_i = p + 1 − i` and subtracts the block-weighted
    /// mean, scaled by `n` so that every value is an integer:
    /// `a_i = n·c_i − Σ_j n_j c_j`. The result is strictly decreasing and
    /// `Σ n_i a_i = 0` holds exactly in floating point.
    pub fn default_traceless(signature: &FlagSignature) -> Self {
        let p1 = signature.num_blocks() as i64;
        let n = signature.n() as i64;
        let ladder: Vec<i64> = (1..=p1).map(|i| p1 - i).collect();
        let weighted: i64 = signature
            .blocks()
            .iter()
            .zip(&ladder)
            .map(|(&b, &c)| b as i64 * c)
            .sum();
        let values = ladder.iter().map(|&c| (n * c - weighted) as f64).collect();
        Self {
            values,
            signature: signature.clone(),
        }
    }

    /// Completes `base = (a₁, …, a_p)` with `a_{p+1} = −(Σ n_i a_i)/n_{p+1}`.
    pub fn traceless_from_base(
        signature: &FlagSignature,
        base: &[f64],
        gap_tol: f64,
    ) -> Result<Self> {
        if base.len() + 1 != signature.num_blocks() {
            return Err(Error::SpectrumLength {
                expected: signature.num_blocks() - 1,
                got: base.len(),
            });
        }
        let blocks = signature.blocks();
        let weighted: f64 = base.iter().zip(blocks).map(|(a, &b)| a * b as f64).sum();
        let mut values = base.to_vec();
        values.push(-weighted / blocks[blocks.len() - 1] as f64);
        Self::new(signature.clone(), values, gap_tol)
    }

    /// The same spectrum multiplied by `factor` (nonzero).
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * factor).collect(),
            signature: self.signature.clone(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn signature(&self) -> &FlagSignature {
        &self.signature
    }

    /// `Σ n_i a_i`, the trace of every point of the isospectral model.
    pub fn trace(&self) -> f64 {
        self.values
            .iter()
            .zip(self.signature.blocks())
            .map(|(a, &b)| a * b as f64)
            .sum()
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        self.trace().abs() <= tol
    }

    /// Smallest pairwise distance between spectrum values.
    pub fn min_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for (i, a) in self.values.iter().enumerate() {
            for b in &self.values[i + 1..] {
                gap = gap.min((a - b).abs());
            }
        }
        gap
    }

    /// Largest pairwise distance `max |a_i − a_j|`.
    pub fn max_gap(&self) -> f64 {
        let max = self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = self.values.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// Every `a_i` repeated `n_i` times, sorted in descending order.
    pub fn sorted_multiset(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .values
            .iter()
            .zip(self.signature.blocks())
            .flat_map(|(&a, &b)| std::iter::repeat_n(a, b))
            .collect();
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }
}

/// Symmetric real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix(DMatrix<f64>);

impl SymmetricMatrix {
    /// Accepts `m` if it is square and `‖m − mᵀ‖_F ≤ sym_tol`; the stored
    /// matrix is the exact symmetric part of `m`.
    pub fn new(m: DMatrix<f64>, sym_tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let defect = (&m - m.transpose()).norm();
        if defect > sym_tol || !defect.is_finite() {
            return Err(Error::NotSymmetric { defect });
        }
        Ok(Self::symmetrize(m))
    }

    /// Symmetric part `(m + mᵀ)/2` of a square matrix.
    pub fn symmetrize(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        Self((m + t) * 0.5)
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(
            diag,
        )))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues_desc(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.0.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }
}

/// A flag, stored as a representative `Q ∈ SO(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlagPoint {
    q: DMatrix<f64>,
    signature: FlagSignature,
}

impl FlagPoint {
    pub fn new(q: DMatrix<f64>, signature: FlagSignature, orth_tol: f64) -> Result<Self> {
        check_special_orthogonal(&q, signature.n(), orth_tol)?;
        Ok(Self { q, signature })
    }

    /// Skips validation; callers guarantee `q ∈ SO(n)`.
    pub(crate) fn from_parts(q: DMatrix<f64>, signature: FlagSignature) -> Self {
        Self { q, signature }
    }

    /// The base flag `span(e₁,…,e_{k₁}) ⊆ span(e₁,…,e_{k₂}) ⊆ …`.
    pub fn identity(signature: &FlagSignature) -> Self {
        let n = signature.n();
        Self {
            q: DMatrix::identity(n, n),
            signature: signature.clone(),
        }
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn signature(&self) -> &FlagSignature {
        &self.signature
    }

    /// Orthonormal basis of `W_i` (the first `k_i` columns of `Q`), `i` 1-based.
    pub fn subspace_basis(&self, i: usize) -> DMatrix<f64> {
        let k = self.signature.ks()[i - 1];
        self.q.columns(0, k).into_owned()
    }

    /// Column block spanning the `i`-th increment (0-based).
    pub fn block_basis(&self, i: usize) -> DMatrix<f64> {
        let r = self.signature.block_ranges()[i].clone();
        self.q.columns(r.start, r.len()).into_owned()
    }
}

/// Element `B` of 𝔪: block matrix with zero diagonal blocks and
/// `B_ji = −B_ijᵀ`. Only the blocks `B_ij`, `i < j`, are stored, in
/// lexicographic order of `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentBlock {
    blocks: Vec<DMatrix<f64>>,
    signature: FlagSignature,
}

impl TangentBlock {
    pub fn zeros(signature: &FlagSignature) -> Self {
        let sizes = signature.blocks();
        let blocks = block_pairs(sizes.len())
            .map(|(i, j)| DMatrix::zeros(sizes[i], sizes[j]))
            .collect();
        Self {
            blocks,
            signature: signature.clone(),
        }
    }

    /// `blocks` lists `B_ij` for `i < j` in lexicographic order.
    pub fn from_blocks(signature: &FlagSignature, blocks: Vec<DMatrix<f64>>) -> Result<Self> {
        let sizes = signature.blocks();
        let pairs: Vec<_> = block_pairs(sizes.len()).collect();
        if pairs.len() != blocks.len() {
            return Err(Error::SpectrumLength {
                expected: pairs.len(),
                got: blocks.len(),
            });
        }
        for (&(i, j), b) in pairs.iter().zip(&blocks) {
            if b.shape() != (sizes[i], sizes[j]) {
                return Err(Error::BlockShape {
                    i,
                    j,
                    rows: sizes[i],
                    cols: sizes[j],
                });
            }
        }
        Ok(Self {
            blocks,
            signature: signature.clone(),
        })
    }

    /// Reads the strictly upper blocks of an `n × n` matrix.
    pub fn from_upper_blocks(signature: &FlagSignature, m: &DMatrix<f64>) -> Result<Self> {
        let n = signature.n();
        if m.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let ranges = signature.block_ranges();
        let blocks = block_pairs(ranges.len())
            .map(|(i, j)| {
                let (ri, rj) = (&ranges[i], &ranges[j]);
                m.view((ri.start, rj.start), (ri.len(), rj.len())).into_owned()
            })
            .collect();
        Ok(Self {
            blocks,
            signature: signature.clone(),
        })
    }

    /// Standard Gaussian entries in every stored block.
    pub fn random<R: Rng + ?Sized>(signature: &FlagSignature, rng: &mut R) -> Self {
        let mut b = Self::zeros(signature);
        for block in &mut b.blocks {
            block.iter_mut().for_each(|v| *v = rng.sample(StandardNormal));
        }
        b
    }

    pub fn signature(&self) -> &FlagSignature {
        &self.signature
    }

    /// Pairs `(i, j)` with `i < j` alongside `B_ij`.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &DMatrix<f64>)> {
        block_pairs(self.signature.num_blocks()).zip(self.blocks.iter())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| b * factor).collect(),
            signature: self.signature.clone(),
        }
    }

    /// The full skew-symmetric `n × n` matrix.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.signature.n();
        let ranges = self.signature.block_ranges();
        let mut m = DMatrix::zeros(n, n);
        for ((i, j), b) in self.iter() {
            let (ri, rj) = (&ranges[i], &ranges[j]);
            m.view_mut((ri.start, rj.start), (ri.len(), rj.len())).copy_from(b);
            m.view_mut((rj.start, ri.start), (rj.len(), ri.len()))
                .copy_from(&(-b.transpose()));
        }
        m
    }
}

fn block_pairs(count: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..count).flat_map(move |i| (i + 1..count).map(move |j| (i, j)))
}

/// Checks `‖QᵀQ − I‖_F ≤ tol` and `|det Q − 1| ≤ tol`.
pub fn check_special_orthogonal(q: &DMatrix<f64>, n: usize, tol: f64) -> Result<()> {
    if q.nrows() != n || q.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            rows: q.nrows(),
            cols: q.ncols(),
        });
    }
    let defect = (q.transpose() * q - DMatrix::<f64>::identity(n, n)).norm();
    let det = q.determinant();
    let within = defect <= tol && (det - 1.0).abs() <= tol;
    if !within {
        return Err(Error::NotSpecialOrthogonal { defect, det });
    }
    Ok(())
}

/// Haar-distributed element of SO(n).
///
/// QR of a standard Gaussian matrix with the signs of `diag(R)` moved into
/// `Q`; if the result has determinant −1 its first column is negated.
pub fn random_special_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Random flag, deterministic in `seed`.
pub fn random_flag_point(signature: &FlagSignature, seed: u64) -> FlagPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_flag_point_with(signature, &mut rng)
}

pub fn random_flag_point_with<R: Rng + ?Sized>(signature: &FlagSignature, rng: &mut R) -> FlagPoint {
    FlagPoint {
        q: random_special_orthogonal(signature.n(), rng),
        signature: signature.clone(),
    }
}

/// Random element of the block stabilizer `S(O(n₁) × … × O(n_{p+1}))`.
pub fn random_stabilizer<R: Rng + ?Sized>(signature: &FlagSignature, rng: &mut R) -> DMatrix<f64> {
    let n = signature.n();
    let mut s = DMatrix::<f64>::zeros(n, n);
    let mut sign = 1.0;
    for r in signature.block_ranges() {
        let mut block = random_special_orthogonal(r.len(), rng);
        if rng.random_bool(0.5) {
            block.column_mut(0).neg_mut();
            sign = -sign;
        }
        s.view_mut((r.start, r.start), (r.len(), r.len())).copy_from(&block);
    }
    if sign < 0.0 {
        // flip one more column to restore det = +1
        s.column_mut(n - 1).neg_mut();
    }
    s
}

/// Coset equality: the embedded images under the canonical traceless
/// spectrum agree within `tol` in Frobenius norm.
pub fn flags_equal(x: &FlagPoint, y: &FlagPoint, signature: &FlagSignature, tol: f64) -> Result<bool> {
    if x.signature() != signature || y.signature() != signature {
        return Err(Error::SignatureMismatch);
    }
    let spec = Spectrum::default_traceless(signature);
    let ex = embed::embed(x, &spec)?;
    let ey = embed::embed(y, &spec)?;
    Ok((ex.x().matrix() - ey.x().matrix()).norm() <= tol)
}
