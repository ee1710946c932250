//! The isospectral model: `Q ↦ Q·diag(a₁I_{n₁}, …, a_{p+1}I_{n_{p+1}})·Qᵀ`.
//!
//! The image of a flag is a symmetric matrix whose eigenspace for `a_i` is
//! the `i`-th increment of the flag. The map is SO(n)-equivariant for left
//! multiplication on representatives and conjugation on matrices, and it is
//! constant on cosets of the block stabilizer, so it is well defined on flags.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::flagcore::{check_special_orthogonal, FlagPoint, Spectrum, SymmetricMatrix};

/// A point of the isospectral model together with an orthonormal frame that
/// diagonalizes it.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedFlag {
    x: SymmetricMatrix,
    spectrum: Spectrum,
    frame: DMatrix<f64>,
}

impl EmbeddedFlag {
    pub fn x(&self) -> &SymmetricMatrix {
        &self.x
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// `Q ∈ SO(n)` with `x = Q I_{α,μ} Qᵀ`.
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    /// The flag this point represents.
    pub fn flag(&self) -> FlagPoint {
        FlagPoint::from_parts(self.frame.clone(), self.spectrum.signature().clone())
    }

    pub(crate) fn from_frame(frame: DMatrix<f64>, spectrum: &Spectrum) -> Self {
        let x = conjugate_model(&frame, spectrum);
        Self {
            x,
            spectrum: spectrum.clone(),
            frame,
        }
    }
}

/// `I_{α,μ} = diag(a₁I_{n₁}, …, a_{p+1}I_{n_{p+1}})`.
pub fn block_diagonal_model(spec: &Spectrum) -> SymmetricMatrix {
    SymmetricMatrix::from_diagonal(&model_diagonal(spec))
}

pub(crate) fn model_diagonal(spec: &Spectrum) -> Vec<f64> {
    spec.values()
        .iter()
        .zip(spec.signature().blocks())
        .flat_map(|(&a, &b)| std::iter::repeat_n(a, b))
        .collect()
}

fn conjugate_model(q: &DMatrix<f64>, spec: &Spectrum) -> SymmetricMatrix {
    let diag = model_diagonal(spec);
    let mut scaled = q.clone();
    for (j, a) in diag.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*a);
    }
    SymmetricMatrix::symmetrize(scaled * q.transpose())
}

/// `x = Q I_{α,μ} Qᵀ`.
pub fn embed(f: &FlagPoint, spec: &Spectrum) -> Result<EmbeddedFlag> {
    if f.signature() != spec.signature() {
        return Err(Error::SignatureMismatch);
    }
    Ok(EmbeddedFlag::from_frame(f.q().clone(), spec))
}

/// Left action of `r ∈ SO(n)` on a flag.
pub fn act(r: &DMatrix<f64>, f: &FlagPoint, orth_tol: f64) -> Result<FlagPoint> {
    check_special_orthogonal(r, f.signature().n(), orth_tol)?;
    Ok(FlagPoint::from_parts(r * f.q(), f.signature().clone()))
}

/// Inverse of [`embed`]: groups an orthonormal eigenbasis of `x` by nearest
/// spectrum value, in block order, and fixes the determinant to +1.
pub fn recover(x: &SymmetricMatrix, spec: &Spectrum, eig_tol: f64) -> Result<FlagPoint> {
    let sig = spec.signature();
    let n = sig.n();
    if x.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            rows: x.n(),
            cols: x.n(),
        });
    }
    let min_gap = spec.min_gap();
    if min_gap <= 2.0 * eig_tol {
        return Err(Error::EigenvalueGapTooSmall { gap: min_gap });
    }

    let eig = x.matrix().clone().symmetric_eigen();
    let values = spec.values();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); values.len()];
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        let (block, distance) = values
            .iter()
            .map(|a| (lambda - a).abs())
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("spectrum is nonempty");
        if distance > eig_tol {
            return Err(Error::SpectrumMismatch {
                eigenvalue: lambda,
                distance,
            });
        }
        members[block].push(k);
    }
    if members.iter().zip(sig.blocks()).any(|(m, &b)| m.len() != b) {
        // multiplicities disagree; report the worst sorted mismatch
        let (eigenvalue, distance) = worst_sorted_mismatch(x, spec);
        return Err(Error::SpectrumMismatch {
            eigenvalue,
            distance,
        });
    }

    let mut q = DMatrix::<f64>::zeros(n, n);
    let mut col = 0;
    for block in &members {
        for &k in block {
            q.set_column(col, &eig.eigenvectors.column(k));
            col += 1;
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(n - 1).neg_mut();
    }
    Ok(FlagPoint::from_parts(q, sig.clone()))
}

fn worst_sorted_mismatch(x: &SymmetricMatrix, spec: &Spectrum) -> (f64, f64) {
    x.eigenvalues_desc()
        .into_iter()
        .zip(spec.sorted_multiset())
        .map(|(l, a)| (l, (l - a).abs()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((f64::NAN, f64::INFINITY))
}

/// Whether the sorted eigenvalues of `x` match `{a_i repeated n_i times}`
/// within `tol`.
pub fn membership(x: &SymmetricMatrix, spec: &Spectrum, tol: f64) -> bool {
    if x.n() != spec.signature().n() {
        return false;
    }
    let (_, worst) = worst_sorted_mismatch(x, spec);
    worst <= tol
}

/// Splits `x` into its traceless part and the scalar `c = tr(x)/n`, so that
/// `x = x∘ + c·I`.
pub fn traceless_split(x: &SymmetricMatrix) -> (SymmetricMatrix, f64) {
    let n = x.n();
    let c = x.trace() / n as f64;
    let mut m = x.matrix().clone();
    for i in 0..n {
        m[(i, i)] -= c;
    }
    (SymmetricMatrix::symmetrize(m), c)
}
