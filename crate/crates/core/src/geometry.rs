//! Invariant metric, tangent spaces and first-order optimization on the
//! isospectral model.
//!
//! At `X = Q I_{α,μ} Qᵀ` the tangent space is `{Q [B, I_{α,μ}] Qᵀ : B ∈ 𝔪}`.
//! Block `(i, j)` of `[B, I_{α,μ}]` is `(a_j − a_i) B_ij`, so in the frame `Q`
//! tangent vectors are exactly the symmetric matrices with vanishing diagonal
//! blocks, and
//!
//! ```text
//! ‖[B, I_{α,μ}]‖_F² = 2 Σ_{i<j} (a_i − a_j)² tr(B_ijᵀ B_ij) = ⟨B, B⟩.
//! ```
//!
//! Retraction is the metric projection back onto the model
//! ([`nearest_point`]): eigendecompose, keep the eigenvectors, replace the
//! eigenvalues.

use nalgebra::DMatrix;

use crate::embed::{self, model_diagonal, EmbeddedFlag};
use crate::error::{Error, Result};
use crate::flagcore::{FlagPoint, Spectrum, SymmetricMatrix, TangentBlock};

/// The SO(n)-invariant inner product on 𝔪 determined by a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    spectrum: Spectrum,
}

impl MetricSpec {
    pub fn new(spectrum: Spectrum) -> Self {
        Self { spectrum }
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// Weight `2(a_i − a_j)²` of block `(i, j)`.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let a = self.spectrum.values();
        2.0 * (a[i] - a[j]).powi(2)
    }

    pub fn inner(&self, b: &TangentBlock, c: &TangentBlock) -> Result<f64> {
        metric_inner(b, c, self)
    }
}

/// `⟨B, C⟩ = 2 Σ_{i<j} (a_i − a_j)² tr(B_ijᵀ C_ij)`.
pub fn metric_inner(b: &TangentBlock, c: &TangentBlock, m: &MetricSpec) -> Result<f64> {
    let sig = m.spectrum.signature();
    if b.signature() != sig || c.signature() != sig {
        return Err(Error::SignatureMismatch);
    }
    Ok(b.iter()
        .zip(c.iter())
        .map(|(((i, j), bij), (_, cij))| m.weight(i, j) * bij.dot(cij))
        .sum())
}

/// A tangent vector to the model at `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedTangent {
    v: SymmetricMatrix,
    base: EmbeddedFlag,
}

impl EmbeddedTangent {
    pub fn v(&self) -> &SymmetricMatrix {
        &self.v
    }

    pub fn base(&self) -> &EmbeddedFlag {
        &self.base
    }

    pub fn norm(&self) -> f64 {
        self.v.matrix().norm()
    }

    /// Largest diagonal-block entry of `Qᵀ v Q`; zero for tangent vectors.
    pub fn normal_defect(&self) -> f64 {
        let local = self.base.frame().transpose() * self.v.matrix() * self.base.frame();
        let sig = self.base.spectrum().signature();
        sig.block_ranges()
            .into_iter()
            .map(|r| {
                local
                    .view((r.start, r.start), (r.len(), r.len()))
                    .amax()
            })
            .fold(0.0, f64::max)
    }
}

/// `[B, I_{α,μ}] = B I_{α,μ} − I_{α,μ} B`.
pub fn model_commutator(b: &TangentBlock, spec: &Spectrum) -> Result<DMatrix<f64>> {
    if b.signature() != spec.signature() {
        return Err(Error::SignatureMismatch);
    }
    let d = model_diagonal(spec);
    let m = b.to_matrix();
    Ok(DMatrix::from_fn(m.nrows(), m.ncols(), |r, s| m[(r, s)] * (d[s] - d[r])))
}

/// Pushforward of `B ∈ 𝔪` at `f`: `Q [B, I_{α,μ}] Qᵀ`, the velocity of
/// `t ↦ Q e^{tB} I_{α,μ} e^{−tB} Qᵀ` at `t = 0`.
pub fn push_tangent(b: &TangentBlock, f: &FlagPoint, spec: &Spectrum) -> Result<EmbeddedTangent> {
    let base = embed::embed(f, spec)?;
    let c = model_commutator(b, spec)?;
    let q = f.q();
    Ok(EmbeddedTangent {
        v: SymmetricMatrix::symmetrize(q * c * q.transpose()),
        base,
    })
}

/// `| ‖[B, I_{α,μ}]‖_F² − ⟨B, B⟩ |`.
pub fn isometry_defect(b: &TangentBlock, spec: &Spectrum) -> Result<f64> {
    let c = model_commutator(b, spec)?;
    let metric = MetricSpec::new(spec.clone());
    Ok((c.norm_squared() - metric_inner(b, b, &metric)?).abs())
}

/// Frobenius-orthogonal projection of `g` onto the tangent space at `base`:
/// zero the diagonal blocks of `Qᵀ g Q` and rotate back.
pub fn project_to_tangent(g: &SymmetricMatrix, base: &EmbeddedFlag) -> Result<EmbeddedTangent> {
    let sig = base.spectrum().signature();
    if g.n() != sig.n() {
        return Err(Error::DimensionMismatch {
            expected: sig.n(),
            rows: g.n(),
            cols: g.n(),
        });
    }
    let q = base.frame();
    let mut local = q.transpose() * g.matrix() * q;
    for r in sig.block_ranges() {
        local
            .view_mut((r.start, r.start), (r.len(), r.len()))
            .fill(0.0);
    }
    Ok(EmbeddedTangent {
        v: SymmetricMatrix::symmetrize(q * local * q.transpose()),
        base: base.clone(),
    })
}

/// Closest point of the isospectral model to `a` in Frobenius norm.
///
/// With `a = U Λ Uᵀ` and eigenvalues sorted in descending order, the largest
/// `a_i` takes the leading eigenvectors, the next largest the following
/// ones, and so on. The minimizer is unique exactly when the sorted
/// eigenvalues of `a` are separated at every block boundary; a gap of at
/// most `gap_tol` there is reported as [`Error::DegenerateBoundaryGap`].
pub fn nearest_point(a: &SymmetricMatrix, spec: &Spectrum, gap_tol: f64) -> Result<EmbeddedFlag> {
    let sig = spec.signature();
    let n = sig.n();
    if a.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            rows: a.n(),
            cols: a.n(),
        });
    }
    let eig = a.matrix().clone().symmetric_eigen();
    let mut by_value: Vec<usize> = (0..n).collect();
    by_value.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let values = spec.values();
    let mut block_order: Vec<usize> = (0..values.len()).collect();
    block_order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));

    let sizes = sig.blocks();
    let mut assigned: Vec<&[usize]> = vec![&[]; values.len()];
    let mut pos = 0;
    for (rank, &block) in block_order.iter().enumerate() {
        if rank > 0 {
            let gap = eig.eigenvalues[by_value[pos - 1]] - eig.eigenvalues[by_value[pos]];
            if gap <= gap_tol {
                return Err(Error::DegenerateBoundaryGap { position: pos, gap });
            }
        }
        assigned[block] = &by_value[pos..pos + sizes[block]];
        pos += sizes[block];
    }

    let mut frame = DMatrix::<f64>::zeros(n, n);
    let mut col = 0;
    for cols in assigned {
        for &k in cols {
            frame.set_column(col, &eig.eigenvectors.column(k));
            col += 1;
        }
    }
    if frame.determinant() < 0.0 {
        frame.column_mut(n - 1).neg_mut();
    }
    Ok(EmbeddedFlag::from_frame(frame, spec))
}

/// Projection retraction: `nearest_point(base + step·v)`.
pub fn retract(base: &EmbeddedFlag, v: &EmbeddedTangent, step: f64, gap_tol: f64) -> Result<EmbeddedFlag> {
    if step == 0.0 {
        return Ok(base.clone());
    }
    let moved = SymmetricMatrix::symmetrize(base.x().matrix() + v.v().matrix() * step);
    nearest_point(&moved, base.spectrum(), gap_tol)
}

/// Default step `0.1 / max_{i,j} (a_i − a_j)²`.
pub fn default_step(spec: &Spectrum) -> f64 {
    0.1 / spec.max_gap().powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentOptions {
    pub step: f64,
    pub max_iters: usize,
    pub grad_tol: f64,
    /// Boundary gap tolerance handed to the retraction.
    pub gap_tol: f64,
}

impl DescentOptions {
    pub fn for_spectrum(spec: &Spectrum) -> Self {
        Self {
            step: default_step(spec),
            max_iters: 500,
            grad_tol: 1e-6,
            gap_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DescentReport {
    pub point: EmbeddedFlag,
    /// Projected-gradient Frobenius norm at every visited iterate, the last
    /// entry belonging to `point`.
    pub grad_norms: Vec<f64>,
    /// Number of retraction steps taken.
    pub iterations: usize,
    pub converged: bool,
}

impl DescentReport {
    pub fn final_grad_norm(&self) -> f64 {
        *self.grad_norms.last().expect("at least one gradient evaluation")
    }
}

/// Riemannian gradient descent with projection retraction.
///
/// `gradient` returns the Euclidean gradient of the objective at a point of
/// the model; only its symmetric part is used. Iterates
/// `x ← retract(x, −step·proj_x(∇f(x)))` until the projected gradient norm
/// drops to `grad_tol` or `max_iters` steps have been taken.
pub fn gradient_descent<G>(
    mut gradient: G,
    spec: &Spectrum,
    init: &EmbeddedFlag,
    opts: &DescentOptions,
) -> Result<DescentReport>
where
    G: FnMut(&SymmetricMatrix) -> DMatrix<f64>,
{
    if init.spectrum() != spec {
        return Err(Error::SignatureMismatch);
    }
    let mut x = init.clone();
    let mut grad_norms = Vec::new();
    for iteration in 0..=opts.max_iters {
        let g = gradient(x.x());
        if g.shape() != (spec.signature().n(), spec.signature().n()) || g.iter().any(|v| !v.is_finite()) {
            return Err(Error::StepNotFinite { iteration });
        }
        let pg = project_to_tangent(&SymmetricMatrix::symmetrize(g), &x)?;
        let norm = pg.norm();
        grad_norms.push(norm);
        if norm <= opts.grad_tol || iteration == opts.max_iters {
            return Ok(DescentReport {
                point: x,
                grad_norms,
                iterations: iteration,
                converged: norm <= opts.grad_tol,
            });
        }
        x = retract(&x, &pg, -opts.step, opts.gap_tol)?;
    }
    unreachable!("loop returns on its last iteration")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{block_diagonal_model, embed, membership};
    use crate::flagcore::{random_flag_point, random_special_orthogonal, FlagSignature};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plane() -> (FlagSignature, Spectrum) {
        let s = FlagSignature::new(2, vec![1]).unwrap();
        let spec = Spectrum::default_traceless(&s);
        (s, spec)
    }

    fn line_block(beta: f64) -> TangentBlock {
        let (s, _) = plane();
        TangentBlock::from_blocks(&s, vec![DMatrix::from_element(1, 1, beta)]).unwrap()
    }

    #[test]
    fn metric_on_the_plane() {
        let (s, spec) = plane();
        let m = MetricSpec::new(spec);
        let b = line_block(0.7);
        // 2·(1 − (−1))²·β²
        assert!((m.inner(&b, &b).unwrap() - 8.0 * 0.49).abs() < 1e-14);
        assert_eq!(m.inner(&TangentBlock::zeros(&s), &b).unwrap(), 0.0);
    }

    #[test]
    fn metric_is_symmetric_and_positive() {
        let s = FlagSignature::new(6, vec![1, 3, 4]).unwrap();
        let m = MetricSpec::new(Spectrum::default_traceless(&s));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let b = TangentBlock::random(&s, &mut rng);
            let c = TangentBlock::random(&s, &mut rng);
            let bc = m.inner(&b, &c).unwrap();
            let cb = m.inner(&c, &b).unwrap();
            assert!((bc - cb).abs() <= 1e-12 * (1.0 + bc.abs()));
            assert!(m.inner(&b, &b).unwrap() > 0.0);
        }
        let other = FlagSignature::new(6, vec![2]).unwrap();
        assert_eq!(
            m.inner(&TangentBlock::zeros(&other), &TangentBlock::zeros(&other)),
            Err(Error::SignatureMismatch)
        );
    }

    #[test]
    fn pushforward_on_the_plane() {
        // [B, diag(1,−1)] with B = [[0, β], [−β, 0]] is [[0, −2β], [−2β, 0]]
        let (s, spec) = plane();
        let v = push_tangent(&line_block(0.5), &FlagPoint::identity(&s), &spec).unwrap();
        let want = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        assert!((v.v().matrix() - want).norm() < 1e-15);
        let zero = push_tangent(&TangentBlock::zeros(&s), &FlagPoint::identity(&s), &spec).unwrap();
        assert_eq!(zero.norm(), 0.0);
    }

    #[test]
    fn commutator_blocks_scale_by_gaps() {
        let s = FlagSignature::new(5, vec![2, 3]).unwrap();
        let spec = Spectrum::default_traceless(&s);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let b = TangentBlock::random(&s, &mut rng);
        let c = TangentBlock::from_upper_blocks(&s, &model_commutator(&b, &spec).unwrap()).unwrap();
        let a = spec.values();
        for (((i, j), bij), (_, cij)) in b.iter().zip(c.iter()) {
            assert!((cij - bij * (a[j] - a[i])).norm() < 1e-12);
        }
    }

    #[test]
    fn isometry_defect_vanishes_and_scales() {
        let s = FlagSignature::new(7, vec![2, 3, 6]).unwrap();
        let spec = Spectrum::default_traceless(&s);
        assert_eq!(isometry_defect(&TangentBlock::zeros(&s), &spec).unwrap(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let b = TangentBlock::random(&s, &mut rng);
            let norm2 = b.to_matrix().norm_squared();
            assert!(isometry_defect(&b, &spec).unwrap() <= 1e-10 * (1.0 + norm2));
            let c = model_commutator(&b, &spec).unwrap().norm_squared();
            let c2 = model_commutator(&b.scaled(2.0), &spec).unwrap().norm_squared();
            assert!((c2 - 4.0 * c).abs() <= 1e-10 * c2);
        }
    }

    #[test]
    fn projection_properties() {
        let s = FlagSignature::new(5, vec![1, 3]).unwrap();
        let spec = Spectrum::default_traceless(&s);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let base = embed(&random_flag_point(&s, 1), &spec).unwrap();

        let of_x = project_to_tangent(base.x(), &base).unwrap();
        assert!(of_x.norm() <= 1e-12 * base.x().matrix().norm());

        for _ in 0..20 {
            let g = SymmetricMatrix::symmetrize(DMatrix::from_fn(5, 5, |_, _| {
                rand::Rng::sample(&mut rng, rand_distr::StandardNormal)
            }));
            let p = project_to_tangent(&g, &base).unwrap();
            let pp = project_to_tangent(p.v(), &base).unwrap();
            assert!((p.v().matrix() - pp.v().matrix()).norm() <= 1e-12);
            let resid = g.matrix() - p.v().matrix();
            assert!(resid.dot(p.v().matrix()).abs() <= 1e-10);
            assert!(p.normal_defect() <= 1e-12);
        }
    }

    #[test]
    fn nearest_point_diagonal_case() {
        let s = FlagSignature::new(3, vec![1]).unwrap();
        let spec = Spectrum::new(s, vec![2.0, -1.0], 1e-8).unwrap();
        let a = SymmetricMatrix::from_diagonal(&[5.0, 0.1, -7.0]);
        let p = nearest_point(&a, &spec, 1e-8).unwrap();
        let want = DMatrix::from_diagonal(&nalgebra::dvector![2.0, -1.0, -1.0]);
        assert!((p.x().matrix() - want).norm() < 1e-14);

        // largest eigenvalue sits in the middle slot
        let a = SymmetricMatrix::from_diagonal(&[0.1, 5.0, -7.0]);
        let p = nearest_point(&a, &spec, 1e-8).unwrap();
        let want = DMatrix::from_diagonal(&nalgebra::dvector![-1.0, 2.0, -1.0]);
        assert!((p.x().matrix() - want).norm() < 1e-14);
    }

    #[test]
    fn nearest_point_handles_unsorted_spectrum() {
        // blocks (1, 2) carry values (−1, 2): the two leading eigenvectors
        // of `a` go to the value 2
        let s = FlagSignature::new(3, vec![1]).unwrap();
        let spec = Spectrum::new(s, vec![-1.0, 2.0], 1e-8).unwrap();
        let a = SymmetricMatrix::from_diagonal(&[5.0, 0.1, -7.0]);
        let p = nearest_point(&a, &spec, 1e-8).unwrap();
        let want = DMatrix::from_diagonal(&nalgebra::dvector![2.0, 2.0, -1.0]);
        assert!((p.x().matrix() - want).norm() < 1e-14);
        assert!((p.frame().determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nearest_point_is_idempotent_and_fixes_the_model() {
        let s = FlagSignature::new(6, vec![2, 5]).unwrap();
        let spec = Spectrum::default_traceless(&s);
        let on = embed(&random_flag_point(&s, 3), &spec).unwrap();
        let p = nearest_point(on.x(), &spec, 1e-8).unwrap();
        assert!((p.x().matrix() - on.x().matrix()).norm() < 1e-10);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = SymmetricMatrix::symmetrize(DMatrix::from_fn(6, 6, |_, _| {
            rand::Rng::sample(&mut rng, rand_distr::StandardNormal)
        }));
        let p1 = nearest_point(&a, &spec, 1e-8).unwrap();
        let p2 = nearest_point(p1.x(), &spec, 1e-8).unwrap();
        assert!((p1.x().matrix() - p2.x().matrix()).norm() < 1e-10);
    }

    #[test]
    fn nearest_point_rejects_boundary_ties() {
        let s = FlagSignature::new(3, vec![1]).unwrap();
        let spec = Spectrum::default_traceless(&s);
        let a = SymmetricMatrix::from_diagonal(&[1.0, 1.0, -2.0]);
        assert!(matches!(
            nearest_point(&a, &spec, 1e-8),
            Err(Error::DegenerateBoundaryGap { position: 1, .. })
        ));
        // ties inside a block are fine
        let a = SymmetricMatrix::from_diagonal(&[3.0, -1.0, -1.0]);
        assert!(nearest_point(&a, &spec, 1e-8).is_ok());
    }

    #[test]
    fn retraction_basics() {
        let s = FlagSignature::new(4, vec![1, 2]).unwrap();
        let spec = Spectrum::default_traceless(&s);
        let base = embed(&random_flag_point(&s, 7), &spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let v = push_tangent(&TangentBlock::random(&s, &mut rng), &base.flag(), &spec).unwrap();
        assert_eq!(retract(&base, &v, 0.0, 1e-8).unwrap(), base);
        for &h in &[0.01, 0.1, 0.5] {
            let r = retract(&base, &v, h, 1e-8).unwrap();
            assert!(membership(r.x(), &spec, 1e-9));
        }
    }

    #[test]
    fn descent_stays_at_a_minimum() {
        let s = FlagSignature::new(4, vec![2]).unwrap();
        let spec = Spectrum::default_traceless(&s);
        let target = embed(&random_flag_point(&s, 1), &spec).unwrap();
        let t = target.x().matrix().clone();
        let opts = DescentOptions::for_spectrum(&spec);
        let rep = gradient_descent(|x| x.matrix() - &t, &spec, &target, &opts).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.iterations, 0);
    }

    #[test]
    fn descent_rejects_non_finite_gradients() {
        let s = FlagSignature::new(3, vec![1]).unwrap();
        let spec = Spectrum::default_traceless(&s);
        let init = embed(&FlagPoint::identity(&s), &spec).unwrap();
        let opts = DescentOptions::for_spectrum(&spec);
        let err = gradient_descent(|_| DMatrix::from_element(3, 3, f64::NAN), &spec, &init, &opts);
        assert_eq!(err, Err(Error::StepNotFinite { iteration: 0 }));
    }

    #[test]
    fn descent_respects_iteration_cap() {
        let s = FlagSignature::new(4, vec![1]).unwrap();
        let spec = Spectrum::default_traceless(&s);
        let init = embed(&FlagPoint::identity(&s), &spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = random_special_orthogonal(4, &mut rng);
        let a = &r * block_diagonal_model(&spec).matrix() * r.transpose();
        let opts = DescentOptions {
            max_iters: 3,
            ..DescentOptions::for_spectrum(&spec)
        };
        let rep = gradient_descent(|x| x.matrix() - &a, &spec, &init, &opts).unwrap();
        assert_eq!(rep.iterations, 3);
        assert_eq!(rep.grad_norms.len(), 4);
        assert!(!rep.converged);
    }
}
