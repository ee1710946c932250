//! Ambient dimensions of the classical embedding results, evaluated for flag
//! manifolds and compared with the isospectral value `(n−1)(n+2)/2`.
//!
//! Everything here is exact integer arithmetic.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flagcore::FlagSignature;

/// `m = (n² − Σ n_i²)/2`, the dimension of the flag manifold.
pub fn flag_dimension(sig: &FlagSignature) -> u128 {
    let n = sig.n() as u128;
    let squares: u128 = sig.blocks().iter().map(|&b| (b as u128).pow(2)).sum();
    (n * n - squares) / 2
}

/// Günther's isometric embedding dimension `max{m(m+3)/2 + 5, m(m+5)/2}`.
pub fn gunther_bound(m: u128) -> u128 {
    (m * (m + 3) / 2 + 5).max(m * (m + 5) / 2)
}

/// The same bound written as `max{m(m+3) + 10, m(m+5)}/2`.
pub fn gunther_bound_halved_form(m: u128) -> u128 {
    (m * (m + 3) + 10).max(m * (m + 5)) / 2
}

/// `(n−1)(n+2)/2 = dim Sym²∘(ℝⁿ)`.
pub fn isospectral_bound(n: usize) -> u128 {
    let n = n as u128;
    (n - 1) * (n + 2) / 2
}

/// Whitney: `2m`.
pub fn whitney_bound(m: u128) -> u128 {
    2 * m
}

/// `Σ n_i(n_i+1) ≤ 2[1 + Σ_{i<j} n_i n_j]`, which holds exactly when the
/// isospectral value does not exceed Whitney's `2m = n² − Σ n_i²`.
pub fn whitney_comparison(sig: &FlagSignature) -> bool {
    let b: Vec<u128> = sig.blocks().iter().map(|&x| x as u128).collect();
    let lhs: u128 = b.iter().map(|x| x * (x + 1)).sum();
    let mut cross = 0;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            cross += b[i] * b[j];
        }
    }
    lhs <= 2 * (1 + cross)
}

/// `isospectral_bound(n) ≤ n² − Σ n_i²`, evaluated directly.
pub fn whitney_direct(sig: &FlagSignature) -> bool {
    isospectral_bound(sig.n()) <= whitney_bound(flag_dimension(sig))
}

/// `isospectral_bound(n) < gunther_bound(m)`.
pub fn gunther_comparison(sig: &FlagSignature) -> bool {
    isospectral_bound(sig.n()) < gunther_bound(flag_dimension(sig))
}

/// Wang: an embedding in ℝᵈ yields a G-equivariant one in `ℝ^{d|G|}`.
pub fn wang_bound(d: u128, group_order: u128) -> u128 {
    d * group_order
}

/// Wang composed with Whitney: `2m|G|`.
pub fn wang_whitney_bound(m: u128, group_order: u128) -> u128 {
    wang_bound(whitney_bound(m), group_order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StiefelMinimal {
    /// `k·n`, the dimension of ℝ^{n×k}.
    pub dim: u128,
    /// `n ≥ 17` and `k < (n−1)/2`, under which `kn` is the minimum.
    pub minimality_holds: bool,
}

/// Ambient dimension of the usual Stiefel model `{Y ∈ ℝ^{n×k} : YᵀY = I}`.
pub fn stiefel_min_dim(k: usize, n: usize) -> Result<StiefelMinimal> {
    if k == 0 || k >= n {
        return Err(Error::InvalidStiefel { k, n });
    }
    Ok(StiefelMinimal {
        dim: (k * n) as u128,
        minimality_holds: n >= 17 && 2 * k < n - 1,
    })
}

/// `‖YᵀY − I‖_F ≤ tol`.
pub fn stiefel_check(y: &DMatrix<f64>, tol: f64) -> bool {
    let k = y.ncols();
    (y.transpose() * y - DMatrix::<f64>::identity(k, k)).norm() <= tol
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedComparison {
    pub name: String,
    pub holds: bool,
}

/// How the isospectral value relates to the true equivariant minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsospectralStatus {
    /// `n ≥ 17`: the value is the minimum.
    Minimum,
    /// `n < 17`: the value is attained, minimality is not established.
    AchievedUpperBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub signature: FlagSignature,
    pub blocks: Vec<usize>,
    pub flag_dim: u128,
    pub isospectral: u128,
    pub isospectral_status: IsospectralStatus,
    pub gunther: u128,
    pub whitney: u128,
    /// `2m|G|`, present when a group order was given.
    pub wang: Option<u128>,
    pub group_order: Option<u128>,
    pub comparisons: Vec<NamedComparison>,
}

impl BoundReport {
    pub fn comparison(&self, name: &str) -> Option<bool> {
        self.comparisons.iter().find(|c| c.name == name).map(|c| c.holds)
    }
}

pub fn bound_table(sig: &FlagSignature, group_order: Option<u128>) -> BoundReport {
    let m = flag_dimension(sig);
    let iso = isospectral_bound(sig.n());
    let gunther = gunther_bound(m);
    let mut comparisons = vec![
        NamedComparison {
            name: "isospectral < gunther".into(),
            holds: iso < gunther,
        },
        NamedComparison {
            name: "whitney_comparison".into(),
            holds: whitney_comparison(sig),
        },
    ];
    let wang = group_order.map(|g| wang_whitney_bound(m, g));
    if let Some(w) = wang {
        comparisons.push(NamedComparison {
            name: "wang_composed > isospectral".into(),
            holds: w > iso,
        });
    }
    BoundReport {
        signature: sig.clone(),
        blocks: sig.blocks().to_vec(),
        flag_dim: m,
        isospectral: iso,
        isospectral_status: if sig.n() >= 17 {
            IsospectralStatus::Minimum
        } else {
            IsospectralStatus::AchievedUpperBound
        },
        gunther,
        whitney: whitney_bound(m),
        wang,
        group_order,
        comparisons,
    }
}

/// All `2^{n−1} − 1` signatures on ℝⁿ, i.e. every nonempty subset of
/// `{1, …, n−1}`, in bitmask order.
pub fn all_signatures(n: usize) -> impl Iterator<Item = FlagSignature> {
    let count: u64 = if n >= 2 { 1 << (n - 1) } else { 1 };
    (1..count).map(move |mask| {
        let ks = (1..n).filter(|k| mask & (1 << (k - 1)) != 0).collect();
        FlagSignature::new(n, ks).expect("subset of 1..n is a valid signature")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(n: usize, ks: &[usize]) -> FlagSignature {
        FlagSignature::new(n, ks.to_vec()).unwrap()
    }

    #[test]
    fn flag_dimensions() {
        assert_eq!(flag_dimension(&sig(3, &[1, 2])), 3);
        assert_eq!(flag_dimension(&sig(5, &[2])), 6);
        assert_eq!(flag_dimension(&sig(2, &[1])), 1);
        // Gr(k, n) has dimension k(n − k)
        for n in 2..12 {
            for k in 1..n {
                assert_eq!(flag_dimension(&sig(n, &[k])), (k * (n - k)) as u128);
            }
        }
    }

    #[test]
    fn gunther_values() {
        assert_eq!(gunther_bound(6), 33);
        assert_eq!(gunther_bound(3), 14);
        assert_eq!(gunther_bound(1), 7);
        for m in 1..500 {
            assert_eq!(gunther_bound(m), gunther_bound_halved_form(m));
        }
    }

    #[test]
    fn isospectral_and_whitney_values() {
        assert_eq!(isospectral_bound(5), 14);
        assert_eq!(isospectral_bound(17), 152);
        assert_eq!(isospectral_bound(2), 2);
        assert_eq!(whitney_bound(6), 12);
        assert_eq!(whitney_bound(1), 2);
        assert!(whitney_bound(flag_dimension(&sig(5, &[2]))) < isospectral_bound(5));
    }

    #[test]
    fn whitney_comparison_cases() {
        let full3 = sig(3, &[1, 2]);
        assert!(whitney_comparison(&full3));
        assert!(whitney_direct(&full3));
        // lines: holds only in the plane
        assert!(whitney_comparison(&sig(2, &[1])));
        for n in 3..12 {
            let s = sig(n, &[1]);
            assert!(!whitney_comparison(&s));
            assert_eq!(whitney_comparison(&s), whitney_direct(&s));
        }
    }

    #[test]
    fn gunther_comparison_cases() {
        assert!(gunther_comparison(&sig(5, &[2])));
        assert!(gunther_comparison(&sig(2, &[1])));
    }

    #[test]
    fn wang_values() {
        assert_eq!(wang_bound(12, 3), 36);
        assert_eq!(wang_bound(12, 1), 12);
        let m = flag_dimension(&sig(5, &[2]));
        assert_eq!(wang_whitney_bound(m, 2), 24);
        assert!(wang_whitney_bound(m, 2) > isospectral_bound(5));
    }

    #[test]
    fn stiefel() {
        assert_eq!(
            stiefel_min_dim(3, 20).unwrap(),
            StiefelMinimal {
                dim: 60,
                minimality_holds: true
            }
        );
        assert!(!stiefel_min_dim(3, 10).unwrap().minimality_holds);
        let s = stiefel_min_dim(1, 17).unwrap();
        assert_eq!(s.dim, 17);
        assert!(s.minimality_holds);
        // k < (n − 1)/2 is strict
        assert!(!stiefel_min_dim(8, 17).unwrap().minimality_holds);
        assert!(stiefel_min_dim(7, 17).unwrap().minimality_holds);
        assert_eq!(stiefel_min_dim(0, 5), Err(Error::InvalidStiefel { k: 0, n: 5 }));
        assert_eq!(stiefel_min_dim(5, 5), Err(Error::InvalidStiefel { k: 5, n: 5 }));
    }

    #[test]
    fn stiefel_membership() {
        let tol = 1e-10;
        let q = crate::flagcore::random_flag_point(&sig(6, &[3]), 4).q().clone();
        let y = q.columns(0, 3).into_owned();
        assert!(stiefel_check(&y, tol));
        assert!(!stiefel_check(&DMatrix::zeros(6, 3), tol));
        let mut bumped = y.clone();
        bumped[(2, 1)] += 10.0 * tol;
        assert!(!stiefel_check(&bumped, tol));
    }

    #[test]
    fn tables() {
        let r = bound_table(&sig(5, &[2]), None);
        assert_eq!((r.flag_dim, r.isospectral, r.gunther, r.whitney), (6, 14, 33, 12));
        assert_eq!(r.comparison("isospectral < gunther"), Some(true));
        assert_eq!(r.comparison("whitney_comparison"), Some(false));
        assert_eq!(r.wang, None);
        assert_eq!(r.isospectral_status, IsospectralStatus::AchievedUpperBound);

        let r = bound_table(&sig(3, &[1, 2]), Some(2));
        assert_eq!((r.flag_dim, r.isospectral, r.gunther, r.whitney), (3, 5, 14, 6));
        assert_eq!(r.wang, Some(12));
        assert_eq!(r.comparison("wang_composed > isospectral"), Some(true));

        let r = bound_table(&sig(17, &[4]), Some(1));
        assert_eq!(r.isospectral_status, IsospectralStatus::Minimum);
    }

    #[test]
    fn signature_enumeration() {
        assert_eq!(all_signatures(2).count(), 1);
        assert_eq!(all_signatures(5).count(), 15);
        let mut seen: Vec<_> = all_signatures(6).map(|s| s.ks().to_vec()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 31);
    }

    #[test]
    fn report_serde_round_trip() {
        let r = bound_table(&sig(7, &[2, 5]), Some(3));
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<BoundReport>(&json).unwrap(), r);
    }
}
