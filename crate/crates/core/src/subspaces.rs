//! Linear subspaces of spinor space: kernels, projectors, intersections and
//! a basis-independent distance.

use crate::clifford::{ComplexMatrix4, Spinor, C64};
use crate::svd::svd_columns;

/// Relative singular-value threshold for rank decisions.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Subspaces at distance at most this are declared equal.
pub const EQUAL_DISTANCE: f64 = 1e-8;

/// Subspaces at distance at least this are declared distinct.
pub const DISTINCT_DISTANCE: f64 = 1e-2;

/// A subspace held as an orthonormal basis (columns).
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: Vec<Spinor>,
}

impl Subspace {
    pub fn zero() -> Self {
        Subspace { basis: Vec::new() }
    }

    pub fn full() -> Self {
        let basis = (0..4).map(unit).collect();
        Subspace { basis }
    }

    /// Orthonormal basis for the span of `vectors`, dropping directions whose
    /// singular value is at most `tol` times the largest.
    pub fn span(vectors: &[Spinor], tol: f64) -> Self {
        if vectors.is_empty() {
            return Self::zero();
        }
        let cols: Vec<Vec<C64>> = vectors.iter().map(|v| v.to_vec()).collect();
        let svd = svd_columns(&cols);
        let smax = svd.max();
        if smax == 0.0 {
            return Self::zero();
        }
        let basis = svd
            .singular
            .iter()
            .zip(&svd.left)
            .filter(|(s, _)| **s > tol * smax)
            .map(|(_, u)| to_spinor(u))
            .collect();
        Subspace { basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Spinor] {
        &self.basis
    }

    /// max |⟨bᵢ, bⱼ⟩ − δᵢⱼ|.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner(a, b) - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Image under `v ↦ m·v` (or `m·conj(v)`), re-orthonormalized.
    pub fn mapped(&self, m: &ComplexMatrix4, antilinear: bool) -> Subspace {
        let images: Vec<Spinor> = self
            .basis
            .iter()
            .map(|v| {
                if antilinear {
                    m.apply(&v.map(|z| z.conj()))
                } else {
                    m.apply(v)
                }
            })
            .collect();
        Subspace::span(&images, DEFAULT_TOL)
    }
}

fn unit(i: usize) -> Spinor {
    let mut v = [C64::new(0.0, 0.0); 4];
    v[i] = C64::new(1.0, 0.0);
    v
}

fn to_spinor(v: &[C64]) -> Spinor {
    [v[0], v[1], v[2], v[3]]
}

pub fn inner(a: &Spinor, b: &Spinor) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn spinor_norm(v: &Spinor) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn kernel_of_columns(cols: &[Vec<C64>], tol: f64, floor: f64) -> Subspace {
    let svd = svd_columns(cols);
    let smax = svd.max().max(floor);
    if smax == 0.0 {
        return Subspace::full();
    }
    let basis = svd
        .singular
        .iter()
        .zip(&svd.right)
        .filter(|(s, _)| **s <= tol * smax)
        .map(|(_, v)| to_spinor(v))
        .collect();
    Subspace { basis }
}

fn matrix_columns(m: &ComplexMatrix4) -> Vec<Vec<C64>> {
    (0..4).map(|j| m.column(j).to_vec()).collect()
}

/// Span of the right singular vectors with σ ≤ tol·σ_max.
pub fn kernel(m: &ComplexMatrix4, tol: f64) -> Subspace {
    kernel_of_columns(&matrix_columns(m), tol, 0.0)
}

/// Singular values of a 4×4 matrix, descending.
pub fn singular_values(m: &ComplexMatrix4) -> Vec<f64> {
    svd_columns(&matrix_columns(m)).singular
}

/// Number of singular values above tol·σ_max.
pub fn rank(m: &ComplexMatrix4, tol: f64) -> usize {
    let s = singular_values(m);
    let smax = s[0];
    s.iter().filter(|x| **x > tol * smax).count()
}

/// Operator 2-norm.
pub fn operator_norm(m: &ComplexMatrix4) -> f64 {
    singular_values(m)[0]
}

pub fn projector(s: &Subspace) -> ComplexMatrix4 {
    let mut p = ComplexMatrix4::zero();
    for v in &s.basis {
        for i in 0..4 {
            for j in 0..4 {
                p.0[i][j] += v[i] * v[j].conj();
            }
        }
    }
    p
}

/// ‖P_A − P_B‖₂: the sine of the largest principal angle when dimensions
/// agree, 1 when they differ.
pub fn subspace_distance(a: &Subspace, b: &Subspace) -> f64 {
    operator_norm(&(projector(a) - projector(b)))
}

/// Vectors lying in both subspaces: kernel of `[I − P_A; I − P_B]`.
///
/// The stacked complements have singular values in [0, √2], so the relative
/// threshold is taken against max(σ_max, 1); two full spaces leave only
/// rounding noise and must not be rank-decided against it.
pub fn intersect(a: &Subspace, b: &Subspace, tol: f64) -> Subspace {
    let qa = ComplexMatrix4::identity() - projector(a);
    let qb = ComplexMatrix4::identity() - projector(b);
    let cols: Vec<Vec<C64>> = (0..4)
        .map(|j| qa.column(j).iter().chain(qb.column(j).iter()).copied().collect())
        .collect();
    kernel_of_columns(&cols, tol, 1.0)
}

/// ‖Bᴴ·M·B‖₂ for an orthonormal basis B of `s`.
pub fn compressed_norm(m: &ComplexMatrix4, s: &Subspace) -> f64 {
    if s.dim() == 0 {
        return 0.0;
    }
    let cols: Vec<Vec<C64>> = s
        .basis
        .iter()
        .map(|bj| {
            let mb = m.apply(bj);
            s.basis.iter().map(|bi| inner(bi, &mb)).collect()
        })
        .collect();
    svd_columns(&cols).max()
}
