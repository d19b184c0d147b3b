//! Gamma matrices, the Minkowski metric and gamma-five.
//!
//! Everything downstream is expressed through a [`GammaRep`]. The canonical
//! build is the chiral (Weyl) representation; any other representation is
//! obtained by unitary conjugation with [`GammaRep::conjugated`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

pub type C64 = Complex64;

/// A four-component spinor amplitude.
pub type Spinor = [C64; 4];

/// Diagonal of the metric, signature (+, -, -, -).
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Dense 4×4 complex matrix acting on spinor space.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix4(pub [[C64; 4]; 4]);

impl ComplexMatrix4 {
    pub const fn zero() -> Self {
        ComplexMatrix4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::scalar(ONE)
    }

    pub fn scalar(value: C64) -> Self {
        Self::from_diag([value; 4])
    }

    pub fn from_diag(diag: [C64; 4]) -> Self {
        let mut m = Self::zero();
        for (i, d) in diag.into_iter().enumerate() {
            m.0[i][i] = d;
        }
        m
    }

    pub fn from_real_diag(diag: [f64; 4]) -> Self {
        Self::from_diag(diag.map(|d| C64::new(d, 0.0)))
    }

    /// Assemble from 2×2 blocks `[[a, b], [c, d]]`.
    pub fn from_blocks(a: [[C64; 2]; 2], b: [[C64; 2]; 2], c: [[C64; 2]; 2], d: [[C64; 2]; 2]) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = a[i][j];
                m.0[i][j + 2] = b[i][j];
                m.0[i + 2][j] = c[i][j];
                m.0[i + 2][j + 2] = d[i][j];
            }
        }
        m
    }

    /// Build from column vectors.
    pub fn from_columns(cols: &[Spinor; 4]) -> Self {
        let mut m = Self::zero();
        for (j, col) in cols.iter().enumerate() {
            for i in 0..4 {
                m.0[i][j] = col[i];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Spinor {
        [self.0[0][j], self.0[1][j], self.0[2][j], self.0[3][j]]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        ComplexMatrix4(self.0.map(|row| row.map(|z| z.conj())))
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix4(self.0.map(|row| row.map(|z| z * s)))
    }

    pub fn scale_real(&self, s: f64) -> Self {
        ComplexMatrix4(self.0.map(|row| row.map(|z| z * s)))
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &Spinor) -> Spinor {
        let mut out = [ZERO; 4];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting. `None` if
    /// a pivot vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let mut a = self.0;
        let mut inv = Self::identity().0;
        for col in 0..4 {
            let pivot = (col..4).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))?;
            if a[pivot][col].norm() == 0.0 {
                return None;
            }
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col];
            for j in 0..4 {
                a[col][j] /= p;
                inv[col][j] /= p;
            }
            for row in 0..4 {
                if row != col {
                    let f = a[row][col];
                    for j in 0..4 {
                        a[row][j] -= f * a[col][j];
                        inv[row][j] -= f * inv[col][j];
                    }
                }
            }
        }
        Some(ComplexMatrix4(inv))
    }

    /// Determinant by cofactor-free LU elimination.
    pub fn determinant(&self) -> C64 {
        let mut a = self.0;
        let mut det = ONE;
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
                .unwrap_or(col);
            if a[pivot][col].norm() == 0.0 {
                return ZERO;
            }
            if pivot != col {
                a.swap(col, pivot);
                det = -det;
            }
            det *= a[col][col];
            for row in col + 1..4 {
                let f = a[row][col] / a[col][col];
                for j in col..4 {
                    a[row][j] -= f * a[col][j];
                }
            }
        }
        det
    }

    /// Max-norm of `self·selfᴴ − I`.
    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.adjoint() - Self::identity()).max_abs()
    }

    /// A pseudorandom unitary: Gram-Schmidt on uniformly sampled columns.
    pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let mut cols = [[ZERO; 4]; 4];
            for col in cols.iter_mut() {
                for z in col.iter_mut() {
                    *z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
            }
            if let Some(q) = gram_schmidt(cols) {
                return Self::from_columns(&q);
            }
        }
    }
}

fn gram_schmidt(mut cols: [Spinor; 4]) -> Option<[Spinor; 4]> {
    for j in 0..4 {
        for k in 0..j {
            let proj: C64 = (0..4).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..4 {
                let sub = proj * cols[k][i];
                cols[j][i] -= sub;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            return None;
        }
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    Some(cols)
}

impl Index<(usize, usize)> for ComplexMatrix4 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Add for ComplexMatrix4 {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
        self
    }
}

impl Sub for ComplexMatrix4 {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] -= rhs.0[i][j];
            }
        }
        self
    }
}

impl Neg for ComplexMatrix4 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_real(-1.0)
    }
}

impl Mul for ComplexMatrix4 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..4 {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl fmt::Debug for ComplexMatrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in &self.0 {
            let cells: Vec<String> = row.iter().map(|z| format!("{:+.4}{:+.4}i", z.re, z.im)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for ComplexMatrix4 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .0
            .iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(s)
    }
}

/// A concrete realization of the Dirac algebra on 4-spinors.
#[derive(Clone, Debug)]
pub struct GammaRep {
    /// Upper-index matrices γ⁰, γ¹, γ², γ³.
    pub gamma: [ComplexMatrix4; 4],
    pub gamma5: ComplexMatrix4,
    /// `U·Uᵀ` for a representation reached from the chiral one by `γ ↦ UγU†`.
    /// Antilinear transforms carry this factor so that `v ↦ M·conj(v)` stays
    /// the same physical map in every basis. Identity for the chiral build.
    pub antilinear_frame: ComplexMatrix4,
}

impl GammaRep {
    pub fn metric(&self) -> [f64; 4] {
        METRIC
    }

    /// Same algebra in the basis `v ↦ U·v`.
    pub fn conjugated(&self, u: &ComplexMatrix4) -> GammaRep {
        let ud = u.adjoint();
        GammaRep {
            gamma: self.gamma.map(|g| *u * g * ud),
            gamma5: *u * self.gamma5 * ud,
            antilinear_frame: *u * self.antilinear_frame * u.transpose(),
        }
    }

    /// Σ along a unit axis, built from gamma commutators:
    /// Σᵏ = (i/4) εᵏⁱʲ [γⁱ, γʲ].
    pub fn spin(&self, axis: [f64; 3]) -> ComplexMatrix4 {
        let g = &self.gamma;
        let quarter_i = C64::new(0.0, 0.25);
        let pairs = [(2, 3), (3, 1), (1, 2)];
        pairs
            .iter()
            .zip(axis)
            .fold(ComplexMatrix4::zero(), |acc, (&(a, b), n)| {
                acc + g[a].commutator(&g[b]).scale(quarter_i * 2.0 * n)
            })
    }

    /// αᵏ nᵏ with αᵏ = γ⁰γᵏ.
    pub fn alpha(&self, axis: [f64; 3]) -> ComplexMatrix4 {
        let spatial = (1..4).fold(ComplexMatrix4::zero(), |acc, k| {
            acc + self.gamma[k].scale_real(axis[k - 1])
        });
        self.gamma[0] * spatial
    }
}

fn pauli() -> [[[C64; 2]; 2]; 3] {
    [
        [[ZERO, ONE], [ONE, ZERO]],
        [[ZERO, -I], [I, ZERO]],
        [[ONE, ZERO], [ZERO, -ONE]],
    ]
}

fn neg2(m: [[C64; 2]; 2]) -> [[C64; 2]; 2] {
    m.map(|row| row.map(|z| -z))
}

/// Chiral representation: γ⁰ = [[0, 1], [1, 0]], γᵏ = [[0, σₖ], [−σₖ, 0]],
/// γ₅ = iγ⁰γ¹γ²γ³ = diag(−1, −1, 1, 1).
pub fn build_chiral_rep() -> GammaRep {
    let z = [[ZERO; 2]; 2];
    let one = [[ONE, ZERO], [ZERO, ONE]];
    let g0 = ComplexMatrix4::from_blocks(z, one, one, z);
    let [s1, s2, s3] = pauli();
    let gk = [s1, s2, s3].map(|s| ComplexMatrix4::from_blocks(z, s, neg2(s), z));
    let gamma = [g0, gk[0], gk[1], gk[2]];
    let gamma5 = (gamma[0] * gamma[1] * gamma[2] * gamma[3]).scale(I);
    GammaRep {
        gamma,
        gamma5,
        antilinear_frame: ComplexMatrix4::identity(),
    }
}

/// max over μ, ν of ‖{γ^μ, γ^ν} − 2g^{μν}·I‖_max.
pub fn clifford_residual(rep: &GammaRep) -> f64 {
    let mut worst: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let target = if mu == nu { 2.0 * METRIC[mu] } else { 0.0 };
            let defect = rep.gamma[mu].anticommutator(&rep.gamma[nu]) - ComplexMatrix4::scalar(C64::new(target, 0.0));
            worst = worst.max(defect.max_abs());
        }
    }
    worst
}

/// Residuals of the γ₅ identities: `γ₅² = I`, `{γ₅, γ^μ} = 0` and
/// `γ₅ = iγ⁰γ¹γ²γ³`, as a single max-norm.
pub fn gamma5_residual(rep: &GammaRep) -> f64 {
    let g = &rep.gamma;
    let square = (rep.gamma5 * rep.gamma5 - ComplexMatrix4::identity()).max_abs();
    let anti = g
        .iter()
        .map(|gm| rep.gamma5.anticommutator(gm).max_abs())
        .fold(0.0, f64::max);
    let product = (rep.gamma5 - (g[0] * g[1] * g[2] * g[3]).scale(I)).max_abs();
    square.max(anti).max(product)
}

/// Hermiticity defect: γ⁰ Hermitian, γᵏ anti-Hermitian.
pub fn hermiticity_residual(rep: &GammaRep) -> f64 {
    rep.gamma
        .iter()
        .enumerate()
        .map(|(mu, g)| (g.adjoint().scale_real(METRIC[mu]) - *g).max_abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chiral_gamma5_is_diagonal() {
        let rep = build_chiral_rep();
        assert_eq!(rep.gamma5, ComplexMatrix4::from_real_diag([-1.0, -1.0, 1.0, 1.0]));
    }

    #[test]
    fn gamma0_squares_to_identity() {
        let rep = build_chiral_rep();
        assert_eq!(rep.gamma[0] * rep.gamma[0], ComplexMatrix4::identity());
    }

    #[test]
    fn gamma1_gamma2_anticommute() {
        let rep = build_chiral_rep();
        assert_eq!(rep.gamma[1].anticommutator(&rep.gamma[2]).max_abs(), 0.0);
    }

    #[test]
    fn chiral_rep_is_exact() {
        let rep = build_chiral_rep();
        assert!(clifford_residual(&rep) <= 1e-14);
        assert!(gamma5_residual(&rep) <= 1e-14);
        assert_eq!(hermiticity_residual(&rep), 0.0);
    }

    #[test]
    fn residual_detects_repeated_matrix() {
        let mut rep = build_chiral_rep();
        rep.gamma[1] = rep.gamma[2];
        assert!(clifford_residual(&rep) >= 1.0);
    }

    #[test]
    fn residual_detects_scaled_gamma0() {
        // {2γ⁰, 2γ⁰} − 2I = 8I − 2I, so the diagonal defect is 6.
        let mut rep = build_chiral_rep();
        rep.gamma[0] = rep.gamma[0].scale_real(2.0);
        let r = clifford_residual(&rep);
        assert!(r >= 2.0);
        assert!((r - 6.0).abs() < 1e-14);
    }

    #[test]
    fn gamma5_commutes_with_gamma_pairs() {
        let rep = build_chiral_rep();
        for mu in 0..4 {
            for nu in mu + 1..4 {
                let pair = rep.gamma[mu] * rep.gamma[nu];
                assert!(rep.gamma5.commutator(&pair).max_abs() <= 1e-14);
            }
        }
    }

    #[test]
    fn unitary_conjugation_preserves_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let base = build_chiral_rep();
        for _ in 0..20 {
            let u = ComplexMatrix4::random_unitary(&mut rng);
            assert!(u.unitarity_defect() < 1e-12);
            let rep = base.conjugated(&u);
            assert!(clifford_residual(&rep) <= 1e-12);
            assert!(gamma5_residual(&rep) <= 1e-12);
            assert!(hermiticity_residual(&rep) <= 1e-12);
        }
    }

    #[test]
    fn inverse_and_determinant() {
        let rep = build_chiral_rep();
        let m = rep.gamma[0] + rep.gamma5.scale_real(0.5) + ComplexMatrix4::identity().scale_real(0.25);
        let inv = m.inverse().unwrap();
        assert!((m * inv - ComplexMatrix4::identity()).max_abs() < 1e-14);
        assert!(ComplexMatrix4::zero().inverse().is_none());
        assert!((rep.gamma5.determinant() - ONE).norm() < 1e-15);
    }

    #[test]
    fn spin_matrix_matches_block_pauli() {
        let rep = build_chiral_rep();
        let s3 = rep.spin([0.0, 0.0, 1.0]);
        assert!((s3 - ComplexMatrix4::from_real_diag([1.0, -1.0, 1.0, -1.0])).max_abs() < 1e-15);
    }
}
