//! One-sided (Hestenes) Jacobi SVD for tall complex matrices with at most
//! four columns.
//!
//! Columns are rotated pairwise until mutually orthogonal; the column norms
//! are then the singular values and the accumulated rotations form V.

use crate::clifford::C64;

const MAX_SWEEPS: usize = 80;

#[derive(Clone, Debug)]
pub struct Svd {
    /// Singular values, descending.
    pub singular: Vec<f64>,
    /// Right singular vectors as columns, ordered like `singular`.
    pub right: Vec<Vec<C64>>,
    /// Left singular vectors (unit columns); zero where the singular value is zero.
    pub left: Vec<Vec<C64>>,
}

impl Svd {
    pub fn max(&self) -> f64 {
        self.singular.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.singular.last().copied().unwrap_or(0.0)
    }
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// SVD of the m×n matrix given by its `columns` (each of length m).
pub fn svd_columns(columns: &[Vec<C64>]) -> Svd {
    let n = columns.len();
    let mut a: Vec<Vec<C64>> = columns.to_vec();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
                .collect()
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = norm_sqr(&a[i]);
                let beta = norm_sqr(&a[j]);
                let gamma = dot(&a[i], &a[j]);
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Align phases so the pair overlap is real, then do a real rotation.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut a, i, j, phase, c, s);
                rotate(&mut v, i, j, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = a.iter().enumerate().map(|(j, col)| (norm_sqr(col).sqrt(), j)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));

    let mut singular = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    let mut left = Vec::with_capacity(n);
    for (sigma, j) in order {
        singular.push(sigma);
        right.push(v[j].clone());
        left.push(if sigma > 0.0 {
            a[j].iter().map(|z| z / sigma).collect()
        } else {
            vec![C64::new(0.0, 0.0); a[j].len()]
        });
    }
    Svd { singular, right, left }
}

/// a_i ← c·a_i − s·ē·a_j,  a_j ← s·a_i + c·ē·a_j  with ē = conj(phase).
fn rotate(cols: &mut [Vec<C64>], i: usize, j: usize, phase: C64, c: f64, s: f64) {
    let e = phase.conj();
    for k in 0..cols[i].len() {
        let x = cols[i][k];
        let y = e * cols[j][k];
        cols[i][k] = x * c - y * s;
        cols[j][k] = x * s + y * c;
    }
}
