//! Massless four-momenta and proper orthochronous Lorentz transforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clifford::METRIC;
use crate::error::{Error, Result};

/// Below this norm a spatial momentum counts as zero.
pub const ZERO_MOMENTUM_EPS: f64 = 1e-12;

/// Largest rapidity used for sampled boosts.
pub const MAX_RAPIDITY: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpatialMomentum(pub [f64; 3]);

impl SpatialMomentum {
    pub fn new(p1: f64, p2: f64, p3: f64) -> Self {
        SpatialMomentum([p1, p2, p3])
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        SpatialMomentum(self.0.map(|x| x * s))
    }

    pub fn reversed(&self) -> Self {
        self.scaled(-1.0)
    }
}

/// Sign of p₀ on the light cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EnergySign {
    Positive,
    Negative,
}

impl EnergySign {
    pub const BOTH: [EnergySign; 2] = [EnergySign::Positive, EnergySign::Negative];

    pub fn value(self) -> f64 {
        match self {
            EnergySign::Positive => 1.0,
            EnergySign::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            EnergySign::Positive => EnergySign::Negative,
            EnergySign::Negative => EnergySign::Positive,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            EnergySign::Positive => '+',
            EnergySign::Negative => '-',
        }
    }
}

impl Serialize for EnergySign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.value() as i8)
    }
}

/// A point on the zero-mass shell: p₀ = sign·E, E = |p| > 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OnShellPoint {
    pub sign: EnergySign,
    pub spatial: SpatialMomentum,
    pub energy_abs: f64,
}

impl OnShellPoint {
    pub fn p0(&self) -> f64 {
        self.sign.value() * self.energy_abs
    }

    pub fn four_vector(&self) -> [f64; 4] {
        let [p1, p2, p3] = self.spatial.0;
        [self.p0(), p1, p2, p3]
    }
}

pub fn on_shell(spatial: SpatialMomentum, sign: EnergySign) -> Result<OnShellPoint> {
    let e = spatial.norm();
    if !e.is_finite() || e <= ZERO_MOMENTUM_EPS {
        return Err(Error::ZeroMomentum(spatial.0));
    }
    Ok(OnShellPoint {
        sign,
        spatial,
        energy_abs: e,
    })
}

/// The fixed probes that lead every sample set.
pub fn axis_probes() -> [SpatialMomentum; 4] {
    let d = 1.0 / 3f64.sqrt();
    [
        SpatialMomentum::new(0.0, 0.0, 1.0),
        SpatialMomentum::new(0.0, 1.0, 0.0),
        SpatialMomentum::new(1.0, 0.0, 0.0),
        SpatialMomentum::new(d, d, d),
    ]
}

/// Axis probes followed by seeded random directions with magnitudes
/// log-uniform in [1e-2, 1e2].
pub fn sample_momenta(count: usize, seed: u64) -> Vec<SpatialMomentum> {
    let mut out: Vec<SpatialMomentum> = axis_probes().into_iter().take(count).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count {
        let dir = random_unit_vector(&mut rng);
        let magnitude = 10f64.powf(rng.gen_range(-2.0..=2.0));
        out.push(SpatialMomentum(dir.map(|x| x * magnitude)));
    }
    out
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            return v.map(|x| x / n);
        }
    }
}

/// Vector representation Λ^μ_ν of a proper orthochronous Lorentz transform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LorentzTransform {
    pub lambda: [[f64; 4]; 4],
}

impl LorentzTransform {
    pub fn identity() -> Self {
        let mut lambda = [[0.0; 4]; 4];
        for (i, row) in lambda.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        LorentzTransform { lambda }
    }

    /// Active rotation by `angle` about the unit `axis` (right-hand rule).
    pub fn rotation(axis: [f64; 3], angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let [x, y, z] = axis;
        let t = 1.0 - c;
        let r = [
            [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
            [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
            [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
        ];
        let mut m = Self::identity();
        for i in 0..3 {
            for j in 0..3 {
                m.lambda[i + 1][j + 1] = r[i][j];
            }
        }
        m
    }

    /// Boost with rapidity `eta` along the unit `axis`, in the convention
    /// p₀′ = cosh η·p₀ − sinh η·(n·p).
    pub fn boost(axis: [f64; 3], eta: f64) -> Self {
        let (ch, sh) = (eta.cosh(), eta.sinh());
        let mut m = Self::identity();
        m.lambda[0][0] = ch;
        for i in 0..3 {
            m.lambda[0][i + 1] = -sh * axis[i];
            m.lambda[i + 1][0] = -sh * axis[i];
            for j in 0..3 {
                m.lambda[i + 1][j + 1] += (ch - 1.0) * axis[i] * axis[j];
            }
        }
        m
    }

    pub fn compose(&self, rhs: &LorentzTransform) -> LorentzTransform {
        let mut lambda = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                lambda[i][j] = (0..4).map(|k| self.lambda[i][k] * rhs.lambda[k][j]).sum();
            }
        }
        LorentzTransform { lambda }
    }

    pub fn apply(&self, x: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (i, row) in self.lambda.iter().enumerate() {
            out[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// max entry of |ΛᵀgΛ − g|.
    pub fn metric_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let v: f64 = (0..4).map(|k| self.lambda[k][i] * METRIC[k] * self.lambda[k][j]).sum();
                let target = if i == j { METRIC[i] } else { 0.0 };
                worst = worst.max((v - target).abs());
            }
        }
        worst
    }

    pub fn determinant(&self) -> f64 {
        let mut a = self.lambda;
        let mut det = 1.0;
        for col in 0..4 {
            let pivot = (col..4)
                .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
                .unwrap();
            if a[pivot][col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                a.swap(pivot, col);
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

    pub fn is_proper_orthochronous(&self, tol: f64) -> bool {
        self.metric_defect() <= tol
            && (self.determinant() - 1.0).abs() <= tol.max(1e-9)
            && self.lambda[0][0] >= 1.0 - tol
    }
}

/// (p₀′, p′) = Λ(p₀, p), re-expressed as an on-shell point.
pub fn apply_vector(lambda: &LorentzTransform, point: &OnShellPoint) -> Result<OnShellPoint> {
    let [p0, p1, p2, p3] = lambda.apply(point.four_vector());
    let spatial = SpatialMomentum::new(p1, p2, p3);
    let e = spatial.norm();
    if (e - p0.abs()).abs() > 1e-9 * p0.abs() {
        return Err(Error::OffShellDrift { spatial: e, energy: p0 });
    }
    let sign = if p0 >= 0.0 {
        EnergySign::Positive
    } else {
        EnergySign::Negative
    };
    on_shell(spatial, sign)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn unit_vector_on_shell() {
        let p = on_shell(SpatialMomentum::new(0.0, 0.0, 1.0), EnergySign::Positive).unwrap();
        assert_eq!(p.p0(), 1.0);
        assert_eq!(p.energy_abs, 1.0);
    }

    #[test]
    fn pythagorean_triple_negative_energy() {
        let p = on_shell(SpatialMomentum::new(3.0, 4.0, 0.0), EnergySign::Negative).unwrap();
        assert_eq!(p.p0(), -5.0);
        assert_eq!(p.energy_abs, 5.0);
    }

    #[test]
    fn zero_momentum_rejected() {
        let err = on_shell(SpatialMomentum::new(0.0, 0.0, 0.0), EnergySign::Positive).unwrap_err();
        assert!(matches!(err, Error::ZeroMomentum(_)));
    }

    #[test]
    fn sample_prefix_is_axis_probes() {
        let s = sample_momenta(4, 1234);
        assert_eq!(s, axis_probes().to_vec());
        let longer = sample_momenta(10, 99);
        assert_eq!(&longer[..4], &axis_probes()[..]);
    }

    #[test]
    fn samples_are_deterministic_and_nonzero() {
        let a = sample_momenta(100, 7);
        let b = sample_momenta(100, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
        for p in &a[4..] {
            let n = p.norm();
            assert!((1e-2 * (1.0 - 1e-12)..=1e2 * (1.0 + 1e-12)).contains(&n));
        }
        assert!(a.iter().all(|p| p.norm() > 0.0));
        assert_ne!(sample_momenta(100, 8), a);
    }

    #[test]
    fn identity_fixes_point() {
        let p = on_shell(SpatialMomentum::new(0.3, -1.2, 2.0), EnergySign::Negative).unwrap();
        assert_eq!(apply_vector(&LorentzTransform::identity(), &p).unwrap(), p);
    }

    #[test]
    fn quarter_turn_about_z() {
        let p = on_shell(SpatialMomentum::new(1.0, 0.0, 0.0), EnergySign::Positive).unwrap();
        let r = LorentzTransform::rotation([0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_2);
        let q = apply_vector(&r, &p).unwrap();
        assert!(close(q.spatial.0[0], 0.0, 1e-15));
        assert!(close(q.spatial.0[1], 1.0, 1e-15));
        assert!(close(q.p0(), 1.0, 1e-15));
    }

    #[test]
    fn boost_along_momentum_redshifts() {
        // Direct 4×4 application: p₀′ = cosh η − sinh η = e^{−η}.
        for eta in [0.3, 1.0, 2.0] {
            let p = on_shell(SpatialMomentum::new(0.0, 0.0, 1.0), EnergySign::Positive).unwrap();
            let b = LorentzTransform::boost([0.0, 0.0, 1.0], eta);
            let q = apply_vector(&b, &p).unwrap();
            let expected = eta.cosh() - eta.sinh();
            assert!(close(q.p0(), expected, 1e-14));
            assert!(close(q.p0(), (-eta).exp(), 1e-14));
            assert!(close(q.p0(), q.spatial.norm(), 1e-14));
        }
    }

    #[test]
    fn generators_are_proper_orthochronous() {
        let b = LorentzTransform::boost(random_unit_vector(&mut ChaCha8Rng::seed_from_u64(1)), 1.7);
        let r = LorentzTransform::rotation([0.0, 0.6, 0.8], 2.1);
        for l in [b, r, b.compose(&r)] {
            assert!(l.is_proper_orthochronous(1e-12));
        }
    }

    #[test]
    fn null_condition_and_composition_hold_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l1 = LorentzTransform::boost(random_unit_vector(&mut rng), 1.5)
            .compose(&LorentzTransform::rotation(random_unit_vector(&mut rng), 0.7));
        let l2 = LorentzTransform::boost(random_unit_vector(&mut rng), -0.8);
        for p in sample_momenta(64, 42) {
            for sign in EnergySign::BOTH {
                let x = on_shell(p, sign).unwrap();
                let y = apply_vector(&l1, &x).unwrap();
                assert_eq!(y.sign, sign);
                let [q0, ..] = y.four_vector();
                assert!(((q0 * q0 - y.spatial.norm().powi(2)) / (q0 * q0)).abs() <= 1e-12);

                let direct = apply_vector(&l1.compose(&l2), &x).unwrap().four_vector();
                let stepwise = apply_vector(&l1, &apply_vector(&l2, &x).unwrap())
                    .unwrap()
                    .four_vector();
                for (a, b) in direct.iter().zip(stepwise) {
                    assert!((a - b).abs() <= 1e-12 * x.energy_abs.max(1.0) * 10.0);
                }
            }
        }
    }
}
