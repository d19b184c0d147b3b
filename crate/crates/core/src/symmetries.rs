//! Discrete transforms (P, C, Wigner T and their products) and spin-½
//! Lorentz transforms acting on plane-wave solution data.

use std::f64::consts::TAU;

use rand::Rng;
use serde::Serialize;

use crate::clifford::{ComplexMatrix4, GammaRep, C64};
use crate::error::{Error, Result};
use crate::kinematics::{random_unit_vector, LorentzTransform, OnShellPoint, MAX_RAPIDITY};
use crate::subspaces::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DiscreteKind {
    P,
    C,
    T,
}

/// A (possibly antilinear) spinor map together with its action on momenta.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryTransform {
    pub name: String,
    pub matrix: ComplexMatrix4,
    pub antilinear: bool,
    /// p₀ ↦ −p₀
    pub sign_flip: bool,
    /// p ↦ −p
    pub spatial_flip: bool,
}

impl SymmetryTransform {
    pub fn identity() -> Self {
        SymmetryTransform {
            name: String::new(),
            matrix: ComplexMatrix4::identity(),
            antilinear: false,
            sign_flip: false,
            spatial_flip: false,
        }
    }

    /// Same transform with its matrix multiplied by a unit phase.
    pub fn with_phase(&self, phase: C64) -> Self {
        SymmetryTransform {
            matrix: self.matrix.scale(phase),
            ..self.clone()
        }
    }

    pub fn map_point(&self, point: &OnShellPoint) -> OnShellPoint {
        OnShellPoint {
            sign: if self.sign_flip {
                point.sign.flipped()
            } else {
                point.sign
            },
            spatial: if self.spatial_flip {
                point.spatial.reversed()
            } else {
                point.spatial
            },
            energy_abs: point.energy_abs,
        }
    }
}

/// Standard phase conventions: P = γ⁰; C: v ↦ iγ²·conj(v); T: v ↦ γ¹γ³·conj(v).
/// Antilinear matrices carry the representation's antilinear frame.
pub fn discrete(kind: DiscreteKind, rep: &GammaRep) -> SymmetryTransform {
    let g = &rep.gamma;
    match kind {
        DiscreteKind::P => SymmetryTransform {
            name: "P".into(),
            matrix: g[0],
            antilinear: false,
            sign_flip: false,
            spatial_flip: true,
        },
        DiscreteKind::C => SymmetryTransform {
            name: "C".into(),
            matrix: g[2].scale(C64::new(0.0, 1.0)) * rep.antilinear_frame,
            antilinear: true,
            sign_flip: true,
            spatial_flip: true,
        },
        DiscreteKind::T => SymmetryTransform {
            name: "T".into(),
            matrix: g[1] * g[3] * rep.antilinear_frame,
            antilinear: true,
            sign_flip: false,
            spatial_flip: true,
        },
    }
}

/// `a` after `b`.
pub fn compose(a: &SymmetryTransform, b: &SymmetryTransform) -> SymmetryTransform {
    let right = if a.antilinear { b.matrix.conj() } else { b.matrix };
    SymmetryTransform {
        name: format!("{}{}", a.name, b.name),
        matrix: a.matrix * right,
        antilinear: a.antilinear ^ b.antilinear,
        sign_flip: a.sign_flip ^ b.sign_flip,
        spatial_flip: a.spatial_flip ^ b.spatial_flip,
    }
}

/// The seven nontrivial products of P, C and T, in report order.
pub fn transform_grid(rep: &GammaRep) -> Vec<SymmetryTransform> {
    transform_grid_with_phases(rep, [C64::new(1.0, 0.0); 3])
}

/// As [`transform_grid`], with the P, C, T matrices multiplied by `phases`.
pub fn transform_grid_with_phases(rep: &GammaRep, phases: [C64; 3]) -> Vec<SymmetryTransform> {
    let p = discrete(DiscreteKind::P, rep).with_phase(phases[0]);
    let c = discrete(DiscreteKind::C, rep).with_phase(phases[1]);
    let t = discrete(DiscreteKind::T, rep).with_phase(phases[2]);
    let cp = compose(&c, &p);
    vec![
        p.clone(),
        c.clone(),
        t.clone(),
        cp.clone(),
        compose(&c, &t),
        compose(&p, &t),
        compose(&cp, &t),
    ]
}

pub const GRID_NAMES: [&str; 7] = ["P", "C", "T", "CP", "CT", "PT", "CPT"];

pub fn transform_solution(sigma: &SymmetryTransform, point: &OnShellPoint, s: &Subspace) -> (OnShellPoint, Subspace) {
    (sigma.map_point(point), s.mapped(&sigma.matrix, sigma.antilinear))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LorentzKind {
    Rotation,
    Boost,
}

/// Spin-½ image S(Λ) paired with the vector transform Λ.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorLorentz {
    pub s_matrix: ComplexMatrix4,
    pub vector: LorentzTransform,
}

impl SpinorLorentz {
    pub fn identity() -> Self {
        SpinorLorentz {
            s_matrix: ComplexMatrix4::identity(),
            vector: LorentzTransform::identity(),
        }
    }

    pub fn compose(&self, rhs: &SpinorLorentz) -> SpinorLorentz {
        SpinorLorentz {
            s_matrix: self.s_matrix * rhs.s_matrix,
            vector: self.vector.compose(&rhs.vector),
        }
    }

    pub fn s_inverse(&self) -> ComplexMatrix4 {
        // det S = 1 for every element of the group, so this never fails.
        self.s_matrix.inverse().unwrap_or_else(ComplexMatrix4::zero)
    }

    /// max_μ ‖S⁻¹γ^μS − Λ^μ_ν γ^ν‖_max.
    pub fn intertwining_residual(&self, rep: &GammaRep) -> f64 {
        let s_inv = self.s_inverse();
        (0..4)
            .map(|mu| {
                let lhs = s_inv * rep.gamma[mu] * self.s_matrix;
                let rhs = (0..4).fold(ComplexMatrix4::zero(), |acc, nu| {
                    acc + rep.gamma[nu].scale_real(self.vector.lambda[mu][nu])
                });
                (lhs - rhs).max_abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Rotation: S = exp(−(i/2)θ Σ·n). Boost: S = exp(−(η/2) α·n).
/// Both generators square to the identity, so the exponentials are closed-form.
pub fn spinor_lorentz(kind: LorentzKind, axis: [f64; 3], param: f64, rep: &GammaRep) -> Result<SpinorLorentz> {
    let n = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::Config(format!(
            "Lorentz axis must be a unit vector, |axis| = {n}"
        )));
    }
    if !param.is_finite() {
        return Err(Error::Config("Lorentz parameter must be finite".into()));
    }
    let half = 0.5 * param;
    Ok(match kind {
        LorentzKind::Rotation => SpinorLorentz {
            s_matrix: ComplexMatrix4::identity().scale_real(half.cos())
                - rep.spin(axis).scale(C64::new(0.0, half.sin())),
            vector: LorentzTransform::rotation(axis, param),
        },
        LorentzKind::Boost => {
            if param.abs() > MAX_RAPIDITY {
                return Err(Error::Config(format!("rapidity {param} exceeds {MAX_RAPIDITY}")));
            }
            SpinorLorentz {
                s_matrix: ComplexMatrix4::identity().scale_real(half.cosh()) - rep.alpha(axis).scale_real(half.sinh()),
                vector: LorentzTransform::boost(axis, param),
            }
        }
    })
}

/// A random rotation composed with a random boost of rapidity ≤ 2.
pub fn random_spinor_lorentz<R: Rng + ?Sized>(rng: &mut R, rep: &GammaRep) -> SpinorLorentz {
    let rot_axis = random_unit_vector(rng);
    let angle = rng.gen_range(0.0..TAU);
    let boost_axis = random_unit_vector(rng);
    let eta = rng.gen_range(-MAX_RAPIDITY..=MAX_RAPIDITY);
    let r = spinor_lorentz(LorentzKind::Rotation, rot_axis, angle, rep).unwrap_or_else(|_| SpinorLorentz::identity());
    let b = spinor_lorentz(LorentzKind::Boost, boost_axis, eta, rep).unwrap_or_else(|_| SpinorLorentz::identity());
    r.compose(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{build_chiral_rep, METRIC};
    use crate::equations::{slash, solution_space, EquationSpec};
    use crate::kinematics::{apply_vector, on_shell, sample_momenta, EnergySign, SpatialMomentum};
    use crate::subspaces::{spinor_norm, subspace_distance, DEFAULT_TOL};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// exp(A) by scaling and squaring with a truncated Taylor series.
    fn expm_oracle(a: &ComplexMatrix4) -> ComplexMatrix4 {
        let norm = a.max_abs() * 4.0;
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as i32
        } else {
            0
        };
        let scaled = a.scale_real(0.5f64.powi(squarings));
        let mut term = ComplexMatrix4::identity();
        let mut sum = ComplexMatrix4::identity();
        for k in 1..30 {
            term = (term * scaled).scale_real(1.0 / k as f64);
            sum = sum + term;
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }

    /// Λ^μ_ν = ¼ tr(S⁻¹γ^μ S γ_ν), read off the spinor matrix alone.
    fn lambda_from_trace(s: &SpinorLorentz, rep: &GammaRep) -> [[f64; 4]; 4] {
        let s_inv = s.s_inverse();
        let mut out = [[0.0; 4]; 4];
        for mu in 0..4 {
            let conj = s_inv * rep.gamma[mu] * s.s_matrix;
            for nu in 0..4 {
                out[mu][nu] = 0.25 * METRIC[nu] * (conj * rep.gamma[nu]).trace().re;
            }
        }
        out
    }

    fn dirac_points(count: usize, seed: u64) -> Vec<OnShellPoint> {
        sample_momenta(count, seed)
            .into_iter()
            .flat_map(|p| EnergySign::BOTH.map(|s| on_shell(p, s).unwrap()))
            .collect()
    }

    #[test]
    fn parity_squares_to_identity() {
        let rep = build_chiral_rep();
        let p = discrete(DiscreteKind::P, &rep);
        let pp = compose(&p, &p);
        assert_eq!(pp.matrix, ComplexMatrix4::identity());
        assert!(!pp.sign_flip && !pp.spatial_flip && !pp.antilinear);
    }

    #[test]
    fn flag_algebra() {
        let rep = build_chiral_rep();
        let [p, c, t] = [DiscreteKind::P, DiscreteKind::C, DiscreteKind::T].map(|k| discrete(k, &rep));
        let cp = compose(&c, &p);
        assert_eq!(cp.name, "CP");
        assert!(cp.sign_flip && !cp.spatial_flip && cp.antilinear);
        let cpt = compose(&cp, &t);
        assert_eq!(cpt.name, "CPT");
        assert!(cpt.sign_flip && cpt.spatial_flip && !cpt.antilinear);
        let names: Vec<String> = transform_grid(&rep).into_iter().map(|t| t.name).collect();
        assert_eq!(names, GRID_NAMES);
    }

    #[test]
    fn cpt_is_linear_since_two_antilinear_factors_cancel() {
        let rep = build_chiral_rep();
        let grid = transform_grid(&rep);
        let antilinear: Vec<bool> = grid.iter().map(|t| t.antilinear).collect();
        assert_eq!(antilinear, [false, true, true, true, false, true, false]);
    }

    #[test]
    fn discrete_matrices_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let base = build_chiral_rep();
        for rep in [base.clone(), base.conjugated(&ComplexMatrix4::random_unitary(&mut rng))] {
            for t in transform_grid(&rep) {
                assert!(t.matrix.unitarity_defect() < 1e-12, "{}", t.name);
            }
        }
    }

    #[test]
    fn momentum_maps() {
        let rep = build_chiral_rep();
        let pt = on_shell(SpatialMomentum::new(0.0, 0.0, 1.0), EnergySign::Positive).unwrap();
        let s = Subspace::full();
        let (q, _) = transform_solution(&SymmetryTransform::identity(), &pt, &s);
        assert_eq!(q, pt);
        let (q, _) = transform_solution(&discrete(DiscreteKind::P, &rep), &pt, &s);
        assert_eq!((q.sign, q.spatial.0), (EnergySign::Positive, [0.0, 0.0, -1.0]));
        let (q, _) = transform_solution(&discrete(DiscreteKind::C, &rep), &pt, &s);
        assert_eq!((q.sign, q.spatial.0), (EnergySign::Negative, [-0.0, -0.0, -1.0]));
    }

    #[test]
    fn identity_transform_leaves_subspace() {
        let rep = build_chiral_rep();
        let pt = on_shell(SpatialMomentum::new(0.2, 0.1, -0.3), EnergySign::Negative).unwrap();
        let sol = solution_space(&EquationSpec::bare(), &rep, &pt, DEFAULT_TOL).unwrap();
        let (_, image) = transform_solution(&SymmetryTransform::identity(), &pt, &sol);
        assert!(subspace_distance(&image, &sol) < 1e-15);
    }

    /// Residual oracle: the image of every Dirac solution must solve the
    /// Dirac equation at the mapped momentum. Checked in the chiral build and
    /// in randomly conjugated representations.
    #[test]
    fn c_and_t_map_dirac_solutions_to_dirac_solutions() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let base = build_chiral_rep();
        let reps = [base.clone(), base.conjugated(&ComplexMatrix4::random_unitary(&mut rng))];
        for rep in &reps {
            for t in transform_grid(rep) {
                for pt in dirac_points(16, 3) {
                    let sol = solution_space(&EquationSpec::bare(), rep, &pt, DEFAULT_TOL).unwrap();
                    let (q, _) = transform_solution(&t, &pt, &sol);
                    let m = slash(rep, &q);
                    for v in sol.basis() {
                        let w = if t.antilinear {
                            t.matrix.apply(&v.map(|z| z.conj()))
                        } else {
                            t.matrix.apply(v)
                        };
                        assert!(
                            spinor_norm(&m.apply(&w)) <= 1e-12 * pt.energy_abs.max(1.0),
                            "{}",
                            t.name
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn phase_does_not_change_image_subspace() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rep = build_chiral_rep();
        for t in transform_grid(&rep) {
            let phase = C64::from_polar(1.0, rng.gen_range(0.0..TAU));
            for pt in dirac_points(8, 5) {
                let sol = solution_space(&EquationSpec::bare(), &rep, &pt, DEFAULT_TOL).unwrap();
                let (_, a) = transform_solution(&t, &pt, &sol);
                let (_, b) = transform_solution(&t.with_phase(phase), &pt, &sol);
                assert!(subspace_distance(&a, &b) <= 1e-12);
            }
        }
    }

    #[test]
    fn wigner_t_squares_to_phase() {
        let rep = build_chiral_rep();
        let t = discrete(DiscreteKind::T, &rep);
        assert!(t.antilinear);
        let tt = compose(&t, &t);
        assert!(!tt.spatial_flip && !tt.sign_flip && !tt.antilinear);
        // T² = ±I for spin ½.
        assert!((tt.matrix + ComplexMatrix4::identity()).max_abs() < 1e-15);
        for pt in dirac_points(8, 6) {
            let sol = solution_space(&EquationSpec::bare(), &rep, &pt, DEFAULT_TOL).unwrap();
            let (q1, s1) = transform_solution(&t, &pt, &sol);
            let (q2, s2) = transform_solution(&t, &q1, &s1);
            assert_eq!(q2, pt);
            assert!(subspace_distance(&s2, &sol) <= 1e-12);
        }
    }

    #[test]
    fn closed_form_matches_matrix_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rep = build_chiral_rep();
        for _ in 0..20 {
            let axis = random_unit_vector(&mut rng);
            let angle = rng.gen_range(-7.0..7.0);
            let rot = spinor_lorentz(LorentzKind::Rotation, axis, angle, &rep).unwrap();
            let gen = rep.spin(axis).scale(C64::new(0.0, -0.5 * angle));
            assert!((rot.s_matrix - expm_oracle(&gen)).max_abs() < 1e-12);

            let eta = rng.gen_range(-2.0..2.0);
            let boost = spinor_lorentz(LorentzKind::Boost, axis, eta, &rep).unwrap();
            let gen = rep.alpha(axis).scale_real(-0.5 * eta);
            assert!((boost.s_matrix - expm_oracle(&gen)).max_abs() < 1e-12);
        }
    }

    #[test]
    fn full_turn_is_minus_identity() {
        let rep = build_chiral_rep();
        for axis in [[0.0, 0.0, 1.0], [0.6, 0.0, 0.8]] {
            let s = spinor_lorentz(LorentzKind::Rotation, axis, TAU, &rep).unwrap();
            assert!((s.s_matrix + ComplexMatrix4::identity()).max_abs() < 1e-14);
            let gen = rep.spin(axis).scale(C64::new(0.0, -0.5 * TAU));
            assert!((expm_oracle(&gen) + ComplexMatrix4::identity()).max_abs() < 1e-12);
            let id = LorentzTransform::identity();
            for i in 0..4 {
                for j in 0..4 {
                    assert!((s.vector.lambda[i][j] - id.lambda[i][j]).abs() < 1e-14);
                }
            }
        }
        let zero = spinor_lorentz(LorentzKind::Rotation, [1.0, 0.0, 0.0], 0.0, &rep).unwrap();
        assert_eq!(zero, SpinorLorentz::identity());
    }

    #[test]
    fn boost_along_z_mixes_gamma0_and_gamma3() {
        let rep = build_chiral_rep();
        let eta = 0.9;
        let s = spinor_lorentz(LorentzKind::Boost, [0.0, 0.0, 1.0], eta, &rep).unwrap();
        let lhs = s.s_inverse() * rep.gamma[0] * s.s_matrix;
        let rhs = rep.gamma[0].scale_real(eta.cosh()) - rep.gamma[3].scale_real(eta.sinh());
        assert!((lhs - rhs).max_abs() < 1e-14);
    }

    #[test]
    fn vector_part_agrees_with_trace_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rep = build_chiral_rep();
        for _ in 0..20 {
            let s = random_spinor_lorentz(&mut rng, &rep);
            let oracle = lambda_from_trace(&s, &rep);
            for i in 0..4 {
                for j in 0..4 {
                    assert!((oracle[i][j] - s.vector.lambda[i][j]).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn intertwining_and_gamma5_invariance_on_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let base = build_chiral_rep();
        let rotated = base.conjugated(&ComplexMatrix4::random_unitary(&mut rng));
        for rep in [&base, &rotated] {
            for _ in 0..50 {
                let s = random_spinor_lorentz(&mut rng, rep);
                assert!(s.vector.is_proper_orthochronous(1e-10));
                assert!(s.intertwining_residual(rep) <= 1e-9);
                assert!(rep.gamma5.commutator(&s.s_matrix).max_abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn lorentz_maps_dirac_solutions_covariantly() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let rep = build_chiral_rep();
        let bare = EquationSpec::bare();
        for _ in 0..10 {
            let s = random_spinor_lorentz(&mut rng, &rep);
            for pt in dirac_points(8, 11) {
                let q = apply_vector(&s.vector, &pt).unwrap();
                let image = solution_space(&bare, &rep, &pt, DEFAULT_TOL)
                    .unwrap()
                    .mapped(&s.s_matrix, false);
                let direct = solution_space(&bare, &rep, &q, DEFAULT_TOL).unwrap();
                assert!(subspace_distance(&image, &direct) <= 1e-9);
            }
        }
    }

    #[test]
    fn invalid_lorentz_parameters() {
        let rep = build_chiral_rep();
        assert!(spinor_lorentz(LorentzKind::Boost, [0.0, 0.0, 1.0], 2.5, &rep).is_err());
        assert!(spinor_lorentz(LorentzKind::Rotation, [0.0, 0.0, 2.0], 1.0, &rep).is_err());
    }
}
