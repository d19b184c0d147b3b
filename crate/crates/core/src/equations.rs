//! Momentum-space operators of the massless equations and their solution
//! subspaces.
//!
//! A plane wave `v·exp(−i(p₀t − p·x))` turns every equation into a 4×4
//! matrix acting on the amplitude `v`, so "the solutions at momentum p" are
//! a kernel.

use std::fmt;

use serde::Serialize;

use crate::clifford::{ComplexMatrix4, GammaRep, C64, METRIC};
use crate::eqdsl::{self, OperatorAst};
use crate::error::{Error, Result};
use crate::kinematics::{sample_momenta, OnShellPoint, SpatialMomentum, ZERO_MOMENTUM_EPS};
use crate::subspaces::{intersect, kernel, singular_values, subspace_distance, Subspace, DEFAULT_TOL};

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// γ·p alone.
    BareDirac,
    /// γ·p + κ(1 + γ₅).
    Chiral,
    /// γ·p + κ(1 + γ₅H/E).
    ChiralHelicity,
    /// γ·p + κ(1 + H/E).
    Helicity,
    Custom(OperatorAst),
}

impl Family {
    pub const COMBINED: [Family; 3] = [Family::Chiral, Family::ChiralHelicity, Family::Helicity];

    pub fn name(&self) -> &'static str {
        match self {
            Family::BareDirac => "BareDirac",
            Family::Chiral => "Chiral",
            Family::ChiralHelicity => "ChiralHelicity",
            Family::Helicity => "Helicity",
            Family::Custom(_) => "Custom",
        }
    }

    pub fn is_combined(&self) -> bool {
        matches!(self, Family::Chiral | Family::ChiralHelicity | Family::Helicity)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Custom(ast) => write!(f, "Custom({ast})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquationSpec {
    pub family: Family,
    pub kappa: f64,
}

impl EquationSpec {
    /// κ = 0 would collapse a combined equation onto the bare one.
    pub fn new(family: Family, kappa: f64) -> Result<Self> {
        if family.is_combined() && kappa == 0.0 {
            return Err(Error::ZeroKappa(family.name().to_string()));
        }
        if !kappa.is_finite() {
            return Err(Error::Config(format!("kappa must be finite, got {kappa}")));
        }
        Ok(EquationSpec { family, kappa })
    }

    pub fn bare() -> Self {
        EquationSpec {
            family: Family::BareDirac,
            kappa: 0.0,
        }
    }

    pub fn with_kappa(&self, kappa: f64) -> Result<Self> {
        Self::new(self.family.clone(), kappa)
    }
}

/// γ^μ p_μ = γ⁰p₀ − γ¹p₁ − γ²p₂ − γ³p₃.
pub fn slash(rep: &GammaRep, point: &OnShellPoint) -> ComplexMatrix4 {
    slash_at(rep, point.p0(), &point.spatial)
}

/// `slash` at an arbitrary, possibly off-shell, (p₀, p).
pub fn slash_at(rep: &GammaRep, p0: f64, spatial: &SpatialMomentum) -> ComplexMatrix4 {
    let p = [p0, spatial.0[0], spatial.0[1], spatial.0[2]];
    (0..4).fold(ComplexMatrix4::zero(), |acc, mu| {
        acc + rep.gamma[mu].scale_real(METRIC[mu] * p[mu])
    })
}

/// H = γ⁰(γ¹p₁ + γ²p₂ + γ³p₃); equals p₀ on solutions of γ·p v = 0.
pub fn helicity_matrix(rep: &GammaRep, spatial: &SpatialMomentum) -> ComplexMatrix4 {
    rep.alpha(spatial.0)
}

/// The involution X in the subsidiary condition (1 + X)v = 0.
pub fn condition_operator(family: &Family, rep: &GammaRep, spatial: &SpatialMomentum) -> Result<ComplexMatrix4> {
    let h_over_e = || -> Result<ComplexMatrix4> {
        let e = spatial.norm();
        if e <= ZERO_MOMENTUM_EPS {
            return Err(Error::ZeroMomentum(spatial.0));
        }
        Ok(helicity_matrix(rep, spatial).scale_real(1.0 / e))
    };
    match family {
        Family::Chiral => Ok(rep.gamma5),
        Family::ChiralHelicity => Ok(rep.gamma5 * h_over_e()?),
        Family::Helicity => h_over_e(),
        other => Err(Error::UnsupportedFamily(other.name().to_string())),
    }
}

/// I + X for the family's subsidiary condition.
pub fn subsidiary_matrix(spec: &EquationSpec, rep: &GammaRep, point: &OnShellPoint) -> Result<ComplexMatrix4> {
    Ok(ComplexMatrix4::identity() + condition_operator(&spec.family, rep, &point.spatial)?)
}

pub fn assemble(spec: &EquationSpec, rep: &GammaRep, point: &OnShellPoint) -> Result<ComplexMatrix4> {
    assemble_at(spec, rep, point.p0(), &point.spatial)
}

/// The assembled operator at an arbitrary (p₀, p).
pub fn assemble_at(spec: &EquationSpec, rep: &GammaRep, p0: f64, spatial: &SpatialMomentum) -> Result<ComplexMatrix4> {
    match &spec.family {
        Family::BareDirac => Ok(slash_at(rep, p0, spatial)),
        Family::Custom(ast) => eqdsl::evaluate_at(ast, rep, p0, spatial, spec.kappa),
        family => {
            let x = condition_operator(family, rep, spatial)?;
            Ok(slash_at(rep, p0, spatial) + (ComplexMatrix4::identity() + x).scale(C64::new(spec.kappa, 0.0)))
        }
    }
}

/// Amplitudes solving the single combined equation at `point`.
pub fn solution_space(spec: &EquationSpec, rep: &GammaRep, point: &OnShellPoint, tol: f64) -> Result<Subspace> {
    Ok(kernel(&assemble(spec, rep, point)?, tol))
}

/// Amplitudes solving γ·p v = 0 together with the family's subsidiary
/// condition; for `BareDirac` just the kernel of γ·p.
pub fn constrained_space(spec: &EquationSpec, rep: &GammaRep, point: &OnShellPoint, tol: f64) -> Result<Subspace> {
    let dirac = kernel(&slash(rep, point), tol);
    match &spec.family {
        Family::BareDirac => Ok(dirac),
        Family::Custom(_) => Err(Error::UnsupportedFamily("Custom".into())),
        _ => Ok(intersect(
            &dirac,
            &kernel(&subsidiary_matrix(spec, rep, point)?, tol),
            tol,
        )),
    }
}

/// Which reading of an equation supplies its solution set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SolutionForm {
    /// Kernel of the single combined operator.
    Combined,
    /// Kernel of γ·p intersected with the subsidiary condition.
    Constrained,
}

impl SolutionForm {
    pub fn space(self, spec: &EquationSpec, rep: &GammaRep, point: &OnShellPoint, tol: f64) -> Result<Subspace> {
        match self {
            SolutionForm::Combined => solution_space(spec, rep, point, tol),
            SolutionForm::Constrained => constrained_space(spec, rep, point, tol),
        }
    }
}

/// Distance between the combined-equation solutions and the constrained ones.
pub fn equivalence_distance(spec: &EquationSpec, rep: &GammaRep, point: &OnShellPoint) -> Result<EquivalenceSample> {
    if !spec.family.is_combined() {
        return Err(Error::UnsupportedFamily(spec.family.name().to_string()));
    }
    let combined = solution_space(spec, rep, point, DEFAULT_TOL)?;
    let constrained = constrained_space(spec, rep, point, DEFAULT_TOL)?;
    Ok(EquivalenceSample {
        combined_dim: combined.dim(),
        constrained_dim: constrained.dim(),
        distance: subspace_distance(&combined, &constrained),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EquivalenceSample {
    pub combined_dim: usize,
    pub constrained_dim: usize,
    pub distance: f64,
}

/// True iff the combined equation and (γ·p = 0 ∧ condition) have the same
/// solutions at `point`, to subspace distance `tol`.
pub fn check_equivalence(spec: &EquationSpec, rep: &GammaRep, point: &OnShellPoint, tol: f64) -> Result<bool> {
    Ok(equivalence_distance(spec, rep, point)?.distance <= tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OffshellReport {
    pub points: usize,
    /// Smallest singular value seen anywhere on the grid.
    pub min_singular: f64,
    /// min over the grid of σ_min/σ_max.
    pub min_relative: f64,
    /// Grid point realizing `min_relative`, as (p₀, p).
    pub worst_p0: f64,
    pub worst_spatial: SpatialMomentum,
}

/// Relative distance from the shell below which a grid point is rejected.
pub const SHELL_GUARD: f64 = 1e-9;

/// Smallest singular values of the assembled operator over off-shell points.
pub fn offshell_scan(spec: &EquationSpec, rep: &GammaRep, grid: &[(f64, SpatialMomentum)]) -> Result<OffshellReport> {
    let mut report = OffshellReport {
        points: grid.len(),
        min_singular: f64::INFINITY,
        min_relative: f64::INFINITY,
        worst_p0: f64::NAN,
        worst_spatial: SpatialMomentum::new(f64::NAN, f64::NAN, f64::NAN),
    };
    for &(p0, spatial) in grid {
        let e = spatial.norm();
        if e <= ZERO_MOMENTUM_EPS {
            return Err(Error::ZeroMomentum(spatial.0));
        }
        if (p0.abs() - e).abs() <= SHELL_GUARD * e {
            return Err(Error::OnShellPointInGrid { p0, spatial: spatial.0 });
        }
        let s = singular_values(&assemble_at(spec, rep, p0, &spatial)?);
        let (smax, smin) = (s[0], s[3]);
        report.min_singular = report.min_singular.min(smin);
        let rel = if smax > 0.0 { smin / smax } else { 0.0 };
        if rel < report.min_relative {
            report.min_relative = rel;
            report.worst_p0 = p0;
            report.worst_spatial = spatial;
        }
    }
    Ok(report)
}

/// Ratios p₀/|p| used by [`default_offshell_grid`].
pub const OFFSHELL_RATIOS: [f64; 4] = [-2.0, -0.5, 0.5, 2.0];

/// 100 off-shell points: 25 sampled momenta, each at p₀/|p| ∈ {−2, −½, ½, 2}.
pub fn default_offshell_grid(seed: u64) -> Vec<(f64, SpatialMomentum)> {
    sample_momenta(25, seed)
        .into_iter()
        .flat_map(|p| OFFSHELL_RATIOS.map(|r| (r * p.norm(), p)))
        .collect()
}
