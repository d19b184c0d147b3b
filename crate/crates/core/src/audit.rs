//! The audit: invariance verdicts with witnesses for every (equation,
//! transform) pair, equivalence and off-shell checks, Lorentz covariance,
//! and the claim table.
//!
//! Invariance of an equation under a transform means the transform maps the
//! full on-shell solution set onto itself: for every sampled momentum and
//! both energy signs, the image of the solution subspace equals the solution
//! subspace computed directly at the mapped momentum.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::clifford::{build_chiral_rep, ComplexMatrix4, GammaRep, C64};
use crate::equations::{
    default_offshell_grid, equivalence_distance, helicity_matrix, offshell_scan, EquationSpec, Family, OffshellReport,
    SolutionForm,
};
use crate::error::{Error, Result};
use crate::kinematics::{apply_vector, on_shell, sample_momenta, EnergySign, OnShellPoint, SpatialMomentum};
use crate::subspaces::{
    compressed_norm, kernel, subspace_distance, Subspace, DEFAULT_TOL, DISTINCT_DISTANCE, EQUAL_DISTANCE,
};
use crate::symmetries::{
    random_spinor_lorentz, transform_grid_with_phases, SpinorLorentz, SymmetryTransform, GRID_NAMES,
};

/// Threshold for the Poincaré-invariant operator residuals.
pub const OPERATOR_TOL: f64 = 1e-9;

/// Off-shell operators must keep σ_min/σ_max above this.
pub const OFFSHELL_MIN_RELATIVE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Invariant,
    NonInvariant,
    Indeterminate,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Invariant => "invariant",
            Status::NonInvariant => "noninvariant",
            Status::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub invariant: f64,
    pub violation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            invariant: EQUAL_DISTANCE,
            violation: DISTINCT_DISTANCE,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if !(self.invariant > 0.0 && self.invariant < self.violation) {
            return Err(Error::Config(format!(
                "need 0 < tol_inv < tol_viol, got {} and {}",
                self.invariant, self.violation
            )));
        }
        Ok(())
    }

    fn status(&self, worst: f64) -> Status {
        if worst <= self.invariant {
            Status::Invariant
        } else if worst >= self.violation {
            Status::NonInvariant
        } else {
            Status::Indeterminate
        }
    }
}

/// The sample that best documents a verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub transform: String,
    pub kappa: f64,
    pub sign: EnergySign,
    pub momentum: SpatialMomentum,
    pub distance: f64,
    /// Solution dimensions (image, direct) when they differ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension_mismatch: Option<(usize, usize)>,
    /// Whether `momentum` is one of the fixed axis probes.
    pub probe: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub max_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Momenta to sample; the first `probes` entries are the axis probes.
#[derive(Clone, Debug)]
pub struct SampleSet {
    pub momenta: Vec<SpatialMomentum>,
    pub probes: usize,
}

impl SampleSet {
    pub fn new(count: usize, seed: u64, scale: f64) -> Self {
        let momenta = sample_momenta(count, seed)
            .into_iter()
            .map(|p| p.scaled(scale))
            .collect();
        SampleSet {
            momenta,
            probes: count.min(4),
        }
    }

    pub fn points(&self) -> Vec<(usize, OnShellPoint)> {
        self.momenta
            .iter()
            .enumerate()
            .flat_map(|(i, p)| EnergySign::BOTH.map(|s| (i, s, *p)))
            .filter_map(|(i, s, p)| on_shell(p, s).ok().map(|pt| (i, pt)))
            .collect()
    }
}

struct Observation {
    index: usize,
    point: OnShellPoint,
    distance: f64,
    dims: (usize, usize),
    label: String,
}

fn compare(image: &Subspace, direct: &Subspace) -> (f64, (usize, usize)) {
    let dims = (image.dim(), direct.dim());
    if dims.0 != dims.1 {
        (1.0, dims)
    } else {
        (subspace_distance(image, direct), dims)
    }
}

/// Distances closer than this count as tied; the earlier sample wins.
const WITNESS_TIE: f64 = 1e-12;

/// Whether a candidate witness (probe, distance) beats the incumbent.
fn outranks(candidate: (bool, f64), incumbent: (bool, f64)) -> bool {
    match (candidate.0, incumbent.0) {
        (true, false) => true,
        (false, true) => false,
        _ => candidate.1 > incumbent.1 + WITNESS_TIE,
    }
}

/// Reduce observations in sample order; prefers probe witnesses.
fn reduce(obs: Vec<Observation>, samples: &SampleSet, kappa: f64, tol: &Tolerances) -> Verdict {
    let max_residual = obs.iter().map(|o| o.distance).fold(0.0, f64::max);
    let status = tol.status(max_residual);
    let witness = match status {
        Status::Invariant => None,
        _ => {
            let best_probe = obs
                .iter()
                .filter(|o| o.index < samples.probes && o.distance >= tol.violation)
                .fold(None::<&Observation>, |best, o| match best {
                    Some(b) if b.distance + WITNESS_TIE >= o.distance => Some(b),
                    _ => Some(o),
                });
            let best_any = obs.iter().fold(None::<&Observation>, |best, o| match best {
                Some(b) if b.distance + WITNESS_TIE >= o.distance => Some(b),
                _ => Some(o),
            });
            best_probe.or(best_any).map(|o| Witness {
                transform: o.label.clone(),
                kappa,
                sign: o.point.sign,
                momentum: o.point.spatial,
                distance: o.distance,
                dimension_mismatch: (o.dims.0 != o.dims.1).then_some(o.dims),
                probe: o.index < samples.probes,
            })
        }
    };
    Verdict {
        status,
        max_residual,
        witness,
    }
}

/// Verdict for one equation under one discrete transform.
pub fn classify(
    spec: &EquationSpec,
    sigma: &SymmetryTransform,
    samples: &SampleSet,
    rep: &GammaRep,
    tol: &Tolerances,
    form: SolutionForm,
) -> Result<Verdict> {
    tol.validate()?;
    let obs = samples
        .points()
        .into_par_iter()
        .map(|(index, point)| {
            let source = form.space(spec, rep, &point, DEFAULT_TOL)?;
            let target = sigma.map_point(&point);
            let image = source.mapped(&sigma.matrix, sigma.antilinear);
            let direct = form.space(spec, rep, &target, DEFAULT_TOL)?;
            let (distance, dims) = compare(&image, &direct);
            Ok(Observation {
                index,
                point,
                distance,
                dims,
                label: sigma.name.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce(obs, samples, spec.kappa, tol))
}

/// Verdict for one equation under a set of proper orthochronous transforms:
/// S(Λ)·solutions(p) against solutions(Λp).
pub fn classify_lorentz(
    spec: &EquationSpec,
    transforms: &[SpinorLorentz],
    samples: &SampleSet,
    rep: &GammaRep,
    tol: &Tolerances,
    form: SolutionForm,
) -> Result<Verdict> {
    tol.validate()?;
    let points = samples.points();
    let sources = points
        .par_iter()
        .map(|(_, pt)| form.space(spec, rep, pt, DEFAULT_TOL))
        .collect::<Result<Vec<_>>>()?;
    let tasks: Vec<(usize, usize)> = (0..transforms.len())
        .flat_map(|t| (0..points.len()).map(move |k| (t, k)))
        .collect();
    let obs = tasks
        .into_par_iter()
        .map(|(t, k)| {
            let (index, point) = points[k];
            let lt = &transforms[t];
            let target = apply_vector(&lt.vector, &point)?;
            let image = sources[k].mapped(&lt.s_matrix, false);
            let direct = form.space(spec, rep, &target, DEFAULT_TOL)?;
            let (distance, dims) = compare(&image, &direct);
            Ok(Observation {
                index,
                point,
                distance,
                dims,
                label: format!("lorentz#{t}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(reduce(obs, samples, spec.kappa, tol))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorInvariance {
    /// max ‖[γ₅, S(Λ)]‖_max
    pub gamma5_commutator: f64,
    /// max ‖Bᴴ(S⁻¹·H(Λp)/E′·S − H(p)/E)B‖₂ over Dirac solution bases B.
    pub h_over_e_compressed: f64,
    /// The same difference without compression, over rotations only.
    pub h_over_e_rotations_full: f64,
    pub tolerance: f64,
    pub passes: bool,
}

/// γ₅ and H/E against the sampled transforms.
pub fn poincare_invariant_operators(
    rep: &GammaRep,
    transforms: &[SpinorLorentz],
    samples: &SampleSet,
    tol: f64,
) -> Result<OperatorInvariance> {
    let gamma5_commutator = transforms
        .iter()
        .map(|t| rep.gamma5.commutator(&t.s_matrix).max_abs())
        .fold(0.0, f64::max);
    let points = samples.points();
    let bare = EquationSpec::bare();
    let per_transform = transforms
        .par_iter()
        .map(|lt| {
            let s_inv = lt.s_inverse();
            let is_rotation = (lt.vector.lambda[0][0] - 1.0).abs() < 1e-12;
            let mut compressed: f64 = 0.0;
            let mut full: f64 = 0.0;
            for (_, pt) in &points {
                let q = apply_vector(&lt.vector, pt)?;
                let h_q = helicity_matrix(rep, &q.spatial).scale_real(1.0 / q.energy_abs);
                let h_p = helicity_matrix(rep, &pt.spatial).scale_real(1.0 / pt.energy_abs);
                let diff = s_inv * h_q * lt.s_matrix - h_p;
                let sol = SolutionForm::Combined.space(&bare, rep, pt, DEFAULT_TOL)?;
                compressed = compressed.max(compressed_norm(&diff, &sol));
                if is_rotation {
                    full = full.max(crate::subspaces::operator_norm(&diff));
                }
            }
            Ok((compressed, full))
        })
        .collect::<Result<Vec<_>>>()?;
    let h_over_e_compressed = per_transform.iter().map(|x| x.0).fold(0.0, f64::max);
    let h_over_e_rotations_full = per_transform.iter().map(|x| x.1).fold(0.0, f64::max);
    Ok(OperatorInvariance {
        gamma5_commutator,
        h_over_e_compressed,
        h_over_e_rotations_full,
        tolerance: tol,
        passes: gamma5_commutator <= tol && h_over_e_compressed <= tol,
    })
}

/// Which gamma-matrix basis the audit runs in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentationChoice {
    Chiral,
    /// Chiral basis conjugated by a seeded random unitary.
    RandomUnitary(u64),
}

impl RepresentationChoice {
    pub fn build(self) -> GammaRep {
        match self {
            RepresentationChoice::Chiral => build_chiral_rep(),
            RepresentationChoice::RandomUnitary(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                build_chiral_rep().conjugated(&ComplexMatrix4::random_unitary(&mut rng))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditConfig {
    pub seed: u64,
    pub samples: usize,
    pub kappas: Vec<f64>,
    pub tolerances: Tolerances,
    pub lorentz_transforms: usize,
    /// Multiplies every sampled momentum.
    pub momentum_scale: f64,
    pub representation: RepresentationChoice,
    /// When set, P, C, T matrices get seeded random unit phases.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_seed: Option<u64>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            seed: 42,
            samples: 64,
            kappas: vec![0.5, 1.0, 3.0, -1.0],
            tolerances: Tolerances::default(),
            lorentz_transforms: 50,
            momentum_scale: 1.0,
            representation: RepresentationChoice::Chiral,
            phase_seed: None,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if self.samples < 4 {
            return Err(Error::Config(format!(
                "need at least 4 samples for the axis probes, got {}",
                self.samples
            )));
        }
        if self.kappas.is_empty() || self.kappas.iter().any(|k| *k == 0.0 || !k.is_finite()) {
            return Err(Error::Config("kappa list must be nonempty, finite and nonzero".into()));
        }
        if !(self.momentum_scale > 0.0 && self.momentum_scale.is_finite()) {
            return Err(Error::Config("momentum scale must be positive".into()));
        }
        Ok(())
    }

    fn phases(&self) -> [C64; 3] {
        match self.phase_seed {
            None => [C64::new(1.0, 0.0); 3],
            Some(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                [(); 3].map(|_| C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
            }
        }
    }

    pub fn lorentz_sample(&self, rep: &GammaRep) -> Vec<SpinorLorentz> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x9e37_79b9_7f4a_7c15);
        (0..self.lorentz_transforms)
            .map(|_| random_spinor_lorentz(&mut rng, rep))
            .collect()
    }
}

/// A grid cell: the verdict merged over every κ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub kappa_independent: bool,
}

fn merge_over_kappa(per_kappa: Vec<Verdict>) -> Cell {
    let first = per_kappa[0].status;
    let kappa_independent = per_kappa.iter().all(|v| v.status == first);
    let status = if kappa_independent {
        first
    } else {
        Status::Indeterminate
    };
    let max_residual = per_kappa.iter().map(|v| v.max_residual).fold(0.0, f64::max);
    let witness = per_kappa
        .iter()
        .filter_map(|v| v.witness.as_ref())
        .fold(None::<&Witness>, |best, w| match best {
            Some(b) if !outranks((w.probe, w.distance), (b.probe, b.distance)) => Some(b),
            _ => Some(w),
        })
        .cloned();
    Cell {
        verdict: Verdict {
            status,
            max_residual,
            witness,
        },
        kappa_independent,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceSummary {
    pub holds: bool,
    pub checked: usize,
    pub failures: usize,
    pub max_distance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OffshellSummary {
    pub kappa: f64,
    #[serde(flatten)]
    pub report: OffshellReport,
    pub passes: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoincareSection {
    pub lorentz: BTreeMap<String, Cell>,
    pub constrained_lorentz: BTreeMap<String, Cell>,
    pub operators: OperatorInvariance,
    pub translations: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub id: String,
    pub expected: String,
    pub observed: String,
    pub holds: bool,
}

pub type VerdictGrid = BTreeMap<String, BTreeMap<String, Cell>>;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub conventions: BTreeMap<&'static str, String>,
    pub config: AuditConfig,
    /// Solution sets of the single combined operator.
    pub verdicts: VerdictGrid,
    /// Solution sets of γ·p = 0 together with the subsidiary condition.
    pub constrained_verdicts: VerdictGrid,
    pub equivalence: BTreeMap<String, EquivalenceSummary>,
    pub offshell: BTreeMap<String, Vec<OffshellSummary>>,
    pub poincare: PoincareSection,
    pub claims: Vec<Claim>,
    /// Grid cells whose worst distance fell between the two tolerances.
    pub indeterminate: Vec<String>,
}

impl AuditReport {
    pub fn cell(&self, form: SolutionForm, family: &str, transform: &str) -> Option<&Cell> {
        let grid = match form {
            SolutionForm::Combined => &self.verdicts,
            SolutionForm::Constrained => &self.constrained_verdicts,
        };
        grid.get(family)?.get(transform)
    }

    pub fn status(&self, form: SolutionForm, family: &str, transform: &str) -> Option<Status> {
        self.cell(form, family, transform).map(|c| c.verdict.status)
    }

    pub fn indeterminate_cells(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (label, grid) in [
            ("combined", &self.verdicts),
            ("constrained", &self.constrained_verdicts),
        ] {
            for (family, row) in grid {
                for (t, cell) in row {
                    if cell.verdict.status == Status::Indeterminate {
                        out.push(format!("{label}/{family}/{t}"));
                    }
                }
            }
        }
        for (label, row) in [
            ("lorentz", &self.poincare.lorentz),
            ("constrained_lorentz", &self.poincare.constrained_lorentz),
        ] {
            for (family, cell) in row {
                if cell.verdict.status == Status::Indeterminate {
                    out.push(format!("{label}/{family}"));
                }
            }
        }
        out
    }

    pub fn failed_claims(&self) -> Vec<&Claim> {
        self.claims.iter().filter(|c| !c.holds).collect()
    }

    /// Grid statuses only, for comparing runs.
    pub fn status_grid(&self) -> BTreeMap<(String, String, String), Status> {
        let mut out = BTreeMap::new();
        for (form, grid) in [
            ("combined", &self.verdicts),
            ("constrained", &self.constrained_verdicts),
        ] {
            for (family, row) in grid {
                for (t, cell) in row {
                    out.insert((form.to_string(), family.clone(), t.clone()), cell.verdict.status);
                }
            }
        }
        for (form, row) in [
            ("combined", &self.poincare.lorentz),
            ("constrained", &self.poincare.constrained_lorentz),
        ] {
            for (family, cell) in row {
                out.insert(
                    (form.to_string(), family.clone(), "Lorentz".to_string()),
                    cell.verdict.status,
                );
            }
        }
        out
    }
}

/// The statuses the claim table asserts, per family.
pub const CLAIM_TABLE: [(&str, &[(&str, Status)]); 3] = [
    (
        "Chiral",
        &[
            ("P", Status::NonInvariant),
            ("C", Status::NonInvariant),
            ("CP", Status::Invariant),
        ],
    ),
    (
        "ChiralHelicity",
        &[("CP", Status::NonInvariant), ("CPT", Status::NonInvariant)],
    ),
    (
        "Helicity",
        &[
            ("P", Status::Invariant),
            ("T", Status::Invariant),
            ("C", Status::NonInvariant),
        ],
    ),
];

fn audited_families() -> [Family; 4] {
    [
        Family::BareDirac,
        Family::Chiral,
        Family::ChiralHelicity,
        Family::Helicity,
    ]
}

fn spec_for(family: &Family, kappa: f64) -> Result<EquationSpec> {
    match family {
        Family::BareDirac => Ok(EquationSpec::bare()),
        f => EquationSpec::new(f.clone(), kappa),
    }
}

fn verdict_grid(
    config: &AuditConfig,
    rep: &GammaRep,
    samples: &SampleSet,
    transforms: &[SymmetryTransform],
    form: SolutionForm,
) -> Result<VerdictGrid> {
    let mut grid = BTreeMap::new();
    for family in audited_families() {
        let kappas: &[f64] = if family == Family::BareDirac {
            &[0.0]
        } else {
            &config.kappas
        };
        let mut row = BTreeMap::new();
        for sigma in transforms {
            let per_kappa = kappas
                .iter()
                .map(|&k| classify(&spec_for(&family, k)?, sigma, samples, rep, &config.tolerances, form))
                .collect::<Result<Vec<_>>>()?;
            row.insert(sigma.name.clone(), merge_over_kappa(per_kappa));
        }
        grid.insert(family.name().to_string(), row);
    }
    Ok(grid)
}

fn lorentz_row(
    config: &AuditConfig,
    rep: &GammaRep,
    samples: &SampleSet,
    transforms: &[SpinorLorentz],
    form: SolutionForm,
) -> Result<BTreeMap<String, Cell>> {
    let mut row = BTreeMap::new();
    for family in audited_families() {
        let kappas: &[f64] = if family == Family::BareDirac {
            &[0.0]
        } else {
            &config.kappas
        };
        let per_kappa = kappas
            .iter()
            .map(|&k| {
                classify_lorentz(
                    &spec_for(&family, k)?,
                    transforms,
                    samples,
                    rep,
                    &config.tolerances,
                    form,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        row.insert(family.name().to_string(), merge_over_kappa(per_kappa));
    }
    Ok(row)
}

fn equivalence_section(
    config: &AuditConfig,
    rep: &GammaRep,
    samples: &SampleSet,
) -> Result<BTreeMap<String, EquivalenceSummary>> {
    let mut out = BTreeMap::new();
    let points = samples.points();
    for family in Family::COMBINED {
        let mut summary = EquivalenceSummary {
            holds: true,
            checked: 0,
            failures: 0,
            max_distance: 0.0,
            witness: None,
        };
        for &kappa in &config.kappas {
            let spec = EquationSpec::new(family.clone(), kappa)?;
            let results = points
                .par_iter()
                .map(|(i, pt)| equivalence_distance(&spec, rep, pt).map(|s| (*i, *pt, s)))
                .collect::<Result<Vec<_>>>()?;
            for (i, pt, s) in results {
                summary.checked += 1;
                summary.max_distance = summary.max_distance.max(s.distance);
                if s.distance > config.tolerances.invariant {
                    summary.failures += 1;
                    let better = match &summary.witness {
                        None => true,
                        Some(w) => outranks((i < samples.probes, s.distance), (w.probe, w.distance)),
                    };
                    if better {
                        summary.witness = Some(Witness {
                            transform: "equivalence".into(),
                            kappa,
                            sign: pt.sign,
                            momentum: pt.spatial,
                            distance: s.distance,
                            dimension_mismatch: (s.combined_dim != s.constrained_dim)
                                .then_some((s.combined_dim, s.constrained_dim)),
                            probe: i < samples.probes,
                        });
                    }
                }
            }
        }
        summary.holds = summary.failures == 0;
        out.insert(family.name().to_string(), summary);
    }
    Ok(out)
}

fn offshell_section(config: &AuditConfig, rep: &GammaRep) -> Result<BTreeMap<String, Vec<OffshellSummary>>> {
    let grid: Vec<(f64, SpatialMomentum)> = default_offshell_grid(config.seed)
        .into_iter()
        .map(|(p0, p)| (p0 * config.momentum_scale, p.scaled(config.momentum_scale)))
        .collect();
    let mut out = BTreeMap::new();
    for family in Family::COMBINED {
        let rows = config
            .kappas
            .iter()
            .map(|&kappa| {
                let report = offshell_scan(&EquationSpec::new(family.clone(), kappa)?, rep, &grid)?;
                let passes = report.min_relative > OFFSHELL_MIN_RELATIVE;
                Ok(OffshellSummary { kappa, report, passes })
            })
            .collect::<Result<Vec<_>>>()?;
        out.insert(family.name().to_string(), rows);
    }
    Ok(out)
}

fn conventions(config: &AuditConfig) -> BTreeMap<&'static str, String> {
    let rep = match config.representation {
        RepresentationChoice::Chiral => {
            "chiral: g0 = [[0,1],[1,0]], gk = [[0,sk],[-sk,0]], g5 = diag(-1,-1,1,1)".to_string()
        }
        RepresentationChoice::RandomUnitary(seed) => format!("chiral conjugated by a random unitary (seed {seed})"),
    };
    BTreeMap::from([
        ("metric", "(+,-,-,-)".to_string()),
        ("representation", rep),
        ("gamma5", "i g0 g1 g2 g3".to_string()),
        (
            "helicity_operator",
            "H = g0 (g1 p1 + g2 p2 + g3 p3), E = |p|".to_string(),
        ),
        ("plane_wave", "Psi = v exp(-i(p0 t - p.x)), p0 = +-E".to_string()),
        ("P", "v -> g0 v, (p0, p) -> (p0, -p)".to_string()),
        ("C", "v -> i g2 conj(v), (p0, p) -> (-p0, -p)".to_string()),
        (
            "T",
            "Wigner, antiunitary: v -> g1 g3 conj(v), (p0, p) -> (p0, -p)".to_string(),
        ),
        (
            "invariance",
            "transform maps the on-shell solution set onto itself at every sampled momentum, both energy signs"
                .to_string(),
        ),
        (
            "lorentz",
            "S = exp(-(i/2) theta Sigma.n) for rotations, exp(-(eta/2) alpha.n) for boosts; rapidity <= 2".to_string(),
        ),
        (
            "translations",
            "act on plane waves by a phase; every solution subspace is preserved analytically".to_string(),
        ),
    ])
}

fn claims(report: &AuditReport) -> Vec<Claim> {
    let mut out = Vec::new();
    for (form, label) in [
        (SolutionForm::Combined, "combined"),
        (SolutionForm::Constrained, "constrained"),
    ] {
        for (family, cells) in CLAIM_TABLE {
            for &(t, expected) in cells {
                let observed = report.status(form, family, t).unwrap_or(Status::Indeterminate);
                out.push(Claim {
                    id: format!("{label}/{family}/{t}"),
                    expected: expected.label().into(),
                    observed: observed.label().into(),
                    holds: observed == expected,
                });
            }
        }
    }
    for (family, s) in &report.equivalence {
        out.push(Claim {
            id: format!("equivalence/{family}"),
            expected: "equivalent".into(),
            observed: if s.holds {
                "equivalent".into()
            } else {
                format!("differs at {}/{} samples", s.failures, s.checked)
            },
            holds: s.holds,
        });
    }
    for (label, row) in [
        ("lorentz", &report.poincare.lorentz),
        ("constrained_lorentz", &report.poincare.constrained_lorentz),
    ] {
        for family in ["Chiral", "ChiralHelicity", "Helicity"] {
            let observed = row
                .get(family)
                .map(|c| c.verdict.status)
                .unwrap_or(Status::Indeterminate);
            out.push(Claim {
                id: format!("{label}/{family}"),
                expected: Status::Invariant.label().into(),
                observed: observed.label().into(),
                holds: observed == Status::Invariant,
            });
        }
    }
    let ops = &report.poincare.operators;
    out.push(Claim {
        id: "poincare_operators".into(),
        expected: format!("residuals <= {:e}", ops.tolerance),
        observed: format!("gamma5 {:e}, H/E {:e}", ops.gamma5_commutator, ops.h_over_e_compressed),
        holds: ops.passes,
    });
    out
}

pub fn full_audit(config: &AuditConfig) -> Result<AuditReport> {
    config.validate()?;
    let rep = config.representation.build();
    let samples = SampleSet::new(config.samples, config.seed, config.momentum_scale);
    let transforms = transform_grid_with_phases(&rep, config.phases());
    let lorentz = config.lorentz_sample(&rep);

    let verdicts = verdict_grid(config, &rep, &samples, &transforms, SolutionForm::Combined)?;
    let constrained_verdicts = verdict_grid(config, &rep, &samples, &transforms, SolutionForm::Constrained)?;
    let equivalence = equivalence_section(config, &rep, &samples)?;
    let offshell = offshell_section(config, &rep)?;
    let poincare = PoincareSection {
        lorentz: lorentz_row(config, &rep, &samples, &lorentz, SolutionForm::Combined)?,
        constrained_lorentz: lorentz_row(config, &rep, &samples, &lorentz, SolutionForm::Constrained)?,
        operators: poincare_invariant_operators(&rep, &lorentz, &samples, OPERATOR_TOL)?,
        translations: "analytic",
    };
    debug_assert_eq!(
        transforms.iter().map(|t| t.name.as_str()).collect::<Vec<_>>(),
        GRID_NAMES
    );

    let mut report = AuditReport {
        conventions: conventions(config),
        config: config.clone(),
        verdicts,
        constrained_verdicts,
        equivalence,
        offshell,
        poincare,
        claims: Vec::new(),
        indeterminate: Vec::new(),
    };
    report.claims = claims(&report);
    report.indeterminate = report.indeterminate_cells();
    Ok(report)
}

/// Dirac solution subspace, exposed for callers that want the reference set.
pub fn dirac_space(rep: &GammaRep, point: &OnShellPoint) -> Subspace {
    kernel(&crate::equations::slash(rep, point), DEFAULT_TOL)
}

/// Algebraic identity residuals, each a max over the sampled momenta.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub clifford: f64,
    /// γ₅² = I, {γ₅, γ^μ} = 0, γ₅ = iγ⁰γ¹γ²γ³
    pub gamma5: f64,
    pub hermiticity: f64,
    /// ‖(H/E)² − I‖_max
    pub h_over_e_squared: f64,
    /// ‖Π² − Π‖_max with Π = (I + X)/2, per family.
    pub projector_idempotence: BTreeMap<String, f64>,
    /// ‖HΨ − p₀Ψ‖ / (|p₀|‖Ψ‖) on Dirac solutions.
    pub dirac_energy: f64,
    /// max over μ of ‖S⁻¹γ^μS − Λ^μ_ν γ^ν‖_max
    pub intertwining: f64,
}

impl IdentityReport {
    /// Pass/fail per identity against its pinned threshold.
    pub fn checks(&self) -> Vec<(&'static str, f64, f64)> {
        let idempotence = self.projector_idempotence.values().copied().fold(0.0, f64::max);
        vec![
            ("clifford", self.clifford, 1e-14),
            ("gamma5", self.gamma5, 1e-14),
            ("hermiticity", self.hermiticity, 1e-14),
            ("h_over_e_squared", self.h_over_e_squared, 1e-12),
            ("projector_idempotence", idempotence, 1e-12),
            ("dirac_energy", self.dirac_energy, 1e-9),
            ("intertwining", self.intertwining, 1e-9),
        ]
    }

    pub fn passes(&self) -> bool {
        self.checks().iter().all(|(_, value, limit)| value <= limit)
    }
}

pub fn identity_residuals(rep: &GammaRep, samples: &SampleSet, transforms: &[SpinorLorentz]) -> Result<IdentityReport> {
    let id = ComplexMatrix4::identity();
    let mut h_over_e_squared: f64 = 0.0;
    let mut dirac_energy: f64 = 0.0;
    let mut projector_idempotence: BTreeMap<String, f64> =
        Family::COMBINED.iter().map(|f| (f.name().to_string(), 0.0)).collect();
    for (_, pt) in samples.points() {
        let h = helicity_matrix(rep, &pt.spatial);
        let h_e = h.scale_real(1.0 / pt.energy_abs);
        h_over_e_squared = h_over_e_squared.max((h_e * h_e - id).max_abs());
        for family in Family::COMBINED {
            let x = crate::equations::condition_operator(&family, rep, &pt.spatial)?;
            let proj = (id + x).scale_real(0.5);
            let worst = projector_idempotence
                .get_mut(family.name())
                .expect("all families present");
            *worst = worst.max((proj * proj - proj).max_abs());
        }
        for v in dirac_space(rep, &pt).basis() {
            let hv = h.apply(v);
            let num: f64 = hv
                .iter()
                .zip(v)
                .map(|(a, b)| (a - b * pt.p0()).norm_sqr())
                .sum::<f64>()
                .sqrt();
            dirac_energy = dirac_energy.max(num / (pt.energy_abs * crate::subspaces::spinor_norm(v)));
        }
    }
    Ok(IdentityReport {
        clifford: crate::clifford::clifford_residual(rep),
        gamma5: crate::clifford::gamma5_residual(rep),
        hermiticity: crate::clifford::hermiticity_residual(rep),
        h_over_e_squared,
        projector_idempotence,
        dirac_energy,
        intertwining: transforms
            .iter()
            .map(|t| t.intertwining_residual(rep))
            .fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetries::{discrete, spinor_lorentz, DiscreteKind, LorentzKind};

    fn small_samples() -> SampleSet {
        SampleSet::new(12, 42, 1.0)
    }

    fn grid_transform(rep: &GammaRep, name: &str) -> SymmetryTransform {
        transform_grid_with_phases(rep, [C64::new(1.0, 0.0); 3])
            .into_iter()
            .find(|t| t.name == name)
            .unwrap()
    }

    #[test]
    fn chiral_is_cp_invariant() {
        let rep = build_chiral_rep();
        let spec = EquationSpec::new(Family::Chiral, 1.0).unwrap();
        for form in [SolutionForm::Combined, SolutionForm::Constrained] {
            let v = classify(
                &spec,
                &grid_transform(&rep, "CP"),
                &small_samples(),
                &rep,
                &Tolerances::default(),
                form,
            )
            .unwrap();
            assert_eq!(v.status, Status::Invariant);
            assert!(v.witness.is_none());
            assert!(v.max_residual <= 1e-8);
        }
    }

    #[test]
    fn chiral_helicity_cp_violation_has_probe_witness() {
        let rep = build_chiral_rep();
        let spec = EquationSpec::new(Family::ChiralHelicity, 1.0).unwrap();
        let v = classify(
            &spec,
            &grid_transform(&rep, "CP"),
            &small_samples(),
            &rep,
            &Tolerances::default(),
            SolutionForm::Combined,
        )
        .unwrap();
        assert_eq!(v.status, Status::NonInvariant);
        let w = v.witness.unwrap();
        assert!(w.probe);
        assert!(w.distance >= 1e-2);
        assert_eq!(w.transform, "CP");
    }

    #[test]
    fn helicity_p_invariant_c_not() {
        let rep = build_chiral_rep();
        let spec = EquationSpec::new(Family::Helicity, 1.0).unwrap();
        let tol = Tolerances::default();
        let p = discrete(DiscreteKind::P, &rep);
        let c = discrete(DiscreteKind::C, &rep);
        assert_eq!(
            classify(&spec, &p, &small_samples(), &rep, &tol, SolutionForm::Combined)
                .unwrap()
                .status,
            Status::Invariant
        );
        let cv = classify(&spec, &c, &small_samples(), &rep, &tol, SolutionForm::Combined).unwrap();
        assert_eq!(cv.status, Status::NonInvariant);
        assert!(cv.witness.unwrap().dimension_mismatch.is_none());
        let cv = classify(&spec, &c, &small_samples(), &rep, &tol, SolutionForm::Constrained).unwrap();
        // Constrained: 0 solutions at positive energy against 2 at negative.
        assert_eq!(cv.status, Status::NonInvariant);
        assert!(cv.witness.unwrap().dimension_mismatch.is_some());
    }

    #[test]
    fn bare_dirac_invariant_under_p_c_t() {
        let rep = build_chiral_rep();
        let tol = Tolerances::default();
        for kind in [DiscreteKind::P, DiscreteKind::C, DiscreteKind::T] {
            let v = classify(
                &EquationSpec::bare(),
                &discrete(kind, &rep),
                &small_samples(),
                &rep,
                &tol,
                SolutionForm::Combined,
            )
            .unwrap();
            assert_eq!(v.status, Status::Invariant, "{kind:?}");
        }
    }

    #[test]
    fn tolerance_gap_yields_indeterminate() {
        let tol = Tolerances {
            invariant: 1e-8,
            violation: 1e-2,
        };
        assert_eq!(tol.status(1e-9), Status::Invariant);
        assert_eq!(tol.status(1e-5), Status::Indeterminate);
        assert_eq!(tol.status(0.5), Status::NonInvariant);
        assert!(Tolerances {
            invariant: 1e-2,
            violation: 1e-3
        }
        .validate()
        .is_err());
    }

    #[test]
    fn kappa_dependence_is_indeterminate() {
        let inv = Verdict {
            status: Status::Invariant,
            max_residual: 0.0,
            witness: None,
        };
        let non = Verdict {
            status: Status::NonInvariant,
            max_residual: 1.0,
            witness: None,
        };
        let cell = merge_over_kappa(vec![inv.clone(), non]);
        assert!(!cell.kappa_independent);
        assert_eq!(cell.verdict.status, Status::Indeterminate);
        assert!(merge_over_kappa(vec![inv.clone(), inv]).kappa_independent);
    }

    #[test]
    fn lorentz_verdicts_per_form() {
        let rep = build_chiral_rep();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let transforms: Vec<SpinorLorentz> = (0..6).map(|_| random_spinor_lorentz(&mut rng, &rep)).collect();
        let tol = Tolerances::default();
        let samples = small_samples();
        for family in Family::COMBINED {
            let spec = EquationSpec::new(family.clone(), 1.0).unwrap();
            let constrained =
                classify_lorentz(&spec, &transforms, &samples, &rep, &tol, SolutionForm::Constrained).unwrap();
            assert_eq!(constrained.status, Status::Invariant, "{family}");
            let combined = classify_lorentz(&spec, &transforms, &samples, &rep, &tol, SolutionForm::Combined).unwrap();
            let expected = if family == Family::Helicity {
                Status::NonInvariant
            } else {
                Status::Invariant
            };
            assert_eq!(combined.status, expected, "{family}");
        }
    }

    #[test]
    fn identity_lorentz_gives_zero_operator_residuals() {
        let rep = build_chiral_rep();
        let r =
            poincare_invariant_operators(&rep, &[SpinorLorentz::identity()], &small_samples(), OPERATOR_TOL).unwrap();
        assert_eq!(r.gamma5_commutator, 0.0);
        assert_eq!(r.h_over_e_compressed, 0.0);
    }

    #[test]
    fn rotations_preserve_h_over_e_on_all_of_spinor_space() {
        let rep = build_chiral_rep();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rotations: Vec<SpinorLorentz> = (0..10)
            .map(|_| {
                let axis = crate::kinematics::random_unit_vector(&mut rng);
                spinor_lorentz(LorentzKind::Rotation, axis, rng.gen_range(0.0..6.0), &rep).unwrap()
            })
            .collect();
        let r = poincare_invariant_operators(&rep, &rotations, &small_samples(), OPERATOR_TOL).unwrap();
        assert!(r.h_over_e_rotations_full <= 1e-10);
        assert!(r.passes);
    }

    #[test]
    fn boost_preserves_h_over_e_on_dirac_solutions_only() {
        let rep = build_chiral_rep();
        let boost = spinor_lorentz(LorentzKind::Boost, [0.0, 0.0, 1.0], 1.0, &rep).unwrap();
        let samples = SampleSet {
            momenta: vec![SpatialMomentum::new(1.0, 0.0, 0.0)],
            probes: 1,
        };
        let r = poincare_invariant_operators(&rep, std::slice::from_ref(&boost), &samples, OPERATOR_TOL).unwrap();
        assert!(r.h_over_e_compressed <= 1e-9);
        // Without compression the boosted H/E differs.
        let pt = on_shell(SpatialMomentum::new(1.0, 0.0, 0.0), EnergySign::Positive).unwrap();
        let q = apply_vector(&boost.vector, &pt).unwrap();
        let hq = helicity_matrix(&rep, &q.spatial).scale_real(1.0 / q.energy_abs);
        let hp = helicity_matrix(&rep, &pt.spatial);
        assert!((boost.s_inverse() * hq * boost.s_matrix - hp).max_abs() > 1e-2);
    }
}
