//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a claim did not reproduce, 2 usage or parse
//! error, 3 some verdict is Indeterminate.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::audit::{self, AuditConfig, AuditReport, Cell, RepresentationChoice, SampleSet, Status, Tolerances};
use crate::clifford::C64;
use crate::eqdsl;
use crate::equations::{equivalence_distance, EquationSpec, Family, SolutionForm};
use crate::error::Error;
use crate::kinematics::{on_shell, EnergySign, SpatialMomentum};
use crate::subspaces::DEFAULT_TOL;
use crate::symmetries::GRID_NAMES;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "spinaudit",
    version,
    about = "Symmetry audit of massless spin-1/2 wave equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full audit and compare against the claim table.
    Audit(AuditArgs),
    /// Print Clifford, projector and intertwining residuals.
    Identities(IdentityArgs),
    /// Print the solution subspace at one on-shell momentum.
    Kernel(KernelArgs),
    /// Parse an operator expression and dump its tree.
    Parse {
        #[arg(long)]
        expr: String,
    },
    /// Compare combined and constrained solution sets.
    Equiv(EquivArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormArg {
    Combined,
    Constrained,
}

impl From<FormArg> for SolutionForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Combined => SolutionForm::Combined,
            FormArg::Constrained => SolutionForm::Constrained,
        }
    }
}

#[derive(Args, Debug)]
struct SamplingArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    samples: usize,
}

#[derive(Args, Debug)]
struct AuditArgs {
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.5, 1.0, 3.0, -1.0])]
    kappa: Vec<f64>,
    #[arg(long, default_value_t = 1e-8)]
    tol_inv: f64,
    #[arg(long, default_value_t = 1e-2)]
    tol_viol: f64,
    /// Number of random proper orthochronous transforms.
    #[arg(long, default_value_t = 50)]
    lorentz: usize,
    /// Multiply every sampled momentum by this factor.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Conjugate the chiral basis by a random unitary drawn from this seed.
    #[arg(long)]
    rep_seed: Option<u64>,
    /// Multiply P, C, T by random unit phases drawn from this seed.
    #[arg(long)]
    phase_seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IdentityArgs {
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long, default_value_t = 50)]
    lorentz: usize,
}

#[derive(Args, Debug)]
struct KernelArgs {
    /// eq1, eq3, eq4, eq5 or custom:<expression>
    #[arg(long = "eq")]
    equation: String,
    #[arg(long, value_parser = parse_momentum, allow_hyphen_values = true)]
    p: SpatialMomentum,
    #[arg(long, value_parser = parse_sign, allow_hyphen_values = true, default_value = "+")]
    sign: EnergySign,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    kappa: f64,
    #[arg(long, value_enum, default_value_t = FormArg::Combined)]
    form: FormArg,
}

#[derive(Args, Debug)]
struct EquivArgs {
    #[arg(long = "eq")]
    equation: String,
    #[command(flatten)]
    sampling: SamplingArgs,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.5, 1.0, 3.0, -1.0])]
    kappa: Vec<f64>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

fn parse_momentum(s: &str) -> Result<SpatialMomentum, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("bad component {x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [a, b, c] => Ok(SpatialMomentum::new(a, b, c)),
        _ => Err(format!(
            "expected three comma-separated components, got {}",
            parts.len()
        )),
    }
}

fn parse_sign(s: &str) -> Result<EnergySign, String> {
    match s {
        "+" | "+1" | "1" | "positive" => Ok(EnergySign::Positive),
        "-" | "-1" | "negative" => Ok(EnergySign::Negative),
        other => Err(format!("expected + or -, got {other:?}")),
    }
}

fn family_for(selector: &str) -> Result<Family, Error> {
    match selector {
        "eq1" => Ok(Family::BareDirac),
        "eq3" => Ok(Family::Chiral),
        "eq4" => Ok(Family::ChiralHelicity),
        "eq5" => Ok(Family::Helicity),
        other => match other.strip_prefix("custom:") {
            Some(expr) => Ok(Family::Custom(eqdsl::parse(expr)?)),
            None => Err(Error::Config(format!(
                "unknown equation {other:?}; use eq1, eq3, eq4, eq5 or custom:<expr>"
            ))),
        },
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "SyntaxError",
        Error::Index { .. } => "IndexError",
        Error::Config(_) => "ConfigError",
        _ => "error",
    }
}

fn fail(err: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(err, "{}: {e}", error_kind(e));
    EXIT_USAGE
}

/// Entry point shared by the binary and the tests. `argv[0]` is the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Audit(a) => run_audit(a, out, err),
        Command::Identities(a) => run_identities(a, out),
        Command::Kernel(a) => run_kernel(a, out),
        Command::Parse { expr } => run_parse(&expr, out),
        Command::Equiv(a) => run_equiv(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => fail(err, &e),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    // Round-trip through Value so every map comes out with sorted keys.
    let v = serde_json::to_value(value).expect("report types serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Error> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::Config(format!("cannot write output: {e}")))
}

fn run_audit(a: AuditArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let config = AuditConfig {
        seed: a.sampling.seed,
        samples: a.sampling.samples,
        kappas: a.kappa,
        tolerances: Tolerances {
            invariant: a.tol_inv,
            violation: a.tol_viol,
        },
        lorentz_transforms: a.lorentz,
        momentum_scale: a.scale,
        representation: a
            .rep_seed
            .map_or(RepresentationChoice::Chiral, RepresentationChoice::RandomUnitary),
        phase_seed: a.phase_seed,
    };
    let report = audit::full_audit(&config)?;
    let text = match a.format {
        Format::Json => to_json(&report),
        Format::Markdown => render_markdown(&report),
    };
    match &a.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?
        }
        None => emit(out, &text)?,
    }
    let failed = report.failed_claims();
    for c in &failed {
        let _ = writeln!(err, "claim {} expected {}, observed {}", c.id, c.expected, c.observed);
    }
    for cell in &report.indeterminate {
        let _ = writeln!(err, "indeterminate: {cell}");
    }
    Ok(if !report.indeterminate.is_empty() {
        EXIT_INDETERMINATE
    } else if !failed.is_empty() {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    })
}

fn run_identities(a: IdentityArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let config = AuditConfig {
        seed: a.sampling.seed,
        samples: a.sampling.samples,
        lorentz_transforms: a.lorentz,
        ..Default::default()
    };
    config.validate()?;
    let rep = config.representation.build();
    let samples = SampleSet::new(config.samples, config.seed, 1.0);
    let report = audit::identity_residuals(&rep, &samples, &config.lorentz_sample(&rep))?;
    let mut text = String::new();
    for (name, value, limit) in report.checks() {
        let mark = if value <= limit { "ok" } else { "FAIL" };
        let _ = writeln!(text, "{name:<24} {value:.3e}  (limit {limit:.0e})  {mark}");
    }
    for (family, value) in &report.projector_idempotence {
        let _ = writeln!(text, "  idempotence {family:<15} {value:.3e}");
    }
    emit(out, &text)?;
    Ok(if report.passes() { EXIT_OK } else { EXIT_MISMATCH })
}

fn fmt_complex(z: C64) -> String {
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    format!("{re:+.6}{im:+.6}i")
}

fn run_kernel(a: KernelArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let family = family_for(&a.equation)?;
    let spec = match family {
        Family::BareDirac => EquationSpec::bare(),
        f => EquationSpec::new(f, a.kappa)?,
    };
    let rep = crate::clifford::build_chiral_rep();
    let point = on_shell(a.p, a.sign)?;
    let form: SolutionForm = a.form.into();
    let space = form.space(&spec, &rep, &point, DEFAULT_TOL)?;
    let mut text = String::new();
    let _ = writeln!(text, "equation: {}", spec.family);
    if spec.family != Family::BareDirac {
        let _ = writeln!(text, "kappa: {}", spec.kappa);
    }
    let [x, y, z] = point.spatial.0;
    let _ = writeln!(text, "form: {form:?}");
    let _ = writeln!(text, "momentum: p = ({x}, {y}, {z}), p0 = {}", point.p0());
    let _ = writeln!(text, "dimension: {}", space.dim());
    for (i, v) in space.basis().iter().enumerate() {
        let entries: Vec<String> = v.iter().map(|c| fmt_complex(*c)).collect();
        let _ = writeln!(text, "v{} = [{}]", i + 1, entries.join(", "));
    }
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn run_parse(expr: &str, out: &mut dyn Write) -> Result<i32, Error> {
    let ast = eqdsl::parse(expr)?;
    emit(out, &format!("{ast}\n{ast:#?}\n"))?;
    Ok(EXIT_OK)
}

fn run_equiv(a: EquivArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let family = family_for(&a.equation)?;
    if !family.is_combined() {
        return Err(Error::UnsupportedFamily(family.name().to_string()));
    }
    let samples = SampleSet::new(a.sampling.samples, a.sampling.seed, 1.0);
    let rep = crate::clifford::build_chiral_rep();
    let mut text = String::new();
    let mut all_hold = true;
    for &kappa in &a.kappa {
        let spec = EquationSpec::new(family.clone(), kappa)?;
        for sign in EnergySign::BOTH {
            let mut worst = (0.0_f64, 0, 0, None::<SpatialMomentum>);
            let mut failures = 0;
            let mut checked = 0;
            for (_, pt) in samples.points().into_iter().filter(|(_, pt)| pt.sign == sign) {
                let s = equivalence_distance(&spec, &rep, &pt)?;
                checked += 1;
                if s.distance > a.tol {
                    failures += 1;
                }
                if worst.3.is_none() || s.distance > worst.0 {
                    worst = (s.distance, s.combined_dim, s.constrained_dim, Some(pt.spatial));
                }
            }
            all_hold &= failures == 0;
            let mark = if failures == 0 { "equivalent" } else { "DIFFERENT" };
            let _ = write!(
                text,
                "{} kappa={kappa} sign={}: {mark} ({failures}/{checked} differ, max distance {:.3e}",
                family.name(),
                sign.symbol(),
                worst.0
            );
            if let (true, Some(p)) = (failures > 0, worst.3) {
                let _ = write!(text, ", dims {} vs {} at p = {:?}", worst.1, worst.2, p.0);
            }
            text.push_str(")\n");
        }
    }
    emit(out, &text)?;
    Ok(if all_hold { EXIT_OK } else { EXIT_MISMATCH })
}

fn mark(status: Status) -> &'static str {
    match status {
        Status::Invariant => "✓",
        Status::NonInvariant => "✗",
        Status::Indeterminate => "?",
    }
}

fn cell_text(cell: &Cell) -> String {
    format!(
        "{} {} ({:.1e})",
        mark(cell.verdict.status),
        cell.verdict.status.label(),
        cell.verdict.max_residual
    )
}

fn grid_table(text: &mut String, grid: &audit::VerdictGrid) {
    let _ = writeln!(text, "| equation | {} |", GRID_NAMES.join(" | "));
    let _ = writeln!(text, "|---|{}", "---|".repeat(GRID_NAMES.len()));
    for family in ["BareDirac", "Chiral", "ChiralHelicity", "Helicity"] {
        let Some(row) = grid.get(family) else { continue };
        let cells: Vec<String> = GRID_NAMES
            .iter()
            .map(|t| row.get(*t).map(cell_text).unwrap_or_default())
            .collect();
        let _ = writeln!(text, "| {family} | {} |", cells.join(" | "));
    }
    text.push('\n');
}

/// Markdown rendering: verdict grids with ✓ (invariant), ✗ (noninvariant),
/// ? (indeterminate) and the worst subspace distance, then the claim table.
pub fn render_markdown(report: &AuditReport) -> String {
    let c = &report.config;
    let mut text = String::from("# Symmetry audit\n\n");
    let kappas: Vec<String> = c.kappas.iter().map(|k| k.to_string()).collect();
    let _ = writeln!(
        text,
        "seed {}, {} momenta x 2 energy signs, kappa in {{{}}}, tol_inv {:e}, tol_viol {:e}, {} Lorentz transforms, momentum scale {}\n",
        c.seed,
        c.samples,
        kappas.join(", "),
        c.tolerances.invariant,
        c.tolerances.violation,
        c.lorentz_transforms,
        c.momentum_scale
    );

    text.push_str("## Discrete transforms, combined operator\n\n");
    grid_table(&mut text, &report.verdicts);
    text.push_str("## Discrete transforms, Dirac equation with subsidiary condition\n\n");
    grid_table(&mut text, &report.constrained_verdicts);

    text.push_str(
        "## Proper orthochronous Lorentz transforms\n\n| equation | combined | constrained |\n|---|---|---|\n",
    );
    for (family, cell) in &report.poincare.lorentz {
        let constrained = report
            .poincare
            .constrained_lorentz
            .get(family)
            .map(cell_text)
            .unwrap_or_default();
        let _ = writeln!(text, "| {family} | {} | {constrained} |", cell_text(cell));
    }
    let ops = &report.poincare.operators;
    let _ = writeln!(
        text,
        "\n[gamma5, S] max {:.1e}; S^-1 (H/E)(Lp) S - (H/E)(p) on Dirac solutions max {:.1e}; translations act by a phase.\n",
        ops.gamma5_commutator, ops.h_over_e_compressed
    );

    text.push_str("## Combined operator against Dirac equation with condition\n\n| equation | equivalent | differing samples | max distance |\n|---|---|---|---|\n");
    for (family, s) in &report.equivalence {
        let _ = writeln!(
            text,
            "| {family} | {} | {}/{} | {:.1e} |",
            if s.holds { "✓" } else { "✗" },
            s.failures,
            s.checked,
            s.max_distance
        );
    }

    text.push_str(
        "\n## Off-shell invertibility\n\n| equation | kappa | min sigma_min/sigma_max | |\n|---|---|---|---|\n",
    );
    for (family, rows) in &report.offshell {
        for r in rows {
            let _ = writeln!(
                text,
                "| {family} | {} | {:.2e} | {} |",
                r.kappa,
                r.report.min_relative,
                if r.passes { "✓" } else { "✗" }
            );
        }
    }

    text.push_str("\n## Claims\n\n| claim | expected | observed | |\n|---|---|---|---|\n");
    for claim in &report.claims {
        let _ = writeln!(
            text,
            "| {} | {} | {} | {} |",
            claim.id,
            claim.expected,
            claim.observed,
            if claim.holds { "✓" } else { "✗" }
        );
    }
    if !report.indeterminate.is_empty() {
        let _ = writeln!(text, "\nIndeterminate: {}", report.indeterminate.join(", "));
    }
    text
}
