//! The `framesplit` command line: `verify`, `fuzz`, `sweep` and `show`.
//!
//! Exit codes: 0 when every check passed or was inapplicable, 1 on any
//! violation, 2 on a usage or input error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::frame::{DualPair, Frame};
use crate::gen::{self, GenConfig};
use crate::inequalities::{
    dual_resolution, resolution_margin, verify_dual_inequality, verify_family, verify_weighted_dual_inequality,
    LambdaFamily,
};
use crate::linalg::{CVector, RelationId, PSD_TOLERANCE};
use crate::rng::{self, streams};
use crate::splitting::{split_from_subset, IndexSubset, LemmaOutcome, SplitPair};
use crate::suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the PSD tolerance.
pub const TOLERANCE_ENV: &str = "FRAMESPLIT_TOL";

#[derive(Parser, Debug)]
#[command(
    name = "framesplit",
    version,
    about = "Verify λ-parametrized frame inequalities numerically"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the selected relations on one frame, subset and vector.
    Verify(VerifyArgs),
    /// Run the full relation suite on many random instances.
    Fuzz(FuzzArgs),
    /// Emit `lambda,margin,passed` rows for one relation over a λ grid.
    Sweep(SweepArgs),
    /// Print dimensions, frame bounds and a canonical-dual preview.
    Show(ShowArgs),
}

#[derive(Args, Debug)]
struct SubsetArgs {
    /// Index subset J, e.g. `0,2-4`, `none` or `all`.
    #[arg(long, conflicts_with = "subset_seed")]
    subset: Option<String>,
    /// Draw J at random from this seed (default 0 when --subset is absent).
    #[arg(long)]
    subset_seed: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// `named:<name>`, `random:<d>,<m>,<seed>` or a frame JSON file.
    source: String,
    #[command(flatten)]
    subset: SubsetArgs,
    /// Comma-separated λ values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1")]
    lambda: Vec<f64>,
    /// Seed of the random unit test vector and of the alternate dual.
    #[arg(long, default_value_t = 0)]
    vector_seed: u64,
    /// Relation groups to run (default: all).
    #[arg(long, value_delimiter = ',', value_enum)]
    relations: Vec<RelationGroup>,
    /// Coefficients `p,q` for the certified splitting relations.
    #[arg(long, allow_hyphen_values = true)]
    pq: Option<String>,
    /// Scale of the perturbation that turns the canonical dual into an alternate one.
    #[arg(long, default_value_t = 1.0)]
    perturbation: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RelationGroup {
    /// Splitting lemma parts 1–4 (5–7 with --pq).
    Lemma,
    /// Complement-quadratic family.
    T22,
    /// Defect family.
    T27,
    /// Quadratic-sum family.
    T210,
    /// Scalar forms of the three families.
    Scalar,
    /// Parseval identity and 3/4 bound.
    Parseval,
    /// Canonical-dual identity and 3/4 bound.
    General,
    /// Alternate-dual chain.
    Dual,
}

impl RelationGroup {
    const ALL: [RelationGroup; 8] = [
        Self::Lemma,
        Self::T22,
        Self::T27,
        Self::T210,
        Self::Scalar,
        Self::Parseval,
        Self::General,
        Self::Dual,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FuzzMode {
    /// Splittings induced by random subsets of random frames.
    Frame,
    /// Direct random splittings not tied to a frame.
    Operator,
    /// Alternate duals and non-normal resolutions of the identity.
    Dual,
}

#[derive(Args, Debug)]
struct FuzzArgs {
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Inclusive dimension range `lo,hi`.
    #[arg(long, default_value = "2,8")]
    dim_range: String,
    /// Range `lo,hi` of m/d.
    #[arg(long, default_value = "1,2")]
    count_multiplier_range: String,
    #[arg(long, default_value = "-2,3", allow_hyphen_values = true)]
    lambda_range: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FuzzMode::Frame)]
    mode: FuzzMode,
    /// Also print every report line before the manifest.
    #[arg(long)]
    emit_reports: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    source: String,
    #[command(flatten)]
    subset: SubsetArgs,
    /// Relation with a λ parameter, e.g. `t22`, `t27-upper`, `t213`.
    #[arg(long)]
    relation: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    lambda_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 2.0)]
    lambda_max: f64,
    #[arg(long, default_value_t = 101)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    vector_seed: u64,
    #[arg(long, default_value_t = 1.0)]
    perturbation: f64,
}

#[derive(Args, Debug)]
struct ShowArgs {
    source: String,
    /// Print the frame in its JSON format instead of the text summary.
    #[arg(long)]
    json: bool,
    /// Number of canonical-dual vectors to preview.
    #[arg(long, default_value_t = 4)]
    preview: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Passed,
    Failed,
    Inapplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportInputs {
    pub frame_label: String,
    pub subset: String,
    pub seed: u64,
}

/// One line of the report stream.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportLine {
    pub relation: RelationId,
    pub lambda: Option<f64>,
    pub margin: Option<f64>,
    pub scale: Option<f64>,
    pub passed: bool,
    pub outcome: Outcome,
    pub inputs: ReportInputs,
}

impl ReportLine {
    pub fn from_outcome(outcome: &LemmaOutcome, inputs: &ReportInputs) -> Self {
        match outcome {
            LemmaOutcome::Checked(r) => Self {
                relation: r.relation,
                lambda: r.lambda,
                margin: Some(r.margin),
                scale: Some(r.scale),
                passed: r.passed,
                outcome: if r.passed { Outcome::Passed } else { Outcome::Failed },
                inputs: inputs.clone(),
            },
            LemmaOutcome::Inapplicable { relation, .. } => Self {
                relation: *relation,
                lambda: None,
                margin: None,
                scale: None,
                passed: false,
                outcome: Outcome::Inapplicable,
                inputs: inputs.clone(),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OutcomeCounts {
    pub passed: u64,
    pub failed: u64,
    pub inapplicable: u64,
}

impl OutcomeCounts {
    pub fn total(&self) -> u64 {
        self.passed + self.failed + self.inapplicable
    }
}

/// Summary printed by `fuzz` and, on stderr, by `verify`.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub outcome_counts: OutcomeCounts,
    /// Smallest `margin / scale` over checked relations.
    pub worst_margin: Option<f64>,
    pub elapsed: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

#[derive(Default)]
struct Tally {
    counts: OutcomeCounts,
    worst: Option<f64>,
}

impl Tally {
    fn add(&mut self, line: &ReportLine) {
        match line.outcome {
            Outcome::Passed => self.counts.passed += 1,
            Outcome::Failed => self.counts.failed += 1,
            Outcome::Inapplicable => self.counts.inapplicable += 1,
        }
        if let (Some(m), Some(s)) = (line.margin, line.scale) {
            let normalized = m / s;
            self.worst = Some(self.worst.map_or(normalized, |w: f64| w.min(normalized)));
        }
    }
}

/// Runs the CLI with stdout/stderr replaced by the given writers and returns
/// the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let tolerance = match tolerance_from_env() {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(&a, tolerance, out, err),
        Command::Fuzz(a) => cmd_fuzz(&a, tolerance, out),
        Command::Sweep(a) => cmd_sweep(&a, tolerance, out),
        Command::Show(a) => cmd_show(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

fn tolerance_from_env() -> Result<f64> {
    match std::env::var(TOLERANCE_ENV) {
        Err(_) => Ok(PSD_TOLERANCE),
        Ok(text) => match text.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t >= 0.0 => Ok(t),
            _ => Err(Error::InvalidArgument(format!(
                "{TOLERANCE_ENV} must be a finite non-negative number, got {text:?}"
            ))),
        },
    }
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("output error: {e}"))
}

/// Parses `named:<name>`, `random:<d>,<m>,<seed>` or a path to a frame JSON file.
pub fn load_frame(source: &str) -> Result<Frame> {
    if let Some(name) = source.strip_prefix("named:") {
        return gen::named_frame(name);
    }
    if let Some(spec) = source.strip_prefix("random:") {
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        let bad = || Error::InvalidArgument(format!("expected random:<d>,<m>,<seed>, got {source:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let d: usize = parts[0].parse().map_err(|_| bad())?;
        let m: usize = parts[1].parse().map_err(|_| bad())?;
        let seed: u64 = parts[2].parse().map_err(|_| bad())?;
        return gen::random_frame(&GenConfig::new(d, m, seed)?);
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| Error::InvalidArgument(format!("cannot read frame file {source:?}: {e}")))?;
    Frame::from_json_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{source}: {msg}")),
        other => other,
    })
}

fn parse_pair<T: std::str::FromStr>(text: &str, what: &str) -> Result<(T, T)> {
    let bad = || Error::InvalidArgument(format!("{what} must be `lo,hi`, got {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_range(text: &str, what: &str) -> Result<(f64, f64)> {
    let (lo, hi) = parse_pair::<f64>(text, what)?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidArgument(format!(
            "{what} needs finite lo ≤ hi, got {text:?}"
        )));
    }
    Ok((lo, hi))
}

fn resolve_subset(args: &SubsetArgs, m: usize) -> Result<IndexSubset> {
    match (&args.subset, args.subset_seed) {
        (Some(spec), _) => IndexSubset::parse(spec, m),
        (None, seed) => gen::random_subset(m, seed.unwrap_or(0)),
    }
}

fn check_lambdas(lambdas: &[f64]) -> Result<()> {
    match lambdas.iter().find(|l| !l.is_finite()) {
        Some(l) => Err(Error::InvalidArgument(format!("λ must be finite, got {l}"))),
        None => Ok(()),
    }
}

fn check_perturbation(p: f64) -> Result<()> {
    if p.is_finite() && p >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "perturbation must be finite and non-negative, got {p}"
        )))
    }
}

fn cmd_verify(a: &VerifyArgs, tolerance: f64, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    check_lambdas(&a.lambda)?;
    check_perturbation(a.perturbation)?;
    let pq = a.pq.as_deref().map(|t| parse_pair::<f64>(t, "--pq")).transpose()?;
    if let Some((p, q)) = pq {
        if !(p.is_finite() && q.is_finite()) {
            return Err(Error::InvalidArgument("--pq values must be finite".into()));
        }
    }
    let fr = load_frame(&a.source)?;
    let subset = resolve_subset(&a.subset, fr.count())?;
    let f = gen::random_unit_vector(fr.dim(), a.vector_seed);
    let groups: Vec<RelationGroup> = if a.relations.is_empty() {
        RelationGroup::ALL.to_vec()
    } else {
        a.relations.clone()
    };
    let needs_split = groups.iter().any(|g| {
        matches!(
            g,
            RelationGroup::Lemma | RelationGroup::T22 | RelationGroup::T27 | RelationGroup::T210
        )
    });
    let sp = if needs_split {
        Some(split_from_subset(&fr, &subset)?)
    } else {
        None
    };
    let pair = if groups.contains(&RelationGroup::Dual) {
        Some(fr.random_alternate_dual(a.vector_seed, a.perturbation)?)
    } else {
        None
    };
    let weights = gen::random_weights(fr.count(), a.vector_seed);

    let mut outcomes = Vec::new();
    for group in &groups {
        let split = || sp.as_ref().expect("split computed for splitting groups");
        match group {
            RelationGroup::Lemma => outcomes.extend(suite::lemma_suite(split(), pq, tolerance)?),
            RelationGroup::T22 | RelationGroup::T27 | RelationGroup::T210 => {
                let family = match group {
                    RelationGroup::T22 => LambdaFamily::ComplementQuadratic,
                    RelationGroup::T27 => LambdaFamily::Defect,
                    _ => LambdaFamily::QuadraticSum,
                };
                for &lambda in &a.lambda {
                    outcomes.extend(suite::family_suite(split(), family, lambda, tolerance)?);
                }
            }
            RelationGroup::Scalar => {
                for &lambda in &a.lambda {
                    outcomes.extend(suite::scalar_suite(&fr, &subset, &f, lambda, tolerance)?);
                }
            }
            RelationGroup::Parseval => outcomes.extend(suite::parseval_suite(&fr, &subset, &f, tolerance)?),
            RelationGroup::General => outcomes.extend(suite::general_suite(&fr, &subset, &f, tolerance)?),
            RelationGroup::Dual => {
                let pair = pair.as_ref().expect("dual computed for the dual group");
                outcomes.extend(suite::dual_identity_suite(pair, &subset, &f, tolerance)?);
                for &lambda in &a.lambda {
                    outcomes.extend(suite::dual_lambda_suite(
                        pair, &subset, &f, &weights, lambda, tolerance,
                    )?);
                }
            }
        }
    }

    let inputs = ReportInputs {
        frame_label: fr.label().unwrap_or("frame").to_string(),
        subset: subset.to_string(),
        seed: a.vector_seed,
    };
    let mut tally = Tally::default();
    for o in &outcomes {
        let line = ReportLine::from_outcome(o, &inputs);
        tally.add(&line);
        writeln!(out, "{}", serde_json::to_string(&line).expect("report JSON")).map_err(io)?;
    }
    let mut parameters = BTreeMap::new();
    parameters.insert("source".into(), json!(a.source));
    parameters.insert("subset".into(), json!(inputs.subset));
    parameters.insert("lambda".into(), json!(a.lambda));
    parameters.insert("vector_seed".into(), json!(a.vector_seed));
    parameters.insert("tolerance".into(), json!(tolerance));
    let manifest = RunManifest {
        command: "verify".into(),
        parameters,
        outcome_counts: tally.counts,
        worst_margin: tally.worst,
        elapsed: start.elapsed().as_secs_f64(),
        errors: Vec::new(),
    };
    let _ = writeln!(err, "{}", serde_json::to_string(&manifest).expect("manifest JSON"));
    Ok(if tally.counts.failed > 0 {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

struct FuzzPlan {
    dims: (usize, usize),
    multipliers: (f64, f64),
    lambdas: (f64, f64),
    mode: FuzzMode,
    tolerance: f64,
}

struct TrialResult {
    lines: Vec<ReportLine>,
    error: Option<String>,
}

fn run_trial(plan: &FuzzPlan, trial: u64, seed: u64) -> TrialResult {
    let mut lines = Vec::new();
    let error = fuzz_trial(plan, seed, &mut lines)
        .err()
        .map(|e| format!("trial {trial} (seed {seed}): {e}"));
    TrialResult { lines, error }
}

fn fuzz_trial(plan: &FuzzPlan, seed: u64, lines: &mut Vec<ReportLine>) -> Result<()> {
    let mut draws = rng::stream(seed, streams::DERIVE + 1);
    let d = plan.dims.0
        + (rng::uniform(&mut draws, 0.0, (plan.dims.1 - plan.dims.0 + 1) as f64) as usize)
            .min(plan.dims.1 - plan.dims.0);
    let multiplier = rng::uniform(&mut draws, plan.multipliers.0, plan.multipliers.1);
    let m = ((multiplier * d as f64).round() as usize).max(d);
    let lambda = rng::uniform(&mut draws, plan.lambdas.0, plan.lambdas.1);
    let pq = (rng::uniform(&mut draws, -2.0, 2.0), rng::uniform(&mut draws, -2.0, 2.0));
    let tol = plan.tolerance;

    let mut emit = |outcomes: Vec<LemmaOutcome>, label: &str, subset: &str| {
        let inputs = ReportInputs {
            frame_label: label.to_string(),
            subset: subset.to_string(),
            seed,
        };
        lines.extend(outcomes.iter().map(|o| ReportLine::from_outcome(o, &inputs)));
    };

    match plan.mode {
        FuzzMode::Frame => {
            let fr = gen::random_frame(&GenConfig::new(d, m, seed)?)?;
            let subset = gen::random_subset(m, seed)?;
            let f = gen::random_unit_vector(d, seed);
            let sp = split_from_subset(&fr, &subset)?;
            let mut outcomes = suite::lemma_suite(&sp, Some(pq), tol)?;
            for family in LambdaFamily::ALL {
                outcomes.extend(suite::family_suite(&sp, family, lambda, tol)?);
            }
            outcomes.extend(suite::scalar_suite(&fr, &subset, &f, lambda, tol)?);
            outcomes.extend(suite::parseval_suite(&fr, &subset, &f, tol)?);
            outcomes.extend(suite::general_suite(&fr, &subset, &f, tol)?);
            emit(outcomes, fr.label().unwrap_or("frame"), &subset.to_string());
        }
        FuzzMode::Operator => {
            let sp = gen::random_split_pair(d, seed)?;
            let mut outcomes = suite::lemma_suite(&sp, Some(pq), tol)?;
            for family in LambdaFamily::ALL {
                outcomes.extend(suite::family_suite(&sp, family, lambda, tol)?);
            }
            emit(outcomes, &format!("split({d},{seed})"), "none");
        }
        FuzzMode::Dual => {
            let fr = gen::random_frame(&GenConfig::new(d, m, seed)?)?;
            let subset = gen::random_subset(m, seed)?;
            let f = gen::random_unit_vector(d, seed);
            let perturbation = rng::uniform(&mut draws, 0.0, 2.0);
            let pair = fr.random_alternate_dual(seed, perturbation)?;
            let weights = gen::random_weights(m, seed);
            let mut outcomes = suite::dual_identity_suite(&pair, &subset, &f, tol)?;
            outcomes.extend(suite::dual_lambda_suite(&pair, &subset, &f, &weights, lambda, tol)?);
            outcomes.extend(suite::resolution_suite(&gen::random_square(d, seed), lambda, tol)?);
            emit(outcomes, pair.dual.label().unwrap_or("dual"), &subset.to_string());
        }
    }
    Ok(())
}

fn cmd_fuzz(a: &FuzzArgs, tolerance: f64, out: &mut dyn Write) -> Result<i32> {
    let start = Instant::now();
    if a.trials == 0 {
        return Err(Error::InvalidArgument("--trials must be at least 1".into()));
    }
    let dims = parse_pair::<usize>(&a.dim_range, "--dim-range")?;
    if dims.0 < 2 || dims.1 > gen::MAX_DIM || dims.0 > dims.1 {
        return Err(Error::InvalidArgument(format!(
            "--dim-range must satisfy 2 ≤ lo ≤ hi ≤ {}, got {:?}",
            gen::MAX_DIM,
            a.dim_range
        )));
    }
    let multipliers = parse_range(&a.count_multiplier_range, "--count-multiplier-range")?;
    if multipliers.0 < 1.0 {
        return Err(Error::InvalidArgument(
            "--count-multiplier-range must start at 1 or above".into(),
        ));
    }
    let lambdas = parse_range(&a.lambda_range, "--lambda-range")?;
    let plan = FuzzPlan {
        dims,
        multipliers,
        lambdas,
        mode: a.mode,
        tolerance,
    };

    let results: Vec<TrialResult> = (0..a.trials)
        .into_par_iter()
        .map(|t| run_trial(&plan, t, rng::derive_seed(a.seed, t)))
        .collect();

    let mut tally = Tally::default();
    let mut errors = Vec::new();
    for r in &results {
        for line in &r.lines {
            tally.add(line);
            if a.emit_reports {
                writeln!(out, "{}", serde_json::to_string(line).expect("report JSON")).map_err(io)?;
            }
        }
        if let Some(e) = &r.error {
            tally.counts.failed += 1;
            errors.push(e.clone());
        }
    }

    let mut parameters = BTreeMap::new();
    parameters.insert("trials".into(), json!(a.trials));
    parameters.insert("dim_range".into(), json!([dims.0, dims.1]));
    parameters.insert("count_multiplier_range".into(), json!([multipliers.0, multipliers.1]));
    parameters.insert("lambda_range".into(), json!([lambdas.0, lambdas.1]));
    parameters.insert("seed".into(), json!(a.seed));
    parameters.insert("mode".into(), json!(format!("{:?}", a.mode).to_lowercase()));
    parameters.insert("tolerance".into(), json!(tolerance));
    let manifest = RunManifest {
        command: "fuzz".into(),
        parameters,
        outcome_counts: tally.counts,
        worst_margin: tally.worst,
        elapsed: start.elapsed().as_secs_f64(),
        errors,
    };
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&manifest).expect("manifest JSON")
    )
    .map_err(io)?;
    Ok(if tally.counts.failed > 0 {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SweepRelation {
    Family(LambdaFamily, RelationId),
    Resolution,
    Dual,
    Weighted,
}

const SWEEP_NAMES: &str = "t22, t22-lower, t22-identity, t22-upper, t27, t27-nonneg, t27-upper, t210, t210-lower, \
t210-upper, t213, weighted, resolution";

fn sweep_relation(name: &str) -> Result<SweepRelation> {
    use LambdaFamily::*;
    use RelationId as R;
    Ok(match name {
        "t22" | "t22-lower" => SweepRelation::Family(ComplementQuadratic, R::ComplementQuadraticLower),
        "t22-identity" => SweepRelation::Family(ComplementQuadratic, R::ComplementQuadraticIdentity),
        "t22-upper" => SweepRelation::Family(ComplementQuadratic, R::ComplementQuadraticUpper),
        "t27-nonneg" => SweepRelation::Family(Defect, R::DefectNonneg),
        "t27" | "t27-upper" => SweepRelation::Family(Defect, R::DefectUpper),
        "t210" | "t210-lower" => SweepRelation::Family(QuadraticSum, R::QuadraticSumLower),
        "t210-upper" => SweepRelation::Family(QuadraticSum, R::QuadraticSumUpper),
        "t213" | "dual" => SweepRelation::Dual,
        "weighted" => SweepRelation::Weighted,
        "resolution" => SweepRelation::Resolution,
        "lemma" | "parseval" | "general" | "scalar" => {
            return Err(Error::InvalidArgument(format!(
                "relation {name:?} has no λ parameter; sweepable relations: {SWEEP_NAMES}"
            )))
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown relation {name:?}; sweepable relations: {SWEEP_NAMES}"
            )))
        }
    })
}

fn cmd_sweep(a: &SweepArgs, tolerance: f64, out: &mut dyn Write) -> Result<i32> {
    let relation = sweep_relation(&a.relation)?;
    if a.steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "--steps must be at least 2, got {}",
            a.steps
        )));
    }
    if !(a.lambda_min.is_finite() && a.lambda_max.is_finite() && a.lambda_min < a.lambda_max) {
        return Err(Error::InvalidArgument(format!(
            "need finite --lambda-min < --lambda-max, got {} and {}",
            a.lambda_min, a.lambda_max
        )));
    }
    check_perturbation(a.perturbation)?;
    let fr = load_frame(&a.source)?;
    let subset = resolve_subset(&a.subset, fr.count())?;
    let f = gen::random_unit_vector(fr.dim(), a.vector_seed);
    let sp: Option<SplitPair> = match relation {
        SweepRelation::Family(..) => Some(split_from_subset(&fr, &subset)?),
        _ => None,
    };
    let pair: Option<DualPair> = match relation {
        SweepRelation::Family(..) => None,
        _ => Some(fr.random_alternate_dual(a.vector_seed, a.perturbation)?),
    };
    let resolution = match (&pair, relation) {
        (Some(p), SweepRelation::Resolution) => Some(dual_resolution(p, &subset)?),
        _ => None,
    };
    let weights = gen::random_weights(fr.count(), a.vector_seed);

    writeln!(out, "lambda,margin,passed").map_err(io)?;
    let mut any_failed = false;
    for k in 0..a.steps {
        let t = k as f64 / (a.steps - 1) as f64;
        let lambda = if k + 1 == a.steps {
            a.lambda_max
        } else {
            a.lambda_min + t * (a.lambda_max - a.lambda_min)
        };
        let report = match relation {
            SweepRelation::Family(family, id) => verify_family(sp.as_ref().expect("split"), family, lambda, tolerance)?
                .report(id)
                .cloned()
                .expect("family reports every relation"),
            SweepRelation::Dual => {
                verify_dual_inequality(pair.as_ref().expect("dual"), &subset, &f, lambda, tolerance)?.report
            }
            SweepRelation::Weighted => {
                verify_weighted_dual_inequality(pair.as_ref().expect("dual"), &weights, &f, lambda, tolerance)?.report
            }
            SweepRelation::Resolution => {
                let (u, v) = resolution.as_ref().expect("resolution");
                resolution_margin(u, v, lambda, tolerance)?
            }
        };
        any_failed |= !report.passed;
        writeln!(out, "{:?},{:?},{}", lambda, report.margin, report.passed).map_err(io)?;
    }
    Ok(if any_failed { EXIT_VIOLATION } else { EXIT_OK })
}

fn format_vector(v: &CVector) -> String {
    let entries: Vec<String> = v
        .iter()
        .map(|z| {
            if z.im == 0.0 {
                format!("{:?}", z.re)
            } else {
                format!("{:?}{}{:?}i", z.re, if z.im < 0.0 { "-" } else { "+" }, z.im.abs())
            }
        })
        .collect();
    format!("[{}]", entries.join(", "))
}

fn cmd_show(a: &ShowArgs, out: &mut dyn Write) -> Result<i32> {
    let fr = load_frame(&a.source)?;
    if a.json {
        writeln!(out, "{}", fr.to_json_string()).map_err(io)?;
        return Ok(EXIT_OK);
    }
    let bounds = fr.frame_bounds();
    let pair = fr.canonical_dual()?;
    let mut text = String::new();
    text.push_str(&format!("label: {}\n", fr.label().unwrap_or("-")));
    text.push_str(&format!("dim: {}\ncount: {}\n", fr.dim(), fr.count()));
    text.push_str(&format!(
        "frame bounds: lower={:?} upper={:?} ratio={:?}\n",
        bounds.lower,
        bounds.upper,
        bounds.ratio()
    ));
    text.push_str(&format!("parseval deviation: {:?}\n", fr.parseval_deviation()?));
    let shown = a.preview.min(fr.count());
    text.push_str(&format!("canonical dual ({shown} of {}):\n", fr.count()));
    for k in 0..shown {
        text.push_str(&format!("  g{k} = {}\n", format_vector(&pair.dual.vector(k))));
    }
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(EXIT_OK)
}
