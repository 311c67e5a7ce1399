//! The `kronadapt` command-line tool.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 numerical failure or divergence.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::adapters::{
    build_adapter, enumerate_factor_pairs, lokr_factorization, manifest_param_breakdown,
    AdapterFamily, AdapterSpec, DownInit, InitScheme, UpInit,
};
use crate::error::Error;
use crate::io::{
    checkpoint_to_json, history_to_csv, load_embeddings, load_manifest, load_train_config,
    LayerManifest, TrainRunConfig,
};
use crate::kron::{
    dense_matvec_counted, kron_materialize_with_budget, kron_matvec_counted,
    materialized_multiply_adds, structured_multiply_adds, OpCounter, DEFAULT_ELEMENT_BUDGET,
};
use crate::matrix::{DenseMatrix, DenseVector};
use crate::metrics::{image_alignment_score, text_alignment_score, EmbeddingRole};
use crate::training::{
    adapter_gradients, adapter_gradients_fd, flatten_factors, relative_error, run_teacher_student,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Environment variable overriding the materialization element budget.
pub const ELEMENT_BUDGET_ENV: &str = "KRONADAPT_ELEMENT_BUDGET";

#[derive(Debug, Parser)]
#[command(name = "kronadapt", version, about = "Kronecker-product adapter toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trainable-parameter budget for a layer manifest, as CSV.
    Plan(PlanArgs),
    /// LoKr factorization of one dimension.
    Factorize(FactorizeArgs),
    /// Teacher-student fine-tuning run on the toy attention block.
    Train(TrainArgs),
    /// Compare analytic adapter gradients with central finite differences.
    GradCheck(GradCheckArgs),
    /// Alignment scores over embedding files.
    EvalMetrics(EvalArgs),
    /// Time structured vs materialized Kronecker matvec.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, default_value = "krona")]
    pub family: AdapterFamily,
    #[arg(long)]
    pub a1: Option<usize>,
    #[arg(long)]
    pub a2: Option<usize>,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub factor: Option<i64>,
    /// LoKr: keep the second block undecomposed.
    #[arg(long)]
    pub full_second_block: bool,
    /// Enumerate every admissible configuration (krona, lora).
    #[arg(long)]
    pub sweep: bool,
}

#[derive(Debug, Args)]
pub struct FactorizeArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    pub factor: i64,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// JSON run config; defaults apply to any missing field.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output CSV of per-step losses.
    #[arg(long)]
    pub out: PathBuf,
    /// Output adapter checkpoint.
    #[arg(long)]
    pub ckpt: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct GradCheckArgs {
    #[arg(long, default_value = "krona")]
    pub family: AdapterFamily,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub tolerance: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Negative control: perturb the analytic gradient before comparing.
    #[arg(long, hide = true)]
    pub corrupt_gradient: bool,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Reference-image embeddings (CLIP space).
    #[arg(long)]
    pub real: PathBuf,
    /// Generated-image embeddings (CLIP space).
    #[arg(long)]
    pub gen: PathBuf,
    /// Prompt embeddings, index-aligned with `--gen`.
    #[arg(long)]
    pub prompts: Option<PathBuf>,
    /// Reference-image embeddings in DINO space.
    #[arg(long, requires = "dino_gen")]
    pub dino_real: Option<PathBuf>,
    /// Generated-image embeddings in DINO space.
    #[arg(long, requires = "dino_real")]
    pub dino_gen: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub a1: usize,
    #[arg(long)]
    pub a2: usize,
    #[arg(long)]
    pub b1: usize,
    #[arg(long)]
    pub b2: usize,
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub reps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Element budget for the materialized side; falls back to
    /// `KRONADAPT_ELEMENT_BUDGET`, then 2^26.
    #[arg(long)]
    pub budget: Option<usize>,
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn numeric(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERIC,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DivergenceDetected { .. } | Error::NonFinite(_) => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(e.to_string())
    }
}

type CmdResult = std::result::Result<(), CliError>;

/// Runs one parsed command, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Plan(a) => cmd_plan(&a, out, err),
        Command::Factorize(a) => cmd_factorize(&a, out),
        Command::Train(a) => cmd_train(&a, out, err),
        Command::GradCheck(a) => cmd_grad_check(&a, out),
        Command::EvalMetrics(a) => cmd_eval_metrics(&a, out),
        Command::Bench(a) => cmd_bench(&a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

/// Parses `args` (including the program name) and runs the command. Clap
/// usage errors map to exit code 2; `--help`/`--version` to 0.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            code
        }
    }
}

fn plan_template(args: &PlanArgs) -> AdapterSpec {
    let mut spec = match args.family {
        AdapterFamily::Krona => AdapterSpec::krona(1, 1, args.a1.unwrap_or(0), args.a2.unwrap_or(0)),
        AdapterFamily::Lora => AdapterSpec::lora(1, 1, args.rank.unwrap_or(0)),
        AdapterFamily::Lokr => AdapterSpec::lokr(1, 1, args.factor.unwrap_or(-1), args.rank.unwrap_or(0)),
        AdapterFamily::Loha => AdapterSpec::loha(1, 1, args.rank.unwrap_or(0)),
    };
    spec.lokr_full_second_block = args.full_second_block;
    spec
}

struct PlanRow {
    key: Vec<String>,
    total: usize,
    per_layer: Vec<usize>,
}

fn plan_key_columns(family: AdapterFamily) -> &'static [&'static str] {
    match family {
        AdapterFamily::Krona => &["a1", "a2"],
        AdapterFamily::Lora | AdapterFamily::Loha => &["rank"],
        AdapterFamily::Lokr => &["factor", "rank"],
    }
}

fn plan_key(spec: &AdapterSpec) -> Vec<String> {
    let opt = |v: Option<usize>| v.map_or_else(|| "full".to_string(), |x| x.to_string());
    match spec.family {
        AdapterFamily::Krona => vec![opt(spec.a1), opt(spec.a2)],
        AdapterFamily::Lora | AdapterFamily::Loha => vec![opt(spec.rank)],
        AdapterFamily::Lokr => {
            let rank = if spec.lokr_full_second_block { None } else { spec.rank };
            vec![spec.factor.unwrap_or(-1).to_string(), opt(rank)]
        }
    }
}

fn sweep_candidates(manifest: &LayerManifest, family: AdapterFamily) -> std::result::Result<Vec<AdapterSpec>, CliError> {
    match family {
        AdapterFamily::Krona => {
            let mut pairs: Vec<(usize, usize)> = manifest
                .layers
                .iter()
                .flat_map(|l| enumerate_factor_pairs(l.d, l.h))
                .collect();
            pairs.sort_unstable();
            pairs.dedup();
            Ok(pairs.into_iter().map(|(a1, a2)| AdapterSpec::krona(1, 1, a1, a2)).collect())
        }
        AdapterFamily::Lora => {
            let max = manifest.layers.iter().map(|l| l.d.min(l.h)).max().unwrap_or(0);
            Ok((1..=max).map(|r| AdapterSpec::lora(1, 1, r)).collect())
        }
        other => Err(CliError::usage(format!("--sweep is supported for krona and lora, not {other}"))),
    }
}

pub fn cmd_plan(args: &PlanArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let manifest = load_manifest(&args.manifest)?;
    let candidates = if args.sweep {
        sweep_candidates(&manifest, args.family)?
    } else {
        vec![plan_template(args)]
    };
    let mut rows = Vec::new();
    for spec in candidates {
        match manifest_param_breakdown(&manifest, &spec) {
            Ok((total, per_layer)) => rows.push(PlanRow {
                key: plan_key(&spec),
                total,
                per_layer,
            }),
            Err(e) if args.sweep => {
                writeln!(err, "skipped {}: {e}", plan_key(&spec).join(","))?;
            }
            Err(e) => return Err(e.into()),
        }
    }
    rows.sort_by(|a, b| {
        let numeric = |k: &[String]| k.iter().map(|s| s.parse::<i64>().unwrap_or(i64::MAX)).collect::<Vec<_>>();
        (a.total, numeric(&a.key)).cmp(&(b.total, numeric(&b.key)))
    });
    let mut header: Vec<String> = plan_key_columns(args.family).iter().map(|s| s.to_string()).collect();
    header.push("total_params".into());
    header.extend(manifest.layers.iter().map(|l| l.layer_name.clone()));
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let mut cells = row.key;
        cells.push(row.total.to_string());
        cells.extend(row.per_layer.iter().map(|c| c.to_string()));
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn cmd_factorize(args: &FactorizeArgs, out: &mut dyn Write) -> CmdResult {
    if args.dim == 0 {
        return Err(CliError::usage("--dim must be positive"));
    }
    if args.factor == 0 {
        return Err(CliError::usage("--factor must be positive or -1"));
    }
    let (m, n) = lokr_factorization(args.dim, args.factor);
    writeln!(out, "({m}, {n})")?;
    Ok(())
}

pub fn cmd_train(args: &TrainArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let mut cfg = match &args.config {
        Some(path) => load_train_config(path)?,
        None => TrainRunConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.train.seed = seed;
    }
    if cfg.task.student.init.is_nonstandard() {
        writeln!(err, "warning: normal_s2 initialization uses std = sqrt(min(d, h)), far wider than usual")?;
    }
    let report = run_teacher_student(&cfg.task, &cfg.train)?;
    for p in crate::training::Projection::ALL {
        if report.student.base(p) != report.base_before.base(p) {
            return Err(CliError::numeric(format!("base weight {} changed during training", p.as_str())));
        }
    }
    std::fs::write(&args.out, history_to_csv(&report.history.losses))?;
    if let Some(path) = &args.ckpt {
        let states: BTreeMap<String, _> = report
            .student
            .adapters()
            .iter()
            .map(|(p, s)| (p.as_str().to_string(), s.clone()))
            .collect();
        std::fs::write(path, checkpoint_to_json(&states))?;
    }
    writeln!(out, "steps,{}", report.history.losses.len())?;
    writeln!(out, "initial_eval_loss,{}", report.initial_eval_loss)?;
    writeln!(out, "final_eval_loss,{}", report.final_eval_loss)?;
    writeln!(out, "loss_ratio,{}", report.loss_ratio())?;
    for md in &report.history.module_deltas {
        writeln!(out, "delta_{},{}", md.layer_name, md.delta)?;
    }
    Ok(())
}

/// Random small adapter spec for gradient auditing.
pub fn random_grad_check_spec(family: AdapterFamily, rng: &mut ChaCha8Rng) -> AdapterSpec {
    let init = InitScheme::new(DownInit::NormalS1, UpInit::Same);
    let scale = rng.gen_range(0.5..2.0);
    let seed = rng.gen();
    let spec = match family {
        AdapterFamily::Krona => {
            let (a1, a2, b1, b2) = (
                rng.gen_range(1..=4),
                rng.gen_range(1..=4),
                rng.gen_range(1..=4),
                rng.gen_range(1..=4),
            );
            AdapterSpec::krona(a1 * b1, a2 * b2, a1, a2)
        }
        AdapterFamily::Lora | AdapterFamily::Loha => {
            let (d, h) = (rng.gen_range(2..=8), rng.gen_range(2..=8));
            let r = rng.gen_range(1..=usize::min(d, h));
            if family == AdapterFamily::Lora {
                AdapterSpec::lora(d, h, r)
            } else {
                AdapterSpec::loha(d, h, r)
            }
        }
        AdapterFamily::Lokr => {
            let (d, h) = (rng.gen_range(2..=12), rng.gen_range(2..=12));
            let factor = if rng.gen_bool(0.5) { -1 } else { rng.gen_range(1..=4) };
            let (_, nd) = lokr_factorization(d, factor);
            let (_, nh) = lokr_factorization(h, factor);
            AdapterSpec::lokr(d, h, factor, rng.gen_range(1..=nd.min(nh)))
        }
    };
    spec.with_init(init).with_scale(scale).with_seed(seed)
}

fn random_unit_vector(rng: &mut ChaCha8Rng, n: usize) -> DenseVector {
    DenseVector::new((0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).expect("finite")
}

/// One gradient-audit trial: returns the relative error and the instance.
pub fn grad_check_trial(
    family: AdapterFamily,
    rng: &mut ChaCha8Rng,
    step: f64,
    corrupt: bool,
) -> crate::Result<(f64, serde_json::Value)> {
    let spec = random_grad_check_spec(family, rng);
    let state = build_adapter(&spec)?;
    let x = random_unit_vector(rng, state.h());
    let upstream = random_unit_vector(rng, state.d());
    let grads = adapter_gradients(&state, &x, &upstream)?;
    let mut analytic = flatten_factors(&grads.iter().collect::<Vec<_>>());
    if corrupt {
        analytic[0] += 0.1 + analytic[0].abs();
    }
    let fd = adapter_gradients_fd(&state, &x, &upstream, step);
    let err = relative_error(&analytic, &fd);
    let instance = json!({
        "spec": spec,
        "x": x.data(),
        "upstream": upstream.data(),
        "relative_error": err,
    });
    Ok((err, instance))
}

pub fn cmd_grad_check(args: &GradCheckArgs, out: &mut dyn Write) -> CmdResult {
    if !(args.step > 0.0) {
        return Err(CliError::usage("--step must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst: Option<(f64, serde_json::Value)> = None;
    for _ in 0..args.trials {
        let (err, instance) = grad_check_trial(args.family, &mut rng, args.step, args.corrupt_gradient)?;
        if worst.as_ref().map_or(true, |(w, _)| err > *w) {
            worst = Some((err, instance));
        }
    }
    let (max_err, instance) = worst.expect("at least one trial");
    writeln!(out, "family,trials,max_relative_error,tolerance")?;
    writeln!(out, "{},{},{:e},{:e}", args.family, args.trials, max_err, args.tolerance)?;
    if max_err <= args.tolerance {
        Ok(())
    } else {
        writeln!(out, "worst_instance,{instance}")?;
        Err(CliError::numeric(format!(
            "gradient check failed: relative error {max_err:e} exceeds {:e}",
            args.tolerance
        )))
    }
}

pub fn cmd_eval_metrics(args: &EvalArgs, out: &mut dyn Write) -> CmdResult {
    let real = load_embeddings(&args.real, EmbeddingRole::ReferenceImages)?;
    let gen = load_embeddings(&args.gen, EmbeddingRole::GeneratedImages)?;
    let mut scores = vec![("clip_i", image_alignment_score(&real, &gen)?)];
    if let (Some(dr), Some(dg)) = (&args.dino_real, &args.dino_gen) {
        let dr = load_embeddings(dr, EmbeddingRole::ReferenceImages)?;
        let dg = load_embeddings(dg, EmbeddingRole::GeneratedImages)?;
        scores.push(("dino", image_alignment_score(&dr, &dg)?));
    }
    if let Some(p) = &args.prompts {
        let prompts = load_embeddings(p, EmbeddingRole::Prompts)?;
        scores.push(("clip_t", text_alignment_score(&gen, &prompts)?));
    }
    writeln!(out, "metric,value")?;
    for (name, v) in scores {
        writeln!(out, "{name},{v:.4}")?;
    }
    Ok(())
}

/// One timed method in a benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub method: &'static str,
    /// `None` when the method was refused (element budget).
    pub median_ns: Option<u128>,
    /// f64 elements allocated per call, including any materialized matrix.
    pub allocations_estimate: u64,
    /// Multiply-adds counted during one call.
    pub multiply_adds: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub shape: (usize, usize, usize, usize),
    pub rows: Vec<BenchRow>,
    /// Max relative difference between methods, when both ran.
    pub max_relative_diff: Option<f64>,
    /// Set when the materialized side was refused.
    pub overflow: Option<Error>,
}

fn element_budget(flag: Option<usize>) -> std::result::Result<usize, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(ELEMENT_BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{ELEMENT_BUDGET_ENV} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_ELEMENT_BUDGET),
    }
}

fn median(mut samples: Vec<u128>) -> u128 {
    samples.sort_unstable();
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2
    }
}

/// Times the structured product and, when within budget, the dense product
/// against the materialized matrix. Results are checked for agreement (1e-10
/// relative) before any timing happens.
pub fn run_bench(
    shape: (usize, usize, usize, usize),
    reps: usize,
    seed: u64,
    budget: usize,
) -> std::result::Result<BenchReport, CliError> {
    let (a1, a2, b1, b2) = shape;
    if [a1, a2, b1, b2].contains(&0) || reps == 0 {
        return Err(CliError::usage("shapes and --reps must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rand_mat = |r, c| DenseMatrix::from_fn(r, c, |_, _| rng.gen_range(-1.0..1.0));
    let a = rand_mat(a1, a2);
    let b = rand_mat(b1, b2);
    let x = DenseVector::new((0..a2 * b2).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .expect("finite");

    let mut counter = OpCounter::default();
    let structured = kron_matvec_counted(&a, &b, &x, &mut counter)?;
    let structured_madds = counter.multiply_adds;
    debug_assert_eq!(structured_madds, structured_multiply_adds(a1, a2, b1, b2));

    let (dense, overflow) = match kron_materialize_with_budget(&a, &b, budget) {
        Ok(m) => (Some(m), None),
        Err(e @ Error::SizeOverflow { .. }) => (None, Some(e)),
        Err(e) => return Err(e.into()),
    };
    let mut max_relative_diff = None;
    let mut dense_madds = materialized_multiply_adds(a1, a2, b1, b2);
    if let Some(m) = &dense {
        let mut c = OpCounter::default();
        let reference = dense_matvec_counted(m, &x, &mut c)?;
        dense_madds = c.multiply_adds;
        let diff = structured.sub(&reference)?.max_abs() / (1.0 + reference.max_abs());
        if diff > 1e-10 {
            return Err(CliError::numeric(format!(
                "structured and materialized products disagree (relative diff {diff:e})"
            )));
        }
        max_relative_diff = Some(diff);
    }

    let time = |f: &dyn Fn() -> DenseVector| -> u128 {
        let samples = (0..reps)
            .map(|_| {
                let t = Instant::now();
                std::hint::black_box(f());
                t.elapsed().as_nanos()
            })
            .collect();
        median(samples)
    };
    let structured_ns = time(&|| {
        crate::kron::kron_matvec(std::hint::black_box(&a), &b, std::hint::black_box(&x))
            .expect("shapes checked")
    });
    let dense_ns = dense.as_ref().map(|m| {
        time(&|| std::hint::black_box(m).matvec(std::hint::black_box(&x)).expect("shapes checked"))
    });
    let rows = vec![
        BenchRow {
            method: "structured",
            median_ns: Some(structured_ns),
            allocations_estimate: (b2 * a1 + b1 * a1) as u64,
            multiply_adds: structured_madds,
        },
        BenchRow {
            method: "materialized",
            median_ns: dense_ns,
            allocations_estimate: (a1 * b1 * a2 * b2 + a1 * b1) as u64,
            multiply_adds: dense_madds,
        },
    ];
    Ok(BenchReport {
        shape,
        rows,
        max_relative_diff,
        overflow,
    })
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let budget = element_budget(args.budget)?;
    let shape = (args.a1, args.a2, args.b1, args.b2);
    let report = run_bench(shape, args.reps as usize, args.seed, budget)?;
    if let Some(e) = &report.overflow {
        writeln!(err, "materialized: {e}")?;
    }
    let shape = format!("{}x{}x{}x{}", args.a1, args.a2, args.b1, args.b2);
    writeln!(out, "method,shape,median_ns,allocations_estimate,multiply_adds")?;
    for row in &report.rows {
        let ns = row
            .median_ns
            .map_or_else(|| "size_overflow".to_string(), |n| n.to_string());
        writeln!(
            out,
            "{},{},{},{},{}",
            row.method, shape, ns, row.allocations_estimate, row.multiply_adds
        )?;
    }
    Ok(())
}
