//! Command-line entry points.
//!
//! Exit codes: 0 success or feasible, 1 infeasible, 2 usage error, 3 I/O or
//! schema error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::error::IoError;
use crate::evolve::{run, run_crem, RunParams, RunResult};
use crate::instances::{
    generate, generate_tiny, load_instance, load_schedules, save_instance, save_schedules, write_csv,
    Family, FinalWeightRow, FrontRow, HvRow, ResultRow, ScheduleRecord, SummaryRow, WeightRow,
};
use crate::metrics::{front_stats, hypervolume_hso, hypervolume_mc};
use crate::model::{validate_schedule, Instance, Millis, ObjectivePoint, SolveMode};
use crate::neighborhood::{DestroyOp, RepairOp, TabooPolicy};
use crate::oracle::exact_front;

#[derive(Debug, Parser)]
#[command(name = "sidsp", version, about = "Satellite image data downlink scheduling")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Solve one instance and write its front, traces and schedules.
    Solve(SolveArgs),
    /// Run a seeded benchmark and write summary CSVs.
    Bench(BenchArgs),
    /// Hypervolume of a front CSV, times 1000.
    Hv(HvArgs),
    /// Check every schedule of a schedule file against an instance.
    Validate(ValidateArgs),
    /// Exhaustive front of a tiny instance.
    #[command(hide = true)]
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Desk-size instance for the exhaustive solver; `--n` caps the data.
    #[arg(long, hide = true)]
    tiny: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = SolveMode::default())]
    mode: SolveMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    iters: usize,
    #[arg(long, value_enum, default_value_t = Algo::AlnsNsga2)]
    algo: Algo,
    #[arg(long, default_value_t = 100)]
    ns: usize,
    #[arg(long, default_value_t = 100)]
    na: usize,
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    family: Family,
    /// Comma-separated data counts.
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// `all` or a comma-separated list of modes.
    #[arg(long, default_value = "all")]
    modes: String,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "alns-nsga2")]
    algo: Vec<Algo>,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    /// Base seed; run k uses `base + k`.
    #[arg(long, default_value_t = 0)]
    seeds: u64,
    #[arg(long, default_value_t = 200)]
    iters: usize,
    #[arg(long, default_value_t = 100)]
    ns: usize,
    #[arg(long, default_value_t = 100)]
    na: usize,
    #[arg(long, value_enum, default_value_t = Study::None)]
    study: Study,
    #[arg(long, env = "SIDSP_JOBS", default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct HvArgs {
    #[arg(long)]
    front: PathBuf,
    #[arg(long = "ref", value_delimiter = ',', default_value = "1,1")]
    reference: Vec<f64>,
    /// Monte-Carlo samples for a cross-check.
    #[arg(long)]
    mc: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    schedule: PathBuf,
    #[arg(long, default_value_t = SolveMode::default())]
    mode: SolveMode,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = SolveMode::default())]
    mode: SolveMode,
    /// Segment grid in seconds.
    #[arg(long)]
    grid: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    AlnsNsga2,
    Crem,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::AlnsNsga2 => "alns-nsga2",
            Algo::Crem => "crem",
        }
    }

    pub fn run(self, instance: &Instance, mode: SolveMode, params: &RunParams) -> RunResult {
        match self {
            Algo::AlnsNsga2 => run(instance, mode, params),
            Algo::Crem => run_crem(instance, mode, params),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Study {
    /// Default parameters only.
    None,
    /// Static taboo ratios against adaptive upper bounds.
    Taboo,
    /// Reaction factors.
    Lambda,
}

impl Study {
    fn name(self) -> &'static str {
        match self {
            Study::None => "none",
            Study::Taboo => "taboo",
            Study::Lambda => "lambda",
        }
    }

    /// Labelled parameter sets swept by the study.
    pub fn settings(self, base: &RunParams) -> Vec<(String, RunParams)> {
        let tenths = |from: u32| (from..=10).map(|k| k as f64 / 10.0);
        match self {
            Study::None => vec![("default".into(), base.clone())],
            Study::Taboo => tenths(0)
                .map(|tr| (format!("static:{tr:.1}"), RunParams { taboo: TabooPolicy::Static(tr), ..base.clone() }))
                .chain(tenths(1).map(|max| {
                    (format!("adaptive:{max:.1}"), RunParams { taboo: TabooPolicy::Adaptive { max }, ..base.clone() })
                }))
                .collect(),
            Study::Lambda => tenths(0)
                .map(|lambda| (format!("lambda:{lambda:.1}"), RunParams { lambda, ..base.clone() }))
                .collect(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error("{0} infeasible schedule(s)")]
    Infeasible(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Infeasible(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

fn io_error(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io(IoError::Io { path: path.display().to_string(), source })
}

/// Parses `all` or a comma-separated list of modes.
pub fn parse_modes(s: &str) -> Result<Vec<SolveMode>, CliError> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(SolveMode::ALL.to_vec());
    }
    s.split(',').map(|m| m.parse().map_err(|e| CliError::Usage(format!("{e}")))).collect()
}

/// One benchmark: every size, setting, mode and algorithm, each restarted.
#[derive(Clone, Debug)]
pub struct BenchPlan {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub modes: Vec<SolveMode>,
    pub algos: Vec<Algo>,
    pub restarts: usize,
    pub base_seed: u64,
    pub params: RunParams,
    pub study: Study,
}

#[derive(Clone, Debug, Default)]
pub struct BenchOutput {
    pub runs: Vec<ResultRow>,
    pub summary: Vec<SummaryRow>,
    pub weights: Vec<FinalWeightRow>,
}

/// Runs a plan on up to `jobs` threads. Instances are generated from the
/// base seed; restart `k` of every configuration uses seed `base + k`, so
/// configurations are paired run by run.
pub fn bench(plan: &BenchPlan, jobs: usize) -> BenchOutput {
    struct Job<'a> {
        instance: &'a Instance,
        size: usize,
        setting: String,
        params: RunParams,
        mode: SolveMode,
        algo: Algo,
        run_id: usize,
    }
    let instances: Vec<Instance> = plan.sizes.iter().map(|&n| generate(plan.family, n, plan.base_seed)).collect();
    let mut jobs_list = Vec::new();
    for (instance, &size) in instances.iter().zip(&plan.sizes) {
        for (setting, params) in plan.study.settings(&plan.params) {
            for &mode in &plan.modes {
                for &algo in &plan.algos {
                    for run_id in 0..plan.restarts {
                        let params = RunParams { seed: plan.base_seed + run_id as u64, ..params.clone() };
                        jobs_list.push(Job { instance, size, setting: setting.clone(), params, mode, algo, run_id });
                    }
                }
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    let results: Vec<(ResultRow, Vec<FinalWeightRow>)> = pool.install(|| {
        jobs_list
            .par_iter()
            .map(|job| {
                let result = job.algo.run(job.instance, job.mode, &job.params);
                let (v1, v2) = front_stats(&result.points()).expect("fronts are never empty");
                let row = ResultRow {
                    study: plan.study.name().into(),
                    family: plan.family.to_string(),
                    size: job.size,
                    mode: job.mode.to_string(),
                    algo: job.algo.name().into(),
                    setting: job.setting.clone(),
                    run_id: job.run_id,
                    seed: job.params.seed,
                    hv: result.final_hv() * 1000.0,
                    v1,
                    v2,
                };
                let last = result.trace.last().expect("trace has the initial row");
                let names = DestroyOp::ALL.iter().map(|o| o.name()).chain(RepairOp::ALL.iter().map(|o| o.name()));
                let values = last.destroy_weights.iter().chain(&last.repair_weights);
                let weights = names
                    .zip(values)
                    .map(|(op, &weight)| FinalWeightRow {
                        setting: format!("{}|{}|{}|{}", job.size, job.mode, job.algo.name(), job.setting),
                        run_id: job.run_id,
                        operator: op.into(),
                        weight,
                    })
                    .collect();
                (row, weights)
            })
            .collect()
    });
    let (runs, weights): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    let summary = summarize(&runs);
    BenchOutput { runs, summary, weights: weights.into_iter().flatten().collect() }
}

/// Means over restarts per configuration, in first-seen order.
pub fn summarize(runs: &[ResultRow]) -> Vec<SummaryRow> {
    let mut groups: Vec<(SummaryRow, Vec<&ResultRow>)> = Vec::new();
    for r in runs {
        let key = |s: &SummaryRow| {
            s.study == r.study
                && s.family == r.family
                && s.size == r.size
                && s.mode == r.mode
                && s.algo == r.algo
                && s.setting == r.setting
        };
        match groups.iter_mut().find(|(s, _)| key(s)) {
            Some((_, members)) => members.push(r),
            None => groups.push((
                SummaryRow {
                    study: r.study.clone(),
                    family: r.family.clone(),
                    size: r.size,
                    mode: r.mode.clone(),
                    algo: r.algo.clone(),
                    setting: r.setting.clone(),
                    restarts: 0,
                    hv: 0.0,
                    hv_sd: 0.0,
                    v1: 0.0,
                    v2: 0.0,
                },
                vec![r],
            )),
        }
    }
    groups
        .into_iter()
        .map(|(mut s, members)| {
            let n = members.len() as f64;
            let mean = |f: fn(&ResultRow) -> f64| members.iter().map(|r| f(r)).sum::<f64>() / n;
            s.restarts = members.len();
            s.hv = mean(|r| r.hv);
            s.v1 = mean(|r| r.v1);
            s.v2 = mean(|r| r.v2);
            s.hv_sd = if members.len() > 1 {
                (members.iter().map(|r| (r.hv - s.hv).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            s
        })
        .collect()
}

/// Hypervolume times 1000, rounded to six decimals.
pub fn format_hv(hv: f64) -> String {
    format!("{:?}", (hv * 1000.0 * 1e6).round() / 1e6)
}

fn sorted_front(result: &RunResult) -> Vec<(ObjectivePoint<f64>, usize)> {
    let mut front: Vec<_> = result.front.iter().enumerate().map(|(k, i)| (i.objectives, k)).collect();
    front.sort_by(|a, b| a.0.f1.total_cmp(&b.0.f1).then(a.0.f2.total_cmp(&b.0.f2)));
    front
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))
}

fn cmd_gen(args: GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let instance = if args.tiny { generate_tiny(args.seed, args.n, 3) } else { generate(args.family, args.n, args.seed) };
    save_instance(&instance, &args.out)?;
    writeln!(out, "{} data, {} windows -> {}", instance.data().len(), instance.windows().len(), args.out.display())
        .ok();
    Ok(())
}

fn cmd_solve(args: SolveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.ns == 0 || args.na == 0 {
        return Err(CliError::Usage("population and archive sizes must be positive".into()));
    }
    let instance = load_instance(&args.instance)?;
    let params =
        RunParams { ns: args.ns, na: args.na, max_iter: args.iters, lambda: args.lambda, seed: args.seed, ..Default::default() };
    let result = args.algo.run(&instance, args.mode, &params);
    create_dir(&args.out)?;
    let front = sorted_front(&result);
    let rows: Vec<FrontRow> = front.iter().map(|(p, _)| FrontRow { f1: p.f1, f2: p.f2 }).collect();
    write_csv(&args.out.join("front.csv"), &rows)?;
    let hv: Vec<HvRow> = result.trace.iter().cloned().map(HvRow).collect();
    write_csv(&args.out.join("trace.csv"), &hv)?;
    let weights: Vec<WeightRow> = result.trace.iter().cloned().map(WeightRow).collect();
    write_csv(&args.out.join("weights.csv"), &weights)?;
    let records: Vec<ScheduleRecord> = front
        .iter()
        .map(|&(objectives, k)| ScheduleRecord { objectives, schedule: result.front[k].schedule(&instance) })
        .collect();
    save_schedules(&records, &args.out.join("schedules.json"))?;
    writeln!(out, "{} points, hv {}", rows.len(), format_hv(result.final_hv())).ok();
    Ok(())
}

fn cmd_bench(args: BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.ns == 0 || args.na == 0 || args.restarts == 0 {
        return Err(CliError::Usage("population, archive and restart counts must be positive".into()));
    }
    let plan = BenchPlan {
        family: args.family,
        sizes: args.sizes,
        modes: parse_modes(&args.modes)?,
        algos: args.algo,
        restarts: args.restarts,
        base_seed: args.seeds,
        params: RunParams { ns: args.ns, na: args.na, max_iter: args.iters, ..Default::default() },
        study: args.study,
    };
    let result = bench(&plan, args.jobs);
    create_dir(&args.out)?;
    write_csv(&args.out.join("summary.csv"), &result.summary)?;
    write_csv(&args.out.join("runs.csv"), &result.runs)?;
    write_csv(&args.out.join("weights.csv"), &result.weights)?;
    for s in &result.summary {
        writeln!(out, "{}-{} {} {} {}: hv {:.3} v1 {:.4} v2 {:.4}", s.family, s.size, s.mode, s.algo, s.setting, s.hv, s.v1, s.v2)
            .ok();
    }
    Ok(())
}

fn cmd_hv(args: HvArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let &[r1, r2] = args.reference.as_slice() else {
        return Err(CliError::Usage("--ref takes two comma-separated values".into()));
    };
    let reference = ObjectivePoint::new(r1, r2);
    let front = crate::instances::read_front_csv(&args.front)?;
    let invalid = |e: crate::error::MetricsError| CliError::Io(IoError::Malformed(e.to_string()));
    let hv = hypervolume_hso(&front, &reference).map_err(invalid)?;
    writeln!(out, "{}", format_hv(hv)).ok();
    if let Some(samples) = args.mc {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let mc = hypervolume_mc(&front, &reference, samples, &mut rng).map_err(invalid)?;
        writeln!(out, "mc {} se {}", format_hv(mc.value), format_hv(mc.std_error)).ok();
    }
    Ok(())
}

fn cmd_validate(args: ValidateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let instance = load_instance(&args.instance)?;
    let records = load_schedules(&args.schedule)?;
    let mut infeasible = 0;
    for (k, record) in records.iter().enumerate() {
        let violations = validate_schedule(&instance, &record.schedule, args.mode)
            .map_err(|e| CliError::Io(IoError::DanglingId(e.to_string())))?;
        if violations.is_empty() {
            writeln!(out, "schedule {k}: feasible").ok();
        } else {
            infeasible += 1;
            writeln!(out, "schedule {k}: {} violation(s)", violations.len()).ok();
            for v in violations {
                writeln!(out, "  {v}").ok();
            }
        }
    }
    if infeasible > 0 {
        Err(CliError::Infeasible(infeasible))
    } else {
        Ok(())
    }
}

fn cmd_oracle(args: OracleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let instance = load_instance(&args.instance)?;
    let front = exact_front(&instance, args.mode, Millis::from_secs(args.grid))
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let rows: Vec<FrontRow> = front.iter().map(|p| FrontRow { f1: p.f1, f2: p.f2 }).collect();
    write_csv(&args.out, &rows)?;
    writeln!(out, "{} points", rows.len()).ok();
    Ok(())
}

/// Runs the CLI on `args`, writing reports to `out`; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Solve(a) => cmd_solve(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Hv(a) => cmd_hv(a, out),
        Command::Validate(a) => cmd_validate(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hv_formatting() {
        assert_eq!(format_hv(0.48), "480.0");
        assert_eq!(format_hv(0.25), "250.0");
        assert_eq!(format_hv(0.1234567891), "123.456789");
    }

    #[test]
    fn modes_parse() {
        assert_eq!(parse_modes("all").unwrap().len(), 4);
        assert_eq!(parse_modes("unsegment:fofd").unwrap(), vec![SolveMode::UNSEGMENT_FOFD]);
        assert!(matches!(parse_modes("segment:sideways"), Err(CliError::Usage(_))));
    }

    #[test]
    fn study_settings() {
        let base = RunParams::default();
        assert_eq!(Study::None.settings(&base).len(), 1);
        let taboo = Study::Taboo.settings(&base);
        assert_eq!(taboo.len(), 21);
        assert_eq!(taboo[0].1.taboo, TabooPolicy::Static(0.0));
        assert_eq!(taboo[20].0, "adaptive:1.0");
        let lambda = Study::Lambda.settings(&base);
        assert_eq!(lambda.len(), 11);
        assert_eq!(lambda[3].1.lambda, 0.3);
    }

    #[test]
    fn summary_means() {
        let row = |run_id, hv| ResultRow {
            study: "none".into(),
            family: "ND".into(),
            size: 5,
            mode: "segment:rearrange".into(),
            algo: "crem".into(),
            setting: "default".into(),
            run_id,
            seed: run_id as u64,
            hv,
            v1: 0.5,
            v2: 0.25,
        };
        let s = summarize(&[row(0, 400.0), row(1, 500.0)]);
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].restarts, s[0].hv, s[0].v1), (2, 450.0, 0.5));
        assert!((s[0].hv_sd - 70.71067811865476).abs() < 1e-9);
    }

    #[test]
    fn usage_errors_exit_2() {
        let mut sink = Vec::new();
        assert_eq!(run_with(["sidsp", "frobnicate"], &mut sink), 2);
        assert_eq!(run_with(["sidsp", "solve", "--instance", "x", "--mode", "bad", "--out", "d"], &mut sink), 2);
    }
}
