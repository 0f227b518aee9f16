//! Timed solves, aggregation into summary rows, and reports.
//!
//! All times are wall-clock. A run that reaches the limit is abandoned and
//! recorded at the limit with `censored = true`; averages that include such a
//! run are lower bounds and render with a `>` prefix.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apx::parse_apx;
use crate::cuts::{compute_cut, CutAlgorithm, CutRequest};
use crate::error::{Error, Result};
use crate::framework::{Cut, Framework, Labeling};
use crate::semantics::{enumerate_stable_until, SearchStrategy};
use crate::splitting::{split_enumerate_stable_with, SplitOptions, SplitResult};

/// Full-scale limit: 30 minutes.
pub const DEFAULT_LIMIT_MS: u64 = 1_800_000;
/// Desk-scale limit used by CI runs.
pub const CI_LIMIT_MS: u64 = 60_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Direct,
    SplitHo,
    SplitBc,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Direct, Method::SplitHo, Method::SplitBc];

    pub fn cut_algorithm(self) -> Option<CutAlgorithm> {
        match self {
            Method::Direct => None,
            Method::SplitHo => Some(CutAlgorithm::HaoOrlin),
            Method::SplitBc => Some(CutAlgorithm::Balanced),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::SplitHo => "split-ho",
            Method::SplitBc => "split-bc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method {s:?} (expected direct, split-ho or split-bc)"))
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SolveOptions {
    pub strategy: SearchStrategy,
    pub deadline: Option<Instant>,
    /// Start and orientation for split methods; the algorithm comes from the method.
    pub cut: CutRequest,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub labelings: Vec<Labeling>,
    /// `None` for direct solves and for frameworks too small to cut.
    pub split: Option<SplitResult>,
}

impl Solution {
    pub fn cut(&self) -> Option<&Cut> {
        self.split.as_ref().map(|s| &s.cut)
    }
}

/// Runs one method end to end: cut, splitting, enumeration.
///
/// Split methods on a single-argument framework fall back to direct
/// enumeration, since no cut exists.
pub fn solve(f: &Framework, method: Method, opts: &SolveOptions) -> Result<Solution> {
    match method.cut_algorithm() {
        Some(algorithm) if f.len() >= 2 => {
            let cut = compute_cut(f, &CutRequest { algorithm, ..opts.cut })?;
            let split = split_enumerate_stable_with(
                f,
                &cut,
                &SplitOptions {
                    strategy: opts.strategy,
                    deadline: opts.deadline,
                },
            )?;
            Ok(Solution {
                labelings: split.combined.clone(),
                split: Some(split),
            })
        }
        _ => Ok(Solution {
            labelings: enumerate_stable_until(f, opts.strategy, opts.deadline)?,
            split: None,
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub id: String,
    pub framework: Framework,
    pub seed: Option<u64>,
}

impl Instance {
    pub fn new(id: impl Into<String>, framework: Framework, seed: Option<u64>) -> Self {
        Instance {
            id: id.into(),
            framework,
            seed,
        }
    }

    /// `n/m`, the row label of the summary tables.
    pub fn af_type(&self) -> String {
        format!("{}/{}", self.framework.len(), self.framework.attack_count())
    }
}

/// Reads every `.apx` file of `dir`, sorted by file name. A seed is taken from
/// names of the form `af_<n>_<m>_<seed>.apx`.
pub fn load_instances(dir: &Path) -> Result<Vec<Instance>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "apx"));
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p)?;
            let framework = parse_apx(&text).map_err(|e| match e {
                Error::Parse { line, message } => Error::Parse {
                    line,
                    message: format!("{}: {message}", p.display()),
                },
                other => other,
            })?;
            let id = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let seed = seed_from_name(&id);
            Ok(Instance::new(id, framework, seed))
        })
        .collect()
}

fn seed_from_name(stem: &str) -> Option<u64> {
    let parts: Vec<&str> = stem.split('_').collect();
    match parts.as_slice() {
        ["af", n, m, seed] if n.parse::<u32>().is_ok() && m.parse::<usize>().is_ok() => seed.parse().ok(),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub seed: Option<u64>,
    pub method: Method,
    pub cut_algo: Option<CutAlgorithm>,
    pub k: Option<usize>,
    /// Whole milliseconds, rounded down; the limit when censored.
    pub elapsed_ms: u64,
    pub censored: bool,
    /// `None` when censored.
    pub labeling_count: Option<usize>,
    /// Unrounded wall time of the run.
    pub wall: Duration,
}

impl Measurement {
    pub fn af_type(&self) -> String {
        format!("{}/{}", self.n, self.m)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BenchConfig {
    pub limit_ms: u64,
    pub strategy: SearchStrategy,
    pub parallel: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            limit_ms: DEFAULT_LIMIT_MS,
            strategy: SearchStrategy::LowestId,
            parallel: false,
        }
    }
}

/// Times `method` on `f` under a wall-clock budget of `limit_ms`.
pub fn time_solve(f: &Framework, method: Method, limit_ms: u64) -> Measurement {
    time_instance(
        &Instance::new("", f.clone(), None),
        method,
        &BenchConfig {
            limit_ms,
            ..BenchConfig::default()
        },
    )
}

pub fn time_instance(instance: &Instance, method: Method, config: &BenchConfig) -> Measurement {
    assert!(config.limit_ms > 0, "the time limit must be positive");
    let f = &instance.framework;
    let limit = Duration::from_millis(config.limit_ms);
    let start = Instant::now();
    let outcome = solve(
        f,
        method,
        &SolveOptions {
            strategy: config.strategy,
            deadline: Some(start + limit),
            cut: CutRequest::default(),
        },
    );
    let wall = start.elapsed();

    let mut record = Measurement {
        instance: instance.id.clone(),
        n: f.len(),
        m: f.attack_count(),
        seed: instance.seed,
        method,
        cut_algo: None,
        k: None,
        elapsed_ms: wall.as_millis() as u64,
        censored: false,
        labeling_count: None,
        wall,
    };
    match outcome {
        Ok(solution) => {
            if let Some(cut) = solution.cut() {
                record.cut_algo = method.cut_algorithm();
                record.k = Some(cut.k);
            }
            record.labeling_count = Some(solution.labelings.len());
            if wall >= limit {
                record.censored = true;
                record.elapsed_ms = config.limit_ms;
                record.labeling_count = None;
            }
        }
        Err(Error::TimedOut) => {
            record.cut_algo = method.cut_algorithm();
            record.censored = true;
            record.elapsed_ms = config.limit_ms;
        }
        Err(e) => panic!("solver failed on a valid framework: {e}"),
    }
    record
}

/// Every (instance, method) pair, in instance order then method order.
pub fn run_bench(instances: &[Instance], methods: &[Method], config: &BenchConfig) -> Vec<Measurement> {
    let jobs: Vec<(&Instance, Method)> = instances
        .iter()
        .flat_map(|i| methods.iter().map(move |&m| (i, m)))
        .collect();
    if config.parallel {
        jobs.par_iter().map(|&(i, m)| time_instance(i, m, config)).collect()
    } else {
        jobs.iter().map(|&(i, m)| time_instance(i, m, config)).collect()
    }
}

/// `round(num / den)` with halves rounded away from zero; `den > 0`.
fn div_round(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    let q = (2 * num.abs() + den) / (2 * den);
    if num < 0 {
        -q
    } else {
        q
    }
}

/// `100 * (t_base - t_method) / t_base`, rounded half away from zero.
/// Positive means faster than the baseline; `None` when `t_base` is 0.
pub fn gain_percent(t_base: u64, t_method: u64) -> Option<i64> {
    if t_base == 0 {
        return None;
    }
    let num = 100 * (t_base as i128 - t_method as i128);
    Some(div_round(num, t_base as i128) as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MethodSummary {
    pub avg_ms: u64,
    /// Some contributing run was censored, so `avg_ms` is a lower bound.
    pub censored: bool,
    pub runs: usize,
    /// Gain of this average over the direct average.
    pub value_gain: Option<i64>,
    /// Mean of the per-instance gains over direct.
    pub mean_gain: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummaryRow {
    pub af_type: String,
    pub methods: BTreeMap<Method, MethodSummary>,
}

impl SummaryRow {
    pub fn get(&self, method: Method) -> Option<&MethodSummary> {
        self.methods.get(&method)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
    pub warnings: Vec<String>,
}

/// Groups by `n/m` (ordered by `n`, then `m`) and summarizes each method.
pub fn aggregate(measurements: &[Measurement]) -> Summary {
    let mut groups: BTreeMap<(usize, usize), Vec<&Measurement>> = BTreeMap::new();
    for ms in measurements {
        groups.entry((ms.n, ms.m)).or_default().push(ms);
    }
    let mut summary = Summary::default();
    for ((n, m), group) in groups {
        let af_type = format!("{n}/{m}");
        let by_method = |method: Method| -> Vec<&Measurement> {
            group.iter().copied().filter(|x| x.method == method).collect()
        };
        let direct = by_method(Method::Direct);
        let direct_avg = average(&direct).map(|(avg, _)| avg);
        let base_of: BTreeMap<&str, u64> = direct.iter().map(|x| (x.instance.as_str(), x.elapsed_ms)).collect();

        let mut methods = BTreeMap::new();
        for method in Method::ALL {
            let runs = by_method(method);
            let Some((avg_ms, censored)) = average(&runs) else {
                continue;
            };
            let (value_gain, mean_gain) = if method == Method::Direct {
                (None, None)
            } else {
                if direct_avg.is_none() {
                    summary
                        .warnings
                        .push(format!("{af_type}: no direct runs, gains for {method} skipped"));
                }
                let gains: Vec<i64> = runs
                    .iter()
                    .filter_map(|x| gain_percent(*base_of.get(x.instance.as_str())?, x.elapsed_ms))
                    .collect();
                let mean = (!gains.is_empty())
                    .then(|| div_round(gains.iter().map(|&g| g as i128).sum(), gains.len() as i128) as i64);
                (direct_avg.and_then(|b| gain_percent(b, avg_ms)), mean)
            };
            methods.insert(
                method,
                MethodSummary {
                    avg_ms,
                    censored,
                    runs: runs.len(),
                    value_gain,
                    mean_gain,
                },
            );
        }
        summary.rows.push(SummaryRow { af_type, methods });
    }
    summary
}

fn average(runs: &[&Measurement]) -> Option<(u64, bool)> {
    if runs.is_empty() {
        return None;
    }
    let total: i128 = runs.iter().map(|x| x.elapsed_ms as i128).sum();
    let avg = div_round(total, runs.len() as i128) as u64;
    Some((avg, runs.iter().any(|x| x.censored)))
}

/// Which gain statistic a table shows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GainKind {
    MeanOfGains,
    ValueBased,
}

fn render_avg(s: Option<&MethodSummary>) -> String {
    match s {
        Some(s) if s.censored => format!("> {}", s.avg_ms),
        Some(s) => s.avg_ms.to_string(),
        None => "-".into(),
    }
}

fn render_gain(s: Option<&MethodSummary>, kind: GainKind) -> String {
    let g = s.and_then(|s| match kind {
        GainKind::MeanOfGains => s.mean_gain,
        GainKind::ValueBased => s.value_gain,
    });
    g.map_or_else(|| "-".into(), |g| g.to_string())
}

/// Aligned text table with one row per framework type.
pub fn render_table(rows: &[SummaryRow], kind: GainKind) -> String {
    let header = ["AF type", "w/o spl. [ms]", "HO [ms]", "gain [%]", "BC [ms]", "gain [%]"];
    let body: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            let ho = r.get(Method::SplitHo);
            let bc = r.get(Method::SplitBc);
            [
                r.af_type.clone(),
                render_avg(r.get(Method::Direct)),
                render_avg(ho),
                render_gain(ho, kind),
                render_avg(bc),
                render_gain(bc, kind),
            ]
        })
        .collect();

    let mut widths = header.map(str::len);
    for row in &body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[&str]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths)
            .enumerate()
            .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        let _ = writeln!(out, "{}", padded.join(" | ").trim_end());
    };
    line(&header);
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    line(&rule.iter().map(String::as_str).collect::<Vec<_>>());
    for row in &body {
        line(&row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}

/// Both tables, mean-of-gains first.
pub fn render_report(summary: &Summary) -> String {
    let mut out = String::from("Average run time, gain = mean of per-instance gains\n");
    out.push_str(&render_table(&summary.rows, GainKind::MeanOfGains));
    out.push_str("\nAverage run time, gain = gain of the averages\n");
    out.push_str(&render_table(&summary.rows, GainKind::ValueBased));
    for w in &summary.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

#[derive(Serialize)]
struct CsvRecord<'a> {
    instance: &'a str,
    n: usize,
    m: usize,
    seed: Option<u64>,
    method: &'static str,
    cut_algo: Option<String>,
    k: Option<usize>,
    elapsed_ms: u64,
    censored: bool,
    labeling_count: Option<usize>,
}

/// One line per measurement; empty fields for absent values.
pub fn render_csv(measurements: &[Measurement]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if measurements.is_empty() {
        w.write_record([
            "instance",
            "n",
            "m",
            "seed",
            "method",
            "cut_algo",
            "k",
            "elapsed_ms",
            "censored",
            "labeling_count",
        ])
        .expect("in-memory write");
    }
    for x in measurements {
        w.serialize(CsvRecord {
            instance: &x.instance,
            n: x.n,
            m: x.m,
            seed: x.seed,
            method: x.method.as_str(),
            cut_algo: x.cut_algo.map(|c| c.to_string()),
            k: x.k,
            elapsed_ms: x.elapsed_ms,
            censored: x.censored,
            labeling_count: x.labeling_count,
        })
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Host {
    pub os: String,
    pub arch: String,
    pub cpus: usize,
}

impl Host {
    pub fn current() -> Self {
        Host {
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            cpus: std::thread::available_parallelism().map_or(1, usize::from),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchManifest {
    pub limit_ms: u64,
    pub timing: String,
    pub parallel: bool,
    pub host: Host,
    pub methods: Vec<Method>,
    pub instances: Vec<String>,
    pub seeds: Vec<u64>,
}

pub fn manifest(instances: &[Instance], methods: &[Method], config: &BenchConfig) -> BenchManifest {
    BenchManifest {
        limit_ms: config.limit_ms,
        timing: "wall-clock".into(),
        parallel: config.parallel,
        host: Host::current(),
        methods: methods.to_vec(),
        instances: instances.iter().map(|i| i.id.clone()).collect(),
        seeds: instances
            .iter()
            .filter_map(|i| i.seed)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
    }
}
