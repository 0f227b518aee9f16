//! The `afsplit` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 unreadable or invalid input,
//! 3 time limit reached (`solve --fail-on-timeout`), 4 a combined labeling
//! failed the final stability check.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::apx::{names_of, parse_apx, render_result, serialize_apx, SolveMeta};
use crate::bench::{
    aggregate, load_instances, manifest, render_csv, render_report, run_bench, solve, BenchConfig, Method,
    Solution, SolveOptions, CI_LIMIT_MS, DEFAULT_LIMIT_MS,
};
use crate::cuts::{compute_cut, CutAlgorithm, CutRequest, Orientation};
use crate::error::Error;
use crate::framework::{is_unidirectional, scc_decomposition, ArgumentId, Attack, Cut, Framework, Labeling};
use crate::generator::{GenKind, GenSpec};
use crate::semantics::{argument_legality, is_stable_labeling, SearchStrategy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "afsplit", version, about = "Stable semantics of argumentation frameworks, directly or by splitting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write seeded random, complete or symmetric frameworks as apx files.
    Generate(GenerateArgs),
    /// Enumerate the stable labelings of a framework.
    Solve(SolveArgs),
    /// Compute a cut and print the partition and k.
    Cut(CutArgs),
    /// Run the splitting pipeline and show every intermediate step.
    Split(SplitArgs),
    /// Time methods over a directory of apx files.
    Bench(BenchArgs),
    /// Check a framework, and optionally a labeling of it.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Random,
    Complete,
    Symmetric,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long = "args", value_name = "N")]
    n: u32,
    /// Attack count; defaults to N*N for complete frameworks.
    #[arg(long = "attacks", value_name = "M")]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of instances; instance i uses seed S+i.
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long, value_enum, default_value_t = KindArg::Random)]
    kind: KindArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    LowestId,
    Random,
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Order in which illegally-in arguments are tried.
    #[arg(long, value_enum, default_value_t = StrategyArg::LowestId)]
    strategy: StrategyArg,
    /// Seed for `--strategy random`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Give up after this many milliseconds.
    #[arg(long, value_name = "MS")]
    timeout: Option<u64>,
}

impl SearchArgs {
    fn strategy(&self) -> SearchStrategy {
        match self.strategy {
            StrategyArg::LowestId => SearchStrategy::LowestId,
            StrategyArg::Random => SearchStrategy::SeededRandom(self.seed),
        }
    }

    fn seed(&self) -> Option<u64> {
        (self.strategy == StrategyArg::Random).then_some(self.seed)
    }
}

#[derive(Args, Debug)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, default_value = "direct")]
    method: Method,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    json: bool,
    /// Exit with status 3 when the time limit is reached.
    #[arg(long)]
    fail_on_timeout: bool,
}

#[derive(Args, Debug)]
struct CutShape {
    /// Argument (name or numeric id) the balanced cut grows from.
    #[arg(long)]
    start: Option<String>,
    #[arg(long, default_value = "literal")]
    orientation: Orientation,
}

#[derive(Args, Debug)]
struct CutArgs {
    file: PathBuf,
    #[arg(long, default_value = "ho")]
    algo: CutAlgorithm,
    #[command(flatten)]
    shape: CutShape,
}

#[derive(Args, Debug)]
struct SplitArgs {
    file: PathBuf,
    #[arg(long = "cut", default_value = "bc")]
    algo: CutAlgorithm,
    #[command(flatten)]
    shape: CutShape,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ProfileArg {
    /// 1,800,000 ms per run.
    Full,
    /// 60,000 ms per run.
    Ci,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    dir: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "direct,split-ho,split-bc")]
    methods: Vec<Method>,
    /// Per-run limit; overrides the profile.
    #[arg(long, value_name = "MS")]
    timeout: Option<u64>,
    #[arg(long, value_enum, default_value_t = ProfileArg::Full)]
    profile: ProfileArg,
    /// Run instances on all cores. Timings are less reliable.
    #[arg(long)]
    parallel: bool,
    #[arg(long)]
    csv: PathBuf,
    /// Write the text report here instead of standard output.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Defaults to the CSV path with `.manifest.json` appended.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    file: PathBuf,
    /// `{"in":[...],"out":[...],"undec":[...]}` with argument names, inline or as a file path.
    #[arg(long)]
    labeling: Option<String>,
}

/// A failure with its exit status.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses `argv` (program name first) and runs the command.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_cli_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a, out),
        Command::Solve(a) => solve_cmd(a, out, err),
        Command::Cut(a) => cut_cmd(a, out),
        Command::Split(a) => split_cmd(a, out, err),
        Command::Bench(a) => bench_cmd(a, out, err),
        Command::Validate(a) => validate_cmd(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn read_framework(path: &Path) -> Result<Framework, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    parse_apx(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn display_name(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn lookup(f: &Framework, token: &str) -> Result<ArgumentId, Failure> {
    f.id_of(token)
        .or_else(|| token.parse::<u32>().ok().map(ArgumentId).filter(|&a| f.contains(a)))
        .ok_or_else(|| input_error(format!("no argument named {token}")))
}

fn cut_request(f: &Framework, algorithm: CutAlgorithm, shape: &CutShape) -> Result<CutRequest, Failure> {
    Ok(CutRequest {
        algorithm,
        start: shape.start.as_deref().map(|s| lookup(f, s)).transpose()?,
        orientation: shape.orientation,
    })
}

fn deadline(timeout: Option<u64>) -> Option<Instant> {
    timeout.map(|ms| Instant::now() + Duration::from_millis(ms))
}

fn set_text(f: &Framework, s: &BTreeSet<ArgumentId>) -> String {
    format!("{{{}}}", names_of(f, s).join(","))
}

fn attack_text(f: &Framework, at: &Attack) -> String {
    let name = |a| f.name(a).map_or_else(|| a.to_string(), str::to_owned);
    format!("({},{})", name(at.source), name(at.target))
}

fn labeling_text(f: &Framework, l: &Labeling) -> String {
    format!(
        "{{in:[{}], out:[{}]}}",
        names_of(f, &l.in_).join(","),
        names_of(f, &l.out).join(",")
    )
}

fn cut_text(f: &Framework, cut: &Cut) -> String {
    let r3: Vec<String> = cut.r3.iter().map(|at| attack_text(f, at)).collect();
    format!(
        "a1: {}\na2: {}\nr3: {}\nk={}\n",
        set_text(f, &cut.a1),
        set_text(f, &cut.a2),
        if r3.is_empty() { "-".into() } else { r3.join(" ") },
        cut.k
    )
}

fn generate(a: GenerateArgs, out: &mut dyn Write) -> Outcome {
    let kind = match a.kind {
        KindArg::Random => GenKind::Random,
        KindArg::Complete => GenKind::Complete,
        KindArg::Symmetric => GenKind::SymmetricIrreflexive,
    };
    let m = match (a.m, kind) {
        (Some(m), _) => m,
        (None, GenKind::Complete) => a.n as usize * a.n as usize,
        (None, _) => return Err(input_error("--attacks is required for this kind")),
    };
    std::fs::create_dir_all(&a.out)?;
    let mut specs = Vec::new();
    for i in 0..a.count {
        let spec = GenSpec {
            n: a.n,
            m,
            seed: a.seed + i,
            kind,
        };
        let f = spec.generate()?;
        let path = a.out.join(spec.file_name());
        std::fs::write(&path, serialize_apx(&f))?;
        let _ = writeln!(out, "{}", path.display());
        specs.push(GeneratedFile {
            file: spec.file_name(),
            spec,
        });
    }
    let manifest = GenerateManifest {
        generator: "ChaCha8Rng::seed_from_u64 + random_range".into(),
        files: specs,
    };
    std::fs::write(
        a.out.join("manifest.json"),
        serde_json::to_string_pretty(&manifest).map_err(Error::from)?,
    )?;
    Ok(EXIT_OK)
}

#[derive(Serialize, Deserialize)]
struct GeneratedFile {
    file: String,
    #[serde(flatten)]
    spec: GenSpec,
}

#[derive(Serialize, Deserialize)]
struct GenerateManifest {
    generator: String,
    files: Vec<GeneratedFile>,
}

fn check_discarded(solution: &Solution, err: &mut dyn Write) -> Option<i32> {
    let discarded = solution.split.as_ref().map_or(0, |s| s.discarded);
    (discarded > 0).then(|| {
        let _ = writeln!(
            err,
            "error: {discarded} combined labeling(s) failed the stability check on the original framework"
        );
        EXIT_INVARIANT
    })
}

fn solve_cmd(a: SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let f = read_framework(&a.file)?;
    let start = Instant::now();
    let opts = SolveOptions {
        strategy: a.search.strategy(),
        deadline: deadline(a.search.timeout),
        cut: CutRequest::default(),
    };
    let result = solve(&f, a.method, &opts);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let mut meta = SolveMeta {
        framework: display_name(&a.file),
        method: a.method.to_string(),
        elapsed_ms,
        censored: false,
        seed: a.search.seed(),
    };
    let (solution, code) = match result {
        Ok(s) => {
            let code = check_discarded(&s, err).unwrap_or(EXIT_OK);
            (Some(s), code)
        }
        Err(Error::TimedOut) => {
            meta.censored = true;
            meta.elapsed_ms = a.search.timeout.unwrap_or(elapsed_ms);
            (None, if a.fail_on_timeout { EXIT_TIMEOUT } else { EXIT_OK })
        }
        Err(e) => return Err(e.into()),
    };
    let labelings = solution.as_ref().map_or(&[][..], |s| &s.labelings);

    if a.json {
        let _ = writeln!(out, "{}", render_result(&f, labelings, &meta));
    } else {
        let mut text = format!("framework: {}\nmethod: {}\n", meta.framework, meta.method);
        if let Some(seed) = meta.seed {
            let _ = writeln!(text, "seed: {seed}");
        }
        if let Some(cut) = solution.as_ref().and_then(Solution::cut) {
            let _ = writeln!(text, "cut: {} k={}", set_text(&f, &cut.a1), cut.k);
        }
        if meta.censored {
            let _ = writeln!(text, "time limit of {} ms reached", meta.elapsed_ms);
        } else {
            let _ = writeln!(text, "elapsed: {} ms", meta.elapsed_ms);
            let _ = writeln!(text, "stable labelings: {}", labelings.len());
            for l in labelings {
                let _ = writeln!(text, "{}", labeling_text(&f, l));
            }
        }
        let _ = write!(out, "{text}");
    }
    Ok(code)
}

fn cut_cmd(a: CutArgs, out: &mut dyn Write) -> Outcome {
    let f = read_framework(&a.file)?;
    let req = cut_request(&f, a.algo, &a.shape)?;
    let cut = compute_cut(&f, &req)?;
    let _ = write!(out, "algorithm: {}\n{}", a.algo, cut_text(&f, &cut));
    let _ = writeln!(out, "unidirectional: {}", if is_unidirectional(&cut) { "yes" } else { "no" });
    Ok(EXIT_OK)
}

fn split_cmd(a: SplitArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let f = read_framework(&a.file)?;
    if f.len() < 2 {
        return Err(input_error("splitting needs at least two arguments"));
    }
    let method = match a.algo {
        CutAlgorithm::HaoOrlin => Method::SplitHo,
        CutAlgorithm::Balanced => Method::SplitBc,
    };
    let opts = SolveOptions {
        strategy: a.search.strategy(),
        deadline: deadline(a.search.timeout),
        cut: cut_request(&f, a.algo, &a.shape)?,
    };
    let start = Instant::now();
    let solution = solve(&f, method, &opts)?;
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let code = check_discarded(&solution, err).unwrap_or(EXIT_OK);
    let split = solution.split.as_ref().expect("split methods on two or more arguments produce a cut");

    if a.json {
        let meta = SolveMeta {
            framework: display_name(&a.file),
            method: method.to_string(),
            elapsed_ms,
            censored: false,
            seed: a.search.seed(),
        };
        let _ = writeln!(out, "{}", render_result(&f, &split.combined, &meta));
        return Ok(code);
    }

    let f1m = &split.f1_modified;
    let mut text = format!("algorithm: {}\n{}", a.algo, cut_text(&f, &split.cut));
    let _ = writeln!(
        text,
        "F1: {} arguments, {} attacks; modified: {} arguments, {} attacks",
        f1m.base.len(),
        f1m.base.attack_count(),
        f1m.framework.len(),
        f1m.framework.attack_count()
    );
    let _ = writeln!(text, "F1 stable labelings: {}", split.f1_labelings);
    for b in &split.branches {
        let in_a1: BTreeSet<ArgumentId> = b.e1.iter().copied().filter(|x| split.cut.a1.contains(x)).collect();
        let _ = writeln!(
            text,
            "  E={}: F2 {} arguments, {} attacks ({} gadgets, {} added attacks, {} removed), {} stable labelings",
            set_text(&f, &in_a1),
            b.f2_arguments,
            b.f2_attacks,
            b.gadgets,
            b.added_attacks,
            b.removed,
            b.f2_labelings
        );
    }
    let _ = writeln!(text, "combined: {} (discarded {})", split.combined.len(), split.discarded);
    for l in &split.combined {
        let _ = writeln!(text, "{}", labeling_text(&f, l));
    }
    let _ = write!(out, "{text}");
    Ok(code)
}

fn bench_cmd(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let instances = load_instances(&a.dir)?;
    if instances.is_empty() {
        return Err(input_error(format!("no .apx files in {}", a.dir.display())));
    }
    let limit_ms = a.timeout.unwrap_or(match a.profile {
        ProfileArg::Full => DEFAULT_LIMIT_MS,
        ProfileArg::Ci => CI_LIMIT_MS,
    });
    if limit_ms == 0 {
        return Err(input_error("--timeout must be positive"));
    }
    let config = BenchConfig {
        limit_ms,
        parallel: a.parallel,
        ..BenchConfig::default()
    };
    let measurements = run_bench(&instances, &a.methods, &config);
    std::fs::write(&a.csv, render_csv(&measurements))?;

    let manifest_path = a.manifest.unwrap_or_else(|| {
        let mut p = a.csv.clone().into_os_string();
        p.push(".manifest.json");
        p.into()
    });
    let man = manifest(&instances, &a.methods, &config);
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&man).map_err(Error::from)?)?;

    let summary = aggregate(&measurements);
    for w in &summary.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let report = render_report(&summary);
    match a.table {
        Some(path) => std::fs::write(path, report)?,
        None => {
            let _ = write!(out, "{report}");
        }
    }
    Ok(EXIT_OK)
}

#[derive(Deserialize)]
struct LabelingInput {
    #[serde(rename = "in", default)]
    in_: Vec<String>,
    #[serde(default)]
    out: Vec<String>,
    #[serde(default)]
    undec: Vec<String>,
}

fn validate_cmd(a: ValidateArgs, out: &mut dyn Write) -> Outcome {
    let f = read_framework(&a.file)?;
    let _ = writeln!(
        out,
        "ok: {} arguments, {} attacks, {} strongly connected components",
        f.len(),
        f.attack_count(),
        scc_decomposition(&f).len()
    );
    let Some(spec) = a.labeling else {
        return Ok(EXIT_OK);
    };
    let json = if Path::new(&spec).is_file() {
        std::fs::read_to_string(&spec)?
    } else {
        spec
    };
    let input: LabelingInput =
        serde_json::from_str(&json).map_err(|e| input_error(format!("labeling: {e}")))?;
    let ids = |names: &[String]| -> Result<BTreeSet<ArgumentId>, Failure> {
        names.iter().map(|n| lookup(&f, n)).collect()
    };
    let l = Labeling::for_framework(&f, ids(&input.in_)?, ids(&input.out)?, ids(&input.undec)?)?;
    for &x in f.arguments() {
        let _ = writeln!(out, "{}: {}", f.name(x).unwrap_or_default(), argument_legality(&f, &l, x));
    }
    if is_stable_labeling(&f, &l) {
        let _ = writeln!(out, "stable: yes");
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(out, "stable: no");
        Ok(EXIT_INPUT)
    }
}
