//! The `braid-regions` command line.

pub mod dot;
pub mod report;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use braid_regions::enumerate::{check_guard, par_tree_sum};
use braid_regions::fast::analyze;
use braid_regions::ish::{
    bijection_f, bijection_g, check_frak_t_guard, class_histogram, classify_tree, closed_formula,
    count_frak_t, count_s0000, omega_l, omega_u, phi_l, phi_u, psi_l, psi_u,
};
use braid_regions::oracle::{default_prime_bound, region_count_zaslavsky_with_bound};
use braid_regions::{
    bernardi_sum_brute, bernardi_sum_fast, contribution_brute, contribution_fast, enumerate_trees,
    tree_count, ArrangementSpec, Family, FastEvaluator, PlaneTree, SpecSampler, DEFAULT_GUARD,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use dot::RenderWhat;
use report::{median, BenchReport, BenchRow, RunReport, SpecSummary, TreeStats};

#[derive(Debug, Parser)]
#[command(
    name = "braid-regions",
    version,
    about = "Count regions of deformed braid arrangements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SpecArgs {
    /// JSON spec document.
    #[arg(long, conflicts_with_all = ["preset", "nest"])]
    pub spec: Option<PathBuf>,
    /// braid, shi, ish, nested-ish or ish-type.
    #[arg(long, requires = "n")]
    pub preset: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// First-row sets for nested-ish and ish-type, e.g. `0..0,0..1,-1..2`.
    #[arg(long)]
    pub nest: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long)]
    pub json: bool,
    /// Largest tree family any method may walk.
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    pub guard: u64,
    /// Sample primes must exceed this (raised to the default when lower).
    #[arg(long)]
    pub prime_bound: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Method {
    Brute,
    Fast,
    Involution,
    Formula,
    Bijection,
    Oracle,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Fast => "fast",
            Method::Involution => "involution",
            Method::Formula => "formula",
            Method::Bijection => "bijection",
            Method::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Op {
    #[value(name = "phi_l")]
    PhiL,
    #[value(name = "psi_l")]
    PsiL,
    #[value(name = "phi_u")]
    PhiU,
    #[value(name = "psi_u")]
    PsiU,
    #[value(name = "omega_l")]
    OmegaL,
    #[value(name = "omega_u")]
    OmegaU,
    F,
    G,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count regions with one or more methods and compare.
    Count {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "fast,oracle")]
        methods: Vec<Method>,
    },
    /// Compare brute, fast and oracle on seeded random specs.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Print the class quadruple of a tree.
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tree: String,
    },
    /// Emit a DOT drawing of a tree with its boxes.
    Render {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        tree: String,
        #[arg(long, value_enum, default_value = "boxes")]
        what: RenderWhat,
    },
    /// Show every intermediate of the fast contribution for one tree.
    Explain {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tree: String,
    },
    /// Apply one tree map and print the result.
    Involve {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tree: String,
        #[arg(long, value_enum)]
        op: Op,
        /// Which inefficient node `psi_l` / `psi_u` picks, counted from 0.
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Time counting methods.
    Bench {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "brute,fast")]
        methods: Vec<Method>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(3..))]
        reps: u32,
    },
}

/// What the process prints and returns.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] braid_regions::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use braid_regions::Error as E;
        match self {
            CliError::Core(E::GuardRefused { .. }) => EXIT_GUARD,
            CliError::Core(
                E::Inconsistent(_) | E::UnstablePolynomial(_) | E::NonIntegralPolynomial,
            ) => EXIT_DISAGREE,
            _ => EXIT_USAGE,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub fn load_spec(args: &SpecArgs) -> CliResult<ArrangementSpec> {
    if let Some(path) = &args.spec {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        return Ok(ArrangementSpec::parse(&text)?);
    }
    let (Some(preset), Some(n)) = (&args.preset, args.n) else {
        return Err(CliError::Usage(
            "give --spec FILE or --preset NAME --n N".into(),
        ));
    };
    let family = Family::from_str(preset)?;
    let columns = args
        .nest
        .as_deref()
        .map(braid_regions::arrangement::parse_nest)
        .transpose()?;
    Ok(ArrangementSpec::preset(family, n, columns)?)
}

fn parse_tree(text: &str) -> CliResult<PlaneTree> {
    Ok(PlaneTree::decode(text)?)
}

fn prime_bound(spec: &ArrangementSpec, common: &Common) -> u64 {
    common
        .prime_bound
        .unwrap_or_else(|| default_prime_bound(spec))
}

/// One method's count.
pub fn count_with(
    method: Method,
    spec: &ArrangementSpec,
    guard: u64,
    prime_bound: u64,
) -> braid_regions::Result<BigInt> {
    match method {
        Method::Brute => bernardi_sum_brute(spec, guard),
        Method::Fast => bernardi_sum_fast(spec, guard),
        Method::Involution => count_s0000(spec, guard),
        Method::Formula => closed_formula(spec),
        Method::Bijection => {
            if !spec.is_nested_ish() {
                return Err(braid_regions::Error::NotNestedIsh);
            }
            check_frak_t_guard(spec, guard)?;
            count_frak_t(spec)
        }
        Method::Oracle => region_count_zaslavsky_with_bound(spec, prime_bound),
    }
}

fn tree_stats(spec: &ArrangementSpec, methods: &[Method], guard: u64) -> CliResult<TreeStats> {
    let (n, m) = (spec.n(), spec.max_offset());
    let mut stats = TreeStats {
        total: tree_count(n, m).to_string(),
        ..TreeStats::default()
    };
    let walks = methods
        .iter()
        .any(|m| matches!(m, Method::Brute | Method::Fast | Method::Involution));
    if walks && check_guard(n, m, guard).is_ok() {
        let nonzero = par_tree_sum(n, m, FastEvaluator::new, |ev, t| {
            i64::from(ev.contribution(spec, t) != 0)
        });
        stats.nonzero = Some(nonzero.to_string());
        if spec.is_ish_type() {
            let hist = class_histogram(spec, guard)?;
            stats.classes = Some(hist.into_iter().map(|(c, v)| (c.to_string(), v)).collect());
        }
    }
    Ok(stats)
}

pub fn cmd_count(
    spec: &ArrangementSpec,
    methods: &[Method],
    common: &Common,
) -> CliResult<RunReport> {
    let mut methods = methods.to_vec();
    methods.dedup();
    let mut report = RunReport::new(spec, methods.iter().map(|m| m.name().to_string()).collect());
    let bound = prime_bound(spec, common);
    for &method in &methods {
        let start = Instant::now();
        let count = count_with(method, spec, common.guard, bound)?;
        report
            .timing_ms
            .insert(method.name().into(), start.elapsed().as_secs_f64() * 1e3);
        report
            .counts
            .insert(method.name().into(), count.to_string());
    }
    report.settle_agreement();
    report.trees = tree_stats(spec, &methods, common.guard)?;
    Ok(report)
}

pub fn cmd_bench(
    spec: &ArrangementSpec,
    methods: &[Method],
    reps: u32,
    common: &Common,
) -> CliResult<BenchReport> {
    let bound = prime_bound(spec, common);
    let mut rows = Vec::new();
    for &method in methods {
        let mut times = Vec::new();
        let mut count = BigInt::default();
        for _ in 0..reps.max(3) {
            let start = Instant::now();
            count = count_with(method, spec, common.guard, bound)?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
        }
        let (min, max) = times
            .iter()
            .fold((f64::INFINITY, 0f64), |(lo, hi), &t| (lo.min(t), hi.max(t)));
        rows.push(BenchRow {
            method: method.name().into(),
            count: count.to_string(),
            runs: times.len(),
            median_ms: median(&mut times),
            min_ms: min,
            max_ms: max,
        });
    }
    let agreement = rows.windows(2).all(|w| w[0].count == w[1].count);
    Ok(BenchReport {
        spec: SpecSummary::of(spec),
        rows,
        agreement,
    })
}

/// Result for one sampled spec in `verify`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct VerifyRow {
    pub sample: usize,
    pub spec: serde_json::Value,
    pub brute: String,
    pub fast: String,
    pub oracle: String,
    pub agreement: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_tree: Option<String>,
}

impl VerifyRow {
    fn line(&self) -> String {
        let mut out = format!(
            "sample={} brute={} fast={} oracle={} agreement={} spec={}",
            self.sample, self.brute, self.fast, self.oracle, self.agreement, self.spec
        );
        if let Some(t) = &self.failing_tree {
            let _ = write!(out, " failing_tree={t}");
        }
        out
    }
}

pub fn cmd_verify(
    n: usize,
    m: usize,
    density: f64,
    samples: usize,
    seed: u64,
    common: &Common,
) -> CliResult<Vec<VerifyRow>> {
    let sampler = SpecSampler::new(n, m, density, seed)?;
    let mut rows = Vec::new();
    for (sample, spec) in sampler.take(samples).enumerate() {
        let bound = prime_bound(&spec, common);
        let brute = bernardi_sum_brute(&spec, common.guard)?;
        let fast = bernardi_sum_fast(&spec, common.guard)?;
        let oracle = region_count_zaslavsky_with_bound(&spec, bound)?;
        let agreement = brute == fast && fast == oracle;
        let failing_tree = (brute != fast)
            .then(|| {
                enumerate_trees(spec.n(), spec.max_offset()).find(|t| {
                    contribution_brute(&spec, t).ok()
                        != contribution_fast(&spec, t).ok().map(i64::from)
                })
            })
            .flatten()
            .map(|t| t.encode());
        rows.push(VerifyRow {
            sample,
            spec: serde_json::from_str(&spec.to_json()).expect("spec json is valid"),
            brute: brute.to_string(),
            fast: fast.to_string(),
            oracle: oracle.to_string(),
            agreement,
            failing_tree,
        });
        if !agreement {
            break;
        }
    }
    Ok(rows)
}

pub fn cmd_classify(spec: &ArrangementSpec, tree: &PlaneTree) -> CliResult<String> {
    Ok(match classify_tree(spec, tree)? {
        Some(c) => c.to_string(),
        None => "zero-contribution".into(),
    })
}

pub fn cmd_explain(spec: &ArrangementSpec, tree: &PlaneTree) -> CliResult<String> {
    let analysis = analyze(spec, tree)?;
    let list = |v: &[usize]| {
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = String::new();
    let _ = writeln!(out, "tree={}", tree.encode());
    for (s, seq) in analysis.sequences.iter().enumerate() {
        let _ = writeln!(out, "cadet[{s}]={}", list(&seq.nodes));
        let runs: Vec<String> = seq
            .runs
            .iter()
            .map(|r| format!("{{{}}}", list(&seq.nodes[r.start..=r.end])))
            .collect();
        let _ = writeln!(out, "cadet[{s}].maximal_s_cadet={}", runs.join(" "));
        for (c, comp) in seq.components.iter().enumerate() {
            let key = format!("cadet[{s}].component[{c}]");
            let _ = writeln!(out, "{key}.nodes={}", list(comp.context.nodes()));
            let reaches: Vec<String> = comp
                .reaches
                .iter()
                .map(|(i, j)| format!("X{i}->X{j}"))
                .collect();
            let _ = writeln!(out, "{key}.reaches={}", reaches.join(" "));
            match &comp.chain {
                Some(walk) => {
                    let _ = writeln!(out, "{key}.chain={}", list(walk));
                }
                None => {
                    let _ = writeln!(out, "{key}.chain=none");
                }
            }
            let _ = writeln!(out, "{key}.contribution={}", comp.contribution);
        }
    }
    let _ = writeln!(out, "contribution={}", analysis.contribution);
    Ok(out)
}

pub fn cmd_involve(
    spec: &ArrangementSpec,
    tree: &PlaneTree,
    op: Op,
    index: usize,
) -> CliResult<PlaneTree> {
    Ok(match op {
        Op::PhiL => phi_l(spec, tree)?,
        Op::PsiL => psi_l(spec, tree, index)?,
        Op::PhiU => phi_u(spec, tree)?,
        Op::PsiU => psi_u(spec, tree, index)?,
        Op::OmegaL => omega_l(spec, tree)?,
        Op::OmegaU => omega_u(spec, tree)?,
        Op::F => bijection_f(spec, tree)?,
        Op::G => bijection_g(spec, tree)?,
    })
}

fn execute(command: Command) -> CliResult<(String, i32)> {
    match command {
        Command::Count {
            spec,
            common,
            methods,
        } => {
            let spec = load_spec(&spec)?;
            let report = cmd_count(&spec, &methods, &common)?;
            let text = if common.json {
                report.json()
            } else {
                report.key_values()
            };
            Ok((
                text,
                if report.agreement {
                    EXIT_OK
                } else {
                    EXIT_DISAGREE
                },
            ))
        }
        Command::Verify {
            n,
            m,
            density,
            samples,
            seed,
            common,
        } => {
            let rows = cmd_verify(n, m, density, samples, seed, &common)?;
            let mut text = String::new();
            for row in &rows {
                let line = if common.json {
                    serde_json::to_string(row).expect("row serializes")
                } else {
                    row.line()
                };
                let _ = writeln!(text, "{line}");
            }
            let ok = rows.iter().all(|r| r.agreement);
            let _ = writeln!(
                text,
                "{}",
                if common.json {
                    format!("{{\"samples\":{},\"agreement\":{ok}}}", rows.len())
                } else {
                    format!("samples={} agreement={ok}", rows.len())
                }
            );
            Ok((text, if ok { EXIT_OK } else { EXIT_DISAGREE }))
        }
        Command::Classify { spec, common, tree } => {
            let spec = load_spec(&spec)?;
            let class = cmd_classify(&spec, &parse_tree(&tree)?)?;
            let text = if common.json {
                format!("{}\n", serde_json::json!({ "classification": class }))
            } else {
                format!("{class}\n")
            };
            Ok((text, EXIT_OK))
        }
        Command::Render { spec, tree, what } => {
            let spec = load_spec(&spec)?;
            Ok((dot::render(&spec, &parse_tree(&tree)?, what)?, EXIT_OK))
        }
        Command::Explain { spec, common, tree } => {
            let spec = load_spec(&spec)?;
            let tree = parse_tree(&tree)?;
            let text = cmd_explain(&spec, &tree)?;
            if common.json {
                let fields: serde_json::Map<String, serde_json::Value> = text
                    .lines()
                    .filter_map(|l| l.split_once('='))
                    .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.to_string())))
                    .collect();
                return Ok((format!("{}\n", serde_json::Value::Object(fields)), EXIT_OK));
            }
            Ok((text, EXIT_OK))
        }
        Command::Involve {
            spec,
            common,
            tree,
            op,
            index,
        } => {
            let spec = load_spec(&spec)?;
            let out = cmd_involve(&spec, &parse_tree(&tree)?, op, index)?.encode();
            let text = if common.json {
                format!("{}\n", serde_json::json!({ "tree": out }))
            } else {
                format!("{out}\n")
            };
            Ok((text, EXIT_OK))
        }
        Command::Bench {
            spec,
            common,
            methods,
            reps,
        } => {
            let spec = load_spec(&spec)?;
            let report = cmd_bench(&spec, &methods, reps, &common)?;
            let text = if common.json {
                report.json()
            } else {
                report.table()
            };
            Ok((
                text,
                if report.agreement {
                    EXIT_OK
                } else {
                    EXIT_DISAGREE
                },
            ))
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    match execute(cli.command) {
        Ok((stdout, code)) => Outcome {
            stdout,
            stderr: String::new(),
            code,
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

/// Parses `args` (program name first) and runs.
pub fn run_from<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            }
        }
    }
}
