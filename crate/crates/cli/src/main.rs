//! `domgame`: solve, simulate, verify and play the domination game on forests.

mod play;

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use domgame_core::bounds::{FIVE_EIGHTHS, FIVE_EIGHTHS_STALLER, THREE_FIFTHS, THREE_FIFTHS_STALLER};
use domgame_core::graph::{
    leaf_pair_at_distance, parse_graph, random_caterpillar, random_forest, random_tree, to_edge_list,
};
use domgame_core::solver::{domination_number, game_dom_number, SolverError};
use domgame_core::strategy::{run_game, StrategyError, TraceBuilder};
use domgame_core::verify::{
    check_trace_invariants, check_trace_structure, corpus_run, extremal_scan, CheckReport, ClassFilter,
    CorpusSource, CorpusSpec, Suite, VerifyError,
};
use domgame_core::{EngineError, Forest, Graph, GraphError, Player, StallerPolicy};

#[derive(Parser)]
#[command(name = "domgame", version, about = "Domination game on forests")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact γ and γ_g (or γ_g′) with the optimal first moves.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "dominator")]
        start: Player,
        /// Accept graphs with cycles.
        #[arg(long)]
        allow_general: bool,
    },
    /// One game of the phased Dominator strategy against a Staller policy.
    Strategy {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "optimal")]
        staller: StallerPolicy,
        #[arg(long, default_value = "dominator")]
        start: Player,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the trace in text form.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the trace as JSON.
        #[arg(long)]
        trace_json: Option<PathBuf>,
    },
    /// Run the checks over a corpus, or re-check recorded games.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, value_enum, default_value_t = SourceArg::Trees)]
        source: SourceArg,
        #[arg(long, default_value_t = 2)]
        nmin: usize,
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        /// Instances per seed for random sources.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Corpus seeds for random sources, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seeds: Vec<u64>,
        #[arg(long, value_enum, default_value_t = ClassArg::All)]
        class: ClassArg,
        /// Staller policies, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "optimal,greedy,random,worst")]
        policies: Vec<StallerPolicy>,
        /// Also fail instances whose γ_g exceeds ⌊3n/5⌋.
        #[arg(long)]
        assert_three_fifths: bool,
        /// Edge-list files to use as the corpus instead of a generated one.
        #[arg(long, num_args = 1..)]
        files: Vec<PathBuf>,
        /// JSON traces to replay and re-check instead of a corpus.
        #[arg(long, num_args = 1..)]
        replay: Vec<PathBuf>,
        /// Directory for report.csv, summary.txt and failure bundles.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; 0 uses all cores.
        #[arg(long, env = "DOMGAME_JOBS", default_value_t = 0)]
        jobs: usize,
    },
    /// Largest γ_g over all trees of each order.
    Scan {
        #[arg(long, default_value_t = 12)]
        nmax: usize,
    },
    /// Print a generated forest as an edge list.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        components: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play against the engine on the terminal.
    Play {
        #[arg(long)]
        input: PathBuf,
        /// The side you play.
        #[arg(long)]
        side: Player,
        #[arg(long, default_value = "dominator")]
        start: Player,
        #[arg(long, default_value = "optimal")]
        staller: StallerPolicy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Start the HTTP game service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Idle session lifetime in seconds.
        #[arg(long, default_value_t = 1800)]
        ttl: u64,
        #[arg(long, default_value_t = domgame_service::DEFAULT_MAX_VERTICES)]
        max_vertices: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Lemmas,
    Bounds,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Trees,
    Forests,
    Caterpillars,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    All,
    NoLeafPairs,
    LeafPairs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Path,
    Star,
    Tree,
    Forest,
    Caterpillar,
}

/// An error with its exit code.
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::LimitExceeded { .. } => Failure::new(3, e.to_string()),
            _ => Failure::new(2, e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(2, e.to_string())
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::TooLarge { .. } => Failure::new(3, e.to_string()),
            _ => Failure::new(2, e.to_string()),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::TooLarge { .. } => Failure::new(3, e.to_string()),
            _ => Failure::new(2, e.to_string()),
        }
    }
}

impl From<StrategyError> for Failure {
    fn from(e: StrategyError) -> Self {
        match e {
            StrategyError::NotAForest => Failure::new(4, e.to_string()),
            StrategyError::Engine(e) => e.into(),
            StrategyError::Solver(e) => e.into(),
            _ => Failure::new(2, e.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Graph(e) => e.into(),
            VerifyError::Solver(e) => e.into(),
            VerifyError::Strategy(e) => e.into(),
            _ => Failure::new(2, e.to_string()),
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    let g = parse_graph(&text)?.value;
    if g.n() > 64 {
        return Err(Failure::new(3, format!("graph has {} vertices; at most 64 are supported", g.n())));
    }
    Ok(g)
}

/// A forest for the strategy commands: cycles exit 4, isolated vertices 2.
fn read_forest(path: &Path) -> Result<Forest, Failure> {
    let g = read_graph(path)?;
    let forest = Forest::try_from(g).map_err(|e| Failure::new(4, format!("{}: {e}", StrategyError::NotAForest)))?;
    if let Some(&v) = forest.graph().isolated_vertices().first() {
        return Err(Failure::new(2, format!("vertex {v} is isolated")));
    }
    Ok(forest)
}

fn solve(input: &Path, start: Player, allow_general: bool) -> Result<String, Failure> {
    let g = read_graph(input)?;
    if !allow_general {
        Forest::try_from(g.clone())?;
    }
    let gamma = domination_number(&g)?;
    let r = game_dom_number(&g, start)?;
    let name = match start {
        Player::Dominator => "gamma_g",
        Player::Staller => "gamma_g'",
    };
    let moves: Vec<String> = r.optimal_first_moves.iter().map(|v| v.to_string()).collect();
    Ok(format!("gamma={gamma} {name}={}\noptimal first moves: {}\n", r.value, moves.join(" ")))
}

/// `turns <= floor (label)` comparisons for one finished game.
fn bound_line(forest: &Forest, start: Player, turns: usize) -> (String, bool) {
    let n = forest.graph().n();
    let (three, five) = match start {
        Player::Dominator => (THREE_FIFTHS, FIVE_EIGHTHS),
        Player::Staller => (THREE_FIFTHS_STALLER, FIVE_EIGHTHS_STALLER),
    };
    let in_class = !leaf_pair_at_distance(forest.graph(), 4);
    let mut ok = five.admits(n, turns);
    let three_note = if in_class {
        ok &= three.admits(n, turns);
        format!("({})", three.label)
    } else {
        format!("({} n/a: leaves at distance 4)", three.label)
    };
    let line = format!(
        "{turns} <= {} {three_note} ; {turns} <= {} ({})",
        three.floor(n),
        five.floor(n),
        five.label
    );
    (line, ok)
}

struct StrategyArgs {
    input: PathBuf,
    staller: StallerPolicy,
    start: Player,
    seed: u64,
    trace: Option<PathBuf>,
    trace_json: Option<PathBuf>,
}

fn strategy(a: &StrategyArgs) -> Result<(String, bool), Failure> {
    let forest = read_forest(&a.input)?;
    let trace = run_game(&forest, a.staller, a.start, a.seed)?;
    if let Some(p) = &a.trace {
        fs::write(p, trace.to_text())?;
    }
    if let Some(p) = &a.trace_json {
        fs::write(p, trace.to_json())?;
    }
    let mut violations = check_trace_invariants(&trace);
    violations.extend(check_trace_structure(&trace));
    let (line, bounds_ok) = bound_line(&forest, a.start, trace.turns());
    let ok = bounds_ok && violations.is_empty();
    let mut out = trace.to_text();
    for v in &violations {
        let _ = writeln!(out, "violation: {v}");
    }
    let _ = writeln!(
        out,
        "turns={} e*={} c*={} staller={} start={}",
        trace.turns(),
        trace.e_star,
        trace.c_star,
        a.staller,
        a.start.to_string().to_lowercase()
    );
    let _ = writeln!(out, "{line} {}", if ok { "PASS" } else { "FAIL" });
    Ok((out, ok))
}

/// Replays the vertex sequence of a JSON trace and re-runs the trace checks.
fn replay(path: &Path) -> Result<Vec<String>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    let bad = |m: &str| Failure::new(2, format!("{}: {m}", path.display()));
    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| bad(&e.to_string()))?;
    let forest: Forest = serde_json::from_value(v["forest"].clone()).map_err(|e| bad(&e.to_string()))?;
    let first: Player = serde_json::from_value(v["first"].clone()).map_err(|e| bad(&e.to_string()))?;
    let moves: Vec<usize> = v["records"]
        .as_array()
        .ok_or_else(|| bad("missing records"))?
        .iter()
        .map(|r| r["vertex"].as_u64().map(|x| x as usize).ok_or_else(|| bad("record without vertex")))
        .collect::<Result<_, _>>()?;
    let mut game = TraceBuilder::new(&forest, first)?;
    for m in moves {
        game.push(m)?;
    }
    let trace = game.finish();
    let mut violations = check_trace_invariants(&trace);
    violations.extend(check_trace_structure(&trace));
    Ok(violations.iter().map(|x| format!("{}: {x}", path.display())).collect())
}

fn merge(into: &mut CheckReport, mut other: CheckReport, prefix: Option<String>) {
    if let Some(p) = prefix {
        for r in &mut other.rows {
            r.id = format!("{p}-{}", r.id);
        }
        for f in &mut other.failures {
            f.instance = format!("{p}-{}", f.instance);
        }
    }
    into.rows.extend(other.rows);
    into.failures.extend(other.failures);
    into.filtered_out += other.filtered_out;
}

struct VerifyArgs {
    suite: SuiteArg,
    source: SourceArg,
    nmin: usize,
    nmax: usize,
    count: usize,
    seeds: Vec<u64>,
    class: ClassArg,
    policies: Vec<StallerPolicy>,
    assert_three_fifths: bool,
    files: Vec<PathBuf>,
    replay: Vec<PathBuf>,
    out: Option<PathBuf>,
    jobs: usize,
}

fn verify(a: VerifyArgs) -> Result<(String, bool), Failure> {
    if !a.replay.is_empty() {
        let mut out = String::new();
        let mut found = 0;
        for p in &a.replay {
            for line in replay(p)? {
                found += 1;
                let _ = writeln!(out, "FAIL {line}");
            }
        }
        let _ = write!(out, "replayed {} traces, {found} violations\nresult: {}\n", a.replay.len(), pass(found == 0));
        return Ok((out, found == 0));
    }
    let suite = match a.suite {
        SuiteArg::All => Suite::ALL,
        SuiteArg::Lemmas => Suite::LEMMAS,
        SuiteArg::Bounds => Suite::BOUNDS,
    };
    let class = match a.class {
        ClassArg::All => ClassFilter::All,
        ClassArg::NoLeafPairs => ClassFilter::NoLeafPairAtDistance4,
        ClassArg::LeafPairs => ClassFilter::LeafPairAtDistance4,
    };
    let sources: Vec<(Option<String>, CorpusSource)> = if !a.files.is_empty() {
        vec![(None, CorpusSource::Files(a.files.clone()))]
    } else {
        match a.source {
            SourceArg::Trees => vec![(None, CorpusSource::AllTrees { n_min: a.nmin, n_max: a.nmax })],
            SourceArg::Forests | SourceArg::Caterpillars => {
                let tag = a.seeds.len() > 1;
                a.seeds
                    .iter()
                    .map(|&seed| {
                        let (count, n_min, n_max) = (a.count, a.nmin, a.nmax);
                        let src = match a.source {
                            SourceArg::Forests => CorpusSource::RandomForests { count, n_min, n_max, seed },
                            _ => CorpusSource::RandomCaterpillars { count, n_min, n_max, seed },
                        };
                        (tag.then(|| format!("s{seed}")), src)
                    })
                    .collect()
            }
        }
    };
    let mut report = CheckReport { rows: Vec::new(), failures: Vec::new(), filtered_out: 0 };
    for (prefix, source) in sources {
        let spec = CorpusSpec {
            class,
            policies: a.policies.clone(),
            suite,
            assert_three_fifths: a.assert_three_fifths,
            jobs: a.jobs,
            ..CorpusSpec::new(source)
        };
        merge(&mut report, corpus_run(&spec)?, prefix);
    }
    let summary = report.summary();
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir)?;
        report.write_csv(&dir.join("report.csv"))?;
        fs::write(dir.join("summary.txt"), format!("{summary}\n"))?;
        if !report.is_clean() {
            report.write_bundles(&dir.join("failures"))?;
        }
    }
    Ok((format!("{summary}\n"), report.is_clean()))
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn scan(nmax: usize) -> Result<String, Failure> {
    let rows = extremal_scan(nmax)?;
    let mut out = String::from("n trees max_gamma_g floor_3n_5 attainers\n");
    for r in rows {
        let flag = if r.exceeds_three_fifths() { " FINDING" } else { "" };
        let _ = writeln!(out, "{} {} {} {} {}{flag}", r.n, r.trees, r.max_gamma_g, r.floor_3n_5, r.attainers.len());
    }
    Ok(out)
}

fn generate(kind: Kind, n: usize, components: usize, seed: u64) -> Result<Forest, Failure> {
    if n < 2 {
        return Err(Failure::new(2, "--n must be at least 2"));
    }
    Ok(match kind {
        Kind::Path => Forest::path(n),
        Kind::Star => Forest::star(n - 1),
        Kind::Tree => random_tree(n, seed),
        Kind::Forest => random_forest(n, components, seed)?,
        Kind::Caterpillar => random_caterpillar(n, seed),
    })
}

fn serve(addr: SocketAddr, ttl: u64, max_vertices: usize) -> Result<(), Failure> {
    let state = domgame_service::AppState::new(Duration::from_secs(ttl), max_vertices);
    let rt = tokio::runtime::Runtime::new()?;
    eprintln!("listening on http://{addr}");
    rt.block_on(domgame_service::serve(addr, state))?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Solve { input, start, allow_general } => {
            print!("{}", solve(&input, start, allow_general)?);
            Ok(true)
        }
        Command::Strategy { input, staller, start, seed, trace, trace_json } => {
            let (out, ok) = strategy(&StrategyArgs { input, staller, start, seed, trace, trace_json })?;
            print!("{out}");
            Ok(ok)
        }
        Command::Verify {
            suite,
            source,
            nmin,
            nmax,
            count,
            seeds,
            class,
            policies,
            assert_three_fifths,
            files,
            replay,
            out,
            jobs,
        } => {
            let args = VerifyArgs {
                suite,
                source,
                nmin,
                nmax,
                count,
                seeds,
                class,
                policies,
                assert_three_fifths,
                files,
                replay,
                out,
                jobs,
            };
            let (text, ok) = verify(args)?;
            print!("{text}");
            Ok(ok)
        }
        Command::Scan { nmax } => {
            print!("{}", scan(nmax)?);
            Ok(true)
        }
        Command::Gen { kind, n, components, seed, out } => {
            let text = to_edge_list(generate(kind, n, components, seed)?.graph());
            match out {
                Some(p) => fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Play { input, side, start, staller, seed } => {
            let forest = read_forest(&input)?;
            play::run(forest, side, start, staller, seed, io::stdin().lock(), io::stdout().lock())?;
            Ok(true)
        }
        Command::Serve { addr, ttl, max_vertices } => {
            serve(addr, ttl, max_vertices)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
