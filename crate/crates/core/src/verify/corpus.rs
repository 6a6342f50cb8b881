use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{check_bounds_exact, check_trace_invariants, check_trace_structure};
use super::{Check, VerifyError, Violation};
use crate::bounds::{FIVE_EIGHTHS, FIVE_EIGHTHS_STALLER, SEVEN_ELEVENTHS, THREE_FIFTHS, THREE_FIFTHS_STALLER};
use crate::graph::{
    enumerate_trees, leaf_pair_at_distance, parse_edge_list, random_caterpillar, random_forest, to_edge_list,
    Forest,
};
use crate::solver::Player;
use crate::strategy::{run_game, GameTrace, StallerPolicy};

/// Where the forests of a corpus come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorpusSource {
    /// Every non-isomorphic tree with `n_min..=n_max` vertices (order 1 is skipped).
    AllTrees { n_min: usize, n_max: usize },
    /// Isolate-free forests of uniform random order and component count.
    RandomForests { count: usize, n_min: usize, n_max: usize, seed: u64 },
    RandomCaterpillars { count: usize, n_min: usize, n_max: usize, seed: u64 },
    /// Edge-list files.
    Files(Vec<PathBuf>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ClassFilter {
    #[default]
    All,
    /// Forests in which no two leaves are at distance 4.
    NoLeafPairAtDistance4,
    LeafPairAtDistance4,
}

impl ClassFilter {
    pub fn admits(self, forest: &Forest) -> bool {
        match self {
            ClassFilter::All => true,
            ClassFilter::NoLeafPairAtDistance4 => !leaf_pair_at_distance(forest.graph(), 4),
            ClassFilter::LeafPairAtDistance4 => leaf_pair_at_distance(forest.graph(), 4),
        }
    }
}

/// Which groups of checks to run per instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suite {
    /// Strategy traces against every policy and start order.
    pub lemmas: bool,
    /// Exact γ, γ_g, γ_g′ against the bounds.
    pub bounds: bool,
    /// Worst case of the phased strategy against the same thresholds.
    pub worst_case: bool,
}

impl Suite {
    pub const ALL: Suite = Suite { lemmas: true, bounds: true, worst_case: true };
    pub const LEMMAS: Suite = Suite { lemmas: true, bounds: false, worst_case: false };
    pub const BOUNDS: Suite = Suite { lemmas: false, bounds: true, worst_case: true };
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub source: CorpusSource,
    pub class: ClassFilter,
    pub policies: Vec<StallerPolicy>,
    pub starts: Vec<Player>,
    pub suite: Suite,
    /// Also assert γ_g ≤ ⌊3n/5⌋ for every instance, whatever its class.
    pub assert_three_fifths: bool,
    /// Worker threads; 0 uses the default pool.
    pub jobs: usize,
}

impl CorpusSpec {
    pub fn new(source: CorpusSource) -> Self {
        CorpusSpec {
            source,
            class: ClassFilter::All,
            policies: vec![StallerPolicy::Optimal, StallerPolicy::GreedyMin, StallerPolicy::Random],
            starts: vec![Player::Dominator, Player::Staller],
            suite: Suite::ALL,
            assert_three_fifths: false,
            jobs: 0,
        }
    }

    /// The instances of the corpus, in a fixed order, before class filtering.
    pub fn instances(&self) -> Result<Vec<Instance>, VerifyError> {
        let mut out = Vec::new();
        match &self.source {
            CorpusSource::AllTrees { n_min, n_max } => {
                for n in (*n_min).max(2)..=*n_max {
                    for (k, forest) in enumerate_trees(n)?.enumerate() {
                        out.push(Instance { id: format!("tree-{n}-{k}"), forest, seed: (n * 1_000_000 + k) as u64 });
                    }
                }
            }
            CorpusSource::RandomForests { count, n_min, n_max, seed } => {
                check_range(*n_min, *n_max)?;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                for k in 0..*count {
                    let n = rng.gen_range(*n_min..=*n_max);
                    let components = rng.gen_range(1..=n / 2);
                    let s: u64 = rng.gen();
                    let forest = random_forest(n, components, s)?;
                    out.push(Instance { id: format!("forest-{k}"), forest, seed: s });
                }
            }
            CorpusSource::RandomCaterpillars { count, n_min, n_max, seed } => {
                check_range(*n_min, *n_max)?;
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                for k in 0..*count {
                    let n = rng.gen_range(*n_min..=*n_max);
                    let s: u64 = rng.gen();
                    out.push(Instance { id: format!("caterpillar-{k}"), forest: random_caterpillar(n, s), seed: s });
                }
            }
            CorpusSource::Files(paths) => {
                for (k, path) in paths.iter().enumerate() {
                    let text = fs::read_to_string(path)?;
                    let parsed = parse_edge_list(&text)?;
                    if parsed.has_isolated_vertices() {
                        return Err(VerifyError::GeneratorFailure(format!("{} has isolated vertices", path.display())));
                    }
                    let id = path.file_stem().map_or(format!("file-{k}"), |s| s.to_string_lossy().into_owned());
                    out.push(Instance { id, forest: parsed.value, seed: k as u64 });
                }
            }
        }
        Ok(out)
    }
}

fn check_range(n_min: usize, n_max: usize) -> Result<(), VerifyError> {
    if n_min < 2 || n_min > n_max {
        return Err(VerifyError::GeneratorFailure(format!("bad order range {n_min}..={n_max}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub id: String,
    pub forest: Forest,
    /// Seed for the random Staller (and the generator, for random sources).
    pub seed: u64,
}

/// Column names of the CSV report, in order.
pub const CSV_COLUMNS: [&str; 22] = [
    "id",
    "n",
    "components",
    "leaf_pair_d4",
    "gamma",
    "gamma_g",
    "gamma_g_staller",
    "worst_dominator_start",
    "worst_staller_start",
    "turns_dominator_start",
    "turns_staller_start",
    "e_star_max",
    "c_star_max",
    "floor_3n_5",
    "floor_3n1_5",
    "floor_5n_8",
    "floor_5n2_8",
    "slack_7n_11",
    "three_fifths_consistent",
    "lemma_violations",
    "bound_violations",
    "status",
];

/// One CSV row. Empty cells mean the quantity was not computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceRow {
    pub id: String,
    pub n: usize,
    pub components: usize,
    pub leaf_pair_d4: bool,
    pub gamma: Option<usize>,
    pub gamma_g: Option<u32>,
    pub gamma_g_staller: Option<u32>,
    pub worst_dominator_start: Option<u32>,
    pub worst_staller_start: Option<u32>,
    /// Longest strategy game over the policies run, per start order.
    pub turns_dominator_start: Option<usize>,
    pub turns_staller_start: Option<usize>,
    pub e_star_max: Option<i64>,
    pub c_star_max: Option<u32>,
    pub floor_3n_5: i64,
    pub floor_3n1_5: i64,
    pub floor_5n_8: i64,
    pub floor_5n2_8: i64,
    /// `7n/11 - gamma_g`.
    pub slack_7n_11: Option<String>,
    /// γ_g ≤ ⌊3n/5⌋ and γ_g′ ≤ ⌊(3n+2)/5⌋; a report-only finding when false.
    pub three_fifths_consistent: Option<bool>,
    pub lemma_violations: usize,
    pub bound_violations: usize,
    pub status: &'static str,
}

/// A violation with what is needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub instance: String,
    pub forest: Forest,
    pub seed: u64,
    pub policy: Option<StallerPolicy>,
    pub start: Option<Player>,
    pub violation: Violation,
    pub trace: Option<GameTrace>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub rows: Vec<InstanceRow>,
    pub failures: Vec<Failure>,
    /// Instances dropped by the class filter.
    pub filtered_out: usize,
}

impl CheckReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn lemma_violations(&self) -> usize {
        self.failures.iter().filter(|f| !f.violation.check.is_bound()).count()
    }

    pub fn bound_violations(&self) -> usize {
        self.failures.iter().filter(|f| f.violation.check.is_bound()).count()
    }

    /// Rows where γ_g or γ_g′ exceeds the 3/5 conjecture.
    pub fn findings(&self) -> Vec<&InstanceRow> {
        self.rows.iter().filter(|r| r.three_fifths_consistent == Some(false)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("rows serialize");
        }
        if self.rows.is_empty() {
            w.write_record(CSV_COLUMNS).expect("header writes");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("CSV is UTF-8")
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), VerifyError> {
        Ok(fs::write(path, self.to_csv())?)
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let max_n = self.rows.iter().map(|r| r.n).max().unwrap_or(0);
        let _ = writeln!(s, "instances: {} (largest order {max_n}, {} filtered out)", self.rows.len(), self.filtered_out);
        let _ = writeln!(s, "lemma violations: {}", self.lemma_violations());
        let _ = writeln!(s, "bound violations: {}", self.bound_violations());
        let findings = self.findings();
        let _ = writeln!(s, "3/5 conjecture findings: {}", findings.len());
        for r in findings {
            let _ = writeln!(
                s,
                "  FINDING {}: n={} gamma_g={:?} gamma_g'={:?}",
                r.id, r.n, r.gamma_g, r.gamma_g_staller
            );
        }
        for f in self.failures.iter().take(20) {
            let _ = writeln!(s, "  FAIL {}: {}", f.instance, f.violation);
        }
        if self.failures.len() > 20 {
            let _ = writeln!(s, "  ... {} more", self.failures.len() - 20);
        }
        let _ = write!(s, "result: {}", if self.is_clean() { "PASS" } else { "FAIL" });
        s
    }

    /// One directory per failure with the forest, the seed and the trace.
    pub fn write_bundles(&self, dir: &Path) -> Result<usize, VerifyError> {
        fs::create_dir_all(dir)?;
        for (k, f) in self.failures.iter().enumerate() {
            let sub = dir.join(format!("{:04}-{}", k, f.instance));
            fs::create_dir_all(&sub)?;
            fs::write(sub.join("forest.txt"), to_edge_list(f.forest.graph()))?;
            let mut info = format!("instance {}\nseed {}\ncheck {}\n", f.instance, f.seed, f.violation);
            if let Some(p) = f.policy {
                let _ = writeln!(info, "staller {p}");
            }
            if let Some(st) = f.start {
                let _ = writeln!(info, "start {}", start_name(st));
            }
            fs::write(sub.join("failure.txt"), info)?;
            if let Some(t) = &f.trace {
                fs::write(sub.join("trace.txt"), t.to_text())?;
                fs::write(sub.join("trace.json"), t.to_json())?;
            }
        }
        Ok(self.failures.len())
    }
}

fn start_name(p: Player) -> &'static str {
    match p {
        Player::Dominator => "dominator",
        Player::Staller => "staller",
    }
}

/// Runs every selected check on every instance. Instances are processed in
/// parallel; rows and failures come back in corpus order.
pub fn corpus_run(spec: &CorpusSpec) -> Result<CheckReport, VerifyError> {
    let all = spec.instances()?;
    let total = all.len();
    let instances: Vec<Instance> = all.into_iter().filter(|i| spec.class.admits(&i.forest)).collect();
    let filtered_out = total - instances.len();
    let work = || instances.par_iter().map(|i| evaluate(spec, i)).collect::<Result<Vec<_>, _>>();
    let results = if spec.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(spec.jobs)
            .build()
            .map_err(|e| VerifyError::Io(e.to_string()))?
            .install(work)?
    } else {
        work()?
    };
    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (row, fs) in results {
        rows.push(row);
        failures.extend(fs);
    }
    Ok(CheckReport { rows, failures, filtered_out })
}

fn evaluate(spec: &CorpusSpec, inst: &Instance) -> Result<(InstanceRow, Vec<Failure>), VerifyError> {
    let f = &inst.forest;
    let n = f.n();
    let mut failures = Vec::new();
    let fail = |v: Violation, policy, start, trace: Option<&GameTrace>| Failure {
        instance: inst.id.clone(),
        forest: f.clone(),
        seed: inst.seed,
        policy,
        start,
        violation: v,
        trace: trace.cloned(),
    };
    let mut row = InstanceRow {
        id: inst.id.clone(),
        n,
        components: f.components().len(),
        leaf_pair_d4: leaf_pair_at_distance(f.graph(), 4),
        gamma: None,
        gamma_g: None,
        gamma_g_staller: None,
        worst_dominator_start: None,
        worst_staller_start: None,
        turns_dominator_start: None,
        turns_staller_start: None,
        e_star_max: None,
        c_star_max: None,
        floor_3n_5: THREE_FIFTHS.floor(n),
        floor_3n1_5: THREE_FIFTHS_STALLER.floor(n),
        floor_5n_8: FIVE_EIGHTHS.floor(n),
        floor_5n2_8: FIVE_EIGHTHS_STALLER.floor(n),
        slack_7n_11: None,
        three_fifths_consistent: None,
        lemma_violations: 0,
        bound_violations: 0,
        status: "PASS",
    };

    if spec.suite.bounds || spec.suite.worst_case {
        let b = check_bounds_exact(f, spec.suite.worst_case)?;
        row.gamma = Some(b.gamma);
        row.gamma_g = Some(b.gamma_g);
        row.gamma_g_staller = Some(b.gamma_g_staller);
        row.worst_dominator_start = b.worst_dominator_start;
        row.worst_staller_start = b.worst_staller_start;
        row.slack_7n_11 = Some(format!("{:.4}", SEVEN_ELEVENTHS.slack::<f64>(n, b.gamma_g as usize)));
        row.three_fifths_consistent = Some(
            THREE_FIFTHS.admits(n, b.gamma_g as usize)
                && crate::bounds::CONJECTURED_STALLER.admits(n, b.gamma_g_staller as usize),
        );
        let mut vs = b.violations;
        if spec.assert_three_fifths && b.leaf_pair_at_distance_4 && !THREE_FIFTHS.admits(n, b.gamma_g as usize) {
            vs.push(Violation::new(
                Check::ThreeFifths,
                None,
                format!("gamma_g = {} > {} = {}", b.gamma_g, THREE_FIFTHS, THREE_FIFTHS.floor(n)),
            ));
        }
        row.bound_violations = vs.len();
        failures.extend(vs.into_iter().map(|v| fail(v, None, None, None)));
    }

    if spec.suite.lemmas {
        for &start in &spec.starts {
            for &policy in &spec.policies {
                let t = run_game(f, policy, start, inst.seed)?;
                let turns = match start {
                    Player::Dominator => &mut row.turns_dominator_start,
                    Player::Staller => &mut row.turns_staller_start,
                };
                *turns = Some(turns.unwrap_or(0).max(t.turns()));
                row.e_star_max = Some(row.e_star_max.unwrap_or(i64::MIN).max(t.e_star));
                row.c_star_max = Some(row.c_star_max.unwrap_or(0).max(t.c_star));
                let mut vs = check_trace_invariants(&t);
                vs.extend(check_trace_structure(&t));
                row.lemma_violations += vs.len();
                failures.extend(vs.into_iter().map(|v| fail(v, Some(policy), Some(start), Some(&t))));
            }
        }
    }

    if !failures.is_empty() {
        row.status = "FAIL";
    }
    Ok((row, failures))
}
