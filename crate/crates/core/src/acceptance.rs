//! The acceptance suite: sharpness values, C5 refutation, desk-scale runs
//! of the colorer on every supported class, oracle cross-checks, configuration
//! coverage, discharging arithmetic, matcher equivalence and determinism.
//!
//! Every criterion produces a JSON document; the determinism criterion
//! reruns the others and compares digests of those documents.

use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::batch;
use crate::colorer::{color, ColorOptions, Regime};
use crate::coloring::{degree_plus_k, is_pcf, random_uniform_size, ListAssignment};
use crate::discharging::{girth12_ids, rate, run_discharging, verify_contradiction, DischargeOutcome, Fifths};
use crate::generators::{gen_girth12, gen_k4mf, gen_o1p, named, Certified};
use crate::graph::Graph;
use crate::patterns::{all_patterns, brute_force_find, find, find_any, t_range, ConfigId};
use crate::smallgraphs::connected_graphs;
use crate::solver::{self, refute_choosability, witness_verifies, RefuteOutcome, DEFAULT_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AcceptConfig {
    pub seed: u64,
    /// Instances per class in the desk-scale criterion.
    pub instances: usize,
    pub lists_per_instance: usize,
    pub max_order: usize,
    pub budget: u64,
}

impl AcceptConfig {
    pub fn full(seed: u64) -> Self {
        AcceptConfig {
            seed,
            instances: 500,
            lists_per_instance: 3,
            max_order: 30,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn quick(seed: u64) -> Self {
        AcceptConfig {
            instances: 40,
            ..Self::full(seed)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub output: Value,
}

impl CriterionResult {
    /// Hex SHA-256 of the criterion's JSON output.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.output.to_string().as_bytes()))
    }

    pub fn line(&self) -> String {
        format!(
            "{} criterion {} ({}): {} [{:.2}s]",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AcceptReport {
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
}

impl AcceptReport {
    pub fn all_pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }
}

/// SplitMix64 over the base seed and a path of indices.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    let mut x = base;
    for &p in path {
        x = x.wrapping_add(p.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        x ^= x >> 31;
    }
    x
}

/// A class together with the list regime it is colored from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    K4mfDegreePlus2,
    O1pBoundedDegreePlus2,
    O1pDegreePlus3,
    Girth12DegreePlus2,
    O1pUniform6,
    Girth12Uniform6,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::K4mfDegreePlus2,
        Suite::O1pBoundedDegreePlus2,
        Suite::O1pDegreePlus3,
        Suite::Girth12DegreePlus2,
        Suite::O1pUniform6,
        Suite::Girth12Uniform6,
    ];

    pub fn regime(self) -> Regime {
        match self {
            Suite::K4mfDegreePlus2 | Suite::O1pBoundedDegreePlus2 | Suite::Girth12DegreePlus2 => Regime::DegreePlus(2),
            Suite::O1pDegreePlus3 => Regime::DegreePlus(3),
            Suite::O1pUniform6 | Suite::Girth12Uniform6 => Regime::Uniform(6),
        }
    }

    /// Ids that must occur in every instance of the class.
    pub fn coverage_ids(self) -> Vec<ConfigId> {
        match self {
            Suite::K4mfDegreePlus2 => t_range(1, 12),
            Suite::O1pBoundedDegreePlus2 => t_range(1, 35),
            Suite::Girth12DegreePlus2 | Suite::Girth12Uniform6 => girth12_ids(),
            Suite::O1pDegreePlus3 | Suite::O1pUniform6 => {
                vec![
                    ConfigId::t(1),
                    ConfigId::t(3),
                    ConfigId::t(14),
                    ConfigId::x(1),
                    ConfigId::x(2),
                ]
            }
        }
    }

    pub fn is_girth12(self) -> bool {
        matches!(self, Suite::Girth12DegreePlus2 | Suite::Girth12Uniform6)
    }

    /// Generates instance `index`; the order is drawn from the seed.
    pub fn generate(self, seed: u64, max_order: usize) -> Certified {
        let n = 3 + (derive_seed(seed, &[0]) % (max_order as u64 - 2)) as usize;
        match self {
            Suite::K4mfDegreePlus2 => gen_k4mf(n, seed).unwrap(),
            Suite::O1pBoundedDegreePlus2 => gen_o1p(n, seed, Some(4)).unwrap(),
            Suite::O1pDegreePlus3 | Suite::O1pUniform6 => gen_o1p(n, seed, None).unwrap(),
            Suite::Girth12DegreePlus2 | Suite::Girth12Uniform6 => {
                let mut attempt = 0u64;
                loop {
                    let s = derive_seed(seed, &[1, attempt]);
                    let n_base = 3 + (s % 6) as usize;
                    let c = gen_girth12(n_base, s).unwrap();
                    if c.graph.order() <= max_order {
                        return c;
                    }
                    attempt += 1;
                }
            }
        }
    }

    fn lists(self, g: &Graph, seed: u64) -> ListAssignment {
        match self.regime() {
            Regime::DegreePlus(k) => degree_plus_k(g, k, g.max_degree() + k + 2, seed).unwrap(),
            Regime::Uniform(k) => random_uniform_size(g, k, 10, seed).unwrap(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
struct RunRecord {
    list_seed: u64,
    error: Option<String>,
    pcf: bool,
    coloring_sha: Option<String>,
    abandoned: usize,
    /// Exact solver verdict for small instances: (sat, witness verifies).
    oracle: Option<(bool, bool)>,
}

#[derive(Clone, Debug, Serialize)]
struct InstanceRecord {
    suite: Suite,
    index: usize,
    seed: u64,
    n: usize,
    m: usize,
    max_degree: usize,
    skipped: bool,
    config: Option<ConfigId>,
    runs: Vec<RunRecord>,
}

const ORACLE_MAX_ORDER: usize = 14;

fn run_instance(cfg: &AcceptConfig, suite: Suite, index: usize) -> InstanceRecord {
    let seed = derive_seed(cfg.seed, &[3, suite as u64, index as u64]);
    let c = suite.generate(seed, cfg.max_order);
    let g = &c.graph;
    let config = find_any(g, &suite.coverage_ids()).map(|m| m.id);
    // C5 is the stated exception for degree+2 lists
    let skipped = suite.regime() == Regime::DegreePlus(2) && g.is_cycle() && g.order() == 5;
    let mut runs = Vec::new();
    if !skipped {
        let opts = ColorOptions {
            budget: cfg.budget,
            ..Default::default()
        };
        for j in 0..cfg.lists_per_instance {
            let list_seed = derive_seed(seed, &[2, j as u64]);
            let lists = suite.lists(g, list_seed);
            let mut abandoned = 0;
            let (error, pcf, coloring_sha) = match color(g, &lists, &c.cert, suite.regime(), &opts) {
                Ok(r) => {
                    let ok = is_pcf(g, &r.coloring, Some(&lists)).map(|p| p.pcf).unwrap_or(false);
                    let sha = hex::encode(Sha256::digest(r.coloring.to_json().as_bytes()));
                    abandoned = r.abandoned;
                    (None, ok, Some(sha))
                }
                Err(e) => (Some(e.to_string()), false, None),
            };
            let oracle = (g.order() <= ORACLE_MAX_ORDER).then(|| match solver::solve(g, &lists, cfg.budget) {
                Ok(out) => (out.is_sat(), !out.is_sat() || witness_verifies(g, &lists, &out)),
                Err(_) => (false, false),
            });
            runs.push(RunRecord {
                list_seed,
                error,
                pcf,
                coloring_sha,
                abandoned,
                oracle,
            });
        }
    }
    InstanceRecord {
        suite,
        index,
        seed,
        n: g.order(),
        m: g.size(),
        max_degree: g.max_degree(),
        skipped,
        config,
        runs,
    }
}

fn timed(id: u8, name: &'static str, f: impl FnOnce() -> (bool, String, Value)) -> CriterionResult {
    let start = Instant::now();
    let (pass, detail, output) = f();
    CriterionResult {
        id,
        name,
        pass,
        detail,
        elapsed: start.elapsed(),
        output,
    }
}

pub fn sharpness(budget: u64) -> CriterionResult {
    timed(1, "sharpness", || {
        let mut cases: Vec<(String, Graph, usize)> = vec![("C5".into(), named::cycle(5).unwrap(), 5)];
        for l in [4, 7, 8, 10, 11] {
            cases.push((format!("C{l}"), named::cycle(l).unwrap(), 4));
        }
        for l in [3, 6, 9, 12] {
            cases.push((format!("C{l}"), named::cycle(l).unwrap(), 3));
        }
        cases.push(("SK4".into(), named::subdivided_complete(4).unwrap(), 4));
        cases.push(("SK5".into(), named::subdivided_complete(5).unwrap(), 5));
        let results = batch::map(&cases, |(name, g, want)| {
            let got = solver::chi_pcf(g, budget).ok().map(|c| c.chi);
            json!({"graph": name, "expected": want, "chi": got})
        });
        let bad: Vec<&Value> = results.iter().filter(|r| r["expected"] != r["chi"]).collect();
        let detail = if bad.is_empty() {
            format!("{} exact values match", results.len())
        } else {
            format!(
                "mismatches: {}",
                Value::from(bad.into_iter().cloned().collect::<Vec<_>>())
            )
        };
        (detail.ends_with("match"), detail, Value::from(results))
    })
}

pub fn c5_refutation(budget: u64) -> CriterionResult {
    timed(2, "C5 refutation", || {
        let c5 = named::cycle(5).unwrap();
        let uniform = ListAssignment::uniform(&c5, 1..=4);
        let refuted = refute_choosability(&c5, 2, Some(4), budget);
        let confirmed = solver::solve(&c5, &uniform, budget)
            .map(|o| o.is_unsat())
            .unwrap_or(false);
        let (pass, detail) = match &refuted {
            Ok(RefuteOutcome::Found { lists, .. }) if *lists == uniform && confirmed => {
                (true, "uniform {1,2,3,4} found, solver confirms UNSAT".to_string())
            }
            other => (false, format!("got {other:?}, solver UNSAT = {confirmed}")),
        };
        let out = json!({
            "refute": refuted.ok().map(|r| serde_json::to_value(r).unwrap()),
            "uniform_unsat": confirmed,
        });
        (pass, detail, out)
    })
}

fn corpus(cfg: &AcceptConfig) -> Vec<InstanceRecord> {
    let jobs: Vec<(Suite, usize)> = Suite::ALL
        .iter()
        .flat_map(|&s| (0..cfg.instances).map(move |i| (s, i)))
        .collect();
    batch::map(&jobs, |&(s, i)| run_instance(cfg, s, i))
}

fn desk_scale(records: &[InstanceRecord], elapsed: Duration) -> CriterionResult {
    let mut runs = 0;
    let mut failures = Vec::new();
    for r in records {
        for run in &r.runs {
            runs += 1;
            if run.error.is_some() || !run.pcf {
                failures.push(json!({"suite": r.suite, "index": r.index, "seed": r.seed, "list_seed": run.list_seed, "error": run.error}));
            }
        }
    }
    let skipped = records.iter().filter(|r| r.skipped).count();
    let per_suite: Vec<Value> = Suite::ALL
        .iter()
        .map(|&s| {
            let rs: Vec<&InstanceRecord> = records.iter().filter(|r| r.suite == s).collect();
            json!({
                "suite": s,
                "instances": rs.len(),
                "max_n": rs.iter().map(|r| r.n).max(),
                "max_degree": rs.iter().map(|r| r.max_degree).max(),
                "runs": rs.iter().map(|r| r.runs.len()).sum::<usize>(),
                "runs_with_abandoned_matches": rs.iter().flat_map(|r| &r.runs).filter(|x| x.abandoned > 0).count(),
            })
        })
        .collect();
    let pass = failures.is_empty() && runs > 0;
    let detail = format!(
        "{} colorings over {} instances ({} C5 skipped), {} failures",
        runs,
        records.len(),
        skipped,
        failures.len()
    );
    let output = json!({"per_suite": per_suite, "failures": failures, "records": records});
    CriterionResult {
        id: 3,
        name: "desk-scale colorer",
        pass,
        detail,
        elapsed,
        output,
    }
}

fn oracle_cross_check(records: &[InstanceRecord]) -> CriterionResult {
    timed(4, "oracle cross-check", || {
        let mut checked = 0;
        let mut bad = Vec::new();
        for r in records {
            for run in &r.runs {
                if let Some((sat, witness_ok)) = run.oracle {
                    checked += 1;
                    if !sat || !witness_ok || !run.pcf {
                        bad.push(json!({"suite": r.suite, "index": r.index, "list_seed": run.list_seed}));
                    }
                }
            }
        }
        let pass = bad.is_empty() && checked > 0;
        let detail = format!("{checked} small cases, {} disagreements", bad.len());
        (pass, detail, json!({"checked": checked, "disagreements": bad}))
    })
}

fn coverage(records: &[InstanceRecord]) -> CriterionResult {
    timed(5, "configuration coverage", || {
        // C5 is the one degree+2 exception and contains none of the configurations
        let eligible: Vec<&InstanceRecord> = records.iter().filter(|r| !r.skipped).collect();
        let misses: Vec<Value> = eligible
            .iter()
            .filter(|r| r.config.is_none())
            .map(|r| json!({"suite": r.suite, "index": r.index, "seed": r.seed}))
            .collect();
        let detail = format!(
            "{}/{} instances contain a class configuration ({} C5 excluded)",
            eligible.len() - misses.len(),
            eligible.len(),
            records.len() - eligible.len()
        );
        let hits: Vec<Value> = records.iter().map(|r| json!(r.config)).collect();
        (misses.is_empty(), detail, json!({"configs": hits, "misses": misses}))
    })
}

fn discharging(cfg: &AcceptConfig) -> CriterionResult {
    timed(6, "discharging arithmetic", || {
        let mut problems = Vec::new();
        // the three worked identities
        let two = named::thread_star(&[1, 1, 1]);
        let four = named::thread_star(&[1, 1, 1, 1]);
        let (_, f3) = run_discharging(&two).unwrap();
        let (_, f4) = run_discharging(&four).unwrap();
        let worked = [f3.charges[&1], f3.charges[&0], f4.charges[&0]];
        if worked != [Fifths(0); 3] {
            problems.push(json!({"worked": worked.map(|f| f.to_string())}));
        }
        let by_formula = [
            Fifths(5 * 2 - 12) + rate(3) + rate(3),
            Fifths(5 * 3 - 12) - Fifths(3 * rate(3).0),
            Fifths(5 * 4 - 12) - Fifths(4 * rate(4).0),
        ];
        if by_formula != [Fifths(0); 3] {
            problems.push(json!({"formula": by_formula.map(|f| f.to_string())}));
        }
        let seeds: Vec<u64> = (0..cfg.instances as u64)
            .map(|i| derive_seed(cfg.seed, &[6, i]))
            .collect();
        let reports = batch::map(&seeds, |&s| {
            let c = Suite::Girth12DegreePlus2.generate(s, cfg.max_order);
            verify_contradiction(&c.graph, Some(&c.cert)).map_err(|e| e.to_string())
        });
        let mut rows = Vec::new();
        for (s, r) in seeds.iter().zip(&reports) {
            match r {
                Err(e) => problems.push(json!({"seed": s, "error": e})),
                Ok(rep) => {
                    let (conserved, total_final, found) = match &rep.outcome {
                        DischargeOutcome::Cycle { config } => (true, rep.total_initial, config.is_some()),
                        DischargeOutcome::Discharged {
                            conserved,
                            total_final,
                            config,
                            ..
                        } => (*conserved, *total_final, config.is_some()),
                    };
                    if !rep.initial_bound_holds
                        || !rep.edge_bound_holds
                        || !conserved
                        || total_final != rep.total_initial
                        || !found
                    {
                        problems.push(json!({"seed": s, "report": rep}));
                    }
                    rows.push(
                        json!({"n": rep.vertices, "m": rep.edges, "initial": rep.total_initial, "final": total_final}),
                    );
                }
            }
        }
        let detail = format!(
            "{} girth-12 instances, worked identities 0/0/0, {} problems",
            rows.len(),
            problems.len()
        );
        (
            problems.is_empty(),
            detail,
            json!({"instances": rows, "problems": problems}),
        )
    })
}

pub fn matcher_equivalence(max_order: usize) -> CriterionResult {
    timed(7, "matcher oracle equivalence", || {
        let graphs = connected_graphs(max_order);
        let mismatches: Vec<Value> = batch::map(&graphs, |g| {
            all_patterns()
                .iter()
                .filter(|p| find(g, p.id) != brute_force_find(g, p.id))
                .map(|p| json!({"id": p.id, "edges": g.edges()}))
                .collect::<Vec<_>>()
        })
        .into_iter()
        .flatten()
        .collect();
        let detail = format!(
            "{} graphs x {} patterns, {} mismatches",
            graphs.len(),
            all_patterns().len(),
            mismatches.len()
        );
        (
            mismatches.is_empty(),
            detail,
            json!({"graphs": graphs.len(), "mismatches": mismatches}),
        )
    })
}

/// Criteria 1 to 7.
pub fn run_core(cfg: &AcceptConfig) -> Vec<CriterionResult> {
    let start = Instant::now();
    let records = corpus(cfg);
    let c3 = desk_scale(&records, start.elapsed());
    vec![
        sharpness(cfg.budget),
        c5_refutation(cfg.budget),
        c3,
        oracle_cross_check(&records),
        coverage(&records),
        discharging(cfg),
        matcher_equivalence(7),
    ]
}

/// All eight criteria; the last reruns the first seven and compares the
/// digests of their outputs.
pub fn run_all(cfg: &AcceptConfig) -> AcceptReport {
    let mut criteria = run_core(cfg);
    let first: Vec<String> = criteria.iter().map(CriterionResult::digest).collect();
    criteria.push(timed(8, "determinism", || {
        let again: Vec<String> = run_core(cfg).iter().map(CriterionResult::digest).collect();
        let differing: Vec<usize> = (0..first.len())
            .filter(|&i| first[i] != again[i])
            .map(|i| i + 1)
            .collect();
        let detail = if differing.is_empty() {
            "criteria 1-7 rerun byte-identical".to_string()
        } else {
            format!("criteria {differing:?} differ on rerun")
        };
        (differing.is_empty(), detail, json!({"digests": first}))
    }));
    AcceptReport {
        seed: cfg.seed,
        criteria,
    }
}
