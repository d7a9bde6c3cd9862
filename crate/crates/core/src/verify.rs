//! Verification suites shared by the command line and the acceptance tests.
//!
//! Every suite is deterministic in its seed: random work items are drawn
//! sequentially from one ChaCha stream, evaluated in parallel and merged in
//! input order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{LaurentPoly, Matrix, Rational, VarRegistry};
use crate::cells::{build_nc, classify, compute_mc, is_tnn, match_families};
use crate::combinat::{
    band_permanent, count_diagrams, enumerate_diagrams, enumerate_restricted_perms, is_cauchon,
    CauchonDiagram,
};
use crate::families::{
    bruhat_cell_vanishes, bruhat_cell_vanishes_dual, compute_mw, BruhatSign, PartialPermutation, RankProfile,
};
use crate::minors::{all_minor_ids, all_minors, vanishing_family, MinorId};
use crate::poisson::{jacobi_holds, leibniz_holds, random_laurent, verify_all_steps, BracketTable};
use crate::restoration::{
    cauchon_diagram_of, delete_derivations, h_invariance_violation, interior_steps, restore, successor,
    MatrixTrace, StepIndex,
};

/// Counterexamples kept per report.
pub const MAX_REPORTED: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Match,
    Poisson,
    TnnRoundtrip,
    Counting,
    Monotonicity,
    BruhatCells,
    Deletion,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Match,
        Suite::Poisson,
        Suite::TnnRoundtrip,
        Suite::Counting,
        Suite::Monotonicity,
        Suite::BruhatCells,
        Suite::Deletion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Match => "match",
            Suite::Poisson => "poisson",
            Suite::TnnRoundtrip => "tnn-roundtrip",
            Suite::Counting => "counting",
            Suite::Monotonicity => "monotonicity",
            Suite::BruhatCells => "bruhat-cells",
            Suite::Deletion => "deletion",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

/// Knobs shared by the suites. `samples` is the number of random work items
/// where a suite samples, and `None` asks for the suite's default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub m: usize,
    pub p: usize,
    pub seed: u64,
    pub samples: Option<usize>,
}

impl SuiteConfig {
    pub fn new(m: usize, p: usize) -> Self {
        SuiteConfig {
            m,
            p,
            seed: 0,
            samples: None,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn samples(mut self, n: usize) -> Self {
        self.samples = Some(n);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub m: usize,
    pub p: usize,
    pub seed: u64,
    pub checks: u64,
    pub passed: bool,
    pub failures: Vec<String>,
    pub summary: BTreeMap<String, Value>,
}

struct Tally {
    checks: u64,
    failures: Vec<String>,
    failed: bool,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failures: Vec::new(),
            failed: false,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed = true;
            if self.failures.len() < MAX_REPORTED {
                self.failures.push(what());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failed |= other.failed;
        for f in other.failures {
            if self.failures.len() < MAX_REPORTED {
                self.failures.push(f);
            }
        }
    }

    fn report(self, suite: Suite, cfg: &SuiteConfig, summary: BTreeMap<String, Value>) -> SuiteReport {
        SuiteReport {
            suite: suite.name().to_string(),
            m: cfg.m,
            p: cfg.p,
            seed: cfg.seed,
            checks: self.checks,
            passed: !self.failed,
            failures: self.failures,
            summary,
        }
    }
}

fn merge_all(parts: Vec<Tally>) -> Tally {
    parts.into_iter().fold(Tally::new(), |mut acc, t| {
        acc.merge(t);
        acc
    })
}

/// Runs one suite. Setup errors (bad sizes) are reported as failures.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> SuiteReport {
    match suite {
        Suite::Match => match_suite(cfg),
        Suite::Poisson => poisson_suite(cfg),
        Suite::TnnRoundtrip => roundtrip_suite(cfg),
        Suite::Counting => counting_suite(cfg),
        Suite::Monotonicity => monotonicity_suite(cfg),
        Suite::BruhatCells => bruhat_cells_suite(cfg),
        Suite::Deletion => deletion_suite(cfg),
    }
}

fn setup_failure(suite: Suite, cfg: &SuiteConfig, err: impl fmt::Display) -> SuiteReport {
    let mut t = Tally::new();
    t.check(false, || err.to_string());
    t.report(suite, cfg, BTreeMap::new())
}

fn match_suite(cfg: &SuiteConfig) -> SuiteReport {
    let mut t = Tally::new();
    let mut summary = BTreeMap::new();
    match match_families(cfg.m, cfg.p) {
        Ok(pairs) => {
            t.check(true, String::new);
            summary.insert("matched_pairs".into(), json!(pairs.len()));
        }
        Err(e) => t.check(false, || e.to_string()),
    }
    t.report(Suite::Match, cfg, summary)
}

fn poisson_suite(cfg: &SuiteConfig) -> SuiteReport {
    let diagrams = match enumerate_diagrams(cfg.m, cfg.p) {
        Ok(d) => d,
        Err(e) => return setup_failure(Suite::Poisson, cfg, e),
    };
    let parts: Vec<Tally> = diagrams
        .par_iter()
        .map(|c| {
            let mut t = Tally::new();
            match verify_all_steps(c) {
                Ok(reports) => {
                    for rep in reports {
                        t.checks += rep.pairs_checked as u64;
                        for f in &rep.failures {
                            t.check(false, || {
                                format!(
                                    "diagram {:?} step {} pair {:?},{:?}: difference {}",
                                    c.black_cells(),
                                    rep.step,
                                    f.first,
                                    f.second,
                                    f.difference
                                )
                            });
                        }
                    }
                }
                Err(e) => t.check(false, || format!("diagram {:?}: {e}", c.black_cells())),
            }
            t
        })
        .collect();
    let mut t = merge_all(parts);

    let n = cfg.samples.unwrap_or(200);
    let reg = VarRegistry::full(cfg.m, cfg.p);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seeds: Vec<u64> = (0..n).map(|_| rng.gen()).collect();
    let tables = [
        ("A_C", BracketTable::cauchon(&reg)),
        ("O(M)", BracketTable::matrix(&reg)),
    ];
    let identity_parts: Vec<Tally> = seeds
        .par_iter()
        .map(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let [f, g, h]: [LaurentPoly; 3] = [0; 3].map(|_| random_laurent(&reg, &mut rng, 3, 2, true));
            let mut t = Tally::new();
            for (name, table) in &tables {
                let jac = jacobi_holds(table, &f, &g, &h).unwrap_or(false);
                t.check(jac, || format!("Jacobi fails for {name} on ({f}), ({g}), ({h})"));
                let lei = leibniz_holds(table, &f, &g, &h).unwrap_or(false);
                t.check(lei, || format!("Leibniz fails for {name} on ({f}), ({g}), ({h})"));
            }
            t
        })
        .collect();
    t.merge(merge_all(identity_parts));
    let summary = BTreeMap::from([
        ("diagrams".to_string(), json!(diagrams.len())),
        ("identity_samples".to_string(), json!(n)),
    ]);
    t.report(Suite::Poisson, cfg, summary)
}

/// A restored tnn matrix `N_C` bar with its provenance.
#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub diagram: CauchonDiagram,
    pub seed: u64,
    pub trace: MatrixTrace<Rational>,
}

impl CorpusItem {
    pub fn x_bar(&self) -> &Matrix<Rational> {
        self.trace.last()
    }
}

/// `n` restored matrices over uniformly drawn diagrams.
pub fn tnn_corpus(
    m: usize,
    p: usize,
    n: usize,
    seed: u64,
) -> Result<Vec<CorpusItem>, crate::combinat::CombinatError> {
    let diagrams = enumerate_diagrams(m, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks: Vec<(CauchonDiagram, u64)> = (0..n)
        .map(|_| (diagrams[rng.gen_range(0..diagrams.len())], rng.gen()))
        .collect();
    Ok(picks
        .into_par_iter()
        .map(|(diagram, seed)| CorpusItem {
            diagram,
            seed,
            trace: restore(&build_nc(&diagram, seed)).expect("rational restoration cannot fail"),
        })
        .collect())
}

fn mc_cache(items: &[CorpusItem]) -> HashMap<CauchonDiagram, crate::minors::MinorFamily> {
    let mut ds: Vec<CauchonDiagram> = items.iter().map(|it| it.diagram).collect();
    ds.sort();
    ds.dedup();
    ds.into_par_iter().map(|c| (c, compute_mc(&c))).collect()
}

fn roundtrip_suite(cfg: &SuiteConfig) -> SuiteReport {
    let n = cfg.samples.unwrap_or(100);
    let items = match tnn_corpus(cfg.m, cfg.p, n, cfg.seed) {
        Ok(it) => it,
        Err(e) => return setup_failure(Suite::TnnRoundtrip, cfg, e),
    };
    let mc = mc_cache(&items);
    let parts: Vec<Tally> = items
        .par_iter()
        .map(|it| {
            let mut t = Tally::new();
            let tag = || format!("diagram {:?} seed {}", it.diagram.black_cells(), it.seed);
            let x_bar = it.x_bar();
            let verdict = is_tnn(x_bar);
            t.check(verdict.is_tnn, || {
                format!("{}: not tnn, witness {:?}", tag(), verdict.witness)
            });
            let found = vanishing_family(x_bar);
            let expected = &mc[&it.diagram];
            t.check(&found == expected, || {
                format!("{}: vanishing {found} but M(C) = {expected}", tag())
            });
            match classify(x_bar) {
                Ok(d) => t.check(d.diagram == it.diagram, || {
                    format!("{}: classified as {:?}", tag(), d.diagram.black_cells())
                }),
                Err(e) => t.check(false, || format!("{}: classify failed: {e}", tag())),
            }
            let back = delete_derivations(x_bar).expect("rational deletion cannot fail");
            t.check(back == it.trace, || {
                format!("{}: deletion does not invert restoration", tag())
            });
            let violation = h_invariance_violation(&it.trace);
            t.check(violation.is_none(), || {
                format!("{}: not H-invariant at {:?}", tag(), violation)
            });
            t
        })
        .collect();
    let families: std::collections::BTreeSet<String> =
        items.iter().map(|it| mc[&it.diagram].to_json()).collect();
    let summary = BTreeMap::from([
        ("samples".to_string(), json!(n)),
        ("distinct_diagrams".to_string(), json!(mc.len())),
        ("distinct_families".to_string(), json!(families.len())),
    ]);
    merge_all(parts).report(Suite::TnnRoundtrip, cfg, summary)
}

fn counting_suite(cfg: &SuiteConfig) -> SuiteReport {
    let (m, p) = (cfg.m, cfg.p);
    let mut t = Tally::new();
    let dfs = match count_diagrams(m, p) {
        Ok(c) => c,
        Err(e) => return setup_failure(Suite::Counting, cfg, e),
    };
    let perms = match enumerate_restricted_perms(m, p) {
        Ok(v) => v.len() as u64,
        Err(e) => return setup_failure(Suite::Counting, cfg, e),
    };
    let permanent = band_permanent(m, p);
    let mut summary = BTreeMap::from([
        ("diagrams".to_string(), json!(dfs)),
        ("restricted_perms".to_string(), json!(perms)),
        ("band_permanent".to_string(), json!(permanent)),
    ]);
    t.check(dfs == perms, || {
        format!("{dfs} diagrams but {perms} permutations")
    });
    t.check(u128::from(perms) == permanent, || {
        format!("{perms} permutations but permanent {permanent}")
    });
    if m * p <= 20 {
        let filtered = (0u64..1 << (m * p))
            .into_par_iter()
            .filter(|&mask| {
                let cells = (0..m * p)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| (b / p + 1, b % p + 1));
                is_cauchon(m, p, cells).unwrap_or(false)
            })
            .count() as u64;
        summary.insert("subset_filter".into(), json!(filtered));
        t.check(filtered == dfs, || {
            format!("subset filter {filtered} vs enumeration {dfs}")
        });
    }
    t.report(Suite::Counting, cfg, summary)
}

fn monotonicity_suite(cfg: &SuiteConfig) -> SuiteReport {
    let perms = match enumerate_restricted_perms(cfg.m, cfg.p) {
        Ok(v) => v,
        Err(e) => return setup_failure(Suite::Monotonicity, cfg, e),
    };
    let families: Vec<_> = perms.par_iter().map(compute_mw).collect();
    let n = perms.len();
    let pairs: Vec<(usize, usize)> = match cfg.samples {
        None => (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect(),
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..k)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect()
        }
    };
    let parts: Vec<Tally> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut t = Tally::new();
            let sub = families[a].is_subset(&families[b]);
            let leq = perms[a].bruhat_leq(&perms[b]).unwrap();
            t.check(sub == leq, || {
                format!(
                    "M({}) subset of M({}) is {sub} but Bruhat comparison is {leq}",
                    perms[a], perms[b]
                )
            });
            t
        })
        .collect();
    let summary = BTreeMap::from([
        ("permutations".to_string(), json!(n)),
        ("pairs".to_string(), json!(pairs.len())),
        ("exhaustive".to_string(), json!(cfg.samples.is_none())),
    ]);
    merge_all(parts).report(Suite::Monotonicity, cfg, summary)
}

fn random_triangular(n: usize, upper: bool, rng: &mut impl Rng) -> Matrix<Rational> {
    Matrix::from_fn(n, n, |r, c| {
        let v: i64 = if r == c {
            let v = rng.gen_range(1..=50);
            if rng.gen() {
                v
            } else {
                -v
            }
        } else if (upper && r < c) || (!upper && r > c) {
            rng.gen_range(-50..=50)
        } else {
            0
        };
        Rational::from_integer(v.into())
    })
}

fn bruhat_cells_suite(cfg: &SuiteConfig) -> SuiteReport {
    let (m, p) = (cfg.m, cfg.p);
    if m == 0 || p == 0 || m * p > 16 {
        return setup_failure(
            Suite::BruhatCells,
            cfg,
            format!("size {m}x{p} outside 1..=16 cells"),
        );
    }
    let samples = cfg.samples.unwrap_or(20);
    let perms = PartialPermutation::enumerate(m, p);
    let ids = all_minor_ids(m, p);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seeds: Vec<u64> = perms.iter().map(|_| rng.gen()).collect();
    let parts: Vec<Tally> = perms
        .par_iter()
        .zip(seeds)
        .map(|(w, seed)| {
            let mut t = Tally::new();
            let wq = w.to_rational();
            let plus: Vec<bool> = ids
                .iter()
                .map(|id| bruhat_cell_vanishes(w, id, BruhatSign::Plus))
                .collect();
            let minus: Vec<bool> = ids
                .iter()
                .map(|id| bruhat_cell_vanishes(w, id, BruhatSign::Minus))
                .collect();
            for (id, &b) in ids.iter().zip(&plus) {
                let c = bruhat_cell_vanishes_dual(w, id);
                t.check(b == c, || {
                    format!(
                        "w = {:?}, {id}: form (b) says {b}, form (c) says {c}",
                        w.to_matrix()
                    )
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for (sign, predicate) in [(BruhatSign::Plus, &plus), (BruhatSign::Minus, &minus)] {
                let upper = sign == BruhatSign::Plus;
                let mut seen_nonzero = vec![false; ids.len()];
                for _ in 0..samples {
                    let a = random_triangular(m, upper, &mut rng);
                    let b = random_triangular(p, upper, &mut rng);
                    let x = a.mul(&wq).mul(&b);
                    let values = all_minors(&x);
                    for (k, id) in ids.iter().enumerate() {
                        let zero = num_traits::Zero::is_zero(&values[id]);
                        seen_nonzero[k] |= !zero;
                        t.check(!predicate[k] || zero, || {
                            format!(
                                "{sign:?}: {id} predicted to vanish on a*w*b for w = {:?} but does not",
                                w.to_matrix()
                            )
                        });
                    }
                    let ranks_ok = if upper {
                        RankProfile::lower_left(&x).dominated_by(&RankProfile::lower_left(&wq))
                    } else {
                        RankProfile::upper_right(&x).dominated_by(&RankProfile::upper_right(&wq))
                    };
                    t.check(ranks_ok, || {
                        format!("{sign:?}: rank bound fails for w = {:?}", w.to_matrix())
                    });
                }
                if samples > 0 {
                    for (k, id) in ids.iter().enumerate() {
                        t.check(predicate[k] || seen_nonzero[k], || {
                            format!(
                                "{sign:?}: {id} never nonzero on {samples} samples for w = {:?}",
                                w.to_matrix()
                            )
                        });
                    }
                }
            }
            t
        })
        .collect();
    let summary = BTreeMap::from([
        ("partial_permutations".to_string(), json!(perms.len())),
        ("minors".to_string(), json!(ids.len())),
        ("samples_per_case".to_string(), json!(samples)),
    ]);
    merge_all(parts).report(Suite::BruhatCells, cfg, summary)
}

fn is_tnn_sub(x: &Matrix<Rational>, rows: usize, cols: usize) -> bool {
    rows == 0
        || cols == 0
        || is_tnn(&x.submatrix(&(0..rows).collect::<Vec<_>>(), &(0..cols).collect::<Vec<_>>())).is_tnn
}

/// The conclusions of the deletion theorem at every step of one run on a tnn
/// matrix.
pub fn check_deletion_run(trace: &MatrixTrace<Rational>) -> Vec<String> {
    let mut out = Vec::new();
    let (m, p) = (trace.m(), trace.p());
    let minors: BTreeMap<StepIndex, BTreeMap<MinorId, Rational>> =
        trace.iter().map(|(r, x)| (r, all_minors(x))).collect();
    for (r, x) in trace.iter() {
        if x.iter().any(num_traits::Signed::is_negative) {
            out.push(format!("step {r}: negative entry"));
        }
        if cauchon_diagram_of(x).is_none() {
            out.push(format!("step {r}: not Cauchon"));
        }
        if !is_tnn_sub(x, r.j, r.b - 1) {
            out.push(format!("step {r}: leading rows and columns not tnn"));
        }
        if !is_tnn_sub(x, r.j - 1, p) {
            out.push(format!("step {r}: leading rows not tnn"));
        }
    }
    for r in interior_steps(m, p) {
        let next = successor(m, p, r).unwrap();
        for (id, v) in &minors[&next] {
            let (i, a) = id.last_entry();
            if StepIndex::new(i, a) < r
                && num_traits::Zero::is_zero(v)
                && !num_traits::Zero::is_zero(&minors[&r][id])
            {
                out.push(format!("step {r}: {id} vanishes after but not before"));
            }
        }
    }
    out
}

fn deletion_suite(cfg: &SuiteConfig) -> SuiteReport {
    let n = cfg.samples.unwrap_or(100);
    let items = match tnn_corpus(cfg.m, cfg.p, n, cfg.seed) {
        Ok(it) => it,
        Err(e) => return setup_failure(Suite::Deletion, cfg, e),
    };
    let parts: Vec<Tally> = items
        .par_iter()
        .map(|it| {
            let mut t = Tally::new();
            let tag = || format!("diagram {:?} seed {}", it.diagram.black_cells(), it.seed);
            let del = delete_derivations(it.x_bar()).expect("rational deletion cannot fail");
            let problems = check_deletion_run(&del);
            t.checks += it.trace.len() as u64;
            for prob in problems {
                t.check(false, || format!("{}: {prob}", tag()));
            }
            t.check(del == it.trace, || {
                format!("{}: delete after restore is not the identity", tag())
            });
            let again = restore(del.first()).expect("rational restoration cannot fail");
            t.check(again == del, || {
                format!("{}: restore after delete is not the identity", tag())
            });
            let start = cauchon_diagram_of(del.first());
            t.check(start == Some(it.diagram), || {
                format!("{}: recovered pattern {:?}", tag(), start)
            });
            t
        })
        .collect();
    let summary = BTreeMap::from([("samples".to_string(), json!(n))]);
    merge_all(parts).report(Suite::Deletion, cfg, summary)
}
