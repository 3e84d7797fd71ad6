//! Grid sweeps comparing computed determinants with claim predictions.

use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::admissible::TypeSpec;
use crate::arith::{Poly, Universe, Var};
use crate::predictors::{Cell, Claim, ClaimId, Evaluator, Prediction, BACKWARD_LINES};

/// Random general-type sequences are this long, enough for every default grid.
pub const RANDOM_SPEC_LEN: usize = 64;
pub const DEFAULT_RANDOM_COUNT: usize = 20;

/// One type sequence of a grid, optionally with tighter bounds than the grid.
#[derive(Clone, Debug)]
pub struct Instance {
    pub spec: TypeSpec,
    pub max_m: Option<i64>,
    pub max_n: Option<usize>,
}

impl Instance {
    pub fn new(spec: TypeSpec) -> Self {
        Instance {
            spec,
            max_m: None,
            max_n: None,
        }
    }

    pub fn capped(spec: TypeSpec, max_m: i64, max_n: usize) -> Self {
        Instance {
            spec,
            max_m: Some(max_m),
            max_n: Some(max_n),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GridSpec {
    pub claim: ClaimId,
    pub m: RangeInclusive<i64>,
    pub k: RangeInclusive<usize>,
    pub n: RangeInclusive<usize>,
    pub instances: Vec<Instance>,
    /// Seed and count of random general-type instances (entries in `-3..=3`).
    pub random: Option<(u64, usize)>,
    /// Harness self-test: negate every prediction.
    pub flip_sign: bool,
}

fn consts(spec: fn(i64) -> TypeSpec, values: RangeInclusive<i64>) -> Vec<Instance> {
    values.map(|v| Instance::new(spec(v))).collect()
}

fn sym(v: Var) -> Poly {
    Poly::var(v)
}

impl GridSpec {
    fn new(
        claim: ClaimId,
        m: RangeInclusive<i64>,
        k: RangeInclusive<usize>,
        n: RangeInclusive<usize>,
    ) -> Self {
        GridSpec {
            claim,
            m,
            k,
            n,
            instances: Vec::new(),
            random: None,
            flip_sign: false,
        }
    }

    fn with(mut self, instances: Vec<Instance>) -> Self {
        self.instances = instances;
        self
    }

    /// The grid used by `verify` and the acceptance suite.
    pub fn default_for(claim: ClaimId, seed: u64) -> GridSpec {
        use ClaimId::*;
        let constant = |c| TypeSpec::constant(c);
        let bc1 = |c| TypeSpec::bc(1, c);
        match claim {
            Thm1 => {
                let symbolic =
                    TypeSpec::symbolic(16, &Universe::default()).expect("within universe");
                let mut g = GridSpec::new(claim, 0..=4, 0..=0, 0..=24)
                    .with(vec![Instance::capped(symbolic, 2, 8)]);
                g.random = Some((seed, DEFAULT_RANDOM_COUNT));
                g
            }
            Conj2 => GridSpec::new(claim, 0..=4, 0..=4, 0..=36).with(consts(constant, -2..=3)),
            Thm3 => GridSpec::new(claim, 0..=0, 0..=5, 0..=48).with(consts(constant, -3..=3)),
            Thm4 => GridSpec::new(claim, 1..=1, 0..=5, 0..=48).with(consts(constant, -3..=3)),
            Conj5 => GridSpec::new(claim, 2..=2, 1..=4, 0..=40).with(consts(constant, -2..=3)),
            Conj6 => GridSpec::new(claim, 0..=5, 0..=4, 0..=36).with(consts(constant, -2..=3)),
            Eq15 => {
                GridSpec::new(claim, 0..=6, 0..=5, 0..=36).with(vec![Instance::new(constant(2))])
            }
            Eq13 | Eq54 | Eq53 => {
                let m = if claim == Eq53 { 0..=1 } else { 2..=2 };
                let mut inst = consts(constant, -3..=3);
                inst.push(Instance::capped(TypeSpec::constant(sym(Var::C)), 2, 12));
                GridSpec::new(claim, m, 0..=0, 0..=30).with(inst)
            }
            Eq16 => GridSpec::new(claim, 0..=2, 0..=0, 0..=12)
                .with(vec![Instance::new(TypeSpec::bc(sym(Var::B), sym(Var::C)))]),
            Eq17 => GridSpec::new(claim, 0..=0, 1..=3, 0..=29)
                .with(vec![Instance::new(TypeSpec::bc(sym(Var::B), 0))]),
            Eq18 => GridSpec::new(claim, 0..=0, 1..=3, 0..=36)
                .with(vec![Instance::new(TypeSpec::bc(sym(Var::B), 0))]),
            Conj7 => GridSpec::new(claim, 0..=0, 1..=4, 0..=27).with(consts(bc1, 0..=3)),
            Conj8 => GridSpec::new(claim, 1..=1, 1..=4, 0..=27).with(consts(bc1, 0..=3)),
            Conj9 => GridSpec::new(claim, 2..=2, 1..=4, 0..=27).with(consts(bc1, 0..=3)),
            Eq31 => GridSpec::new(claim, 0..=3, 0..=3, 0..=15)
                .with(vec![Instance::new(TypeSpec::bc(-1, 2))]),
            Eq32_33 => GridSpec::new(claim, -1..=-1, 1..=3, 0..=27).with(consts(bc1, 1..=3)),
            Eq56 => {
                GridSpec::new(claim, 0..=0, 0..=3, 0..=8).with(vec![Instance::new(TypeSpec::XY)])
            }
            Eq57 => {
                GridSpec::new(claim, 1..=1, 0..=3, 0..=8).with(vec![Instance::new(TypeSpec::XY)])
            }
            Eq58 => GridSpec::new(claim, 0..=0, 0..=3, 0..=8)
                .with(vec![Instance::new(TypeSpec::constant(sym(Var::C)))]),
        }
    }

    /// Explicit instances followed by the seeded random ones.
    pub fn all_instances(&self) -> Vec<Instance> {
        let mut out = self.instances.clone();
        if let Some((seed, count)) = self.random {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                let s: Vec<i64> = (0..RANDOM_SPEC_LEN)
                    .map(|_| rng.gen_range(-3..=3))
                    .collect();
                out.push(Instance::new(TypeSpec::from_ints(&s)));
            }
        }
        out
    }

    /// A conservative bound on the table rows any cell of the grid touches.
    pub fn max_rows_needed(&self) -> usize {
        let m = self
            .m
            .start()
            .unsigned_abs()
            .max(self.m.end().unsigned_abs()) as usize
            + 1;
        m + 2 * (self.n.end() + 8)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub max_cells: Option<usize>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn cells(n: usize) -> Self {
        Budget {
            max_cells: Some(n),
            max_time: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    /// Pass of a cell the claim forces to vanish.
    PassZero,
    Fail,
    NotCovered,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub instance: usize,
    pub m: i64,
    pub k: usize,
    pub n: usize,
    pub expected: Option<String>,
    pub actual: Option<String>,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub spec: String,
    pub cell: Cell,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub claim: ClaimId,
    pub grid_cells: usize,
    pub evaluated: usize,
    pub passed: usize,
    pub zero_passed: usize,
    pub not_covered: usize,
    pub partial: bool,
    pub instances: Vec<String>,
    pub counterexamples: Vec<Counterexample>,
    pub notes: Vec<String>,
    pub records: Vec<Record>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl ClaimReport {
    pub fn passed_all(&self) -> bool {
        self.counterexamples.is_empty() && !self.partial
    }
}

struct Task {
    instance: usize,
    m: i64,
    k: usize,
    ns: Vec<usize>,
}

struct TaskOutput {
    records: Vec<Record>,
    notes: Vec<String>,
}

fn tasks_for(grid: &GridSpec, instances: &[Instance]) -> Vec<Task> {
    let mut tasks = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        for m in grid.m.clone() {
            if inst.max_m.is_some_and(|cap| m.abs() > cap) {
                continue;
            }
            for k in grid.k.clone() {
                let ns: Vec<usize> = grid
                    .n
                    .clone()
                    .filter(|&n| inst.max_n.is_none_or(|cap| n <= cap))
                    .collect();
                if !ns.is_empty() {
                    tasks.push(Task {
                        instance: i,
                        m,
                        k,
                        ns,
                    });
                }
            }
        }
    }
    tasks
}

fn calibrate_backward(ev: &mut Evaluator, k: usize, n_max: usize) -> ([usize; 4], String) {
    let mut offsets = [0; 4];
    let mut parts = Vec::new();
    for (slot, line) in BACKWARD_LINES.iter().enumerate() {
        let found = (0..=2).find(|&o| line.holds(ev, k, o, n_max).unwrap_or(false));
        match found {
            Some(o) => {
                offsets[slot] = o;
                parts.push(format!("[{}] +{o}", line.label));
            }
            None => parts.push(format!("[{}] unanchored", line.label)),
        }
    }
    (offsets, parts.join(", "))
}

fn run_task(grid: &GridSpec, instances: &[Instance], task: &Task) -> TaskOutput {
    let inst = &instances[task.instance];
    let mut ev = Evaluator::new(inst.spec.clone());
    let mut notes = Vec::new();
    let n_max = *task.ns.iter().max().unwrap();
    let claim = if grid.claim == ClaimId::Eq32_33 && Claim::new(grid.claim).applies_to(&inst.spec) {
        let (offsets, desc) = calibrate_backward(&mut ev, task.k, n_max);
        notes.push(format!("{} k={}: offsets {desc}", inst.spec, task.k));
        Claim::with_offsets(grid.claim, offsets)
    } else {
        Claim::new(grid.claim)
    };

    let mut outside = (0usize, 0usize);
    let mut records = Vec::with_capacity(task.ns.len());
    // largest index first so each determinant sequence is computed once
    for &n in task.ns.iter().rev() {
        let cell = Cell::new(task.m, task.k, n);
        let mut prediction = claim
            .predict(&cell, &mut ev)
            .unwrap_or_else(|e| Prediction::Invalid(e.to_string()));
        if grid.flip_sign {
            prediction = prediction.negated();
        }
        let record = |expected: Option<String>, actual: Option<String>, status| Record {
            instance: task.instance,
            m: task.m,
            k: task.k,
            n,
            expected,
            actual,
            status,
        };
        if prediction == Prediction::NotCovered {
            if let Ok(Some(p)) = claim.predict_outside_range(&cell, &mut ev) {
                outside.1 += 1;
                if p.value().is_some() && p.value() == claim.actual(&cell, &mut ev).ok() {
                    outside.0 += 1;
                }
            }
            records.push(record(None, None, Status::NotCovered));
            continue;
        }
        let actual = claim.actual(&cell, &mut ev);
        let (expected, status) = match (&prediction, &actual) {
            (Prediction::Invalid(msg), _) => (msg.clone(), Status::Fail),
            (p, Ok(a)) => {
                let v = p.value().unwrap();
                let status = if &v != a {
                    Status::Fail
                } else if *p == Prediction::Zero {
                    Status::PassZero
                } else {
                    Status::Pass
                };
                (v.to_string(), status)
            }
            (p, Err(_)) => (p.value().unwrap().to_string(), Status::Fail),
        };
        let actual = match actual {
            Ok(a) => a.to_string(),
            Err(e) => format!("error: {e}"),
        };
        records.push(record(Some(expected), Some(actual), status));
    }
    records.reverse();
    if outside.1 > 0 {
        notes.push(format!(
            "{} k={}: outside the claimed range; the formula agrees on {} of {} cells",
            inst.spec, task.k, outside.0, outside.1
        ));
    }
    TaskOutput { records, notes }
}

/// Evaluates the grid, at most `max_cells` cells (in grid order) and only
/// while `deadline` has not passed.
pub fn run_claim_within(
    grid: &GridSpec,
    max_cells: Option<usize>,
    deadline: Option<Instant>,
) -> ClaimReport {
    let start = Instant::now();
    let instances = grid.all_instances();
    let mut tasks = tasks_for(grid, &instances);
    let grid_cells: usize = tasks.iter().map(|t| t.ns.len()).sum();

    let mut left = max_cells.unwrap_or(usize::MAX);
    for t in &mut tasks {
        let take = t.ns.len().min(left);
        t.ns.truncate(take);
        left -= take;
    }
    tasks.retain(|t| !t.ns.is_empty());

    let outputs: Vec<Option<TaskOutput>> = tasks
        .par_iter()
        .map(|t| {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                None
            } else {
                Some(run_task(grid, &instances, t))
            }
        })
        .collect();

    let mut report = ClaimReport {
        claim: grid.claim,
        grid_cells,
        evaluated: 0,
        passed: 0,
        zero_passed: 0,
        not_covered: 0,
        partial: false,
        instances: instances.iter().map(|i| i.spec.to_string()).collect(),
        counterexamples: Vec::new(),
        notes: Vec::new(),
        records: Vec::new(),
        wall_time: Duration::ZERO,
    };
    for out in outputs.into_iter().flatten() {
        for r in &out.records {
            report.evaluated += 1;
            match r.status {
                Status::Pass => report.passed += 1,
                Status::PassZero => {
                    report.passed += 1;
                    report.zero_passed += 1;
                }
                Status::NotCovered => report.not_covered += 1,
                Status::Fail => report.counterexamples.push(Counterexample {
                    spec: report.instances[r.instance].clone(),
                    cell: Cell::new(r.m, r.k, r.n),
                    expected: r.expected.clone().unwrap_or_default(),
                    actual: r.actual.clone().unwrap_or_default(),
                }),
            }
        }
        report.records.extend(out.records);
        report.notes.extend(out.notes);
    }
    report.partial = report.evaluated < grid_cells;
    report.wall_time = start.elapsed();
    report
}

pub fn run_claim(grid: &GridSpec) -> ClaimReport {
    run_claim_within(grid, None, None)
}

/// Runs the default grid of every claim, in claim order, sharing one budget.
pub fn run_all(budget: Budget, seed: u64) -> Vec<ClaimReport> {
    let grids: Vec<GridSpec> = ClaimId::ALL
        .iter()
        .map(|&c| GridSpec::default_for(c, seed))
        .collect();
    run_grids(&grids, budget)
}

pub fn run_grids(grids: &[GridSpec], budget: Budget) -> Vec<ClaimReport> {
    let deadline = budget.max_time.map(|t| Instant::now() + t);
    let mut left = budget.max_cells;
    grids
        .iter()
        .map(|g| {
            let report = run_claim_within(g, left, deadline);
            if let Some(l) = left.as_mut() {
                *l -= report.evaluated.min(*l);
            }
            report
        })
        .collect()
}

/// `0` when everything passed, `1` on any counterexample, `3` when some grid
/// was cut short by the budget.
pub fn exit_code(reports: &[ClaimReport]) -> i32 {
    if reports.iter().any(|r| !r.counterexamples.is_empty()) {
        1
    } else if reports.iter().any(|r| r.partial) {
        3
    } else {
        0
    }
}

pub fn summary_line(r: &ClaimReport) -> String {
    let verdict = if !r.counterexamples.is_empty() {
        "FAIL"
    } else if r.partial {
        "PARTIAL"
    } else {
        "pass"
    };
    format!(
        "{:<8} {:<7} evaluated={} passed={} zero={} not_covered={} counterexamples={}",
        r.claim.as_str(),
        verdict,
        r.evaluated,
        r.passed,
        r.zero_passed,
        r.not_covered,
        r.counterexamples.len()
    )
}

pub fn render_text(reports: &[ClaimReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&summary_line(r));
        out.push('\n');
        for note in &r.notes {
            out.push_str(&format!("    note: {note}\n"));
        }
        for c in r.counterexamples.iter().take(5) {
            out.push_str(&format!(
                "    counterexample {} m={} k={} n={}: expected {} got {}\n",
                c.spec, c.cell.m, c.cell.k, c.cell.n, c.expected, c.actual
            ));
        }
    }
    out
}

#[derive(Serialize)]
struct JsonOutput<'a> {
    seed: u64,
    exit_code: i32,
    reports: &'a [ClaimReport],
}

/// JSON without timing information, so equal runs print equal bytes.
pub fn render_json(reports: &[ClaimReport], seed: u64) -> String {
    serde_json::to_string_pretty(&JsonOutput {
        seed,
        exit_code: exit_code(reports),
        reports,
    })
    .expect("reports serialize")
}
