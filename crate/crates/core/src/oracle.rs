//! Rule checking and exhaustive shortest-plan search.
//!
//! Nothing here reuses the closed-form solvers; plans are judged only by
//! composing their moves, and the search enumerates every legal move.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::machine::{plan_product, MachineMove};
use crate::perm::{Element, Permutation};

/// Largest ground set the search accepts.
pub const MAX_GROUND: usize = 16;

/// Default limit on search nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

const MEMO_LIMIT: usize = 4_000_000;

/// The machine rules a plan is judged against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    pub machine_size: usize,
    pub outsiders: Vec<Element>,
    pub require_outsider_per_move: bool,
    pub require_distinct_supports: bool,
}

impl RuleSet {
    pub fn new(machine_size: usize, outsiders: Vec<Element>) -> Self {
        RuleSet {
            machine_size,
            outsiders,
            require_outsider_per_move: true,
            require_distinct_supports: true,
        }
    }

    /// Rules with outsiders `x1..xd`.
    pub fn with_outsider_count(machine_size: usize, d: usize) -> Self {
        RuleSet::new(machine_size, (1..=d).map(Element::Outsider).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    WrongSeatCount { expected: usize, found: usize },
    RepeatedSeat { element: Element },
    NoOutsider,
    UndeclaredOutsider { element: Element },
    DuplicateSupport { first: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub move_index: usize,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub product_ok: bool,
    pub rule_violations: Vec<Violation>,
    pub step_count: usize,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.product_ok && self.rule_violations.is_empty()
    }
}

/// Checks seat counts, outsider presence, support distinctness and that
/// the plan undoes `target`. Every problem is reported with its move index.
pub fn verify_plan(target: &Permutation, plan: &[MachineMove], rules: &RuleSet) -> VerificationReport {
    let mut violations = Vec::new();
    let mut seen_supports: HashMap<BTreeSet<Element>, usize> = HashMap::new();
    for (i, mv) in plan.iter().enumerate() {
        let mut push = |kind| violations.push(Violation { move_index: i, kind });
        if mv.len() != rules.machine_size {
            push(ViolationKind::WrongSeatCount { expected: rules.machine_size, found: mv.len() });
        }
        let mut seen = BTreeSet::new();
        for &e in mv.seats() {
            if !seen.insert(e) {
                push(ViolationKind::RepeatedSeat { element: e });
            }
        }
        if let Some(&e) = mv
            .seats()
            .iter()
            .find(|e| e.is_outsider() && !rules.outsiders.contains(e))
        {
            push(ViolationKind::UndeclaredOutsider { element: e });
        }
        if rules.require_outsider_per_move && !mv.seats().iter().any(|e| rules.outsiders.contains(e)) {
            push(ViolationKind::NoOutsider);
        }
        if rules.require_distinct_supports {
            if let Some(&first) = seen_supports.get(&seen) {
                push(ViolationKind::DuplicateSupport { first });
            } else {
                seen_supports.insert(seen, i);
            }
        }
    }
    let product_ok = plan_product(plan).is_some_and(|p| p.compose(target).is_identity());
    VerificationReport { product_ok, rule_violations: violations, step_count: plan.len() }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("ground set has {size} elements; the search handles at most {max}")]
    GroundTooLarge { size: usize, max: usize },
    #[error("search exceeded its budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },
    #[error("invalid rules: {0}")]
    InvalidRules(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_steps: usize,
    pub node_budget: u64,
}

impl SearchOptions {
    pub fn new(max_steps: usize) -> Self {
        SearchOptions { max_steps, node_budget: DEFAULT_NODE_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// A shortest plan, or `None` if none exists within `max_steps`.
    pub plan: Option<Vec<MachineMove>>,
    pub nodes: u64,
}

/// Shortest legal plan undoing `target`, within `max_steps` moves, using
/// the default node budget.
pub fn search_min_plan(
    target: &Permutation,
    rules: &RuleSet,
    max_steps: usize,
) -> Result<Option<Vec<MachineMove>>, OracleError> {
    search_min_plan_with(target, rules, &SearchOptions::new(max_steps)).map(|o| o.plan)
}

type State = [u8; MAX_GROUND];

struct Candidate {
    seats: Vec<u8>,
    perm: State,
    support: usize,
}

struct Search<'a> {
    g: usize,
    goal: State,
    candidates: &'a [Candidate],
    m: usize,
    distinct: bool,
    used: Vec<bool>,
    used_stack: Vec<u16>,
    path: Vec<usize>,
    memo: HashMap<(State, Vec<u16>), usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn mismatches(&self, state: &State) -> usize {
        (0..self.g).filter(|&i| state[i] != self.goal[i]).count()
    }

    fn memo_key(&self, state: &State) -> (State, Vec<u16>) {
        let mut used = self.used_stack.clone();
        used.sort_unstable();
        (*state, used)
    }

    fn dfs(&mut self, state: &State, remaining: usize) -> Result<bool, OracleError> {
        if remaining == 0 {
            return Ok(*state == self.goal);
        }
        // A single move relocates at most m points.
        if self.mismatches(state) > self.m * remaining {
            return Ok(false);
        }
        let key = self.memo_key(state);
        if self.memo.get(&key).is_some_and(|&r| r >= remaining) {
            return Ok(false);
        }
        let candidates = self.candidates;
        for (ci, cand) in candidates.iter().enumerate() {
            if self.distinct && self.used[cand.support] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(OracleError::BudgetExceeded { budget: self.budget });
            }
            let mut next = [0u8; MAX_GROUND];
            for i in 0..self.g {
                next[i] = cand.perm[state[i] as usize];
            }
            if self.distinct {
                self.used[cand.support] = true;
                self.used_stack.push(cand.support as u16);
            }
            self.path.push(ci);
            if self.dfs(&next, remaining - 1)? {
                return Ok(true);
            }
            self.path.pop();
            if self.distinct {
                self.used_stack.pop();
                self.used[cand.support] = false;
            }
        }
        if self.memo.len() < MEMO_LIMIT {
            let slot = self.memo.entry(key).or_insert(0);
            *slot = (*slot).max(remaining);
        }
        Ok(false)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<u8>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i as u8);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All arrangements of `items` in lexicographic order.
fn arrangements(items: &[u8]) -> Vec<Vec<u8>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in arrangements(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Iterative-deepening search with full control over limits.
///
/// The ground set is the support of `target` plus the declared outsiders.
/// Seat sets are enumerated as sorted subsets, and each set's cyclic
/// orders with its smallest element first, so results are deterministic.
pub fn search_min_plan_with(
    target: &Permutation,
    rules: &RuleSet,
    options: &SearchOptions,
) -> Result<SearchOutcome, OracleError> {
    let m = rules.machine_size;
    if m < 2 {
        return Err(OracleError::InvalidRules("machine size must be at least 2"));
    }
    if rules.require_outsider_per_move && rules.outsiders.is_empty() {
        return Err(OracleError::InvalidRules("every move needs an outsider but none are declared"));
    }
    let ground: Vec<Element> = target
        .support()
        .into_iter()
        .chain(rules.outsiders.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let g = ground.len();
    if g > MAX_GROUND {
        return Err(OracleError::GroundTooLarge { size: g, max: MAX_GROUND });
    }
    let index = |e: Element| ground.iter().position(|&x| x == e).expect("in ground") as u8;

    let mut goal = [0u8; MAX_GROUND];
    let mut identity = [0u8; MAX_GROUND];
    let inverse = target.inverse();
    for (i, &e) in ground.iter().enumerate() {
        goal[i] = index(inverse.apply(e));
        identity[i] = i as u8;
    }
    if goal == identity {
        return Ok(SearchOutcome { plan: Some(Vec::new()), nodes: 0 });
    }

    let is_outsider = |i: u8| rules.outsiders.contains(&ground[i as usize]);
    let mut candidates = Vec::new();
    let mut support_count = 0;
    if m <= g {
        for subset in combinations(g, m) {
            if rules.require_outsider_per_move && !subset.iter().any(|&i| is_outsider(i)) {
                continue;
            }
            let support = support_count;
            support_count += 1;
            for rest in arrangements(&subset[1..]) {
                let mut seats = vec![subset[0]];
                seats.extend(rest);
                let mut perm = identity;
                for j in 0..m {
                    perm[seats[j] as usize] = seats[(j + 1) % m];
                }
                candidates.push(Candidate { seats, perm, support });
            }
        }
    }
    let mut search = Search {
        g,
        goal,
        candidates: &candidates,
        m,
        distinct: rules.require_distinct_supports,
        used: vec![false; support_count],
        used_stack: Vec::new(),
        path: Vec::new(),
        memo: HashMap::new(),
        nodes: 0,
        budget: options.node_budget,
    };
    for depth in 1..=options.max_steps {
        if search.dfs(&identity, depth)? {
            let plan = search
                .path
                .iter()
                .map(|&ci| {
                    MachineMove::new(candidates[ci].seats.iter().map(|&i| ground[i as usize]).collect())
                })
                .collect();
            return Ok(SearchOutcome { plan: Some(plan), nodes: search.nodes });
        }
    }
    Ok(SearchOutcome { plan: None, nodes: search.nodes })
}
