//! Exhaustive and pruned search for magic squares: an O(|G|^2) fast path
//! for abelian 3x3 squares via the centered parametrization, a general
//! backtracking engine over arbitrary finite carriers, and the sweep
//! harness that cross-validates the oracle against search.
//!
//! Determinism contract: candidate spaces are scanned in canonical order;
//! under parallelism the space is partitioned, hits are collected, and the
//! canonically least is returned, so results (witness and node count
//! included) do not depend on the worker count.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::abelian::factorize_u64;
use crate::group::{Element, FGAbelianSpec, Group, Order};
use crate::oracle::{decide_3magic_abelian, Status};
use crate::square::{lines, Square};

/// Default node budget for the general engine.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Universes above this size fall back to composing elements on demand
/// instead of a precomputed index table.
const COMPOSE_TABLE_LIMIT: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutcomeKind {
    Found(Square),
    ExhaustedNone,
    BudgetExceeded,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub kind: OutcomeKind,
    pub nodes_expanded: u64,
    pub elapsed: Duration,
}

/// Knobs for [`search_general`].
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Node budget; `None` runs unbounded.
    pub budget: Option<u64>,
    /// Worker count; 1 runs strictly sequentially.
    pub jobs: usize,
    /// When false, forced cells are enumerated like any other and completed
    /// lines are merely checked. Outcomes are identical either way.
    pub forced_cells: bool,
    /// Free-coordinate window for infinite carriers; finite carriers are
    /// always searched in full.
    pub window: Option<i64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: Some(DEFAULT_BUDGET), jobs: 1, forced_cells: true, window: None }
    }
}

/// The centered 3x3 square generated by a pair (a, b):
///
/// ```text
///   a       a^-1 b^-1   b
///   a^-1 b  1           a b^-1
///   b^-1    a b         a^-1
/// ```
///
/// In a commutative group all eight line products equal the identity; the
/// square is magic exactly when the nine entries are distinct.
pub fn centered_square(group: &Group, a: &Element, b: &Element) -> Result<Square> {
    let ai = group.inverse(a)?;
    let bi = group.inverse(b)?;
    Square::new(
        3,
        vec![
            a.clone(),
            group.compose(&ai, &bi)?,
            b.clone(),
            group.compose(&ai, b)?,
            group.identity(),
            group.compose(a, &bi)?,
            bi,
            group.compose(a, b)?,
            ai,
        ],
    )
}

fn entries_distinct(square: &Square) -> bool {
    let mut seen = square.entries().to_vec();
    seen.sort_unstable();
    seen.windows(2).all(|w| w[0] != w[1])
}

fn require_finite_commutative(group: &Group, op: &'static str) -> Result<u64> {
    if !group.is_commutative() {
        return Err(Error::NonCommutative(op));
    }
    match group.order() {
        Order::Finite(n) => Ok(n as u64),
        Order::Infinite => Err(Error::Domain(format!(
            "{op} requires a finite group; infinite groups are settled by the oracle"
        ))),
    }
}

/// Scans ordered pairs (a, b) in canonical element order and returns the
/// first whose centered square has nine distinct entries. Complete: a
/// commutative group is 3-magic iff some pair succeeds.
pub fn search_abelian_3magic(group: &Group, jobs: usize) -> Result<SearchOutcome> {
    require_finite_commutative(group, "search_abelian_3magic")?;
    let start = Instant::now();
    let els = group.elements()?;
    let n = els.len() as u64;
    let total = n * n;

    let try_pair = |idx: u64| -> Option<Square> {
        let a = &els[(idx / n) as usize];
        let b = &els[(idx % n) as usize];
        let sq = centered_square(group, a, b).expect("elements belong to the group");
        entries_distinct(&sq).then_some(sq)
    };

    let hit = if jobs <= 1 || total < 2 {
        (0..total).find_map(|idx| try_pair(idx).map(|sq| (idx, sq)))
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        let chunk = total.div_ceil(jobs as u64);
        pool.install(|| {
            use rayon::prelude::*;
            let best = AtomicU64::new(u64::MAX);
            let mut hits: Vec<(u64, Square)> = (0..jobs as u64)
                .into_par_iter()
                .filter_map(|w| {
                    let lo = w * chunk;
                    let hi = total.min(lo + chunk);
                    if lo >= best.load(Ordering::Relaxed) {
                        return None;
                    }
                    let found = (lo..hi).find_map(|idx| try_pair(idx).map(|sq| (idx, sq)));
                    if let Some((idx, _)) = &found {
                        best.fetch_min(*idx, Ordering::Relaxed);
                    }
                    found
                })
                .collect();
            hits.sort_by_key(|(idx, _)| *idx);
            hits.into_iter().next()
        })
    };

    Ok(match hit {
        Some((idx, sq)) => SearchOutcome {
            kind: OutcomeKind::Found(sq),
            nodes_expanded: idx + 1,
            elapsed: start.elapsed(),
        },
        None => SearchOutcome {
            kind: OutcomeKind::ExhaustedNone,
            nodes_expanded: total,
            elapsed: start.elapsed(),
        },
    })
}

/// Number of ordered pairs (a, b) whose centered square has nine distinct
/// entries. Diagnostic companion to [`search_abelian_3magic`].
pub fn count_squares(group: &Group) -> Result<u64> {
    require_finite_commutative(group, "count_squares")?;
    let els = group.elements()?;
    let mut count = 0;
    for a in &els {
        for b in &els {
            let sq = centered_square(group, a, b)?;
            if entries_distinct(&sq) {
                count += 1;
            }
        }
    }
    Ok(count)
}

// ---------------------------------------------------------------------------
// general engine
// ---------------------------------------------------------------------------

const EMPTY: u32 = u32::MAX;

struct Universe {
    group: Group,
    elems: Vec<Element>,
    index: HashMap<Element, u32>,
    inverse: Vec<u32>,
    /// Flat len*len table; EMPTY marks a product outside the universe
    /// (possible only for windowed infinite carriers).
    table: Option<Vec<u32>>,
}

impl Universe {
    fn build(group: &Group, window: Option<i64>) -> Result<Universe> {
        let elems = match (group.order(), window) {
            (Order::Infinite, None) => {
                return Err(Error::Domain(
                    "cannot exhaustively search an infinite group; pass a window bound \
                     for an explicitly incomplete exploration"
                        .into(),
                ))
            }
            (Order::Infinite, Some(b)) => {
                if b < 0 {
                    return Err(Error::Domain("window bound must be nonnegative".into()));
                }
                group.window_elements(b)?
            }
            (Order::Finite(_), _) => group.elements()?,
        };
        let index: HashMap<Element, u32> =
            elems.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        let inverse = elems
            .iter()
            .map(|e| {
                let inv = group.inverse(e).expect("universe elements belong to the group");
                // symmetric windows are closed under inversion
                *index.get(&inv).expect("inverse stays in the universe")
            })
            .collect();
        let table = (elems.len() <= COMPOSE_TABLE_LIMIT).then(|| {
            let len = elems.len();
            let mut t = vec![EMPTY; len * len];
            for i in 0..len {
                for j in 0..len {
                    let p = group
                        .compose(&elems[i], &elems[j])
                        .expect("universe elements belong to the group");
                    if let Some(&k) = index.get(&p) {
                        t[i * len + j] = k;
                    }
                }
            }
            t
        });
        Ok(Universe { group: group.clone(), elems, index, inverse, table })
    }

    fn len(&self) -> usize {
        self.elems.len()
    }

    fn compose(&self, i: u32, j: u32) -> Option<u32> {
        match &self.table {
            Some(t) => {
                let v = t[i as usize * self.elems.len() + j as usize];
                (v != EMPTY).then_some(v)
            }
            None => {
                let p = self
                    .group
                    .compose(&self.elems[i as usize], &self.elems[j as usize])
                    .expect("universe elements belong to the group");
                self.index.get(&p).copied()
            }
        }
    }
}

/// Per-candidate-product search trace, combined across workers by replaying
/// the sequential budget semantics.
struct PerProduct {
    hit: Option<(u64, Vec<u32>)>,
    nodes: u64,
    aborted: bool,
    skipped: bool,
}

struct Dfs<'u> {
    uni: &'u Universe,
    cells: usize,
    s: u32,
    forced_mode: bool,
    limit: u64,
    line_cells: &'u [Vec<usize>],
    /// Per cell: ids of the lines this cell completes (it holds their
    /// largest row-major index, so all other cells are already filled).
    completing: &'u [Vec<usize>],
    grid: Vec<u32>,
    used: Vec<bool>,
    nodes: u64,
    hit: Option<(u64, Vec<u32>)>,
    aborted: bool,
}

impl<'u> Dfs<'u> {
    /// Value forced on `pos` by a line whose other cells are filled:
    /// prefix^-1 * s * suffix^-1 along the line's traversal order. `None`
    /// when the value falls outside the universe.
    fn forced_value(&self, line_id: usize, pos: usize) -> Option<u32> {
        let line = &self.line_cells[line_id];
        let mut pre: Option<u32> = None;
        let mut post: Option<u32> = None;
        let mut before = true;
        for &c in line {
            if c == pos {
                before = false;
                continue;
            }
            let v = self.grid[c];
            let side = if before { &mut pre } else { &mut post };
            *side = match *side {
                None => Some(v),
                Some(acc) => Some(self.uni.compose(acc, v)?),
            };
        }
        let mut out = self.s;
        if let Some(p) = pre {
            out = self.uni.compose(self.uni.inverse[p as usize], out)?;
        }
        if let Some(q) = post {
            out = self.uni.compose(out, self.uni.inverse[q as usize])?;
        }
        Some(out)
    }

    /// Left-to-right product of a fully filled line compared against s.
    fn line_matches(&self, line_id: usize) -> bool {
        let line = &self.line_cells[line_id];
        let mut acc: Option<u32> = None;
        for &c in line {
            acc = match acc {
                None => Some(self.grid[c]),
                Some(a) => match self.uni.compose(a, self.grid[c]) {
                    Some(v) => Some(v),
                    None => return false,
                },
            };
        }
        acc == Some(self.s)
    }

    fn place(&mut self, pos: usize, v: u32) -> bool {
        self.grid[pos] = v;
        self.used[v as usize] = true;
        self.nodes += 1;
        let stop = if self.nodes > self.limit {
            self.aborted = true;
            true
        } else {
            self.step(pos + 1)
        };
        self.grid[pos] = EMPTY;
        self.used[v as usize] = false;
        stop
    }

    fn step(&mut self, pos: usize) -> bool {
        if pos == self.cells {
            self.hit = Some((self.nodes, self.grid.clone()));
            return true;
        }
        let completing = &self.completing[pos];
        if self.forced_mode && !completing.is_empty() {
            let Some(v) = self.forced_value(completing[0], pos) else {
                return false;
            };
            for &lid in &completing[1..] {
                if self.forced_value(lid, pos) != Some(v) {
                    return false;
                }
            }
            if self.used[v as usize] {
                return false;
            }
            return self.place(pos, v);
        }
        for v in 0..self.uni.len() as u32 {
            if self.used[v as usize] {
                continue;
            }
            if !completing.is_empty() {
                self.grid[pos] = v;
                let ok = completing.iter().all(|&lid| self.line_matches(lid));
                self.grid[pos] = EMPTY;
                if !ok {
                    continue;
                }
            }
            if self.place(pos, v) {
                return true;
            }
        }
        false
    }
}

fn run_one_product(
    uni: &Universe,
    n: usize,
    line_cells: &[Vec<usize>],
    completing: &[Vec<usize>],
    s: u32,
    forced_mode: bool,
    limit: u64,
) -> PerProduct {
    let mut dfs = Dfs {
        uni,
        cells: n * n,
        s,
        forced_mode,
        limit,
        line_cells,
        completing,
        grid: vec![EMPTY; n * n],
        used: vec![false; uni.len()],
        nodes: 0,
        hit: None,
        aborted: false,
    };
    dfs.step(0);
    PerProduct { hit: dfs.hit, nodes: dfs.nodes, aborted: dfs.aborted, skipped: false }
}

/// Backtracking search for an n x n magic square. Candidate magic products
/// are taken in canonical element order; cells fill row-major; a cell that
/// completes a line is computed from s rather than searched (forced-cell
/// rule), and duplicates prune immediately. Returns the first square found,
/// `ExhaustedNone` after covering the whole space, or `BudgetExceeded`.
pub fn search_general(group: &Group, n: usize, opts: &SearchOptions) -> Result<SearchOutcome> {
    if n == 0 {
        return Err(Error::Domain("square side must be at least 1".into()));
    }
    if opts.budget == Some(0) {
        return Err(Error::InvalidBudget);
    }
    let start = Instant::now();
    let uni = Universe::build(group, opts.window)?;
    let line_coords = lines(n);
    let line_cells: Vec<Vec<usize>> = line_coords
        .iter()
        .map(|line| line.iter().map(|&(i, j)| i * n + j).collect())
        .collect();
    let mut completing = vec![Vec::new(); n * n];
    for (lid, cells) in line_cells.iter().enumerate() {
        let max = *cells.iter().max().expect("lines are nonempty");
        completing[max].push(lid);
    }

    let budget = opts.budget;
    let finish = |kind: OutcomeKind, nodes: u64| {
        Ok(SearchOutcome { kind, nodes_expanded: nodes, elapsed: start.elapsed() })
    };
    let square_of = |grid: &[u32]| {
        Square::new(n, grid.iter().map(|&v| uni.elems[v as usize].clone()).collect())
            .expect("grid is complete")
    };

    if opts.jobs <= 1 {
        let mut cum = 0u64;
        for s in 0..uni.len() as u32 {
            let limit = budget.map_or(u64::MAX, |b| b - cum);
            let r = run_one_product(
                &uni,
                n,
                &line_cells,
                &completing,
                s,
                opts.forced_cells,
                limit,
            );
            if let Some((h, grid)) = r.hit {
                return finish(OutcomeKind::Found(square_of(&grid)), cum + h);
            }
            if r.aborted {
                return finish(OutcomeKind::BudgetExceeded, budget.expect("abort implies budget") + 1);
            }
            cum += r.nodes;
        }
        return finish(OutcomeKind::ExhaustedNone, cum);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .expect("thread pool");
    let limit = budget.unwrap_or(u64::MAX);
    let best = AtomicU64::new(u64::MAX);
    let results: Vec<PerProduct> = pool.install(|| {
        use rayon::prelude::*;
        (0..uni.len() as u32)
            .into_par_iter()
            .map(|s| {
                if (s as u64) > best.load(Ordering::Relaxed) {
                    return PerProduct { hit: None, nodes: 0, aborted: false, skipped: true };
                }
                let r = run_one_product(
                    &uni,
                    n,
                    &line_cells,
                    &completing,
                    s,
                    opts.forced_cells,
                    limit,
                );
                if r.hit.is_some() {
                    best.fetch_min(s as u64, Ordering::Relaxed);
                }
                r
            })
            .collect()
    });

    // replay the sequential budget semantics over the per-product traces
    let mut cum = 0u64;
    for r in &results {
        debug_assert!(!r.skipped, "replay reached a skipped product candidate");
        if let Some((h, grid)) = &r.hit {
            return if budget.is_none_or(|b| cum + h <= b) {
                finish(OutcomeKind::Found(square_of(grid)), cum + h)
            } else {
                finish(OutcomeKind::BudgetExceeded, budget.expect("checked") + 1)
            };
        }
        if r.aborted || budget.is_some_and(|b| cum + r.nodes > b) {
            return finish(OutcomeKind::BudgetExceeded, budget.expect("abort implies budget") + 1);
        }
        cum += r.nodes;
    }
    finish(OutcomeKind::ExhaustedNone, cum)
}

// ---------------------------------------------------------------------------
// enumeration of abelian groups and the sweep harness
// ---------------------------------------------------------------------------

fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn gen(k: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(prefix.clone());
            return;
        }
        let mut part = k.min(max);
        while part >= 1 {
            prefix.push(part);
            gen(k - part, part, prefix, out);
            prefix.pop();
            part -= 1;
        }
    }
    let mut out = Vec::new();
    gen(k, k, &mut Vec::new(), &mut out);
    out
}

/// Every abelian group of the given order, one spec per isomorphism class
/// (all multisets of prime-power cyclic factors), sorted by canonical
/// invariant factors.
pub fn enumerate_abelian_specs(order: u64) -> Vec<FGAbelianSpec> {
    if order == 0 {
        return Vec::new();
    }
    let factors = factorize_u64(order);
    let per_prime: Vec<Vec<Vec<u64>>> = factors
        .iter()
        .map(|&(p, e)| {
            partitions(e)
                .into_iter()
                .map(|part| part.into_iter().rev().map(|x| p.pow(x)).collect())
                .collect()
        })
        .collect();
    let mut specs = vec![Vec::new()];
    for options in per_prime {
        let mut next = Vec::new();
        for base in &specs {
            for opt in &options {
                let mut t: Vec<u64> = base.clone();
                t.extend_from_slice(opt);
                next.push(t);
            }
        }
        specs = next;
    }
    let mut out: Vec<FGAbelianSpec> = specs
        .into_iter()
        .map(|t| FGAbelianSpec::finite(t).expect("prime powers are at least 2"))
        .collect();
    out.sort_by_key(|s| s.canonical_invariant_factors());
    out
}

/// All abelian specs of order 1..=max_order in (order, invariant factors)
/// order.
pub fn abelian_specs_up_to(max_order: u64) -> Vec<FGAbelianSpec> {
    (1..=max_order).flat_map(enumerate_abelian_specs).collect()
}

/// One sweep line: the oracle's answer and the search's answer for a single
/// abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRecord {
    pub order: u64,
    pub invariant_factors: Vec<u64>,
    pub status: String,
    pub rule: String,
    pub search_found: bool,
    pub agree: bool,
}

impl SweepRecord {
    pub fn text_line(&self) -> String {
        let factors: Vec<String> =
            self.invariant_factors.iter().map(u64::to_string).collect();
        format!(
            "order={} factors=[{}] oracle={}({}) search={} agree={}",
            self.order,
            factors.join(","),
            self.status,
            self.rule,
            if self.search_found { "Found" } else { "ExhaustedNone" },
            if self.agree { "yes" } else { "NO" },
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub records: Vec<SweepRecord>,
    pub disagreements: usize,
}

impl SweepReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.text_line());
            out.push('\n');
        }
        out.push_str(&format!(
            "{} groups checked, {} disagreements\n",
            self.records.len(),
            self.disagreements
        ));
        out
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

fn sweep_one(spec: &FGAbelianSpec) -> SweepRecord {
    let verdict = decide_3magic_abelian(spec);
    let outcome = search_abelian_3magic(&Group::Abelian(spec.clone()), 1)
        .expect("finite commutative spec");
    let found = matches!(outcome.kind, OutcomeKind::Found(_));
    let Order::Finite(order) = spec.order() else { unreachable!("finite") };
    SweepRecord {
        order: order as u64,
        invariant_factors: spec.canonical_invariant_factors(),
        status: verdict.status.to_string(),
        rule: verdict.rule.map(|r| r.to_string()).unwrap_or_default(),
        search_found: found,
        agree: (verdict.status == Status::Magic) == found,
    }
}

/// Runs the oracle and the abelian fast search over every finite abelian
/// group of order <= max_order and reports disagreements. Record order is
/// (order, invariant factors) regardless of the worker count.
pub fn sweep_crosscheck(max_order: u64, jobs: usize) -> SweepReport {
    let specs = abelian_specs_up_to(max_order);
    let mut records: Vec<SweepRecord> = if jobs <= 1 {
        specs.iter().map(sweep_one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            use rayon::prelude::*;
            specs.par_iter().map(sweep_one).collect()
        })
    };
    records.sort_by(|a, b| {
        (a.order, &a.invariant_factors).cmp(&(b.order, &b.invariant_factors))
    });
    let disagreements = records.iter().filter(|r| !r.agree).count();
    SweepReport { records, disagreements }
}
