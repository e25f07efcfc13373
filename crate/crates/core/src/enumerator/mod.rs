//! Exhaustive search for every nontrivial squared square of a given size.
//!
//! The search enumerates labeled tilings with corner filling and
//! deduplicates them by canonical key afterwards. Pruning rules are
//! optional and must never change the resulting set of classes:
//!
//! * `prune_nontrivial_incremental` rejects a placement that creates a
//!   same-size full-edge contact with its left or lower neighbour.
//! * `prune_border_min` rejects placements that force a border element
//!   smaller than 3 or a corner element smaller than 4.
//!
//! Work can be split across threads: the tree is cut at a fixed depth and
//! the resulting subtrees are handed out to workers. Counts and node totals
//! do not depend on the number of workers.

mod report;
mod search;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use report::{Collect, EnumerationReport};
pub(crate) use report::{Coverage, Tally};
pub use search::MAX_SIDE;
use search::{Aborted, Budget, Rules, Searcher};

use crate::geometry::{Dissection, Side, SquareElement};
use crate::lemma::BorderComposition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("side length {n} is outside the supported range 1..={max}", max = MAX_SIDE)]
    InvalidSize { n: u32 },
    #[error("border composition {composition} does not cover a side of length {n}")]
    InvalidComposition { composition: BorderComposition, n: u32 },
    #[error("pinned element {element} is invalid: {reason}")]
    InvalidPin { element: SquareElement, reason: &'static str },
    #[error("invalid search options: {0}")]
    InvalidOptions(&'static str),
    #[error("node budget of {budget} exhausted at n = {n}")]
    BudgetExhausted { n: u32, budget: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub prune_border_min: bool,
    pub prune_nontrivial_incremental: bool,
    /// Keep trivial tilings too (all-tilings mode). Requires both pruning
    /// flags off.
    pub include_trivial: bool,
    /// Only explore tilings whose bottom-left corner element is at least as
    /// large as the other three corner elements. Every class has such a
    /// member, so the classes found are unchanged; raw counts are rebuilt
    /// from orbit sizes.
    pub symmetry_break: bool,
    /// Pre-filled border, read left to right (bottom, top) or bottom to top
    /// (left, right).
    pub fixed_border: Option<(Side, BorderComposition)>,
    /// Elements every reported tiling must contain.
    pub pinned: Vec<SquareElement>,
    pub collect: Collect,
    pub workers: usize,
    pub node_budget: Option<u64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            prune_border_min: true,
            prune_nontrivial_incremental: true,
            include_trivial: false,
            symmetry_break: false,
            fixed_border: None,
            pinned: Vec::new(),
            collect: Collect::Canonical,
            workers: 1,
            node_budget: None,
        }
    }
}

impl SearchOptions {
    /// Both pruning flags off; nontriviality is checked on complete tilings only.
    pub fn unpruned() -> Self {
        SearchOptions {
            prune_border_min: false,
            prune_nontrivial_incremental: false,
            ..SearchOptions::default()
        }
    }

    /// Every square tiling, trivial or not.
    pub fn all_tilings() -> Self {
        SearchOptions { include_trivial: true, ..SearchOptions::unpruned() }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_collect(mut self, collect: Collect) -> Self {
        self.collect = collect;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.node_budget = Some(budget);
        self
    }
}

/// Elements occupying one side of an `n × n` square in the given order.
pub fn border_elements_for(n: u32, side: Side, parts: &[u32]) -> Vec<SquareElement> {
    let mut offset = 0;
    parts
        .iter()
        .map(|&s| {
            let e = match side {
                Side::Bottom => SquareElement::new(offset, 0, s),
                Side::Top => SquareElement::new(offset, n.saturating_sub(s), s),
                Side::Left => SquareElement::new(0, offset, s),
                Side::Right => SquareElement::new(n.saturating_sub(s), offset, s),
            };
            offset += s;
            e
        })
        .collect()
}

fn build_rules(n: u32, opts: &SearchOptions) -> Result<Rules, SearchError> {
    if n == 0 || n > MAX_SIDE {
        return Err(SearchError::InvalidSize { n });
    }
    if opts.include_trivial && (opts.prune_border_min || opts.prune_nontrivial_incremental) {
        return Err(SearchError::InvalidOptions(
            "pruning rules assume nontriviality; turn them off to include trivial tilings",
        ));
    }
    let mut pins = opts.pinned.clone();
    if let Some((side, comp)) = &opts.fixed_border {
        if comp.parts().contains(&0) || comp.sum() != u64::from(n) {
            return Err(SearchError::InvalidComposition { composition: comp.clone(), n });
        }
        pins.extend(border_elements_for(n, *side, comp.parts()));
    }
    if opts.symmetry_break && !pins.is_empty() {
        return Err(SearchError::InvalidOptions("symmetry breaking cannot be combined with pinned elements"));
    }
    let side = n as usize;
    let mut pinned_corner = vec![0u8; side * side];
    let mut reserved = vec![0u64; side];
    pins.sort_by(SquareElement::scanline_cmp);
    pins.dedup();
    for (i, e) in pins.iter().enumerate() {
        if e.s == 0 || e.right() > n || e.top() > n {
            return Err(SearchError::InvalidPin { element: *e, reason: "does not fit" });
        }
        if pins[..i].iter().any(|p| p.overlaps(e)) {
            return Err(SearchError::InvalidPin { element: *e, reason: "overlaps another pinned element" });
        }
        pinned_corner[e.y as usize * side + e.x as usize] = e.s as u8;
        let mask = if e.s == 64 { u64::MAX } else { ((1u64 << e.s) - 1) << e.x };
        for row in &mut reserved[e.y as usize..e.top() as usize] {
            *row |= mask;
        }
    }
    Ok(Rules {
        n,
        border_min: opts.prune_border_min,
        nontrivial_incremental: opts.prune_nontrivial_incremental,
        require_nontrivial: !opts.include_trivial,
        corner_break: opts.symmetry_break,
        has_pins: !pins.is_empty(),
        pinned_corner,
        reserved,
    })
}

/// Every nontrivial squared square of side `n` (order ≥ 2), up to symmetry.
pub fn enumerate(n: u32, opts: &SearchOptions) -> Result<EnumerationReport, SearchError> {
    let rules = build_rules(n, opts)?;
    let start = Instant::now();
    let budget = Budget::new(opts.node_budget);
    let (tally, nodes) = run_split(&rules, opts, &budget)
        .map_err(|Aborted| SearchError::BudgetExhausted { n, budget: opts.node_budget.unwrap_or(0) })?;
    if let Some(limit) = opts.node_budget {
        if nodes > limit {
            return Err(SearchError::BudgetExhausted { n, budget: limit });
        }
    }
    Ok(tally.finish(n, coverage(&rules, opts), nodes, start.elapsed()))
}

/// Hands every accepted labeled tiling to `visit`, single-threaded and in
/// search order, without collecting anything. Returns the node count.
pub fn for_each_tiling(n: u32, opts: &SearchOptions, mut visit: impl FnMut(&Dissection)) -> Result<u64, SearchError> {
    if opts.symmetry_break {
        return Err(SearchError::InvalidOptions("visiting tilings needs every labeled tiling; turn off symmetry breaking"));
    }
    let rules = build_rules(n, opts)?;
    let budget = Budget::new(opts.node_budget);
    let mut s = Searcher::new(&rules, &budget);
    let exhausted = |_| SearchError::BudgetExhausted { n, budget: opts.node_budget.unwrap_or(0) };
    s.run(&mut |els| visit(&Dissection::from_scanline_unchecked(n, els.to_vec()))).map_err(exhausted)?;
    s.flush().map_err(exhausted)?;
    Ok(s.nodes)
}

/// One independent report per side length in `lo..=hi`.
pub fn enumerate_range(lo: u32, hi: u32, opts: &SearchOptions) -> Result<Vec<EnumerationReport>, SearchError> {
    if lo == 0 || lo > hi {
        return Err(SearchError::InvalidSize { n: lo });
    }
    (lo..=hi).map(|n| enumerate(n, opts)).collect()
}

/// Same search with the top border pre-filled left to right.
pub fn enumerate_with_border(
    n: u32,
    comp: &BorderComposition,
    opts: &SearchOptions,
) -> Result<EnumerationReport, SearchError> {
    let mut opts = opts.clone();
    opts.fixed_border = Some((Side::Top, comp.clone()));
    enumerate(n, &opts)
}

/// Split depth: the shallowest cut giving every worker a healthy queue.
const MIN_TASKS_PER_WORKER: usize = 32;
const MAX_SPLIT_DEPTH: usize = 12;

fn record_into(tally: &mut Tally, n: u32) -> impl FnMut(&[SquareElement]) + '_ {
    move |els| tally.record(Dissection::from_scanline_unchecked(n, els.to_vec()))
}

fn coverage(rules: &Rules, opts: &SearchOptions) -> Coverage {
    if opts.symmetry_break {
        Coverage::Representatives
    } else if rules.has_pins {
        Coverage::Restricted
    } else {
        Coverage::Complete
    }
}

fn run_split(rules: &Rules, opts: &SearchOptions, budget: &Budget) -> Result<(Tally, u64), Aborted> {
    let n = rules.n;
    if opts.workers <= 1 {
        let mut tally = Tally::new(opts.collect, coverage(rules, opts));
        let mut s = Searcher::new(rules, budget);
        s.run(&mut record_into(&mut tally, n))?;
        s.flush()?;
        return Ok((tally, s.nodes));
    }

    // Cut the tree; nodes above the cut are counted once, here.
    let (mut tally, mut nodes, tasks) = {
        let mut depth = 1;
        loop {
            let mut tally = Tally::new(opts.collect, coverage(rules, opts));
            let mut tasks: Vec<Vec<u8>> = Vec::new();
            let mut s = Searcher::new(rules, budget);
            s.frontier(depth, &mut |p| tasks.push(p), &mut record_into(&mut tally, n))?;
            if tasks.len() >= MIN_TASKS_PER_WORKER * opts.workers || depth >= MAX_SPLIT_DEPTH || tasks.is_empty() {
                s.flush()?;
                break (tally, s.nodes, tasks);
            }
            depth += 1;
        }
    };

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Result<(Tally, u64), Aborted>>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..opts.workers {
            scope.spawn(|| {
                let mut local = Tally::new(opts.collect, coverage(rules, opts));
                let mut local_nodes = 0u64;
                let outcome = loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(prefix) = tasks.get(i) else { break Ok(()) };
                    let mut s = Searcher::new(rules, budget);
                    s.replay(prefix);
                    let r = s.run(&mut record_into(&mut local, n)).and_then(|_| s.flush());
                    local_nodes += s.nodes;
                    if r.is_err() {
                        break r;
                    }
                };
                results.lock().expect("worker panicked").push(outcome.map(|_| (local, local_nodes)));
            });
        }
    });
    for r in results.into_inner().expect("worker panicked") {
        let (t, k) = r?;
        tally.merge(t);
        nodes += k;
    }
    Ok((tally, nodes))
}
