//! A deliberately plain brute-force tiler used to cross-check the main
//! search on small sizes.
//!
//! It fills the leftmost-then-lowest empty cell (column-major, the
//! transpose of the main search's order) on a boolean grid, tests fit cell
//! by cell, and keeps its own element list. In nontrivial-only mode it
//! drops a placement as soon as it shares a full edge with an equal
//! neighbour, using only the geometry predicate.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use thiserror::Error;

use crate::enumerator::EnumerationReport;
use crate::geometry::{self, Dissection, SquareElement};
use crate::symmetry::{self, CanonicalKey};

/// Largest size the oracle accepts.
pub const ORACLE_MAX_N: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle supports 1 <= n <= {max}, got {n}", max = ORACLE_MAX_N)]
    SizeCap { n: u32 },
}

struct Naive<'a> {
    n: u32,
    include_trivial: bool,
    filled: Vec<bool>,
    placed: Vec<SquareElement>,
    nodes: u64,
    sink: &'a mut dyn FnMut(Dissection),
}

impl Naive<'_> {
    fn cell(&self, x: u32, y: u32) -> usize {
        (x * self.n + y) as usize
    }

    fn first_empty(&self) -> Option<(u32, u32)> {
        let i = self.filled.iter().position(|&f| !f)? as u32;
        Some((i / self.n, i % self.n))
    }

    fn fits(&self, x: u32, y: u32, s: u32) -> bool {
        if x + s > self.n || y + s > self.n {
            return false;
        }
        (x..x + s).all(|cx| (y..y + s).all(|cy| !self.filled[self.cell(cx, cy)]))
    }

    fn paint(&mut self, e: SquareElement, value: bool) {
        for cx in e.x..e.right() {
            for cy in e.y..e.top() {
                let i = self.cell(cx, cy);
                self.filled[i] = value;
            }
        }
    }

    fn walk(&mut self) {
        self.nodes += 1;
        let Some((x, y)) = self.first_empty() else {
            self.finish();
            return;
        };
        for s in 1..=self.n {
            if !self.fits(x, y, s) {
                // a larger square would overlap the same cell
                break;
            }
            let e = SquareElement::new(x, y, s);
            if !self.include_trivial && self.placed.iter().any(|p| geometry::shares_full_edge(p, &e)) {
                continue;
            }
            self.paint(e, true);
            self.placed.push(e);
            self.walk();
            self.placed.pop();
            self.paint(e, false);
        }
    }

    fn finish(&mut self) {
        if self.placed.len() < 2 {
            return;
        }
        let d = Dissection::new(self.n, self.placed.clone()).expect("oracle produced an invalid tiling");
        if !self.include_trivial && !geometry::is_nontrivial(&d) {
            return;
        }
        (self.sink)(d);
    }
}

fn check_size(n: u32) -> Result<(), OracleError> {
    if n == 0 || n > ORACLE_MAX_N {
        return Err(OracleError::SizeCap { n });
    }
    Ok(())
}

/// Hands every tiling the oracle accepts to `visit`, in search order.
/// Returns the number of search nodes.
pub fn naive_for_each(n: u32, include_trivial: bool, mut visit: impl FnMut(Dissection)) -> Result<u64, OracleError> {
    check_size(n)?;
    let mut state = Naive {
        n,
        include_trivial,
        filled: vec![false; (n * n) as usize],
        placed: Vec::new(),
        nodes: 0,
        sink: &mut visit,
    };
    state.walk();
    Ok(state.nodes)
}

/// Every square tiling of the `n × n` square with order ≥ 2, optionally
/// only the nontrivial ones, up to symmetry. `labeled` is left empty; use
/// [`naive_for_each`] to see individual tilings.
pub fn naive_enumerate(n: u32, include_trivial: bool) -> Result<EnumerationReport, OracleError> {
    let start = Instant::now();
    let mut raw = 0u64;
    let mut keys = BTreeSet::new();
    let nodes = naive_for_each(n, include_trivial, |d| {
        raw += 1;
        keys.insert(symmetry::canonical_key(&d));
    })?;
    let representatives: Vec<Dissection> = keys.iter().map(CanonicalKey::to_dissection).collect();
    let reflection_pair_count = representatives.iter().map(|d| symmetry::mirror_class_count(d) as u64).sum();
    Ok(EnumerationReport {
        n,
        raw_count: raw,
        canonical_count: representatives.len() as u64,
        reflection_pair_count,
        representatives,
        labeled: Vec::new(),
        nodes_expanded: nodes,
        wall_time: start.elapsed(),
    })
}

/// Number of square tilings of the `n × n` square, the single-element one
/// included, counted without listing them.
///
/// Tilings are built by always covering the lowest-then-leftmost empty
/// cell, so the partial state is a column-height profile; the number of
/// completions of a profile is memoized.
pub fn count_all_tilings(n: u32) -> u128 {
    fn completions(heights: &mut Vec<u32>, n: u32, memo: &mut HashMap<Vec<u32>, u128>) -> u128 {
        let low = *heights.iter().min().expect("n >= 1");
        if low == n {
            return 1;
        }
        if let Some(&c) = memo.get(heights.as_slice()) {
            return c;
        }
        let x = heights.iter().position(|&h| h == low).expect("minimum exists");
        let run = heights[x..].iter().take_while(|&&h| h == low).count() as u32;
        let mut total = 0;
        for s in 1..=run.min(n - low) {
            let saved = heights.clone();
            heights[x..x + s as usize].iter_mut().for_each(|h| *h = low + s);
            total += completions(heights, n, memo);
            *heights = saved;
        }
        memo.insert(heights.clone(), total);
        total
    }
    if n == 0 {
        return 0;
    }
    completions(&mut vec![0; n as usize], n, &mut HashMap::new())
}
