//! Corner-filling backtracking over skyline states.
//!
//! Squares are always placed with their bottom-left corner on the
//! lowest-then-leftmost uncovered cell, so the covered region is a skyline
//! (every column is filled from the bottom up to its height) and each
//! tiling is produced exactly once.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::geometry::SquareElement;

/// Largest side length the search supports.
pub const MAX_SIDE: u32 = 64;

/// How often a worker publishes its node count to the shared budget.
const FLUSH_EVERY: u64 = 1 << 12;

#[derive(Clone, Debug)]
pub(crate) struct Rules {
    pub n: u32,
    pub border_min: bool,
    pub nontrivial_incremental: bool,
    /// Reject complete tilings with a same-size full-edge pair.
    pub require_nontrivial: bool,
    /// Every corner element other than the bottom-left one must be no larger
    /// than the bottom-left one.
    pub corner_break: bool,
    /// Pinned elements: required size at a corner cell (0 = none).
    pub pinned_corner: Vec<u8>,
    /// Row bitmasks of cells covered by pinned elements.
    pub reserved: Vec<u64>,
    pub has_pins: bool,
}

/// Shared node budget. Exhaustion raises `aborted` for every worker.
pub(crate) struct Budget {
    pub limit: Option<u64>,
    pub used: AtomicU64,
    pub aborted: AtomicBool,
}

impl Budget {
    pub fn new(limit: Option<u64>) -> Self {
        Budget { limit, used: AtomicU64::new(0), aborted: AtomicBool::new(false) }
    }

    /// Adds `nodes`; returns false once the budget is exceeded.
    fn charge(&self, nodes: u64) -> bool {
        let total = self.used.fetch_add(nodes, Ordering::Relaxed) + nodes;
        if matches!(self.limit, Some(limit) if total > limit) {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.aborted.load(Ordering::Relaxed)
    }
}

#[derive(Debug)]
pub(crate) struct Aborted;

pub(crate) struct Searcher<'a> {
    rules: &'a Rules,
    n: usize,
    heights: Vec<u8>,
    /// Size of the element whose bottom-left corner is at a cell, 0 if none.
    corner: Vec<u8>,
    stack: Vec<SquareElement>,
    pub nodes: u64,
    unflushed: u64,
    budget: &'a Budget,
}

impl<'a> Searcher<'a> {
    pub fn new(rules: &'a Rules, budget: &'a Budget) -> Self {
        let n = rules.n as usize;
        Searcher {
            rules,
            n,
            heights: vec![0; n],
            corner: vec![0; n * n],
            stack: Vec::with_capacity(n * n),
            nodes: 0,
            unflushed: 0,
            budget,
        }
    }

    /// Lowest-then-leftmost open cell and the width of the flat run there.
    #[inline]
    fn open_cell(&self) -> Option<(usize, u8, usize)> {
        let mut x = 0;
        let mut h = u8::MAX;
        for (i, &v) in self.heights.iter().enumerate() {
            if v < h {
                h = v;
                x = i;
            }
        }
        if h as usize >= self.n {
            return None;
        }
        let width = self.heights[x..].iter().take_while(|&&v| v == h).count();
        Some((x, h, width))
    }

    #[inline]
    fn place(&mut self, x: usize, h: u8, s: u8) {
        let top = h + s;
        self.heights[x..x + s as usize].iter_mut().for_each(|v| *v = top);
        self.corner[h as usize * self.n + x] = s;
        self.stack.push(SquareElement::new(x as u32, u32::from(h), u32::from(s)));
    }

    #[inline]
    fn unplace(&mut self) {
        let e = self.stack.pop().expect("unplace without place");
        let (x, h, s) = (e.x as usize, e.y as u8, e.s as usize);
        self.heights[x..x + s].iter_mut().for_each(|v| *v = h);
        self.corner[h as usize * self.n + x] = 0;
    }

    /// Whether size `s` may go at `(x, h)` given the active rules. Fit
    /// against the skyline is checked by the caller.
    #[inline]
    fn legal(&self, x: usize, h: usize, s: usize) -> bool {
        let n = self.n;
        let r = self.rules;
        if r.nontrivial_incremental {
            // Left and lower neighbours are the only ones placed so far.
            if x >= s && self.corner[h * n + x - s] as usize == s {
                return false;
            }
            if h >= s && self.corner[(h - s) * n + x] as usize == s {
                return false;
            }
        }
        if r.border_min && !border_ok(n, x, h, s) {
            return false;
        }
        if r.corner_break && !self.stack.is_empty() {
            let right = x + s == n;
            let top = h + s == n;
            if ((right && h == 0) || (top && x == 0) || (right && top))
                && s > self.stack[0].s as usize
            {
                return false;
            }
        }
        true
    }

    #[inline]
    fn overlaps_pins(&self, x: usize, h: usize, s: usize) -> bool {
        let mask = if s >= 64 { u64::MAX } else { ((1u64 << s) - 1) << x };
        self.rules.reserved[h..h + s].iter().any(|&row| row & mask != 0)
    }

    fn nontrivial_complete(&self) -> bool {
        let n = self.n;
        self.stack.iter().all(|e| {
            let (x, y, s) = (e.x as usize, e.y as usize, e.s as usize);
            let right = x + s < n && self.corner[y * n + x + s] as usize == s;
            let above = y + s < n && self.corner[(y + s) * n + x] as usize == s;
            !right && !above
        })
    }

    fn tick(&mut self) -> Result<(), Aborted> {
        self.nodes += 1;
        self.unflushed += 1;
        if self.unflushed >= FLUSH_EVERY {
            self.flush()?;
        }
        Ok(())
    }

    pub fn flush(&mut self) -> Result<(), Aborted> {
        let pending = std::mem::take(&mut self.unflushed);
        if self.budget.charge(pending) {
            Ok(())
        } else {
            Err(Aborted)
        }
    }

    /// Legal sizes at the current open cell as a bitmask (bit `s - 1` for
    /// size `s`). `None` once the square is covered.
    #[inline]
    fn candidates(&self) -> Option<(usize, u8, u64)> {
        let (x, h, width) = self.open_cell()?;
        let hu = h as usize;
        let max = width.min(self.n - hu);
        let mut mask = 0u64;
        if self.rules.has_pins {
            let pinned = self.rules.pinned_corner[hu * self.n + x] as usize;
            if pinned != 0 {
                if pinned <= max && self.legal(x, hu, pinned) {
                    mask |= 1 << (pinned - 1);
                }
                return Some((x, h, mask));
            }
            for s in 1..=max {
                if !self.overlaps_pins(x, hu, s) && self.legal(x, hu, s) {
                    mask |= 1 << (s - 1);
                }
            }
        } else {
            for s in 1..=max {
                if self.legal(x, hu, s) {
                    mask |= 1 << (s - 1);
                }
            }
        }
        Some((x, h, mask))
    }

    fn complete_accepted(&self) -> bool {
        self.stack.len() >= 2 && (!self.rules.require_nontrivial || self.nontrivial_complete())
    }

    /// Replays a placement prefix produced by [`Searcher::frontier`].
    pub fn replay(&mut self, sizes: &[u8]) {
        for &s in sizes {
            let (x, h, _) = self.open_cell().expect("prefix fits");
            self.place(x, h, s);
        }
    }

    /// Full depth-first search from the current state; `emit` sees every
    /// accepted complete tiling in scanline order.
    pub fn run(&mut self, emit: &mut dyn FnMut(&[SquareElement])) -> Result<(), Aborted> {
        self.tick()?;
        let Some((x, h, sizes)) = self.candidates() else {
            if self.complete_accepted() {
                emit(&self.stack);
            }
            return Ok(());
        };
        let mut sizes = sizes;
        while sizes != 0 {
            let s = sizes.trailing_zeros() as u8 + 1;
            sizes &= sizes - 1;
            self.place(x, h, s);
            let r = self.run(emit);
            self.unplace();
            r?;
        }
        Ok(())
    }

    /// Depth-first walk to `depth` placements. States at that depth are
    /// handed to `task` (uncounted; the task's own run counts them), states
    /// above it are counted here and complete ones emitted.
    pub fn frontier(
        &mut self,
        depth: usize,
        task: &mut dyn FnMut(Vec<u8>),
        emit: &mut dyn FnMut(&[SquareElement]),
    ) -> Result<(), Aborted> {
        if self.stack.len() == depth {
            task(self.stack.iter().map(|e| e.s as u8).collect());
            return Ok(());
        }
        self.tick()?;
        let Some((x, h, sizes)) = self.candidates() else {
            if self.complete_accepted() {
                emit(&self.stack);
            }
            return Ok(());
        };
        let mut sizes = sizes;
        while sizes != 0 {
            let s = sizes.trailing_zeros() as u8 + 1;
            sizes &= sizes - 1;
            self.place(x, h, s);
            let r = self.frontier(depth, task, emit);
            self.unplace();
            r?;
        }
        Ok(())
    }
}

/// Consequences of "border elements are at least 3, corner elements at
/// least 4" for one placement.
///
/// Besides the element's own size, a gap of 1 or 2 cells to any wall can
/// only be closed by border elements smaller than 3, and a gap of exactly 3
/// along a border the element lies on can only be closed by a corner
/// element of size 3.
#[inline]
fn border_ok(n: usize, x: usize, y: usize, s: usize) -> bool {
    let left = x;
    let bottom = y;
    let right = n - x - s;
    let top = n - y - s;
    let on_h = bottom == 0 || top == 0;
    let on_v = left == 0 || right == 0;
    if (on_h || on_v) && s < 3 {
        return false;
    }
    if on_h && on_v && s < 4 && s != n {
        return false;
    }
    let small = |g: usize| g == 1 || g == 2;
    if small(left) || small(right) || small(bottom) || small(top) {
        return false;
    }
    if on_h && (left == 3 || right == 3) {
        return false;
    }
    if on_v && (bottom == 3 || top == 3) {
        return false;
    }
    true
}
