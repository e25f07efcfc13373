//! Dissections of an integer square into integer squares, and the
//! definitional predicates over them (exact cover, triviality, perfection,
//! simplicity, order, border and corner membership).
//!
//! Coordinates have their origin at the bottom-left corner with `y` growing
//! upward. An element `(x, y, s)` covers the half-open cell region
//! `[x, x+s) × [y, y+s)`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One axis-aligned square piece of a dissection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SquareElement {
    pub x: u32,
    pub y: u32,
    pub s: u32,
}

impl SquareElement {
    pub const fn new(x: u32, y: u32, s: u32) -> Self {
        SquareElement { x, y, s }
    }

    #[inline]
    pub fn right(&self) -> u32 {
        self.x + self.s
    }

    #[inline]
    pub fn top(&self) -> u32 {
        self.y + self.s
    }

    #[inline]
    pub fn area(&self) -> u64 {
        u64::from(self.s) * u64::from(self.s)
    }

    /// Whether the cell `(cx, cy)` lies inside this element.
    #[inline]
    pub fn covers(&self, cx: u32, cy: u32) -> bool {
        cx >= self.x && cx < self.right() && cy >= self.y && cy < self.top()
    }

    /// Whether the element touches any side of an `n × n` square.
    pub fn touches_border(&self, n: u32) -> bool {
        self.x == 0 || self.y == 0 || self.right() == n || self.top() == n
    }

    /// Interior-disjointness test.
    pub fn overlaps(&self, other: &SquareElement) -> bool {
        self.x < other.right()
            && other.x < self.right()
            && self.y < other.top()
            && other.y < self.top()
    }

    /// Scanline order: ascending `y`, then ascending `x`.
    pub fn scanline_cmp(&self, other: &SquareElement) -> Ordering {
        (self.y, self.x, self.s).cmp(&(other.y, other.x, other.s))
    }
}

impl fmt::Display for SquareElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("outer side length must be at least 1")]
    EmptySquare,
    #[error("element {0} has side length 0")]
    ZeroSide(SquareElement),
    #[error("element {element} does not fit in a {n}x{n} square")]
    OutOfBounds { element: SquareElement, n: u32 },
    #[error("elements {0} and {1} overlap")]
    Overlap(SquareElement, SquareElement),
    #[error("element areas sum to {actual}, expected {expected}")]
    AreaMismatch { expected: u64, actual: u64 },
}

/// A complete exact tiling of an `n × n` square.
///
/// The element list is kept in scanline order, so two dissections with the
/// same set of elements compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dissection {
    n: u32,
    elements: Vec<SquareElement>,
}

impl Dissection {
    /// Validates the exact-cover invariants and normalizes element order.
    pub fn new(n: u32, mut elements: Vec<SquareElement>) -> Result<Self, GeometryError> {
        if n == 0 {
            return Err(GeometryError::EmptySquare);
        }
        for e in &elements {
            if e.s == 0 {
                return Err(GeometryError::ZeroSide(*e));
            }
            if e.right() > n || e.top() > n {
                return Err(GeometryError::OutOfBounds { element: *e, n });
            }
        }
        elements.sort_by(SquareElement::scanline_cmp);

        // Paint test: each cell owned by at most one element.
        let side = n as usize;
        let mut owner: Vec<Option<usize>> = vec![None; side * side];
        for (i, e) in elements.iter().enumerate() {
            for cy in e.y..e.top() {
                for cx in e.x..e.right() {
                    let slot = &mut owner[cy as usize * side + cx as usize];
                    if let Some(j) = *slot {
                        return Err(GeometryError::Overlap(elements[j], *e));
                    }
                    *slot = Some(i);
                }
            }
        }
        let actual: u64 = elements.iter().map(SquareElement::area).sum();
        let expected = u64::from(n) * u64::from(n);
        if actual != expected {
            return Err(GeometryError::AreaMismatch { expected, actual });
        }
        Ok(Dissection { n, elements })
    }

    /// Builds a dissection from elements already known to be a valid exact
    /// cover in scanline order (search output).
    pub(crate) fn from_scanline_unchecked(n: u32, elements: Vec<SquareElement>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0].scanline_cmp(&w[1]) == Ordering::Less));
        Dissection { n, elements }
    }

    /// The dissection consisting of one element covering the whole square.
    pub fn whole(n: u32) -> Self {
        assert!(n > 0, "side length must be positive");
        Dissection { n, elements: vec![SquareElement::new(0, 0, n)] }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn elements(&self) -> &[SquareElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Element sizes in scanline order.
    pub fn sizes(&self) -> impl Iterator<Item = u32> + '_ {
        self.elements.iter().map(|e| e.s)
    }

    /// The element covering cell `(cx, cy)`.
    pub fn element_at(&self, cx: u32, cy: u32) -> Option<&SquareElement> {
        self.elements.iter().find(|e| e.covers(cx, cy))
    }
}

/// True iff `a` and `b` have equal size and touch along one complete side.
pub fn shares_full_edge(a: &SquareElement, b: &SquareElement) -> bool {
    if a.s != b.s {
        return false;
    }
    let horizontal = a.y == b.y && (a.right() == b.x || b.right() == a.x);
    let vertical = a.x == b.x && (a.top() == b.y || b.top() == a.y);
    horizontal || vertical
}

/// True iff no two elements of equal size share a full edge.
pub fn is_nontrivial(d: &Dissection) -> bool {
    let els = d.elements();
    !els.iter()
        .enumerate()
        .any(|(i, a)| els[i + 1..].iter().any(|b| shares_full_edge(a, b)))
}

/// True iff every element size is distinct.
pub fn is_perfect(d: &Dissection) -> bool {
    let mut sizes: Vec<u32> = d.sizes().collect();
    sizes.sort_unstable();
    sizes.windows(2).all(|w| w[0] != w[1])
}

/// True iff no proper sub-rectangle with two or more elements is exactly
/// tiled by a subset of the elements.
///
/// Candidate rectangles only use coordinates that already appear as element
/// boundaries; any squared sub-rectangle has its sides on such lines.
pub fn is_simple(d: &Dissection) -> bool {
    let els = d.elements();
    if els.len() < 3 {
        // Two elements can never tile a square; one element has no proper
        // squared sub-rectangle.
        return true;
    }
    let xs: Vec<u32> = els
        .iter()
        .flat_map(|e| [e.x, e.right()])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let ys: Vec<u32> = els
        .iter()
        .flat_map(|e| [e.y, e.top()])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = d.n();
    for (i, &x0) in xs.iter().enumerate() {
        for &x1 in &xs[i + 1..] {
            for (j, &y0) in ys.iter().enumerate() {
                for &y1 in &ys[j + 1..] {
                    if x0 == 0 && y0 == 0 && x1 == n && y1 == n {
                        continue;
                    }
                    if tiles_subrectangle(els, x0, y0, x1, y1) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Elements meeting the rectangle must all lie inside it, and there must be
/// at least two of them. Interior-disjointness plus containment plus an
/// area match is an exact tiling.
fn tiles_subrectangle(els: &[SquareElement], x0: u32, y0: u32, x1: u32, y1: u32) -> bool {
    let mut inside = 0usize;
    let mut area = 0u64;
    for e in els {
        let meets = e.x < x1 && x0 < e.right() && e.y < y1 && y0 < e.top();
        if !meets {
            continue;
        }
        if e.x < x0 || e.right() > x1 || e.y < y0 || e.top() > y1 {
            return false;
        }
        inside += 1;
        area += e.area();
    }
    inside >= 2 && area == u64::from(x1 - x0) * u64::from(y1 - y0)
}

/// Order, perfection, simplicity and triviality of one dissection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub order: usize,
    pub perfect: bool,
    pub simple: bool,
    pub trivial: bool,
    pub border_touch_count: usize,
}

pub fn classify(d: &Dissection) -> Classification {
    Classification {
        order: d.order(),
        perfect: is_perfect(d),
        simple: is_simple(d),
        trivial: !is_nontrivial(d),
        border_touch_count: border_elements(d).len(),
    }
}

/// Every element touching one of the four outer sides, in scanline order.
pub fn border_elements(d: &Dissection) -> Vec<SquareElement> {
    d.elements().iter().copied().filter(|e| e.touches_border(d.n())).collect()
}

/// The elements covering the four corner cells: bottom-left, bottom-right,
/// top-left, top-right.
pub fn corner_elements(d: &Dissection) -> [SquareElement; 4] {
    let m = d.n() - 1;
    [(0, 0), (m, 0), (0, m), (m, m)].map(|(cx, cy)| {
        *d.element_at(cx, cy).expect("complete dissection covers every corner")
    })
}

/// One side of the outer square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Bottom,
    Top,
    Left,
    Right,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Bottom, Side::Top, Side::Left, Side::Right];
}

/// Sizes of the elements along one side, corner to corner.
///
/// Bottom and top are read left to right, left and right bottom to top.
pub fn border_sizes(d: &Dissection, side: Side) -> Vec<u32> {
    let n = d.n();
    let mut along: Vec<(u32, u32)> = d
        .elements()
        .iter()
        .filter_map(|e| match side {
            Side::Bottom if e.y == 0 => Some((e.x, e.s)),
            Side::Top if e.top() == n => Some((e.x, e.s)),
            Side::Left if e.x == 0 => Some((e.y, e.s)),
            Side::Right if e.right() == n => Some((e.y, e.s)),
            _ => None,
        })
        .collect();
    along.sort_unstable();
    along.into_iter().map(|(_, s)| s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(x: u32, y: u32, s: u32) -> SquareElement {
        SquareElement::new(x, y, s)
    }

    fn ones_2x2() -> Dissection {
        Dissection::new(2, vec![el(0, 0, 1), el(1, 0, 1), el(0, 1, 1), el(1, 1, 1)]).unwrap()
    }

    #[test]
    fn full_edge_examples() {
        assert!(shares_full_edge(&el(0, 0, 2), &el(2, 0, 2)));
        assert!(!shares_full_edge(&el(0, 0, 2), &el(2, 1, 2)));
        assert!(!shares_full_edge(&el(0, 0, 2), &el(2, 0, 3)));
        assert!(shares_full_edge(&el(3, 5, 1), &el(3, 4, 1)));
        assert!(!shares_full_edge(&el(0, 0, 1), &el(1, 1, 1)));
    }

    #[test]
    fn four_ones_are_trivial_and_compound() {
        let d = ones_2x2();
        assert!(!is_nontrivial(&d));
        let c = classify(&d);
        assert_eq!(c.order, 4);
        assert!(!c.perfect);
        assert!(c.trivial);
        assert!(!c.simple);
        assert_eq!(c.border_touch_count, 4);
    }

    #[test]
    fn whole_square_is_vacuously_nontrivial() {
        let d = Dissection::whole(5);
        assert!(is_nontrivial(&d));
        assert_eq!(corner_elements(&d), [el(0, 0, 5); 4]);
        assert_eq!(border_elements(&d), vec![el(0, 0, 5)]);
    }

    #[test]
    fn validator_rejects_bad_input() {
        assert_eq!(Dissection::new(0, vec![]), Err(GeometryError::EmptySquare));
        assert!(matches!(Dissection::new(2, vec![el(0, 0, 0)]), Err(GeometryError::ZeroSide(_))));
        assert!(matches!(
            Dissection::new(2, vec![el(1, 0, 2)]),
            Err(GeometryError::OutOfBounds { .. })
        ));
        assert!(matches!(
            Dissection::new(2, vec![el(0, 0, 1), el(0, 0, 1), el(0, 1, 1), el(1, 1, 1)]),
            Err(GeometryError::Overlap(..))
        ));
        assert!(matches!(
            Dissection::new(2, vec![el(0, 0, 1), el(1, 0, 1)]),
            Err(GeometryError::AreaMismatch { expected: 4, actual: 2 })
        ));
    }

    #[test]
    fn elements_are_normalized_to_scanline_order() {
        let d = Dissection::new(2, vec![el(1, 1, 1), el(0, 1, 1), el(1, 0, 1), el(0, 0, 1)]).unwrap();
        assert_eq!(d, ones_2x2());
    }

    #[test]
    fn compound_nontrivial_square_is_not_simple() {
        // one 2x2 and five 1x1; the top row is a 3x1 squared rectangle
        let d = Dissection::new(
            3,
            vec![el(0, 0, 2), el(2, 0, 1), el(2, 1, 1), el(0, 2, 1), el(1, 2, 1), el(2, 2, 1)],
        )
        .unwrap();
        assert!(!is_simple(&d));
    }

    #[test]
    fn border_sizes_read_corner_to_corner() {
        let d = Dissection::new(
            3,
            vec![el(0, 0, 2), el(2, 0, 1), el(2, 1, 1), el(0, 2, 1), el(1, 2, 1), el(2, 2, 1)],
        )
        .unwrap();
        assert_eq!(border_sizes(&d, Side::Bottom), vec![2, 1]);
        assert_eq!(border_sizes(&d, Side::Top), vec![1, 1, 1]);
        assert_eq!(border_sizes(&d, Side::Left), vec![2, 1]);
        assert_eq!(border_sizes(&d, Side::Right), vec![1, 1, 1]);
    }
}
