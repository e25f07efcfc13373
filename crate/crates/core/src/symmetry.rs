//! The eight symmetries of the square acting on dissections, canonical
//! forms under that group, and orbit/stabilizer bookkeeping.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geometry::{Dissection, SquareElement};

/// An element of the dihedral group of the square.
///
/// `Mh` flips left and right (the horizontal mirror image), `Mv` flips top
/// and bottom, `Md` reflects across the main diagonal `y = x` and `Ma`
/// across the anti-diagonal. Rotations are counterclockwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryOp {
    Id,
    R90,
    R180,
    R270,
    Mh,
    Mv,
    Md,
    Ma,
}

impl SymmetryOp {
    pub const ALL: [SymmetryOp; 8] = [
        SymmetryOp::Id,
        SymmetryOp::R90,
        SymmetryOp::R180,
        SymmetryOp::R270,
        SymmetryOp::Mh,
        SymmetryOp::Mv,
        SymmetryOp::Md,
        SymmetryOp::Ma,
    ];

    /// Linear part acting on centered coordinates, row-major `[a, b, c, d]`
    /// for `(X, Y) -> (aX + bY, cX + dY)`.
    const fn matrix(self) -> [i64; 4] {
        match self {
            SymmetryOp::Id => [1, 0, 0, 1],
            SymmetryOp::R90 => [0, -1, 1, 0],
            SymmetryOp::R180 => [-1, 0, 0, -1],
            SymmetryOp::R270 => [0, 1, -1, 0],
            SymmetryOp::Mh => [-1, 0, 0, 1],
            SymmetryOp::Mv => [1, 0, 0, -1],
            SymmetryOp::Md => [0, 1, 1, 0],
            SymmetryOp::Ma => [0, -1, -1, 0],
        }
    }

    fn from_matrix(m: [i64; 4]) -> SymmetryOp {
        *SymmetryOp::ALL
            .iter()
            .find(|g| g.matrix() == m)
            .expect("product of two square symmetries is a square symmetry")
    }

    /// `self.then(other)` applies `self` first, then `other`.
    pub fn then(self, other: SymmetryOp) -> SymmetryOp {
        let [a, b, c, d] = other.matrix();
        let [e, f, g, h] = self.matrix();
        SymmetryOp::from_matrix([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    pub fn inverse(self) -> SymmetryOp {
        match self {
            SymmetryOp::R90 => SymmetryOp::R270,
            SymmetryOp::R270 => SymmetryOp::R90,
            other => other,
        }
    }

    pub fn is_reflection(self) -> bool {
        let [a, b, c, d] = self.matrix();
        a * d - b * c < 0
    }

    pub fn label(self) -> &'static str {
        match self {
            SymmetryOp::Id => "id",
            SymmetryOp::R90 => "r90",
            SymmetryOp::R180 => "r180",
            SymmetryOp::R270 => "r270",
            SymmetryOp::Mh => "mh",
            SymmetryOp::Mv => "mv",
            SymmetryOp::Md => "md",
            SymmetryOp::Ma => "ma",
        }
    }

    /// Image of one element inside an `n × n` square.
    #[inline]
    pub fn map_element(self, e: &SquareElement, n: u32) -> SquareElement {
        let (x, y, s) = (e.x, e.y, e.s);
        let (fx, fy) = (n - x - s, n - y - s);
        let (nx, ny) = match self {
            SymmetryOp::Id => (x, y),
            SymmetryOp::R90 => (fy, x),
            SymmetryOp::R180 => (fx, fy),
            SymmetryOp::R270 => (y, fx),
            SymmetryOp::Mh => (fx, y),
            SymmetryOp::Mv => (x, fy),
            SymmetryOp::Md => (y, x),
            SymmetryOp::Ma => (fy, fx),
        };
        SquareElement::new(nx, ny, s)
    }
}

impl fmt::Display for SymmetryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SymmetryOp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SymmetryOp::ALL
            .into_iter()
            .find(|g| g.label() == s)
            .ok_or_else(|| format!("unknown symmetry `{s}`"))
    }
}

/// Image of a dissection, re-sorted into scanline order.
pub fn apply(d: &Dissection, g: SymmetryOp) -> Dissection {
    let n = d.n();
    Dissection::from_scanline_unchecked(n, mapped_scanline(d, g))
}

fn mapped_scanline(d: &Dissection, g: SymmetryOp) -> Vec<SquareElement> {
    let mut out: Vec<SquareElement> = d.elements().iter().map(|e| g.map_element(e, d.n())).collect();
    out.sort_unstable_by(SquareElement::scanline_cmp);
    out
}

fn scanline_list_cmp(a: &[SquareElement], b: &[SquareElement]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(p, q)| p.scanline_cmp(q))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// Identifies the orbit of a dissection under the eight symmetries.
///
/// The bytes encode the scanline-minimal image: the side length as two
/// big-endian bytes followed by the element sizes in scanline order (one
/// byte each when `n < 256`, two otherwise). Sizes in scanline order fix
/// the tiling, since scanline order is also corner-filling order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    fn encode(n: u32, sizes: &[u32]) -> CanonicalKey {
        assert!(n <= u32::from(u16::MAX), "side length exceeds key encoding");
        let wide = n >= 256;
        let mut bytes = Vec::with_capacity(2 + sizes.len() * if wide { 2 } else { 1 });
        bytes.extend_from_slice(&(n as u16).to_be_bytes());
        for &s in sizes {
            if wide {
                bytes.extend_from_slice(&(s as u16).to_be_bytes());
            } else {
                bytes.push(s as u8);
            }
        }
        CanonicalKey(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn n(&self) -> u32 {
        u32::from(u16::from_be_bytes([self.0[0], self.0[1]]))
    }

    /// Element sizes of the canonical representative in scanline order.
    pub fn sizes(&self) -> Vec<u32> {
        let body = &self.0[2..];
        if self.n() >= 256 {
            body.chunks_exact(2).map(|c| u32::from(u16::from_be_bytes([c[0], c[1]]))).collect()
        } else {
            body.iter().map(|&b| u32::from(b)).collect()
        }
    }

    /// Rebuilds the canonical representative.
    pub fn to_dissection(&self) -> Dissection {
        let n = self.n();
        let elements = corner_fill(n, &self.sizes()).expect("canonical key encodes a valid tiling");
        Dissection::from_scanline_unchecked(n, elements)
    }
}

/// Places squares of the given sizes, each at the lowest-then-leftmost
/// uncovered cell. Returns `None` if a square does not fit or the square is
/// not exactly covered.
pub(crate) fn corner_fill(n: u32, sizes: &[u32]) -> Option<Vec<SquareElement>> {
    let side = n as usize;
    let mut heights = vec![0u32; side];
    let mut out = Vec::with_capacity(sizes.len());
    for &s in sizes {
        let (x, &h) = heights.iter().enumerate().min_by_key(|&(i, &h)| (h, i))?;
        if h >= n || s == 0 {
            return None;
        }
        let width = heights[x..].iter().take_while(|&&v| v == h).count();
        if s as usize > width || h + s > n {
            return None;
        }
        heights[x..x + s as usize].iter_mut().for_each(|v| *v = h + s);
        out.push(SquareElement::new(x as u32, h, s));
    }
    heights.iter().all(|&h| h == n).then_some(out)
}

/// Largest side for which images are bucketed on a corner grid instead of
/// sorted.
const GRID_MAX: u32 = 64;

/// Element sizes of `g(d)` in scanline order, written to `out`.
///
/// `grid` is an all-zero `n × n` scratch buffer and is left all-zero.
fn image_sizes(d: &Dissection, g: SymmetryOp, grid: &mut [u8], out: &mut Vec<u32>) {
    let n = d.n();
    out.clear();
    if n <= GRID_MAX {
        for e in d.elements() {
            let m = g.map_element(e, n);
            grid[(m.y * n + m.x) as usize] = m.s as u8;
        }
        for cell in grid.iter_mut().filter(|c| **c != 0) {
            out.push(u32::from(*cell));
            *cell = 0;
        }
    } else {
        let mut image: Vec<SquareElement> = d.elements().iter().map(|e| g.map_element(e, n)).collect();
        image.sort_unstable_by_key(|e| (e.y, e.x));
        out.extend(image.iter().map(|e| e.s));
    }
}

/// Sizes of the scanline-minimal image over all eight symmetries, and
/// which ops fix `d`.
///
/// Two images in scanline order first differ at an element whose position
/// is fixed by the sizes placed before it, so comparing size sequences is
/// the same as comparing element lists.
fn canonical_sizes(d: &Dissection) -> (Vec<u32>, Vec<SymmetryOp>) {
    let n = d.n();
    let mut grid = if n <= GRID_MAX { vec![0u8; (n * n) as usize] } else { Vec::new() };
    let mut best: Vec<u32> = Vec::new();
    let mut image: Vec<u32> = Vec::with_capacity(d.order());
    let mut stabilizer = Vec::new();
    for g in SymmetryOp::ALL {
        image_sizes(d, g, &mut grid, &mut image);
        if image.iter().copied().eq(d.sizes()) {
            stabilizer.push(g);
        }
        if best.is_empty() || image < best {
            std::mem::swap(&mut best, &mut image);
        }
    }
    (best, stabilizer)
}

pub fn canonical_key(d: &Dissection) -> CanonicalKey {
    let (sizes, _) = canonical_sizes(d);
    CanonicalKey::encode(d.n(), &sizes)
}

/// Canonical key together with the stabilizer, in one pass.
pub fn canonical_key_and_stabilizer(d: &Dissection) -> (CanonicalKey, Vec<SymmetryOp>) {
    let (sizes, stab) = canonical_sizes(d);
    (CanonicalKey::encode(d.n(), &sizes), stab)
}

/// The canonical representative as a dissection.
pub fn canonical_form(d: &Dissection) -> Dissection {
    canonical_key(d).to_dissection()
}

pub fn stabilizer(d: &Dissection) -> Vec<SymmetryOp> {
    canonical_sizes(d).1
}

pub fn orbit_size(d: &Dissection) -> usize {
    8 / stabilizer(d).len()
}

/// Number of orbits `d`'s class splits into when mirror images are counted
/// separately: 1 if some reflection fixes `d`, else 2.
pub fn mirror_class_count(d: &Dissection) -> usize {
    if stabilizer(d).iter().any(|g| g.is_reflection()) {
        1
    } else {
        2
    }
}

/// All distinct images of `d`, in scanline-sorted order.
pub fn orbit(d: &Dissection) -> Vec<Dissection> {
    let mut images: Vec<Dissection> = SymmetryOp::ALL.iter().map(|&g| apply(d, g)).collect();
    images.sort_by(|a, b| scanline_list_cmp(a.elements(), b.elements()));
    images.dedup();
    images
}
