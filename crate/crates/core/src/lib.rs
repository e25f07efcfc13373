//! Exact enumeration of nontrivial squared squares: tilings of an integer
//! square by two or more integer squares in which no two equal squares share
//! a whole side.
//!
//! * [`geometry`]: elements, dissections and the definitional predicates.
//! * [`symmetry`]: the eight symmetries of the square and canonical keys.
//! * [`enumerator`]: the exhaustive corner-filling search.
//! * [`lemma`]: border compositions and machine checks of structural claims.
//! * [`oracle`]: an independent brute-force tiler for cross-checking.
//! * [`io`]: text, Bouwkamp, SVG and the reference fixtures.

pub mod enumerator;
pub mod geometry;
pub mod io;
pub mod lemma;
pub mod oracle;
pub mod symmetry;

pub use enumerator::{enumerate, enumerate_range, enumerate_with_border, Collect, EnumerationReport, SearchError, SearchOptions};
pub use geometry::{classify, is_nontrivial, shares_full_edge, Classification, Dissection, GeometryError, Side, SquareElement};
pub use lemma::{border_compositions, filter_compositions, verify_lemma, BorderComposition, CompositionFilter, LemmaId};
pub use oracle::naive_enumerate;
pub use symmetry::{canonical_key, CanonicalKey, SymmetryOp};
