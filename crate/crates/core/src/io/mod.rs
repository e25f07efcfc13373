//! Serialization (text interchange, Bouwkamp codes, SVG, JSON) and the two
//! reference tilings.

pub mod bouwkamp;
pub mod svg;
pub mod text;

use std::sync::OnceLock;

pub use bouwkamp::{from_bouwkamp, to_bouwkamp, BouwkampCode, BouwkampError};
pub use svg::to_svg;
pub use text::{DissectionDocument, Metadata, ParseError};

use crate::geometry::Dissection;

const ELEVEN: &str = include_str!("../../data/eleven.txt");
const SIXTEEN: &str = include_str!("../../data/sixteen.txt");

/// The smallest nontrivial squared squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixtures {
    pub eleven: Dissection,
    pub sixteen: Dissection,
}

pub fn fixtures() -> &'static Fixtures {
    static CELL: OnceLock<Fixtures> = OnceLock::new();
    CELL.get_or_init(|| Fixtures {
        eleven: text::parse(ELEVEN).expect("eleven.txt is a valid tiling"),
        sixteen: text::parse(SIXTEEN).expect("sixteen.txt is a valid tiling"),
    })
}

/// Raw text of the bundled fixture files, keyed by side length.
pub fn fixture_text(n: u32) -> Option<&'static str> {
    match n {
        11 => Some(ELEVEN),
        16 => Some(SIXTEEN),
        _ => None,
    }
}
