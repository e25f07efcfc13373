//! Bouwkamp codes, read from the top down.
//!
//! Starting at the uppermost-then-leftmost uncovered cell, each step emits
//! the size of the square whose top-left corner sits there. Squares whose
//! top edges lie on the same level form one parenthesized group, so the
//! first group is the top border read left to right.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Dissection, GeometryError};
use crate::symmetry::{self, corner_fill, SymmetryOp};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BouwkampCode {
    pub rows: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BouwkampError {
    #[error("malformed Bouwkamp code at byte {pos}: {message}")]
    Parse { pos: usize, message: &'static str },
    #[error("code does not tile a {n}x{n} square")]
    NoTiling { n: u32 },
    #[error("code groups do not match the squares' levels")]
    Grouping,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl BouwkampCode {
    pub fn sizes(&self) -> impl Iterator<Item = u32> + '_ {
        self.rows.iter().flatten().copied()
    }
}

impl fmt::Display for BouwkampCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            f.write_str("(")?;
            for (i, s) in row.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{s}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl FromStr for BouwkampCode {
    type Err = BouwkampError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |pos, message| BouwkampError::Parse { pos, message };
        let mut rows = Vec::new();
        let mut row: Option<Vec<u32>> = None;
        let mut number: Option<(usize, u32)> = None;
        let mut spaced = false;
        for (pos, c) in s.char_indices() {
            if let Some(d) = c.to_digit(10) {
                if spaced && number.is_some() {
                    return Err(err(pos, "missing `,` between numbers"));
                }
                let (start, v) = number.unwrap_or((pos, 0));
                let v = v.checked_mul(10).and_then(|v| v.checked_add(d)).ok_or(err(start, "number too large"))?;
                number = Some((start, v));
                continue;
            }
            let flush = |row: &mut Option<Vec<u32>>, number: &mut Option<(usize, u32)>| -> Result<(), BouwkampError> {
                let (start, v) = number.take().ok_or(err(pos, "expected a number"))?;
                row.as_mut().ok_or(err(start, "number outside a group"))?.push(v);
                Ok(())
            };
            match c {
                '(' if row.is_none() && number.is_none() => row = Some(Vec::new()),
                ',' => flush(&mut row, &mut number)?,
                ')' => {
                    flush(&mut row, &mut number)?;
                    rows.push(row.take().ok_or(err(pos, "unmatched `)`"))?);
                }
                c if c.is_whitespace() => {
                    spaced = true;
                    continue;
                }
                _ => return Err(err(pos, "unexpected character")),
            }
            spaced = false;
        }
        if row.is_some() || number.is_some() {
            return Err(err(s.len(), "unterminated group"));
        }
        if rows.is_empty() {
            return Err(err(0, "empty code"));
        }
        Ok(BouwkampCode { rows })
    }
}

pub fn to_bouwkamp(d: &Dissection) -> BouwkampCode {
    // Upside down, top-down reading is scanline order and the groups are
    // runs of equal y.
    let flipped = symmetry::apply(d, SymmetryOp::Mv);
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut level = None;
    for e in flipped.elements() {
        if level != Some(e.y) {
            rows.push(Vec::new());
            level = Some(e.y);
        }
        rows.last_mut().expect("row pushed").push(e.s);
    }
    BouwkampCode { rows }
}

pub fn from_bouwkamp(code: &BouwkampCode, n: u32) -> Result<Dissection, BouwkampError> {
    let sizes: Vec<u32> = code.sizes().collect();
    if n == 0 || sizes.contains(&0) {
        return Err(BouwkampError::NoTiling { n });
    }
    let placed = corner_fill(n, &sizes).ok_or(BouwkampError::NoTiling { n })?;
    let flipped = Dissection::new(n, placed)?;
    if to_bouwkamp_groups(&flipped) != code.rows.iter().map(Vec::len).collect::<Vec<_>>() {
        return Err(BouwkampError::Grouping);
    }
    Ok(symmetry::apply(&flipped, SymmetryOp::Mv))
}

fn to_bouwkamp_groups(flipped: &Dissection) -> Vec<usize> {
    let mut lens: Vec<usize> = Vec::new();
    let mut level = None;
    for e in flipped.elements() {
        if level != Some(e.y) {
            lens.push(0);
            level = Some(e.y);
        }
        *lens.last_mut().expect("group pushed") += 1;
    }
    lens
}
