//! Border compositions, the local filters that rule some of them out, and a
//! registry of machine checks replaying each structural claim used to pin
//! down the small squared squares.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerator::{self, EnumerationReport, SearchError, SearchOptions};
use crate::geometry::{self, Dissection, Side, SquareElement};
use crate::symmetry;

/// Element sizes along one side of the square, corner to corner.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BorderComposition {
    parts: Vec<u32>,
}

impl BorderComposition {
    pub fn new(parts: Vec<u32>) -> Self {
        BorderComposition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().map(|&p| u64::from(p)).sum()
    }

    pub fn reversed(&self) -> Self {
        BorderComposition { parts: self.parts.iter().rev().copied().collect() }
    }

    /// Parts sum to `n`, are positive, and no two neighbours are equal.
    pub fn is_valid_for(&self, n: u32) -> bool {
        !self.parts.is_empty()
            && self.sum() == u64::from(n)
            && self.parts.iter().all(|&p| p > 0)
            && self.parts.windows(2).all(|w| w[0] != w[1])
    }
}

impl fmt::Display for BorderComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse border composition {0:?}; expected sizes joined by '+' or ','")]
pub struct ParseCompositionError(pub String);

impl FromStr for BorderComposition {
    type Err = ParseCompositionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Result<Vec<u32>, _> = s.split(['+', ',']).map(|p| p.trim().parse::<u32>()).collect();
        match parts {
            Ok(parts) if !parts.is_empty() => Ok(BorderComposition { parts }),
            _ => Err(ParseCompositionError(s.to_string())),
        }
    }
}

/// Every border composition of `n` with at least `min_parts` parts whose
/// end parts are at least 4, inner parts at least 3, and neighbours
/// unequal, in ascending lexicographic order.
pub fn border_compositions(n: u32, min_parts: usize) -> Vec<BorderComposition> {
    fn extend(rest: u32, min_parts: usize, current: &mut Vec<u32>, out: &mut Vec<BorderComposition>) {
        let first = current.is_empty();
        let lo = if first { 4 } else { 3 };
        for p in lo..=rest {
            if current.last() == Some(&p) {
                continue;
            }
            current.push(p);
            if p == rest {
                if p >= 4 && current.len() >= min_parts {
                    out.push(BorderComposition::new(current.clone()));
                }
            } else {
                extend(rest - p, min_parts, current, out);
            }
            current.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        extend(n, min_parts.max(1), &mut Vec::new(), &mut out);
    }
    out
}

/// Local rules on a single border. Each is a predicate; a composition
/// survives a list of filters when every filter accepts it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositionFilter {
    /// End parts at least 4.
    CornerMin4,
    /// Inner parts at least 3.
    InnerMin3,
    /// No consecutive `x, 3, y` with `x, y ≥ 5`.
    X3y,
    /// A 4 at either end is not followed by a part of 6 or more.
    Corner4Neighbor6,
    /// No `4, 3, x` with `x ≥ 6` starting at either end.
    FourthreeX,
    /// No consecutive `x, 4, y` with `x, y ≥ 6`.
    X4y,
    /// Keep only the lexicographically smaller of `c` and its reversal.
    ReversalDedupe,
}

impl CompositionFilter {
    pub const ALL: [CompositionFilter; 7] = [
        CompositionFilter::CornerMin4,
        CompositionFilter::InnerMin3,
        CompositionFilter::X3y,
        CompositionFilter::Corner4Neighbor6,
        CompositionFilter::FourthreeX,
        CompositionFilter::X4y,
        CompositionFilter::ReversalDedupe,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CompositionFilter::CornerMin4 => "corner_min4",
            CompositionFilter::InnerMin3 => "inner_min3",
            CompositionFilter::X3y => "x3y",
            CompositionFilter::Corner4Neighbor6 => "corner4_neighbor6",
            CompositionFilter::FourthreeX => "fourthree_x",
            CompositionFilter::X4y => "x4y",
            CompositionFilter::ReversalDedupe => "reversal_dedupe",
        }
    }

    pub fn accepts(self, c: &BorderComposition) -> bool {
        let p = c.parts();
        let k = p.len();
        match self {
            CompositionFilter::CornerMin4 => k == 0 || (p[0] >= 4 && p[k - 1] >= 4),
            CompositionFilter::InnerMin3 => k < 3 || p[1..k - 1].iter().all(|&v| v >= 3),
            CompositionFilter::X3y => !p.windows(3).any(|w| w[1] == 3 && w[0] >= 5 && w[2] >= 5),
            CompositionFilter::Corner4Neighbor6 => {
                k < 2 || !((p[0] == 4 && p[1] >= 6) || (p[k - 1] == 4 && p[k - 2] >= 6))
            }
            CompositionFilter::FourthreeX => {
                k < 3 || !((p[0] == 4 && p[1] == 3 && p[2] >= 6) || (p[k - 1] == 4 && p[k - 2] == 3 && p[k - 3] >= 6))
            }
            CompositionFilter::X4y => !p.windows(3).any(|w| w[1] == 4 && w[0] >= 6 && w[2] >= 6),
            CompositionFilter::ReversalDedupe => p.iter().le(p.iter().rev()),
        }
    }
}

impl fmt::Display for CompositionFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown composition filter {0:?}")]
pub struct UnknownFilter(pub String);

impl FromStr for CompositionFilter {
    type Err = UnknownFilter;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CompositionFilter::ALL
            .into_iter()
            .find(|f| f.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownFilter(s.to_string()))
    }
}

/// Compositions accepted by every filter, in input order.
pub fn filter_compositions(list: &[BorderComposition], filters: &[CompositionFilter]) -> Vec<BorderComposition> {
    list.iter().filter(|c| filters.iter().all(|f| f.accepts(c))).cloned().collect()
}

/// The closed set of checkable claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
    L7,
    L8,
    L9,
    L10,
    L11,
    L12,
    L13,
    #[serde(rename = "L_no43535")]
    LNo43535,
    #[serde(rename = "L16_three")]
    L16Three,
    #[serde(rename = "L16_four")]
    L16Four,
}

/// Registry revision; bump when a check changes meaning.
pub const REGISTRY_VERSION: u32 = 1;

/// The 5-3-4 corner pattern, spelled out in the bottom-left corner.
fn corner_five_pattern() -> Vec<SquareElement> {
    vec![
        SquareElement::new(0, 0, 5),
        SquareElement::new(5, 0, 3),
        SquareElement::new(8, 0, 4),
        SquareElement::new(0, 5, 3),
        SquareElement::new(0, 8, 4),
    ]
}

impl LemmaId {
    pub const ALL: [LemmaId; 16] = [
        LemmaId::L1,
        LemmaId::L2,
        LemmaId::L3,
        LemmaId::L4,
        LemmaId::L5,
        LemmaId::L6,
        LemmaId::L7,
        LemmaId::L8,
        LemmaId::L9,
        LemmaId::L10,
        LemmaId::L11,
        LemmaId::L12,
        LemmaId::L13,
        LemmaId::LNo43535,
        LemmaId::L16Three,
        LemmaId::L16Four,
    ];

    pub fn label(self) -> &'static str {
        match self {
            LemmaId::L1 => "L1",
            LemmaId::L2 => "L2",
            LemmaId::L3 => "L3",
            LemmaId::L4 => "L4",
            LemmaId::L5 => "L5",
            LemmaId::L6 => "L6",
            LemmaId::L7 => "L7",
            LemmaId::L8 => "L8",
            LemmaId::L9 => "L9",
            LemmaId::L10 => "L10",
            LemmaId::L11 => "L11",
            LemmaId::L12 => "L12",
            LemmaId::L13 => "L13",
            LemmaId::LNo43535 => "L_no43535",
            LemmaId::L16Three => "L16_three",
            LemmaId::L16Four => "L16_four",
        }
    }

    /// What the check establishes.
    pub fn claim(self) -> &'static str {
        match self {
            LemmaId::L1 => "every element on the border has side at least 3",
            LemmaId::L2 => "every corner element has side at least 4",
            LemmaId::L3 => "at least six elements touch the border",
            LemmaId::L4 => "no nontrivial squared square is smaller than 11",
            LemmaId::L5 => "size 11 has exactly one nontrivial squared square up to symmetry",
            LemmaId::L6 => "size 12 has no nontrivial squared square",
            LemmaId::L7 => "no border reads x+3+y with x and y at least 5",
            LemmaId::L8 => "size 13 has no nontrivial squared square",
            LemmaId::L9 => "a 4 in a corner has no border neighbour of 6 or more",
            LemmaId::L10 => "size 14 has no nontrivial squared square",
            LemmaId::L11 => "no border starts 4+3+x with x at least 6",
            LemmaId::L12 => "size 15 has no nontrivial squared square",
            LemmaId::L13 => "no border reads x+4+y with x and y at least 6",
            LemmaId::LNo43535 => "a corner 5 flanked by 3s that are followed by 4s on both borders cannot be completed",
            LemmaId::L16Three => "at size 16 no border has exactly three elements",
            LemmaId::L16Four => "at size 16 every border has exactly four elements",
        }
    }

    /// Smallest `max_n` for which the check means anything.
    pub fn min_max_n(self) -> u32 {
        match self {
            LemmaId::L1 | LemmaId::L2 | LemmaId::L3 | LemmaId::L4 => 1,
            LemmaId::L5 => 11,
            LemmaId::L6 => 12,
            LemmaId::L7 => 13,
            LemmaId::L8 => 13,
            LemmaId::L9 => 10,
            LemmaId::L10 => 14,
            LemmaId::L11 => 13,
            LemmaId::L12 => 15,
            LemmaId::L13 => 16,
            LemmaId::LNo43535 => 12,
            LemmaId::L16Three | LemmaId::L16Four => 16,
        }
    }

    /// The border filter a composition check applies, if any.
    fn filter(self) -> Option<CompositionFilter> {
        match self {
            LemmaId::L7 => Some(CompositionFilter::X3y),
            LemmaId::L9 => Some(CompositionFilter::Corner4Neighbor6),
            LemmaId::L11 => Some(CompositionFilter::FourthreeX),
            LemmaId::L13 => Some(CompositionFilter::X4y),
            _ => None,
        }
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("unknown lemma id {0:?}")]
    UnknownId(String),
    #[error("{id} needs max_n of at least {needed}")]
    MaxNTooSmall { id: LemmaId, needed: u32 },
    #[error(transparent)]
    Search(#[from] SearchError),
}

impl FromStr for LemmaId {
    type Err = LemmaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        LemmaId::ALL
            .into_iter()
            .find(|id| id.label().eq_ignore_ascii_case(t) || id.label().replace('_', "").eq_ignore_ascii_case(t))
            .ok_or_else(|| LemmaError::UnknownId(s.to_string()))
    }
}

/// One sub-check of a lemma verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub n: u32,
    pub description: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub id: LemmaId,
    pub claim: String,
    pub max_n: u32,
    pub passed: bool,
    pub checks: Vec<LemmaCheck>,
    /// Tilings contradicting the claim.
    pub witnesses: Vec<Dissection>,
    pub nodes_expanded: u64,
}

/// Runs lemma checks and caches the searches they share.
#[derive(Debug)]
pub struct LemmaLab {
    workers: usize,
    full: BTreeMap<u32, EnumerationReport>,
}

impl Default for LemmaLab {
    fn default() -> Self {
        LemmaLab::new(1)
    }
}

impl LemmaLab {
    pub fn new(workers: usize) -> Self {
        LemmaLab { workers: workers.max(1), full: BTreeMap::new() }
    }

    /// Searches prune on nontriviality only, so that the border size rules
    /// are checked rather than assumed.
    fn opts(&self) -> SearchOptions {
        SearchOptions { prune_border_min: false, ..SearchOptions::default() }.with_workers(self.workers)
    }

    /// Every class at size `n`.
    pub fn classes(&mut self, n: u32) -> Result<&EnumerationReport, SearchError> {
        if !self.full.contains_key(&n) {
            let report = enumerator::enumerate(n, &self.opts())?;
            self.full.insert(n, report);
        }
        Ok(&self.full[&n])
    }

    pub fn verify(&mut self, id: LemmaId, max_n: u32) -> Result<LemmaReport, LemmaError> {
        if max_n < id.min_max_n() {
            return Err(LemmaError::MaxNTooSmall { id, needed: id.min_max_n() });
        }
        let mut out = LemmaReport {
            id,
            claim: id.claim().to_string(),
            max_n,
            passed: true,
            checks: Vec::new(),
            witnesses: Vec::new(),
            nodes_expanded: 0,
        };
        match id {
            LemmaId::L1 | LemmaId::L2 | LemmaId::L3 => {
                let holds = |d: &Dissection| match id {
                    LemmaId::L1 => geometry::border_elements(d).iter().all(|e| e.s >= 3),
                    LemmaId::L2 => geometry::corner_elements(d).iter().all(|e| e.s >= 4),
                    _ => geometry::classify(d).border_touch_count >= 6,
                };
                for n in 1..=max_n {
                    let r = self.classes(n)?;
                    let bad: Vec<Dissection> = r.representatives.iter().filter(|d| !holds(d)).cloned().collect();
                    out.push_check(n, format!("{} classes checked", r.representatives.len()), bad.is_empty());
                    out.nodes_expanded += r.nodes_expanded;
                    out.witnesses.extend(bad);
                }
            }
            LemmaId::L4 => {
                for n in 1..=max_n.min(10) {
                    self.expect_classes(&mut out, n, 0)?;
                }
            }
            LemmaId::L5 => {
                let r = self.classes(11)?.clone();
                let fixture = symmetry::canonical_key(&crate::io::fixtures().eleven);
                let keys = r.canonical_keys();
                out.push_check(11, format!("{} classes found", keys.len()), keys == vec![fixture]);
                out.nodes_expanded += r.nodes_expanded;
            }
            LemmaId::L6 => self.expect_classes(&mut out, 12, 0)?,
            LemmaId::L8 => self.expect_classes(&mut out, 13, 0)?,
            LemmaId::L10 => self.expect_classes(&mut out, 14, 0)?,
            LemmaId::L12 => self.expect_classes(&mut out, 15, 0)?,
            LemmaId::L7 | LemmaId::L9 | LemmaId::L11 | LemmaId::L13 => {
                let filter = id.filter().expect("composition lemma");
                for n in 1..=max_n {
                    let killed = border_compositions(n, 1)
                        .into_iter()
                        .filter(|c| !filter.accepts(c) && CompositionFilter::ReversalDedupe.accepts(c));
                    for c in killed {
                        self.expect_empty_border(&mut out, n, &c)?;
                    }
                }
            }
            LemmaId::LNo43535 => {
                for n in 12..=max_n {
                    let opts = SearchOptions { pinned: corner_five_pattern(), ..self.opts() };
                    let r = enumerator::enumerate(n, &opts)?;
                    out.push_check(n, "corner pattern 5,3,4 on both borders".to_string(), r.raw_count == 0);
                    out.nodes_expanded += r.nodes_expanded;
                    out.witnesses.extend(r.representatives);
                }
            }
            LemmaId::L16Three => {
                for c in border_compositions(16, 3).into_iter().filter(|c| c.len() == 3) {
                    if CompositionFilter::ReversalDedupe.accepts(&c) {
                        self.expect_empty_border(&mut out, 16, &c)?;
                    }
                }
                self.check_border_counts(&mut out, |k| k != 3)?;
            }
            LemmaId::L16Four => self.check_border_counts(&mut out, |k| k == 4)?,
        }
        out.passed = out.checks.iter().all(|c| c.passed);
        Ok(out)
    }

    fn expect_classes(&mut self, out: &mut LemmaReport, n: u32, want: u64) -> Result<(), SearchError> {
        let r = self.classes(n)?;
        out.push_check(n, format!("{} classes found, {want} expected", r.canonical_count), r.canonical_count == want);
        out.nodes_expanded += r.nodes_expanded;
        if r.canonical_count != want {
            out.witnesses.extend(r.representatives.iter().cloned());
        }
        Ok(())
    }

    fn expect_empty_border(&mut self, out: &mut LemmaReport, n: u32, c: &BorderComposition) -> Result<(), SearchError> {
        let r = enumerator::enumerate_with_border(n, c, &self.opts())?;
        out.push_check(n, format!("top border {c} cannot be completed"), r.raw_count == 0);
        out.nodes_expanded += r.nodes_expanded;
        out.witnesses.extend(r.representatives);
        Ok(())
    }

    fn check_border_counts(&mut self, out: &mut LemmaReport, ok: impl Fn(usize) -> bool) -> Result<(), SearchError> {
        let r = self.classes(16)?.clone();
        out.nodes_expanded += r.nodes_expanded;
        for d in &r.representatives {
            let counts: Vec<usize> = Side::ALL.iter().map(|&s| geometry::border_sizes(d, s).len()).collect();
            let good = counts.iter().all(|&k| ok(k));
            out.push_check(16, format!("border element counts {counts:?}"), good);
            if !good {
                out.witnesses.push(d.clone());
            }
        }
        if r.representatives.is_empty() {
            out.push_check(16, "no classes found at size 16".to_string(), false);
        }
        Ok(())
    }
}

impl LemmaReport {
    fn push_check(&mut self, n: u32, description: String, passed: bool) {
        self.checks.push(LemmaCheck { n, description, passed });
    }
}

/// Verifies one lemma with a fresh lab.
pub fn verify_lemma(id: LemmaId, max_n: u32) -> Result<LemmaReport, LemmaError> {
    LemmaLab::default().verify(id, max_n)
}

/// Border compositions actually present in a tiling, one per side.
pub fn borders_of(d: &Dissection) -> [BorderComposition; 4] {
    Side::ALL.map(|s| BorderComposition::new(geometry::border_sizes(d, s)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comps(list: &[BorderComposition]) -> Vec<String> {
        list.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn seventeen_border_list() {
        let all = border_compositions(17, 3);
        assert_eq!(all.len(), 30);
        assert_eq!(all[0].to_string(), "4+3+4+6");
        assert_eq!(all[29].to_string(), "10+3+4");
        let deduped = filter_compositions(&all, &[CompositionFilter::ReversalDedupe]);
        assert_eq!(deduped.len(), 17);
        let survivors = filter_compositions(&all, &CompositionFilter::ALL);
        assert_eq!(comps(&survivors), ["4+3+4+6", "4+5+8", "5+3+4+5", "5+4+8", "5+7+5", "6+5+6"]);
    }

    #[test]
    fn small_border_lists() {
        assert_eq!(comps(&border_compositions(11, 3)), ["4+3+4"]);
        let four: Vec<_> = border_compositions(16, 3).into_iter().filter(|c| c.len() == 4).collect();
        let four = filter_compositions(&four, &[CompositionFilter::ReversalDedupe]);
        assert_eq!(comps(&four), ["4+3+4+5", "4+3+5+4"]);
        let three: Vec<_> = border_compositions(15, 3).into_iter().filter(|c| c.len() == 3).collect();
        assert_eq!(comps(&filter_compositions(&three, &CompositionFilter::ALL)), ["4+5+6", "5+4+6"]);
    }

    #[test]
    fn filter_predicates() {
        let c = |s: &str| s.parse::<BorderComposition>().unwrap();
        assert!(!CompositionFilter::X3y.accepts(&c("5+3+5")));
        assert!(CompositionFilter::X3y.accepts(&c("4+3+6")));
        assert!(!CompositionFilter::Corner4Neighbor6.accepts(&c("5+6+4")));
        assert!(CompositionFilter::Corner4Neighbor6.accepts(&c("5+4+6")));
        assert!(!CompositionFilter::FourthreeX.accepts(&c("7+3+4")));
        assert!(CompositionFilter::FourthreeX.accepts(&c("5+4+3+4")));
        assert!(!CompositionFilter::X4y.accepts(&c("6+4+6")));
        assert!(CompositionFilter::ReversalDedupe.accepts(&c("4+3+4")));
        assert!(!CompositionFilter::ReversalDedupe.accepts(&c("5+3+4")));
    }

    #[test]
    fn parse_and_labels() {
        assert_eq!("4,3,4".parse::<BorderComposition>().unwrap().to_string(), "4+3+4");
        assert!("4+x".parse::<BorderComposition>().is_err());
        for id in LemmaId::ALL {
            assert_eq!(id.label().parse::<LemmaId>().unwrap(), id);
        }
        assert_eq!("l16four".parse::<LemmaId>().unwrap(), LemmaId::L16Four);
        assert!(matches!("L14".parse::<LemmaId>(), Err(LemmaError::UnknownId(_))));
        for f in CompositionFilter::ALL {
            assert_eq!(f.label().parse::<CompositionFilter>().unwrap(), f);
        }
    }

    #[test]
    fn quick_lemmas_pass() {
        let mut lab = LemmaLab::default();
        for id in [LemmaId::L1, LemmaId::L2, LemmaId::L3, LemmaId::L4, LemmaId::L5] {
            let r = lab.verify(id, 11).unwrap();
            assert!(r.passed, "{id}: {:?}", r.checks);
        }
        let r = lab.verify(LemmaId::L7, 13).unwrap();
        assert!(r.passed);
        assert_eq!(r.checks.len(), 1, "only 5+3+5 is killed at 13");
        assert_eq!(
            lab.verify(LemmaId::L16Four, 15),
            Err(LemmaError::MaxNTooSmall { id: LemmaId::L16Four, needed: 16 })
        );
    }
}
