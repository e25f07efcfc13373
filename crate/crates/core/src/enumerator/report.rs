use std::collections::BTreeSet;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::geometry::Dissection;
use crate::symmetry::{self, CanonicalKey};

/// What a search keeps besides counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Collect {
    CountOnly,
    #[default]
    Canonical,
    AllLabeled,
}

/// Outcome of one exhaustive search at a single size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub n: u32,
    /// Labeled tilings, every symmetric image counted.
    pub raw_count: u64,
    /// Classes under all eight symmetries.
    pub canonical_count: u64,
    /// Classes under rotations only, so a chiral tiling and its mirror
    /// image count twice.
    pub reflection_pair_count: u64,
    /// One canonical form per class, sorted by canonical key. Empty for
    /// [`Collect::CountOnly`].
    pub representatives: Vec<Dissection>,
    /// Every labeled tiling, only for [`Collect::AllLabeled`].
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labeled: Vec<Dissection>,
    pub nodes_expanded: u64,
    #[serde(with = "seconds")]
    pub wall_time: Duration,
}

impl EnumerationReport {
    pub fn canonical_keys(&self) -> Vec<CanonicalKey> {
        self.representatives.iter().map(symmetry::canonical_key).collect()
    }

    /// Equality ignoring `wall_time`.
    pub fn same_outcome(&self, other: &EnumerationReport) -> bool {
        let mut a = self.clone();
        a.wall_time = other.wall_time;
        &a == other
    }
}

mod seconds {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}

/// How much of each symmetry class a search sees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Coverage {
    /// Every labeled member of every class.
    Complete,
    /// At least one member of every class (symmetry breaking); labeled
    /// counts are rebuilt from orbit sizes.
    Representatives,
    /// Only tilings satisfying extra constraints; labeled counts are what
    /// was seen.
    Restricted,
}

/// Accumulates found tilings; tallies from independent workers merge by
/// set union and addition.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    collect: Collect,
    /// Class identity is needed for the counts, not only for output.
    track_keys: bool,
    raw: u64,
    /// Σ |stabilizer| over labeled tilings; divided by 8 this counts
    /// classes (Burnside).
    stab_sum: u64,
    /// Same with the rotation subgroup, divided by 4.
    rot_stab_sum: u64,
    keys: BTreeSet<CanonicalKey>,
    labeled: Vec<Dissection>,
}

impl Tally {
    pub fn new(collect: Collect, coverage: Coverage) -> Self {
        Tally {
            collect,
            track_keys: coverage != Coverage::Complete || collect != Collect::CountOnly,
            ..Tally::default()
        }
    }

    pub fn record(&mut self, d: Dissection) {
        self.raw += 1;
        let (key, stab) = symmetry::canonical_key_and_stabilizer(&d);
        self.stab_sum += stab.len() as u64;
        self.rot_stab_sum += stab.iter().filter(|g| !g.is_reflection()).count() as u64;
        if self.track_keys {
            self.keys.insert(key);
        }
        if self.collect == Collect::AllLabeled {
            self.labeled.push(d);
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.raw += other.raw;
        self.stab_sum += other.stab_sum;
        self.rot_stab_sum += other.rot_stab_sum;
        if self.keys.is_empty() {
            self.keys = other.keys;
        } else {
            self.keys.extend(other.keys);
        }
        self.labeled.extend(other.labeled);
    }

    pub fn finish(
        self,
        n: u32,
        coverage: Coverage,
        nodes_expanded: u64,
        wall_time: Duration,
    ) -> EnumerationReport {
        let reps: Vec<Dissection> = if self.track_keys {
            self.keys.iter().map(CanonicalKey::to_dissection).collect()
        } else {
            Vec::new()
        };
        let (raw_count, canonical_count, reflection_pair_count) = if coverage == Coverage::Complete {
            debug_assert_eq!(self.stab_sum % 8, 0);
            debug_assert_eq!(self.rot_stab_sum % 4, 0);
            (self.raw, self.stab_sum / 8, self.rot_stab_sum / 4)
        } else {
            let raw = match coverage {
                Coverage::Representatives => reps.iter().map(|d| symmetry::orbit_size(d) as u64).sum(),
                _ => self.raw,
            };
            let mirror = reps.iter().map(|d| symmetry::mirror_class_count(d) as u64).sum();
            (raw, reps.len() as u64, mirror)
        };
        let mut labeled = match (self.collect, coverage) {
            (Collect::AllLabeled, Coverage::Representatives) => reps.iter().flat_map(symmetry::orbit).collect(),
            (Collect::AllLabeled, _) => self.labeled,
            _ => Vec::new(),
        };
        labeled.sort_by(|a, b| {
            let ka = a.elements().iter().map(|e| (e.y, e.x, e.s));
            let kb = b.elements().iter().map(|e| (e.y, e.x, e.s));
            ka.cmp(kb)
        });
        let representatives = if self.collect == Collect::CountOnly { Vec::new() } else { reps };
        EnumerationReport {
            n,
            raw_count,
            canonical_count,
            reflection_pair_count,
            representatives,
            labeled,
            nodes_expanded,
            wall_time,
        }
    }
}
