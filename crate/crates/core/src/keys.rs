//! Canonical class invariants for vertex triples.
//!
//! Two triangles are equivalent under a given relation iff their keys are
//! equal, so class counting reduces to hashing:
//!
//! * [`CongruenceKey`]: sorted squared side lengths (SSS), all isometries.
//! * [`DirectCongruenceKey`]: squared sides read counter-clockwise, reduced to
//!   the least cyclic rotation. Only orientation-preserving isometries.
//! * [`SimilarityKey`]: least element of the anharmonic orbit of the shape
//!   parameter `r = (z₃ − z₁)/(z₂ − z₁)`, optionally closed under conjugation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{cross, sq_dist, Point};
use crate::rat::{GaussRat, Rat};

/// Which equivalence relation a census partitions by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KeyKind {
    CongruenceFull,
    CongruenceDirect,
    SimilarityDirect,
    SimilarityFull,
}

impl KeyKind {
    pub const ALL: [KeyKind; 4] =
        [KeyKind::CongruenceFull, KeyKind::CongruenceDirect, KeyKind::SimilarityDirect, KeyKind::SimilarityFull];

    pub fn as_str(self) -> &'static str {
        match self {
            KeyKind::CongruenceFull => "congruence-full",
            KeyKind::CongruenceDirect => "congruence-direct",
            KeyKind::SimilarityDirect => "similarity-direct",
            KeyKind::SimilarityFull => "similarity-full",
        }
    }

    pub fn is_similarity(self) -> bool {
        matches!(self, KeyKind::SimilarityDirect | KeyKind::SimilarityFull)
    }

    /// Whether mirror images are identified.
    pub fn allows_reflections(self) -> bool {
        matches!(self, KeyKind::CongruenceFull | KeyKind::SimilarityFull)
    }
}

impl fmt::Display for KeyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KeyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        KeyKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown key kind {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CongruenceKey(pub [Rat; 3]);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DirectCongruenceKey {
    pub sides: [Rat; 3],
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SimilarityKey {
    pub shape: GaussRat,
    pub reflections: bool,
}

/// Any of the key kinds, for code that is generic over [`KeyKind`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum TriangleKey {
    Congruence(CongruenceKey),
    DirectCongruence(DirectCongruenceKey),
    Similarity(SimilarityKey),
}

fn distinct(a: &Point, b: &Point, c: &Point) -> Result<()> {
    if a == b || a == c || b == c {
        Err(Error::RepeatedVertex)
    } else {
        Ok(())
    }
}

/// Least cyclic rotation of a 3-sequence.
pub(crate) fn min_rotation<T: Ord + Clone>(s: [T; 3]) -> [T; 3] {
    let [a, b, c] = s;
    let r0 = [a.clone(), b.clone(), c.clone()];
    let r1 = [b.clone(), c.clone(), a.clone()];
    let r2 = [c, a, b];
    r0.min(r1).min(r2)
}

pub fn congruence_key(a: &Point, b: &Point, c: &Point) -> Result<CongruenceKey> {
    distinct(a, b, c)?;
    let mut sides = [sq_dist(a, b), sq_dist(a, c), sq_dist(b, c)];
    sides.sort();
    Ok(CongruenceKey(sides))
}

/// Collinear triples are rejected unless `allow_degenerate`; their key then
/// carries the sorted sides, since a collinear triple is its own mirror image.
pub fn direct_congruence_key(a: &Point, b: &Point, c: &Point, allow_degenerate: bool) -> Result<DirectCongruenceKey> {
    distinct(a, b, c)?;
    let (ab, bc, ca) = (sq_dist(a, b), sq_dist(b, c), sq_dist(c, a));
    match cross(a, b, c).signum() {
        0 if !allow_degenerate => Err(Error::Collinear),
        0 => {
            let mut sides = [ab, bc, ca];
            sides.sort();
            Ok(DirectCongruenceKey { sides, degenerate: true })
        }
        1 => Ok(DirectCongruenceKey { sides: min_rotation([ab, bc, ca]), degenerate: false }),
        // a, c, b is the counter-clockwise reading.
        _ => Ok(DirectCongruenceKey { sides: min_rotation([ca, bc, ab]), degenerate: false }),
    }
}

/// Images of `r` under the six vertex relabelings, sorted and deduplicated.
pub fn anharmonic_orbit(r: &GaussRat) -> Result<Vec<GaussRat>> {
    let one = GaussRat::one();
    if r.is_zero() || *r == one {
        return Err(Error::RepeatedVertex);
    }
    let inv = r.recip().expect("r != 0");
    let one_minus = &one - r;
    let inv_one_minus = one_minus.recip().expect("r != 1");
    let r_minus_one = -&one_minus;
    let mut orbit =
        vec![r.clone(), inv.clone(), one_minus, inv_one_minus, r * &r_minus_one.recip().expect("r != 1"), &one - &inv];
    orbit.sort();
    orbit.dedup();
    Ok(orbit)
}

/// `(z₃ − z₁)/(z₂ − z₁)` for vertices read as complex numbers.
pub fn shape_ratio(a: &Point, b: &Point, c: &Point) -> Result<GaussRat> {
    let z1 = a.to_complex();
    (c.to_complex() - &z1).checked_div(&(b.to_complex() - &z1)).ok_or(Error::RepeatedVertex)
}

pub fn similarity_key(
    a: &Point,
    b: &Point,
    c: &Point,
    reflections: bool,
    allow_degenerate: bool,
) -> Result<SimilarityKey> {
    distinct(a, b, c)?;
    let r = shape_ratio(a, b, c)?;
    if r.is_real() && !allow_degenerate {
        return Err(Error::Collinear);
    }
    let orbit = anharmonic_orbit(&r)?;
    let mut shape = orbit[0].clone();
    if reflections {
        // The conjugate orbit is the orbit of r̄; its least element is the
        // conjugate of whichever member has the least (re, -im).
        if let Some(m) = orbit.iter().map(GaussRat::conj).min() {
            shape = shape.min(m);
        }
    }
    Ok(SimilarityKey { shape, reflections })
}

/// Key of the given kind.
pub fn triangle_key(kind: KeyKind, a: &Point, b: &Point, c: &Point, allow_degenerate: bool) -> Result<TriangleKey> {
    Ok(match kind {
        KeyKind::CongruenceFull => {
            if !allow_degenerate && cross(a, b, c).is_zero() {
                distinct(a, b, c)?;
                return Err(Error::Collinear);
            }
            TriangleKey::Congruence(congruence_key(a, b, c)?)
        }
        KeyKind::CongruenceDirect => TriangleKey::DirectCongruence(direct_congruence_key(a, b, c, allow_degenerate)?),
        KeyKind::SimilarityDirect => TriangleKey::Similarity(similarity_key(a, b, c, false, allow_degenerate)?),
        KeyKind::SimilarityFull => TriangleKey::Similarity(similarity_key(a, b, c, true, allow_degenerate)?),
    })
}
