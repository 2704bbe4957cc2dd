//! Direct similarities `z ↦ az + b` of the complex plane and the lines
//! `L_pq = {(a, b) ∈ C² : a·p + b = q}` of those taking `p` to `q`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::PointSet;
use crate::rat::GaussRat;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ConformalLine {
    pub source: GaussRat,
    pub target: GaussRat,
}

/// `z ↦ a·z + b`. A group element only when `a ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Similitude {
    pub a: GaussRat,
    pub b: GaussRat,
}

impl Similitude {
    pub fn identity() -> Self {
        Similitude { a: GaussRat::one(), b: GaussRat::zero() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConformalMeet {
    Similitude(Similitude),
    /// The lines meet at `(0, b)`: the constant map to `b`, not a group element.
    DegenerateAtAZero(GaussRat),
    /// Same source, different targets.
    Parallel,
}

pub fn lift_c(p: &GaussRat, q: &GaussRat) -> ConformalLine {
    ConformalLine { source: p.clone(), target: q.clone() }
}

impl ConformalLine {
    pub fn contains(&self, a: &GaussRat, b: &GaussRat) -> bool {
        &(a * &self.source) + b == self.target
    }
}

/// Lines `L_pq` for all `p ∈ from`, `q ∈ to`, in row-major order. With
/// `reflections` the sources are conjugated first, so meets become maps
/// `z ↦ a·z̄ + b`.
pub fn lift_all_c(from: &PointSet, to: &PointSet, reflections: bool) -> Vec<ConformalLine> {
    let src = |z: GaussRat| if reflections { z.conj() } else { z };
    from.iter()
        .flat_map(|p| to.iter().map(move |q| (p, q)))
        .map(|(p, q)| lift_c(&src(p.to_complex()), &q.to_complex()))
        .collect()
}

pub fn intersect_c(l1: &ConformalLine, l2: &ConformalLine) -> Result<ConformalMeet> {
    if l1 == l2 {
        return Err(Error::IdenticalLines);
    }
    let dp = &l1.source - &l2.source;
    if dp.is_zero() {
        return Ok(ConformalMeet::Parallel);
    }
    let a = (&l1.target - &l2.target) / dp;
    let b = &l1.target - &(&a * &l1.source);
    Ok(if a.is_zero() { ConformalMeet::DegenerateAtAZero(b) } else { ConformalMeet::Similitude(Similitude { a, b }) })
}

pub fn apply_sim(s: &Similitude, z: &GaussRat) -> Result<GaussRat> {
    if s.a.is_zero() {
        return Err(Error::NotInvertible);
    }
    Ok(&(&s.a * z) + &s.b)
}
