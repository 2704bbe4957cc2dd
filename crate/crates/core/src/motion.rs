//! Orientation-preserving rigid motions of the plane as points of R³.
//!
//! A rotation by `θ ∈ (0, 2π)` about `c` is encoded as `(c.x, c.y, t)` with
//! `t = cot(θ/2)`, so that
//!
//! ```text
//! cos θ = (t² − 1)/(t² + 1),    sin θ = 2t/(t² + 1)
//! ```
//!
//! are rational whenever `t` is. The rotations taking `p` to `q` have their
//! centers on the perpendicular bisector of `pq`, at `mid + t·(q − p)^⊥/2`,
//! which makes them the line
//!
//! ```text
//! L_pq = (mid(p, q), 0) + t · ((q − p)^⊥/2, 1),    (u, v)^⊥ = (−v, u).
//! ```
//!
//! The translation `p ↦ q` is the limit `t → ∞`; it is shared by every line
//! with the same displacement and is tracked as a direction class. For `p = q`
//! the line is the vertical through `(p, 0)`, whose point at infinity is the
//! identity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::point::{Point, PointSet};
use crate::rat::Rat;

pub type R3 = [Rat; 3];

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MotionLine {
    pub source: Point,
    pub target: Point,
    pub anchor: R3,
    pub direction: R3,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RigidMotion {
    Identity,
    /// Nonzero translation.
    Translation {
        v: (Rat, Rat),
    },
    /// Rotation about `center` with `t = cot(θ/2)`.
    Rotation {
        center: Point,
        t: Rat,
    },
}

/// A motion together with `n`, the number of pairs `(x, y) ∈ P × P` with `motion(x) = y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MotionRecord {
    pub motion: RigidMotion,
    pub n: u64,
}

/// Outcome of meeting two distinct motion lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MotionMeet {
    /// A rotation taking both sources to both targets.
    Finite(R3),
    /// Parallel lines with a common nonzero displacement.
    SharedTranslation(Rat, Rat),
    /// Two vertical lines `L_pp`, `L_p'p'`: they share only the identity.
    SharedIdentity,
    Disjoint,
}

pub fn lift(p: &Point, q: &Point) -> MotionLine {
    let half = Rat::new(1, 2);
    let dx = &q.x - &p.x;
    let dy = &q.y - &p.y;
    let anchor = [(&p.x + &q.x) * &half, (&p.y + &q.y) * &half, Rat::zero()];
    let direction = [-(&dy * &half), &dx * &half, Rat::one()];
    MotionLine { source: p.clone(), target: q.clone(), anchor, direction }
}

impl MotionLine {
    pub fn is_vertical(&self) -> bool {
        self.source == self.target
    }

    /// `q − p`.
    pub fn displacement(&self) -> (Rat, Rat) {
        (&self.target.x - &self.source.x, &self.target.y - &self.source.y)
    }

    /// The point with third coordinate `t`.
    pub fn point_at(&self, t: &Rat) -> R3 {
        let [ax, ay, _] = &self.anchor;
        let [dx, dy, _] = &self.direction;
        [ax + &(dx * t), ay + &(dy * t), t.clone()]
    }

    pub fn contains(&self, pt: &R3) -> bool {
        self.point_at(&pt[2]) == *pt
    }
}

/// Lines `L_pq` for all `p ∈ from`, `q ∈ to`, in row-major order. With
/// `include_vertical = false` the pairs with `p = q` are skipped.
pub fn lift_all(from: &PointSet, to: &PointSet, include_vertical: bool) -> Vec<MotionLine> {
    from.iter()
        .flat_map(|p| to.iter().map(move |q| (p, q)))
        .filter(|(p, q)| include_vertical || p != q)
        .map(|(p, q)| lift(p, q))
        .collect()
}

/// The motion encoded by a finite point of R³.
pub fn decode(pt: &R3) -> RigidMotion {
    RigidMotion::Rotation { center: Point::new(pt[0].clone(), pt[1].clone()), t: pt[2].clone() }
}

/// `(cos θ, sin θ)` for `t = cot(θ/2)`.
pub fn rotation_cos_sin(t: &Rat) -> (Rat, Rat) {
    let t2 = t.square();
    let den = &t2 + &Rat::one();
    ((&t2 - &Rat::one()) / &den, Rat::from_int(2) * t / den)
}

pub fn apply(m: &RigidMotion, p: &Point) -> Point {
    match m {
        RigidMotion::Identity => p.clone(),
        RigidMotion::Translation { v } => p.translate(&v.0, &v.1),
        RigidMotion::Rotation { center, t } => {
            let (cos, sin) = rotation_cos_sin(t);
            let ux = &p.x - &center.x;
            let uy = &p.y - &center.y;
            Point::new(&center.x + &(&cos * &ux - &sin * &uy), &center.y + &(&sin * &ux + &cos * &uy))
        }
    }
}

pub fn intersect_motion_lines(l1: &MotionLine, l2: &MotionLine) -> Result<MotionMeet> {
    if l1.source == l2.source && l1.target == l2.target {
        return Err(Error::IdenticalLines);
    }
    let (d1x, d1y) = l1.displacement();
    let (d2x, d2y) = l2.displacement();
    let wx = &d1x - &d2x;
    let wy = &d1y - &d2y;
    if wx.is_zero() && wy.is_zero() {
        return Ok(if d1x.is_zero() && d1y.is_zero() {
            MotionMeet::SharedIdentity
        } else {
            MotionMeet::SharedTranslation(d1x, d1y)
        });
    }
    // Equal heights force equal t; the centers then agree iff t·w^⊥ = s with
    // w = d1 − d2 and s = (p2 + q2) − (p1 + q1).
    let sx = &l2.source.x + &l2.target.x - &l1.source.x - &l1.target.x;
    let sy = &l2.source.y + &l2.target.y - &l1.source.y - &l1.target.y;
    if !(&wx * &sx + &wy * &sy).is_zero() {
        return Ok(MotionMeet::Disjoint);
    }
    let t = match sy.checked_div(&wx) {
        Some(t) => t,
        None => -(sx / wy),
    };
    Ok(MotionMeet::Finite(l1.point_at(&t)))
}
