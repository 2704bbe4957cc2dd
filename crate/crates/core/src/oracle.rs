//! Brute-force ground truth.
//!
//! Motions and similitudes are recovered from pairs of segments, since a
//! direct similarity is fixed by the images of two distinct points, and their
//! multiplicities are counted by applying them to every point. Triangle pairs
//! are compared by trying all vertex correspondences. Nothing here touches
//! canonical keys or lifted lines.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::census::{census, pair_counts, CensusOptions};
use crate::conformal::Similitude;
use crate::error::{Error, Result};
use crate::keys::{triangle_key, KeyKind, TriangleKey};
use crate::motion::{MotionRecord, RigidMotion};
use crate::point::{cross, sq_dist, Point, PointSet};
use crate::rat::{GaussRat, Rat};

/// Largest `N` accepted by [`census_equivalence_check`].
pub const DEFAULT_EQUIVALENCE_CAP: usize = 10;

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn choose3(n: u64) -> u64 {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

fn ordered_segments(ps: &PointSet) -> Vec<(GaussRat, GaussRat)> {
    let z: Vec<GaussRat> = ps.iter().map(Point::to_complex).collect();
    let mut out = Vec::with_capacity(z.len() * z.len());
    for (i, a) in z.iter().enumerate() {
        for (j, b) in z.iter().enumerate() {
            if i != j {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// `z ↦ a·z + b` with `a ≠ 0`, counted on `from → to`.
fn multiplicity(a: &GaussRat, b: &GaussRat, from: &[GaussRat], to: &HashSet<GaussRat>) -> u64 {
    from.iter().filter(|z| to.contains(&(&(a * *z) + b))).count() as u64
}

/// All maps `z ↦ a·z + b` with `a ≠ 0` sending some segment of `from` onto a
/// segment of `to`; with `unit` only those with `|a| = 1`.
fn segment_maps(from: &PointSet, to: &PointSet, unit: bool) -> BTreeSet<(GaussRat, GaussRat)> {
    let src = ordered_segments(from);
    let dst = ordered_segments(to);
    src.par_iter()
        .map(|(p, p2)| {
            let dp = p2 - p;
            let mut found = BTreeSet::new();
            for (q, q2) in &dst {
                let a = &(q2 - q) / &dp;
                if a.is_zero() || (unit && !a.norm_sq().is_one()) {
                    continue;
                }
                let b = q - &(&a * p);
                found.insert((a, b));
            }
            found
        })
        .reduce(BTreeSet::new, |mut x, y| {
            x.extend(y);
            x
        })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MotionTable {
    pub identity: Option<MotionRecord>,
    pub translations: Vec<MotionRecord>,
    pub rotations: Vec<MotionRecord>,
}

impl MotionTable {
    pub fn records(&self) -> impl Iterator<Item = &MotionRecord> {
        self.identity.iter().chain(&self.translations).chain(&self.rotations)
    }

    pub fn len(&self) -> usize {
        self.records().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, m: &RigidMotion) -> Option<u64> {
        self.records().find(|r| &r.motion == m).map(|r| r.n)
    }

    /// `Σ C(n(φ), 3)` over translations and rotations.
    pub fn non_identity_triples(&self) -> u64 {
        self.translations.iter().chain(&self.rotations).map(|r| choose3(r.n)).sum()
    }

    pub fn identity_triples(&self) -> u64 {
        self.identity.as_ref().map_or(0, |r| choose3(r.n))
    }
}

/// The direct isometry `z ↦ u·z + b`, `|u| = 1`, in motion form.
fn as_rigid_motion(u: &GaussRat, b: &GaussRat) -> RigidMotion {
    if u.is_one() {
        if b.is_zero() {
            RigidMotion::Identity
        } else {
            RigidMotion::Translation { v: (b.re.clone(), b.im.clone()) }
        }
    } else {
        let center = b / &(&GaussRat::one() - u);
        // cot(θ/2) = (1 + cos θ)/sin θ; the half-turn has t = 0.
        let t = if u.im.is_zero() { Rat::zero() } else { (Rat::one() + &u.re) / &u.im };
        RigidMotion::Rotation { center: Point::from_complex(&center), t }
    }
}

/// Every direct motion taking two points of `from` into `to`, with
/// `n(φ) = |{x ∈ from : φ(x) ∈ to}|`. Motions with `n ≤ 1` are not determined
/// by a segment and do not appear.
pub fn enumerate_motions_between(from: &PointSet, to: &PointSet) -> MotionTable {
    let zs: Vec<GaussRat> = from.iter().map(Point::to_complex).collect();
    let targets: HashSet<GaussRat> = to.iter().map(Point::to_complex).collect();
    let mut table = MotionTable::default();
    let mut records: Vec<MotionRecord> = segment_maps(from, to, true)
        .into_iter()
        .map(|(u, b)| MotionRecord { n: multiplicity(&u, &b, &zs, &targets), motion: as_rigid_motion(&u, &b) })
        .collect();
    records.sort();
    for r in records {
        match r.motion {
            RigidMotion::Identity => table.identity = Some(r),
            RigidMotion::Translation { .. } => table.translations.push(r),
            RigidMotion::Rotation { .. } => table.rotations.push(r),
        }
    }
    table
}

pub fn enumerate_motions(points: &PointSet) -> Result<MotionTable> {
    points.require(2)?;
    Ok(enumerate_motions_between(points, points))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SimilitudeRecord {
    pub similitude: Similitude,
    pub n: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SimilitudeTable {
    pub records: Vec<SimilitudeRecord>,
}

impl SimilitudeTable {
    pub fn get(&self, s: &Similitude) -> Option<u64> {
        self.records.iter().find(|r| &r.similitude == s).map(|r| r.n)
    }

    /// `Σ C(n(ψ), 3)`.
    pub fn triples(&self) -> u64 {
        self.records.iter().map(|r| choose3(r.n)).sum()
    }
}

/// Every `z ↦ a·z + b` with `a ≠ 0` taking two points of `from` into `to`.
/// With `reflections`, the maps are `z ↦ a·z̄ + b` instead.
pub fn enumerate_similitudes_between(from: &PointSet, to: &PointSet, reflections: bool) -> SimilitudeTable {
    let from = if reflections {
        PointSet::new(from.iter().map(|p| Point::new(p.x.clone(), -&p.y)).collect()).expect("conjugation is injective")
    } else {
        from.clone()
    };
    let zs: Vec<GaussRat> = from.iter().map(Point::to_complex).collect();
    let targets: HashSet<GaussRat> = to.iter().map(Point::to_complex).collect();
    let records = segment_maps(&from, to, false)
        .into_iter()
        .map(|(a, b)| SimilitudeRecord { n: multiplicity(&a, &b, &zs, &targets), similitude: Similitude { a, b } })
        .collect();
    SimilitudeTable { records }
}

pub fn enumerate_similitudes(points: &PointSet) -> Result<SimilitudeTable> {
    points.require(2)?;
    Ok(enumerate_similitudes_between(points, points, false))
}

pub type Triangle = [Point; 3];

/// Non-degenerate triangles in index order.
fn proper_triangles(points: &PointSet) -> Vec<Triangle> {
    let p = points.points();
    let mut out = Vec::new();
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            for k in (j + 1)..p.len() {
                if !cross(&p[i], &p[j], &p[k]).is_zero() {
                    out.push([p[i].clone(), p[j].clone(), p[k].clone()]);
                }
            }
        }
    }
    out
}

/// Some vertex correspondence preserves all three squared sides, and, without
/// reflections, the orientation.
pub fn congruent_pair_test(t1: &Triangle, t2: &Triangle, allow_reflections: bool) -> bool {
    let o1 = cross(&t1[0], &t1[1], &t1[2]).signum();
    PERMUTATIONS.iter().any(|s| {
        let u = [&t2[s[0]], &t2[s[1]], &t2[s[2]]];
        let sides = [(0, 1), (1, 2), (2, 0)].iter().all(|&(i, j)| sq_dist(&t1[i], &t1[j]) == sq_dist(u[i], u[j]));
        sides && (allow_reflections || cross(u[0], u[1], u[2]).signum() == o1)
    })
}

/// Some vertex correspondence is realized by `z ↦ a·z + b` (or `a·z̄ + b`).
pub fn similar_pair_test(t1: &Triangle, t2: &Triangle, allow_reflections: bool) -> bool {
    let z1: Vec<GaussRat> = t1.iter().map(Point::to_complex).collect();
    let conj: Vec<GaussRat> = z1.iter().map(GaussRat::conj).collect();
    let sources: &[&Vec<GaussRat>] = if allow_reflections { &[&z1, &conj] } else { &[&z1] };
    sources.iter().any(|p| {
        PERMUTATIONS.iter().any(|s| {
            let q: Vec<GaussRat> = s.iter().map(|&i| t2[i].to_complex()).collect();
            // (q1 − q0)/(p1 − p0) = (q2 − q0)/(p2 − p0), cross-multiplied.
            &(&q[1] - &q[0]) * &(&p[2] - &p[0]) == &(&q[2] - &q[0]) * &(&p[1] - &p[0])
        })
    })
}

/// Oracle equivalence for a key kind.
pub fn equivalent(kind: KeyKind, t1: &Triangle, t2: &Triangle) -> bool {
    match kind {
        KeyKind::CongruenceFull => congruent_pair_test(t1, t2, true),
        KeyKind::CongruenceDirect => congruent_pair_test(t1, t2, false),
        KeyKind::SimilarityDirect => similar_pair_test(t1, t2, false),
        KeyKind::SimilarityFull => similar_pair_test(t1, t2, true),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub first: Triangle,
    pub second: Triangle,
    pub keys_equal: bool,
    pub oracle_equivalent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub kind: KeyKind,
    pub n_points: usize,
    pub n_triangles: usize,
    pub pairs_checked: u64,
    pub counterexample: Option<Counterexample>,
}

impl EquivalenceReport {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Compares the partition of non-degenerate triangles induced by canonical
/// keys with the one induced by pairwise oracle tests.
pub fn census_equivalence_check(points: &PointSet, kind: KeyKind) -> Result<EquivalenceReport> {
    census_equivalence_check_with(points, kind, DEFAULT_EQUIVALENCE_CAP, |a, b, c| triangle_key(kind, a, b, c, false))
}

/// [`census_equivalence_check`] against an arbitrary key function.
pub fn census_equivalence_check_with<F>(
    points: &PointSet,
    kind: KeyKind,
    cap: usize,
    key: F,
) -> Result<EquivalenceReport>
where
    F: Fn(&Point, &Point, &Point) -> Result<TriangleKey>,
{
    if points.len() > cap {
        return Err(Error::CapExceeded { what: "oracle", cap, n: points.len() });
    }
    let p = points.points();
    let triangles = proper_triangles(points);
    let keys = triangles.iter().map(|t| key(&t[0], &t[1], &t[2])).collect::<Result<Vec<_>>>()?;

    let mut pairs_checked = 0;
    for a in 0..triangles.len() {
        for b in (a + 1)..triangles.len() {
            pairs_checked += 1;
            let keys_equal = keys[a] == keys[b];
            let oracle_equivalent = equivalent(kind, &triangles[a], &triangles[b]);
            if keys_equal != oracle_equivalent {
                return Ok(EquivalenceReport {
                    kind,
                    n_points: p.len(),
                    n_triangles: triangles.len(),
                    pairs_checked,
                    counterexample: Some(Counterexample {
                        first: triangles[a].clone(),
                        second: triangles[b].clone(),
                        keys_equal,
                        oracle_equivalent,
                    }),
                });
            }
        }
    }
    Ok(EquivalenceReport { kind, n_points: p.len(), n_triangles: triangles.len(), pairs_checked, counterexample: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HalvingReport {
    /// Directly congruent pairs, from the direct census.
    pub q_direct: u64,
    /// Pairs congruent only through a reflection, by pairwise oracle tests.
    pub q_mirror_only: u64,
    /// Congruent pairs, from the full census.
    pub q_full: u64,
}

impl HalvingReport {
    pub fn ok(&self) -> bool {
        self.q_direct + self.q_mirror_only == self.q_full
    }
}

/// Congruent pairs split into direct and mirror-only ones; at least one half
/// carries `Q_c(full)/2`.
pub fn halving_check(points: &PointSet) -> Result<HalvingReport> {
    let opts = CensusOptions::default();
    let q_direct = pair_counts(&census(points, KeyKind::CongruenceDirect, opts)?).q;
    let q_full = pair_counts(&census(points, KeyKind::CongruenceFull, opts)?).q;
    let triangles = proper_triangles(points);
    let mut q_mirror_only = 0;
    for a in 0..triangles.len() {
        for b in (a + 1)..triangles.len() {
            let (t1, t2) = (&triangles[a], &triangles[b]);
            if congruent_pair_test(t1, t2, true) && !congruent_pair_test(t1, t2, false) {
                q_mirror_only += 1;
            }
        }
    }
    Ok(HalvingReport { q_direct, q_mirror_only, q_full })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{grid, random_rational, RandomParams};
    use crate::keys::congruence_key;
    use crate::motion::apply;

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn tri(v: [(i64, i64); 3]) -> Triangle {
        v.map(|(x, y)| pt(x, y))
    }

    #[test]
    fn motions_of_a_segment() {
        let ps = PointSet::from_ints(&[(0, 0), (2, 0)]).unwrap();
        let table = enumerate_motions(&ps).unwrap();
        assert_eq!(table.identity, Some(MotionRecord { motion: RigidMotion::Identity, n: 2 }));
        let half_turn = RigidMotion::Rotation { center: pt(1, 0), t: Rat::zero() };
        assert_eq!(table.get(&half_turn), Some(2));
        // Motions fixing a single point are not pinned down by a segment.
        assert_eq!(table.len(), 2);
        assert!(table.translations.is_empty());
    }

    #[test]
    fn scalene_triangle_has_only_the_identity_as_triple() {
        let ps = PointSet::from_ints(&[(0, 0), (4, 0), (1, 3)]).unwrap();
        let table = enumerate_motions(&ps).unwrap();
        let triples: Vec<_> = table.records().filter(|r| r.n == 3).collect();
        assert_eq!(triples.len(), 1);
        assert_eq!(triples[0].motion, RigidMotion::Identity);
    }

    #[test]
    fn grid2_quarter_turn() {
        let table = enumerate_motions(&grid(2).unwrap()).unwrap();
        let quarter = RigidMotion::Rotation { center: Point::new(Rat::new(1, 2), Rat::new(1, 2)), t: Rat::one() };
        assert_eq!(table.get(&quarter), Some(4));
        assert_eq!(table.get(&RigidMotion::Translation { v: (Rat::one(), Rat::zero()) }), Some(2));
    }

    #[test]
    fn stored_multiplicities_match_motion_apply() {
        for seed in 0..5 {
            let ps = random_rational(&RandomParams::new(6, seed)).unwrap();
            let table = enumerate_motions(&ps).unwrap();
            for r in table.records() {
                let n = ps.iter().filter(|p| ps.contains(&apply(&r.motion, p))).count() as u64;
                assert_eq!(n, r.n, "{:?}", r.motion);
            }
        }
    }

    #[test]
    fn similitude_examples() {
        let g = |re, im| GaussRat::from_ints(re, im);
        let ps = PointSet::from_ints(&[(0, 0), (1, 0), (0, 1)]).unwrap();
        let table = enumerate_similitudes(&ps).unwrap();
        assert_eq!(table.get(&Similitude { a: g(0, 1), b: g(0, 0) }), Some(2));
        assert_eq!(table.get(&Similitude::identity()), Some(3));
        assert!(table.records.iter().all(|r| !r.similitude.a.is_zero()));

        let line = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0)]).unwrap();
        let table = enumerate_similitudes(&line).unwrap();
        assert_eq!(table.get(&Similitude { a: g(2, 0), b: g(0, 0) }), Some(2));
        assert_eq!(table.get(&Similitude::identity()), Some(3));
    }

    #[test]
    fn pair_test_examples() {
        let t = tri([(0, 0), (4, 0), (1, 3)]);
        let relabeled = [t[2].clone(), t[0].clone(), t[1].clone()];
        assert!(congruent_pair_test(&t, &relabeled, false));
        let mirrored = tri([(0, 0), (-4, 0), (-1, 3)]);
        assert!(!congruent_pair_test(&t, &mirrored, false));
        assert!(congruent_pair_test(&t, &mirrored, true));
        assert!(!similar_pair_test(&t, &mirrored, false));
        assert!(similar_pair_test(&t, &mirrored, true));

        let small = tri([(0, 0), (1, 0), (0, 1)]);
        let big = tri([(0, 0), (2, 0), (0, 2)]);
        assert!(!congruent_pair_test(&small, &big, true));
        assert!(similar_pair_test(&small, &big, false));
    }

    #[test]
    fn grid2_all_kinds_agree() {
        let g = grid(2).unwrap();
        for kind in KeyKind::ALL {
            let r = census_equivalence_check(&g, kind).unwrap();
            assert!(r.ok(), "{kind}");
            assert_eq!((r.n_triangles, r.pairs_checked), (4, 6));
        }
    }

    #[test]
    fn random_sets_agree() {
        for seed in 0..10 {
            let ps = random_rational(&RandomParams::new(7, seed)).unwrap();
            for kind in KeyKind::ALL {
                assert!(census_equivalence_check(&ps, kind).unwrap().ok(), "seed {seed} {kind}");
            }
        }
    }

    #[test]
    fn corrupted_key_is_caught() {
        // Keeping only the longest side merges, e.g., (1, 2, 5) with (1, 4, 5).
        let ps = grid(3).unwrap();
        let r = census_equivalence_check_with(&ps, KeyKind::CongruenceFull, 10, |a, b, c| {
            let mut k = congruence_key(a, b, c)?;
            k.0[0] = Rat::zero();
            k.0[1] = Rat::zero();
            Ok(TriangleKey::Congruence(k))
        })
        .unwrap();
        let cx = r.counterexample.expect("corruption must be detected");
        assert!(cx.keys_equal && !cx.oracle_equivalent);
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            census_equivalence_check(&grid(4).unwrap(), KeyKind::CongruenceFull),
            Err(Error::CapExceeded { cap: 10, n: 16, .. })
        ));
    }

    #[test]
    fn halving_identity() {
        for seed in 0..5 {
            let ps = random_rational(&RandomParams { n: 8, seed, range: 2, denom_bits: 0 }).unwrap();
            let h = halving_check(&ps).unwrap();
            assert!(h.ok(), "{h:?}");
        }
        let h = halving_check(&grid(3).unwrap()).unwrap();
        assert!(h.ok());
        assert!(h.q_mirror_only > 0);
    }

    #[test]
    fn grid2_histograms_match_tables() {
        use crate::arrangement::rich_points;
        use crate::conformal::lift_all_c;
        use crate::motion::lift_all;
        use std::collections::BTreeMap;

        let g = grid(2).unwrap();
        let mut expected: BTreeMap<u64, u64> = BTreeMap::new();
        for r in &enumerate_similitudes(&g).unwrap().records {
            *expected.entry(r.n).or_default() += 1;
        }
        let h = rich_points(&lift_all_c(&g, &g, false)).unwrap();
        assert_eq!(h.finite, expected);

        let table = enumerate_motions(&g).unwrap();
        let h = rich_points(&lift_all(&g, &g, true)).unwrap();
        let tally = |rs: &[MotionRecord]| {
            let mut m: BTreeMap<u64, u64> = BTreeMap::new();
            for r in rs {
                *m.entry(r.n).or_default() += 1;
            }
            m
        };
        assert_eq!(h.finite, tally(&table.rotations));
        assert_eq!(h.translation, tally(&table.translations));
        assert_eq!(h.identity, BTreeMap::from([(4, 1)]));
    }
}
