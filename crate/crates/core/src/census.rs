//! Triangle enumeration and class multiplicities.
//!
//! Keys are computed in parallel over blocks of first vertices, then sorted and
//! run-length counted, so the resulting census does not depend on the worker
//! count or schedule.
//!
//! For the two congruence kinds the squared side lengths are interned once per
//! point pair: every distinct squared distance gets its rank among all of them.
//! Ranks preserve order, so sorting and rotating ranks is the same as sorting
//! and rotating the exact values, and a key costs 12 bytes instead of three
//! big rationals.

use std::cmp::Reverse;
use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::keys::{
    min_rotation, similarity_key, CongruenceKey, DirectCongruenceKey, KeyKind, SimilarityKey, TriangleKey,
};
use crate::point::{orientation, sq_dist, PointSet};
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CensusOptions {
    /// Keep collinear triples (as degenerate triangles).
    pub include_degenerate: bool,
    /// Worker threads; `0` uses the global rayon pool.
    pub threads: usize,
}

/// All index triples `i < j < k`, collinear ones dropped unless requested.
pub fn enumerate_triangles(points: &PointSet, include_degenerate: bool) -> impl Iterator<Item = [usize; 3]> + '_ {
    let n = points.len();
    (0..n)
        .flat_map(move |i| ((i + 1)..n).flat_map(move |j| ((j + 1)..n).map(move |k| [i, j, k])))
        .filter(move |&[i, j, k]| include_degenerate || orientation(points.get(i), points.get(j), points.get(k)) != 0)
}

/// Precomputed per-pair data for fast keying of index triples.
pub struct TriangleKeyer<'a> {
    points: &'a PointSet,
    n: usize,
    /// Distinct squared distances, ascending.
    dict: Vec<Rat>,
    /// `rank[i * n + j]` indexes `dict`.
    rank: Vec<u32>,
    /// `wedge[i * n + j] = x_i·y_j − y_i·x_j`.
    wedge: Vec<Rat>,
}

impl<'a> TriangleKeyer<'a> {
    pub fn new(points: &'a PointSet) -> Self {
        let n = points.len();
        let mut dists = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                dists.push(sq_dist(points.get(i), points.get(j)));
            }
        }
        let mut dict = dists.clone();
        dict.sort();
        dict.dedup();
        let index: HashMap<&Rat, u32> = dict.iter().enumerate().map(|(r, d)| (d, r as u32)).collect();

        let mut rank = vec![0u32; n * n];
        let mut wedge = vec![Rat::zero(); n * n];
        let mut it = dists.iter();
        for i in 0..n {
            for j in (i + 1)..n {
                let r = index[it.next().expect("pair count")];
                rank[i * n + j] = r;
                rank[j * n + i] = r;
            }
        }
        for i in 0..n {
            let a = points.get(i);
            for j in 0..n {
                if i != j {
                    let b = points.get(j);
                    wedge[i * n + j] = &a.x * &b.y - &a.y * &b.x;
                }
            }
        }
        TriangleKeyer { points, n, dict, rank, wedge }
    }

    pub fn points(&self) -> &PointSet {
        self.points
    }

    #[inline]
    fn rank(&self, i: usize, j: usize) -> u32 {
        self.rank[i * self.n + j]
    }

    /// Orientation of `(i, j, k)` from the pair wedges:
    /// `(b − a) × (c − a) = a∧b + b∧c + c∧a`.
    pub fn orientation(&self, i: usize, j: usize, k: usize) -> i8 {
        let n = self.n;
        (&self.wedge[i * n + j] + &self.wedge[j * n + k] + &self.wedge[k * n + i]).signum()
    }

    /// Sorted side ranks, or `None` for an excluded collinear triple.
    pub fn sides(&self, [i, j, k]: [usize; 3], include_degenerate: bool) -> Option<[u32; 3]> {
        if !include_degenerate && self.orientation(i, j, k) == 0 {
            return None;
        }
        let mut s = [self.rank(i, j), self.rank(i, k), self.rank(j, k)];
        s.sort_unstable();
        Some(s)
    }

    pub fn direct_sides(&self, [i, j, k]: [usize; 3], include_degenerate: bool) -> Option<([u32; 3], bool)> {
        let (ij, jk, ki) = (self.rank(i, j), self.rank(j, k), self.rank(k, i));
        match self.orientation(i, j, k) {
            0 if !include_degenerate => None,
            0 => {
                let mut s = [ij, jk, ki];
                s.sort_unstable();
                Some((s, true))
            }
            1 => Some((min_rotation([ij, jk, ki]), false)),
            _ => Some((min_rotation([ki, jk, ij]), false)),
        }
    }

    pub fn shape(&self, [i, j, k]: [usize; 3], reflections: bool, include_degenerate: bool) -> Option<SimilarityKey> {
        let p = self.points;
        similarity_key(p.get(i), p.get(j), p.get(k), reflections, include_degenerate).ok()
    }

    /// Key of the triple in public form.
    pub fn key(&self, kind: KeyKind, t: [usize; 3], include_degenerate: bool) -> Option<TriangleKey> {
        match kind {
            KeyKind::CongruenceFull => {
                self.sides(t, include_degenerate).map(|s| TriangleKey::Congruence(CongruenceKey(self.decode(s))))
            }
            KeyKind::CongruenceDirect => self.direct_sides(t, include_degenerate).map(|(s, degenerate)| {
                TriangleKey::DirectCongruence(DirectCongruenceKey { sides: self.decode(s), degenerate })
            }),
            KeyKind::SimilarityDirect => self.shape(t, false, include_degenerate).map(TriangleKey::Similarity),
            KeyKind::SimilarityFull => self.shape(t, true, include_degenerate).map(TriangleKey::Similarity),
        }
    }

    fn decode(&self, s: [u32; 3]) -> [Rat; 3] {
        s.map(|r| self.dict[r as usize].clone())
    }
}

/// Class keys in compact form, sorted ascending; parallel to the multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
enum KeyStore {
    Sides { dict: Vec<Rat>, keys: Vec<[u32; 3]> },
    DirectSides { dict: Vec<Rat>, keys: Vec<([u32; 3], bool)> },
    Shapes(Vec<SimilarityKey>),
}

/// Class partition of the triangles of a point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCensus {
    pub kind: KeyKind,
    pub n_points: usize,
    pub n_triangles: u64,
    pub include_degenerate: bool,
    store: KeyStore,
    multiplicities: Vec<u64>,
}

impl ClassCensus {
    pub fn n_classes(&self) -> usize {
        self.multiplicities.len()
    }

    /// Multiplicities in ascending key order.
    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    pub fn key(&self, idx: usize) -> TriangleKey {
        let dec = |dict: &[Rat], s: &[u32; 3]| s.map(|r| dict[r as usize].clone());
        match &self.store {
            KeyStore::Sides { dict, keys } => TriangleKey::Congruence(CongruenceKey(dec(dict, &keys[idx]))),
            KeyStore::DirectSides { dict, keys } => {
                let (s, degenerate) = &keys[idx];
                TriangleKey::DirectCongruence(DirectCongruenceKey { sides: dec(dict, s), degenerate: *degenerate })
            }
            KeyStore::Shapes(keys) => TriangleKey::Similarity(keys[idx].clone()),
        }
    }

    pub fn classes(&self) -> impl Iterator<Item = (TriangleKey, u64)> + '_ {
        self.multiplicities.iter().enumerate().map(|(i, &m)| (self.key(i), m))
    }

    /// The `limit` largest classes, ties broken by key order.
    pub fn top(&self, limit: usize) -> Vec<(TriangleKey, u64)> {
        let mut idx: Vec<usize> = (0..self.multiplicities.len()).collect();
        let by = |&i: &usize| (Reverse(self.multiplicities[i]), i);
        if idx.len() > limit && limit > 0 {
            idx.select_nth_unstable_by_key(limit - 1, by);
            idx.truncate(limit);
        }
        idx.sort_unstable_by_key(by);
        idx.truncate(limit);
        idx.into_iter().map(|i| (self.key(i), self.multiplicities[i])).collect()
    }
}

fn tally<K, F>(n: usize, key: F) -> (Vec<K>, Vec<u64>)
where
    K: Ord + Send,
    F: Fn([usize; 3]) -> Option<K> + Sync,
{
    let mut keys: Vec<K> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let key = &key;
            ((i + 1)..n).flat_map(move |j| ((j + 1)..n).filter_map(move |k| key([i, j, k])))
        })
        .collect();
    keys.par_sort_unstable();

    let mut uniq: Vec<K> = Vec::new();
    let mut mult: Vec<u64> = Vec::new();
    for k in keys {
        match uniq.last() {
            Some(last) if *last == k => *mult.last_mut().expect("parallel vecs") += 1,
            _ => {
                uniq.push(k);
                mult.push(1);
            }
        }
    }
    (uniq, mult)
}

/// Class multiplicities over all triangles of `points` for the given relation.
pub fn census(points: &PointSet, kind: KeyKind, opts: CensusOptions) -> Result<ClassCensus> {
    points.require(3)?;
    let run = || {
        let keyer = TriangleKeyer::new(points);
        let deg = opts.include_degenerate;
        let n = points.len();
        let (store, multiplicities) = match kind {
            KeyKind::CongruenceFull => {
                let (keys, m) = tally(n, |t| keyer.sides(t, deg));
                (KeyStore::Sides { dict: keyer.dict.clone(), keys }, m)
            }
            KeyKind::CongruenceDirect => {
                let (keys, m) = tally(n, |t| keyer.direct_sides(t, deg));
                (KeyStore::DirectSides { dict: keyer.dict.clone(), keys }, m)
            }
            KeyKind::SimilarityDirect | KeyKind::SimilarityFull => {
                let refl = kind == KeyKind::SimilarityFull;
                let (keys, m) = tally(n, |t| keyer.shape(t, refl, deg));
                (KeyStore::Shapes(keys), m)
            }
        };
        ClassCensus {
            kind,
            n_points: n,
            n_triangles: multiplicities.iter().sum(),
            include_degenerate: deg,
            store,
            multiplicities,
        }
    };
    Ok(with_threads(opts.threads, run))
}

/// Runs `f` on a dedicated pool of `threads` workers, or inline when `threads == 0`.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PairCounts {
    /// Unordered pairs of distinct triangles in a common class.
    #[serde(rename = "Q")]
    pub q: u64,
    /// `Σ m_c²`.
    pub sum_m_sq: u64,
}

pub fn pair_counts(c: &ClassCensus) -> PairCounts {
    pair_counts_of(c.multiplicities())
}

pub fn pair_counts_of(mults: &[u64]) -> PairCounts {
    mults.iter().fold(PairCounts { q: 0, sum_m_sq: 0 }, |acc, &m| PairCounts {
        q: acc.q + m * (m.saturating_sub(1)) / 2,
        sum_m_sq: acc.sum_m_sq + m * m,
    })
}

/// `|T|² / Σ m_c²`: no partition of `|T|` items with these pair statistics can
/// have fewer classes (Cauchy–Schwarz).
pub fn class_lower_bound(c: &ClassCensus) -> Rat {
    class_lower_bound_of(c.multiplicities())
}

pub fn class_lower_bound_of(mults: &[u64]) -> Rat {
    let total: u64 = mults.iter().sum();
    let PairCounts { sum_m_sq, .. } = pair_counts_of(mults);
    if sum_m_sq == 0 {
        return Rat::zero();
    }
    let t = Rat::from(num_bigint::BigInt::from(total));
    &t * &t / Rat::from(num_bigint::BigInt::from(sum_m_sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keys::triangle_key;
    use crate::point::Point;

    fn grid(m: i64) -> PointSet {
        let coords: Vec<_> = (0..m).flat_map(|x| (0..m).map(move |y| (x, y))).collect();
        PointSet::from_ints(&coords).unwrap()
    }

    fn opts() -> CensusOptions {
        CensusOptions::default()
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_triangles(&grid(2), false).count(), 4);
        let g3 = grid(3);
        assert_eq!(enumerate_triangles(&g3, true).count(), 84);
        // 3 rows + 3 columns + 2 diagonals.
        assert_eq!(enumerate_triangles(&g3, false).count(), 76);
        let line = PointSet::from_ints(&[(0, 0), (1, 1), (2, 2)]).unwrap();
        assert_eq!(enumerate_triangles(&line, false).count(), 0);
    }

    #[test]
    fn grid2_single_class_all_kinds() {
        for kind in KeyKind::ALL {
            let c = census(&grid(2), kind, opts()).unwrap();
            assert_eq!(c.n_classes(), 1, "{kind}");
            assert_eq!(c.multiplicities(), &[4]);
        }
        let c = census(&grid(2), KeyKind::CongruenceFull, opts()).unwrap();
        let (key, m) = c.classes().next().unwrap();
        assert_eq!(m, 4);
        assert_eq!(key, TriangleKey::Congruence(CongruenceKey([1, 1, 2].map(Rat::from_int))));
        assert_eq!(pair_counts(&c), PairCounts { q: 6, sum_m_sq: 16 });
        assert_eq!(class_lower_bound(&c), Rat::one());
    }

    #[test]
    fn single_triangle() {
        let ps = PointSet::from_ints(&[(0, 0), (5, 1), (2, 7)]).unwrap();
        let c = census(&ps, KeyKind::CongruenceDirect, opts()).unwrap();
        assert_eq!((c.n_classes(), c.n_triangles), (1, 1));
    }

    #[test]
    fn pair_count_examples() {
        assert_eq!(pair_counts_of(&[4]), PairCounts { q: 6, sum_m_sq: 16 });
        assert_eq!(pair_counts_of(&[1, 1, 1, 1, 1]), PairCounts { q: 0, sum_m_sq: 5 });
        assert_eq!(pair_counts_of(&[3, 2]), PairCounts { q: 4, sum_m_sq: 13 });
        assert_eq!(class_lower_bound_of(&[1; 7]), Rat::from_int(7));
        assert_eq!(class_lower_bound_of(&[3, 2]), Rat::new(25, 13));
    }

    #[test]
    fn too_few_points() {
        let ps = PointSet::from_ints(&[(0, 0), (1, 0)]).unwrap();
        assert!(census(&ps, KeyKind::CongruenceFull, opts()).is_err());
    }

    /// The interned keys partition triangles exactly like the public key functions.
    #[test]
    fn keyer_matches_public_keys() {
        let ps = PointSet::new(
            [(0, 0, 1), (3, 1, 2), (1, 4, 1), (5, 5, 3), (2, 2, 1), (4, 0, 1), (1, 1, 2)]
                .iter()
                .map(|&(x, y, d)| Point::new(Rat::new(x, d), Rat::new(y, 1)))
                .collect(),
        )
        .unwrap();
        let keyer = TriangleKeyer::new(&ps);
        for deg in [false, true] {
            for kind in KeyKind::ALL {
                for t in enumerate_triangles(&ps, true) {
                    let [i, j, k] = t;
                    let public = triangle_key(kind, ps.get(i), ps.get(j), ps.get(k), deg).ok();
                    assert_eq!(keyer.key(kind, t, deg), public, "{kind} {t:?}");
                }
            }
        }
    }

    #[test]
    fn degenerate_mode_counts_collinear_triples() {
        let g3 = grid(3);
        let on = CensusOptions { include_degenerate: true, ..opts() };
        for kind in KeyKind::ALL {
            assert_eq!(census(&g3, kind, on).unwrap().n_triangles, 84);
            assert_eq!(census(&g3, kind, opts()).unwrap().n_triangles, 76);
        }
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let g = grid(4);
        for kind in KeyKind::ALL {
            let base = census(&g, kind, opts()).unwrap();
            for threads in [1, 3] {
                assert_eq!(census(&g, kind, CensusOptions { threads, ..opts() }).unwrap(), base);
            }
        }
    }

    #[test]
    fn top_classes_order() {
        let c = census(&grid(3), KeyKind::CongruenceFull, opts()).unwrap();
        let top = c.top(3);
        assert_eq!(top.len(), 3);
        assert!(top.windows(2).all(|w| w[0].1 >= w[1].1));
        assert_eq!(top[0].1, *c.multiplicities().iter().max().unwrap());
        assert_eq!(c.top(1000).len(), c.n_classes());
    }
}
