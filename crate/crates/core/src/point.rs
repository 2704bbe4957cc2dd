//! Planar points, exact predicates and the point-set container.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{GaussRat, Rat};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(Rat::from_int(x), Rat::from_int(y))
    }

    /// The point read as the complex number `x + iy`.
    pub fn to_complex(&self) -> GaussRat {
        GaussRat::new(self.x.clone(), self.y.clone())
    }

    pub fn from_complex(z: &GaussRat) -> Self {
        Point::new(z.re.clone(), z.im.clone())
    }

    pub fn translate(&self, dx: &Rat, dy: &Rat) -> Point {
        Point::new(&self.x + dx, &self.y + dy)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Squared Euclidean distance.
pub fn sq_dist(a: &Point, b: &Point) -> Rat {
    let dx = &a.x - &b.x;
    let dy = &a.y - &b.y;
    dx.square() + dy.square()
}

/// `(b - a) × (c - a)`.
pub fn cross(a: &Point, b: &Point, c: &Point) -> Rat {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

/// Sign of `(b - a) × (c - a)`: `+1` counter-clockwise, `-1` clockwise, `0` collinear.
pub fn orientation(a: &Point, b: &Point, c: &Point) -> i8 {
    cross(a, b, c).signum()
}

/// Finite ordered set of pairwise distinct points. Indices are stable identities.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    /// Rejects duplicates. Operations that need a minimum size check it themselves.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint(Box::new(p.clone())));
            }
        }
        Ok(PointSet { points })
    }

    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self> {
        PointSet::new(coords.iter().map(|&(x, y)| Point::from_ints(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.contains(p)
    }

    pub(crate) fn require(&self, need: usize) -> Result<()> {
        if self.len() < need {
            Err(Error::TooFewPoints { need, got: self.len() })
        } else {
            Ok(())
        }
    }

    /// Parses the text format: one `x y` pair per line, each coordinate an
    /// integer or `num/den`. Lines starting with `#` and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |msg: String| Error::Syntax { line: idx + 1, msg };
            let mut fields = line.split_whitespace();
            let (Some(x), Some(y), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(syntax(format!("expected `x y`, got {line:?}")));
            };
            let x: Rat = x.parse().map_err(|e: Error| syntax(e.to_string()))?;
            let y: Rat = y.parse().map_err(|e: Error| syntax(e.to_string()))?;
            points.push(Point::new(x, y));
        }
        PointSet::new(points)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        PointSet::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            out.push_str(&format!("{} {}\n", p.x, p.y));
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// A maximal collinear subset, by point index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollinearRun {
    pub indices: Vec<usize>,
}

/// Largest collinear subset of `points`, found by bucketing slopes from each anchor.
pub fn richest_line(points: &PointSet) -> CollinearRun {
    let n = points.len();
    if n <= 2 {
        return CollinearRun { indices: (0..n).collect() };
    }
    let mut best: Vec<usize> = vec![0, 1];
    for i in 0..n {
        // Only j > i: the best line is found from its lowest-index point.
        if n - i <= best.len() {
            break;
        }
        let a = points.get(i);
        let mut by_slope: HashMap<Option<Rat>, Vec<usize>> = HashMap::new();
        for j in (i + 1)..n {
            let b = points.get(j);
            let dx = &b.x - &a.x;
            let dy = &b.y - &a.y;
            by_slope.entry(dy.checked_div(&dx)).or_default().push(j);
        }
        for group in by_slope.into_values() {
            if group.len() + 1 > best.len() {
                best = std::iter::once(i).chain(group).collect();
            }
        }
    }
    CollinearRun { indices: best }
}

/// Maximum number of points of the set on one line.
pub fn max_collinear(points: &PointSet) -> usize {
    richest_line(points).indices.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Hypothesis {
    Ok { n: usize, max_collinear: usize },
    Violation { n: usize, max_collinear: usize, witness: Vec<usize> },
}

impl Hypothesis {
    pub fn is_ok(&self) -> bool {
        matches!(self, Hypothesis::Ok { .. })
    }
}

/// Checks that no line carries more than `N/2` of the points.
pub fn validate_hypothesis(points: &PointSet) -> Hypothesis {
    let n = points.len();
    let run = richest_line(points);
    let max_collinear = run.indices.len();
    if 2 * max_collinear <= n {
        Hypothesis::Ok { n, max_collinear }
    } else {
        Hypothesis::Violation { n, max_collinear, witness: run.indices }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(m: i64) -> PointSet {
        let coords: Vec<_> = (0..m).flat_map(|x| (0..m).map(move |y| (x, y))).collect();
        PointSet::from_ints(&coords).unwrap()
    }

    /// Brute force over every pair-defined line.
    fn max_collinear_brute(ps: &PointSet) -> usize {
        let n = ps.len();
        let mut best = n.min(2);
        for i in 0..n {
            for j in (i + 1)..n {
                let on = (0..n).filter(|&k| orientation(ps.get(i), ps.get(j), ps.get(k)) == 0).count();
                best = best.max(on);
            }
        }
        best
    }

    #[test]
    fn sq_dist_examples() {
        assert_eq!(sq_dist(&Point::from_ints(0, 0), &Point::from_ints(3, 4)), Rat::from_int(25));
        assert_eq!(sq_dist(&Point::from_ints(0, 0), &Point::from_ints(0, 0)), Rat::zero());
        let a = Point::new(Rat::new(1, 2), Rat::zero());
        let b = Point::new(Rat::zero(), Rat::new(1, 2));
        assert_eq!(sq_dist(&a, &b), Rat::new(1, 2));
    }

    #[test]
    fn orientation_examples() {
        let p = |x, y| Point::from_ints(x, y);
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(0, 1)), 1);
        assert_eq!(orientation(&p(0, 0), &p(1, 1), &p(2, 2)), 0);
        assert_eq!(orientation(&p(0, 0), &p(0, 1), &p(1, 0)), -1);
    }

    #[test]
    fn max_collinear_examples() {
        let g3 = grid(3);
        assert_eq!(max_collinear_brute(&g3), 3);
        assert_eq!(max_collinear(&g3), 3);
        assert_eq!(max_collinear(&PointSet::from_ints(&[(0, 0), (1, 0), (0, 1)]).unwrap()), 2);
        let ps = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0), (0, 1)]).unwrap();
        assert_eq!(max_collinear(&ps), 3);
    }

    #[test]
    fn hypothesis_examples() {
        assert!(validate_hypothesis(&grid(2)).is_ok());
        assert!(validate_hypothesis(&grid(3)).is_ok());
        let ps = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 1)]).unwrap();
        match validate_hypothesis(&ps) {
            Hypothesis::Violation { max_collinear, witness, .. } => {
                assert_eq!(max_collinear, 4);
                assert_eq!(witness, vec![0, 1, 2, 3]);
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn duplicates_rejected() {
        let err = PointSet::from_ints(&[(0, 0), (1, 1), (0, 0)]).unwrap_err();
        assert!(matches!(err, Error::DuplicatePoint(_)));
    }

    #[test]
    fn text_format() {
        let text = "# header\n0 0\n\n1/2 -3\n  -4/6 7 \n";
        let ps = PointSet::parse(text).unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(ps.get(2), &Point::new(Rat::new(-2, 3), Rat::from_int(7)));
        assert_eq!(ps.to_text(), "0 0\n1/2 -3\n-2/3 7\n");
        assert_eq!(PointSet::parse(&ps.to_text()).unwrap(), ps);

        let err = PointSet::parse("0 0\n1 2 3\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
        assert!(PointSet::parse("1/0 2\n").is_err());
        assert!(PointSet::parse("a b\n").is_err());
    }

    fn small_point() -> impl Strategy<Value = Point> {
        (-20i64..20, -20i64..20, 1i64..5, 1i64..5)
            .prop_map(|(x, y, dx, dy)| Point::new(Rat::new(x, dx), Rat::new(y, dy)))
    }

    proptest! {
        #[test]
        fn sq_dist_symmetric_and_translation_invariant(
            a in small_point(), b in small_point(), v in small_point()
        ) {
            prop_assert_eq!(sq_dist(&a, &b), sq_dist(&b, &a));
            let at = a.translate(&v.x, &v.y);
            let bt = b.translate(&v.x, &v.y);
            prop_assert_eq!(sq_dist(&at, &bt), sq_dist(&a, &b));
        }

        #[test]
        fn orientation_antisymmetric(a in small_point(), b in small_point(), c in small_point()) {
            let o = orientation(&a, &b, &c);
            prop_assert_eq!(orientation(&b, &a, &c), -o);
            prop_assert_eq!(orientation(&a, &c, &b), -o);
            prop_assert_eq!(orientation(&c, &b, &a), -o);
        }

        #[test]
        fn max_collinear_matches_brute_force(
            coords in proptest::collection::hash_set((-3i64..4, -3i64..4), 2..12)
        ) {
            let coords: Vec<_> = coords.into_iter().collect();
            let ps = PointSet::from_ints(&coords).unwrap();
            let m = max_collinear(&ps);
            prop_assert_eq!(m, max_collinear_brute(&ps));
            prop_assert!(m <= ps.len());
            let all_collinear = (2..ps.len())
                .all(|k| orientation(ps.get(0), ps.get(1), ps.get(k)) == 0);
            prop_assert_eq!(m == ps.len(), all_collinear);
        }
    }
}
