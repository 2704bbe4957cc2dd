//! Point-set constructions: integer grids, seeded random dyadic sets,
//! configurations at the `N/2`-collinear boundary, and mirror images.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{Point, PointSet};
use crate::rat::Rat;

/// The line `a·x + b·y = c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatLine {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl RatLine {
    pub fn vertical(x: Rat) -> Self {
        RatLine { a: Rat::one(), b: Rat::zero(), c: x }
    }

    pub fn reflect(&self, p: &Point) -> Result<Point> {
        let norm = self.a.square() + self.b.square();
        if norm.is_zero() {
            return Err(Error::DegenerateLine);
        }
        // p − 2(a·p − c)/(a² + b²) · (a, b)
        let s = Rat::from_int(2) * (&self.a * &p.x + &self.b * &p.y - &self.c) / norm;
        Ok(Point::new(&p.x - &s * &self.a, &p.y - &s * &self.b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomParams {
    pub n: usize,
    pub seed: u64,
    /// Coordinates lie in `[-range, range]`.
    pub range: u32,
    /// Coordinates are multiples of `2^-denom_bits`.
    pub denom_bits: u32,
}

impl RandomParams {
    pub fn new(n: usize, seed: u64) -> Self {
        RandomParams { n, seed, range: 8, denom_bits: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GenSpec {
    Grid {
        m: usize,
    },
    Random(RandomParams),
    HalfLine {
        n: usize,
    },
    /// Mirror image of another generated set; `line = None` picks one clear of it.
    MirrorOf {
        base: Box<GenSpec>,
        line: Option<RatLine>,
    },
}

impl GenSpec {
    pub fn generate(&self) -> Result<PointSet> {
        match self {
            GenSpec::Grid { m } => grid(*m),
            GenSpec::Random(p) => random_rational(p),
            GenSpec::HalfLine { n } => half_line_config(*n),
            GenSpec::MirrorOf { base, line } => {
                let base = base.generate()?;
                match line {
                    Some(l) => mirror(&base, l),
                    None => mirror(&base, &default_mirror_line(&base)),
                }
            }
        }
    }
}

/// `{0, …, m−1}²`.
pub fn grid(m: usize) -> Result<PointSet> {
    if m < 2 {
        return Err(Error::InvalidParams(format!("grid side must be >= 2, got {m}")));
    }
    let m = m as i64;
    PointSet::new((0..m).flat_map(|x| (0..m).map(move |y| Point::from_ints(x, y))).collect())
}

/// `n` distinct points on the dyadic lattice `2^-s·ℤ² ∩ [-range, range]²`,
/// reproducible from the seed.
pub fn random_rational(params: &RandomParams) -> Result<PointSet> {
    let &RandomParams { n, seed, range, denom_bits } = params;
    if n < 3 {
        return Err(Error::InvalidParams(format!("need n >= 3, got {n}")));
    }
    if denom_bits > 20 || range == 0 || range > 1 << 20 {
        return Err(Error::InvalidParams(format!("range {range}, denom_bits {denom_bits}")));
    }
    let scale = 1i64 << denom_bits;
    let half = range as i64 * scale;
    let side = (2 * half + 1) as u128;
    let available = side * side;
    if n as u128 > available {
        return Err(Error::LatticeExhausted { want: n, available });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    let max_attempts = 64 * n + 1024;
    let mut attempts = 0;
    while points.len() < n {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::LatticeExhausted { want: n, available });
        }
        let x = rng.gen_range(-half..=half);
        let y = rng.gen_range(-half..=half);
        if seen.insert((x, y)) {
            points.push(Point::new(Rat::new(x, scale), Rat::new(y, scale)));
        }
    }
    PointSet::new(points)
}

/// `n/2` points on the x-axis and `n/2` on the parabola `y = x² + 1`.
///
/// A line meets the parabola at most twice and the axis at most once, so the
/// axis is the unique richest line and carries exactly `N/2` points.
pub fn half_line_config(n: usize) -> Result<PointSet> {
    if n < 6 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParams(format!("half-line config needs even n >= 6, got {n}")));
    }
    let h = (n / 2) as i64;
    let axis = (0..h).map(|i| Point::from_ints(i, 0));
    let off = (0..h).map(|i| Point::from_ints(i, i * i + 1));
    PointSet::new(axis.chain(off).collect())
}

/// A vertical line just right of the bounding box, at a third of a unit so
/// that the image cannot overlap the original.
pub fn default_mirror_line(points: &PointSet) -> RatLine {
    let xmax = points.iter().map(|p| &p.x).max().cloned().unwrap_or_else(Rat::zero);
    RatLine::vertical(xmax + Rat::new(1, 3))
}

/// Reflection of every point in `line`; fails if the image meets the original.
pub fn mirror(points: &PointSet, line: &RatLine) -> Result<PointSet> {
    let image = points.iter().map(|p| line.reflect(p)).collect::<Result<Vec<_>>>()?;
    let original: HashSet<&Point> = points.iter().collect();
    if let Some(shared) = image.iter().find(|p| original.contains(p)) {
        return Err(Error::MirrorNotDisjoint(Box::new(shared.clone())));
    }
    PointSet::new(image)
}
