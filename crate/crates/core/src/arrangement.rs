//! Exact rich-point census of a family of lifted lines.
//!
//! Every line meets every other line once, in parallel over the first line.
//! On a fixed line `i` the meets are grouped by exact point; a group of `k − 1`
//! partners is a point of multiplicity `k`, counted from its lowest-index line
//! only. Each counted point is re-verified by meeting all of its partner pairs,
//! and the total number of meeting pairs must equal `Σ count·C(k, 2)`, so a
//! grouping error cannot go unnoticed.
//!
//! Meets fall into sections:
//!
//! * `finite`: a point of R³ or a point `(a, b)` of C² with `a ≠ 0`;
//! * `translation`: parallel motion lines sharing a nonzero displacement
//!   (the translation at infinity);
//! * `identity`: the vertical motion lines `L_pp`, which share only the identity;
//! * `a_zero`: conformal lines meeting at `(0, b)`, the constant map to `b`.
//!
//! Only `finite` and `translation` points correspond to group elements moving
//! triangles of the set, and only they enter [`triple_count`].

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::census::with_threads;
use crate::conformal::{intersect_c, lift_all_c, ConformalLine, ConformalMeet};
use crate::error::{Error, Result};
use crate::motion::{intersect_motion_lines, lift_all, MotionLine, MotionMeet, R3};
use crate::point::PointSet;
use crate::rat::{GaussRat, Rat};

/// Default limit on `N` for arrangement runs (`N²` lines, `N⁴` meets).
pub const DEFAULT_ARRANGEMENT_CAP: usize = 60;
/// Coplanarity audit limit on `N`.
pub const COPLANARITY_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Section {
    Finite,
    Translation,
    Identity,
    AZero,
}

/// Exact location where two lines meet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeetPoint {
    R3(R3),
    Displacement(Rat, Rat),
    Identity,
    C2(GaussRat, GaussRat),
    AZero(GaussRat),
}

impl MeetPoint {
    pub fn section(&self) -> Section {
        match self {
            MeetPoint::R3(_) | MeetPoint::C2(..) => Section::Finite,
            MeetPoint::Displacement(..) => Section::Translation,
            MeetPoint::Identity => Section::Identity,
            MeetPoint::AZero(_) => Section::AZero,
        }
    }
}

/// A line type whose pairwise meets can be located exactly.
pub trait ArrangementLine: Sync {
    /// `None` when the lines share no point (skew, or parallel without a
    /// common point at infinity). Identical lines are an error.
    fn meet(&self, other: &Self) -> Result<Option<MeetPoint>>;
}

impl ArrangementLine for MotionLine {
    fn meet(&self, other: &Self) -> Result<Option<MeetPoint>> {
        Ok(match intersect_motion_lines(self, other)? {
            MotionMeet::Finite(p) => Some(MeetPoint::R3(p)),
            MotionMeet::SharedTranslation(x, y) => Some(MeetPoint::Displacement(x, y)),
            MotionMeet::SharedIdentity => Some(MeetPoint::Identity),
            MotionMeet::Disjoint => None,
        })
    }
}

impl ArrangementLine for ConformalLine {
    fn meet(&self, other: &Self) -> Result<Option<MeetPoint>> {
        Ok(match intersect_c(self, other)? {
            ConformalMeet::Similitude(s) => Some(MeetPoint::C2(s.a, s.b)),
            ConformalMeet::DegenerateAtAZero(b) => Some(MeetPoint::AZero(b)),
            ConformalMeet::Parallel => None,
        })
    }
}

/// Multiplicity `k` → number of distinct points where exactly `k` lines meet, per section.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RichPointHistogram {
    pub finite: BTreeMap<u64, u64>,
    pub translation: BTreeMap<u64, u64>,
    pub identity: BTreeMap<u64, u64>,
    pub a_zero: BTreeMap<u64, u64>,
    /// Unordered line pairs meeting at finite points.
    pub finite_pairs: u64,
    /// A finite point of largest multiplicity (lowest first line on ties).
    pub richest: Option<RichPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RichPoint {
    pub multiplicity: u64,
    pub point: MeetPoint,
    pub lines: Vec<usize>,
}

impl RichPointHistogram {
    pub fn section(&self, s: Section) -> &BTreeMap<u64, u64> {
        match s {
            Section::Finite => &self.finite,
            Section::Translation => &self.translation,
            Section::Identity => &self.identity,
            Section::AZero => &self.a_zero,
        }
    }

    fn section_mut(&mut self, s: Section) -> &mut BTreeMap<u64, u64> {
        match s {
            Section::Finite => &mut self.finite,
            Section::Translation => &mut self.translation,
            Section::Identity => &mut self.identity,
            Section::AZero => &mut self.a_zero,
        }
    }

    /// Finite and translation sections merged: the points that are group
    /// elements other than the identity.
    pub fn counted(&self) -> BTreeMap<u64, u64> {
        let mut out = self.finite.clone();
        for (&k, &c) in &self.translation {
            *out.entry(k).or_default() += c;
        }
        out
    }

    pub fn max_finite_multiplicity(&self) -> u64 {
        self.finite.keys().next_back().copied().unwrap_or(0)
    }

    fn merge(mut self, other: RichPointHistogram) -> RichPointHistogram {
        for s in [Section::Finite, Section::Translation, Section::Identity, Section::AZero] {
            for (&k, &c) in other.section(s) {
                *self.section_mut(s).entry(k).or_default() += c;
            }
        }
        self.finite_pairs += other.finite_pairs;
        self.richest = match (self.richest.take(), other.richest) {
            (Some(a), Some(b)) => Some(if richer(&b, &a) { b } else { a }),
            (a, b) => a.or(b),
        };
        self
    }
}

fn richer(a: &RichPoint, b: &RichPoint) -> bool {
    (a.multiplicity, std::cmp::Reverse(a.lines[0])) > (b.multiplicity, std::cmp::Reverse(b.lines[0]))
}

fn choose2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

fn choose3(k: u64) -> u64 {
    if k < 3 {
        0
    } else {
        k * (k - 1) * (k - 2) / 6
    }
}

fn line_census<L: ArrangementLine>(lines: &[L], i: usize) -> Result<RichPointHistogram> {
    let mut groups: HashMap<MeetPoint, Vec<usize>> = HashMap::new();
    let mut hist = RichPointHistogram::default();
    for (j, other) in lines.iter().enumerate() {
        if j == i {
            continue;
        }
        if let Some(pt) = lines[i].meet(other)? {
            if j > i && pt.section() == Section::Finite {
                hist.finite_pairs += 1;
            }
            groups.entry(pt).or_default().push(j);
        }
    }
    for (pt, partners) in groups {
        // partners ascend, so the point belongs to `i` iff i < partners[0].
        if partners[0] < i {
            continue;
        }
        for (a, &ja) in partners.iter().enumerate() {
            for &jb in &partners[a + 1..] {
                if lines[ja].meet(&lines[jb])?.as_ref() != Some(&pt) {
                    return Err(Error::Invariant(format!(
                        "lines {i}, {ja}, {jb}: {ja} and {jb} do not meet at the common point"
                    )));
                }
            }
        }
        let k = partners.len() as u64 + 1;
        let section = pt.section();
        *hist.section_mut(section).entry(k).or_default() += 1;
        if section == Section::Finite {
            let cand = RichPoint { multiplicity: k, point: pt, lines: std::iter::once(i).chain(partners).collect() };
            if hist.richest.as_ref().is_none_or(|r| richer(&cand, r)) {
                hist.richest = Some(cand);
            }
        }
    }
    Ok(hist)
}

/// Exact multiplicity histogram of all points where two or more lines meet.
pub fn rich_points<L: ArrangementLine>(lines: &[L]) -> Result<RichPointHistogram> {
    let hist = (0..lines.len())
        .into_par_iter()
        .map(|i| line_census(lines, i))
        .try_reduce(RichPointHistogram::default, |a, b| Ok(a.merge(b)))?;
    let from_points: u64 = hist.finite.iter().map(|(&k, &c)| c * choose2(k)).sum();
    if from_points != hist.finite_pairs {
        return Err(Error::Invariant(format!(
            "{} meeting pairs but Σ count·C(k,2) = {from_points}",
            hist.finite_pairs
        )));
    }
    Ok(hist)
}

/// `Σ count·C(k, 3)` over finite and translation points.
pub fn triple_count(h: &RichPointHistogram) -> u64 {
    h.counted().iter().map(|(&k, &c)| c * choose3(k)).sum()
}

/// Triples of vertical lines sharing the identity, kept apart from [`triple_count`].
pub fn identity_triples(h: &RichPointHistogram) -> u64 {
    h.identity.iter().map(|(&k, &c)| c * choose3(k)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DyadicBuckets {
    pub k0: u64,
    /// `j` → number of counted points with multiplicity in `[2^j, 2^{j+1})` and `≥ k0`.
    pub buckets: BTreeMap<u32, u64>,
    /// `Σ_j (2^{j+1})³ · bucket_j`.
    pub majorant: u128,
}

/// Dyadic binning of the counted points with multiplicity `≥ k0`.
pub fn dyadic_buckets(h: &RichPointHistogram, k0: u64) -> DyadicBuckets {
    let k0 = k0.max(2);
    let mut buckets = BTreeMap::new();
    for (&k, &c) in h.counted().range(k0..) {
        *buckets.entry(k.ilog2()).or_default() += c;
    }
    let majorant = buckets.iter().map(|(&j, &c)| (1u128 << (3 * (j + 1))) * c as u128).sum();
    DyadicBuckets { k0, buckets, majorant }
}

/// Incidence envelope a lift is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `N³/k²`, lines in R³.
    GuthKatz,
    /// `N⁴/k³`, lines in a plane (here C²).
    SzemerediTrotter,
}

impl Regime {
    fn envelope(self, n: u64, k: u64) -> Rat {
        let (n, k) = (Rat::from_int(n as i64), Rat::from_int(k as i64));
        match self {
            Regime::GuthKatz => &n * &n * &n / (&k * &k),
            Regime::SzemerediTrotter => &n * &n * &n * &n / (&k * &k * &k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeRow {
    pub k: u64,
    pub count_exact: u64,
    pub count_at_least: u64,
    /// `2^j` with `2^j ≤ k < 2^{j+1}`.
    pub dyadic_bucket: u64,
    /// Finite points of multiplicity `≥ k`, divided by the envelope at `k`.
    pub envelope_ratio: f64,
}

/// Finite points of multiplicity at least `k`, over the regime's envelope.
pub fn envelope_ratio(h: &RichPointHistogram, n: u64, regime: Regime, k: u64) -> Rat {
    let at_least: u64 = h.finite.range(k..).map(|(_, &c)| c).sum();
    Rat::from_int(at_least as i64) / regime.envelope(n, k.max(1))
}

/// Ratio table for `k = 2..=max multiplicity`; diagnostic only.
pub fn bound_diagnostics(h: &RichPointHistogram, n: u64, regime: Regime) -> Vec<EnvelopeRow> {
    (2..=h.max_finite_multiplicity())
        .map(|k| EnvelopeRow {
            k,
            count_exact: h.finite.get(&k).copied().unwrap_or(0),
            count_at_least: h.finite.range(k..).map(|(_, &c)| c).sum(),
            dyadic_bucket: 1 << k.ilog2(),
            envelope_ratio: envelope_ratio(h, n, regime, k).to_f64(),
        })
        .collect()
}

/// CSV with header `k,count_exact,count_at_least,dyadic_bucket,envelope_ratio`.
pub fn envelope_csv(rows: &[EnvelopeRow]) -> String {
    let mut out = String::from("k,count_exact,count_at_least,dyadic_bucket,envelope_ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{:e}\n",
            r.k, r.count_exact, r.count_at_least, r.dyadic_bucket, r.envelope_ratio
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcurrencyAudit {
    pub ok: bool,
    pub limit: u64,
    pub max_multiplicity: u64,
    pub witness: Option<RichPoint>,
}

/// No finite point may carry more than `n` lines.
pub fn concurrency_audit(h: &RichPointHistogram, n: u64) -> ConcurrencyAudit {
    let max = h.max_finite_multiplicity();
    ConcurrencyAudit {
        ok: max <= n,
        limit: n,
        max_multiplicity: max,
        witness: if max > n { h.richest.clone() } else { None },
    }
}

/// For a conformal lift `P → Q`: every `(0, q)` with `q ∈ Q` meets exactly the
/// `|P|` lines `L_pq`.
pub fn a_zero_audit(h: &RichPointHistogram, n_from: u64, n_to: u64) -> bool {
    if n_from < 2 {
        return h.a_zero.is_empty();
    }
    h.a_zero.len() == 1 && h.a_zero.get(&n_from) == Some(&n_to)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoplanarityAudit {
    pub ok: bool,
    pub limit: u64,
    pub max_coplanar: u64,
    pub planes_checked: u64,
}

fn cross3(u: &R3, v: &R3) -> R3 {
    [&u[1] * &v[2] - &u[2] * &v[1], &u[2] * &v[0] - &u[0] * &v[2], &u[0] * &v[1] - &u[1] * &v[0]]
}

fn dot3(u: &R3, v: &R3) -> Rat {
    &u[0] * &v[0] + &u[1] * &v[1] + &u[2] * &v[2]
}

fn sub3(u: &R3, v: &R3) -> R3 {
    [&u[0] - &v[0], &u[1] - &v[1], &u[2] - &v[2]]
}

/// Brute-force count of motion lines per plane spanned by two coplanar lines;
/// `ok` iff no plane holds more than `n`.
pub fn coplanarity_audit(lines: &[MotionLine], n: u64) -> Result<CoplanarityAudit> {
    let max_lines = COPLANARITY_CAP * COPLANARITY_CAP;
    if lines.len() > max_lines {
        return Err(Error::CapExceeded { what: "coplanarity audit", cap: COPLANARITY_CAP, n: n as usize });
    }
    let mut seen: HashSet<(R3, Rat)> = HashSet::new();
    let mut best = 0u64;
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            let (li, lj) = (&lines[i], &lines[j]);
            let normal = match li.meet(lj)? {
                Some(MeetPoint::R3(_)) => cross3(&li.direction, &lj.direction),
                Some(_) => cross3(&li.direction, &sub3(&lj.anchor, &li.anchor)),
                None => continue,
            };
            // Scale so the first nonzero coordinate is 1; (normal, offset) is then canonical.
            let lead = normal.iter().find(|c| !c.is_zero()).cloned().expect("coplanar pair spans a plane");
            let normal = normal.map(|c| c / &lead);
            let offset = dot3(&normal, &li.anchor);
            if !seen.insert((normal.clone(), offset.clone())) {
                continue;
            }
            let count = lines
                .iter()
                .filter(|l| dot3(&normal, &l.direction).is_zero() && dot3(&normal, &l.anchor) == offset)
                .count() as u64;
            best = best.max(count);
        }
    }
    Ok(CoplanarityAudit { ok: best <= n, limit: n, max_coplanar: best, planes_checked: seen.len() as u64 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftKind {
    Motion,
    Conformal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArrangementOptions {
    /// Keep the vertical lines `L_pp` of the motion lift.
    pub include_identity_lines: bool,
    /// Conjugate the sources of the conformal lift.
    pub reflections: bool,
    pub cap: usize,
    pub threads: usize,
}

impl Default for ArrangementOptions {
    fn default() -> Self {
        ArrangementOptions {
            include_identity_lines: true,
            reflections: false,
            cap: DEFAULT_ARRANGEMENT_CAP,
            threads: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ArrangementReport {
    pub lift: LiftKind,
    pub n_points: usize,
    pub n_lines: usize,
    pub histogram: RichPointHistogram,
    pub triple_count: u64,
    pub identity_triples: u64,
    pub dyadic: DyadicBuckets,
    pub envelope: Vec<EnvelopeRow>,
    pub concurrency: ConcurrencyAudit,
    /// Conformal lift only.
    pub a_zero_ok: Option<bool>,
    /// Motion lift with `N ≤ COPLANARITY_CAP` only.
    pub coplanarity: Option<CoplanarityAudit>,
}

impl ArrangementReport {
    /// All enabled audits passed.
    pub fn audits_ok(&self) -> bool {
        self.concurrency.ok && self.a_zero_ok.unwrap_or(true) && self.coplanarity.as_ref().is_none_or(|c| c.ok)
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { what: "arrangement", cap, n })
    } else {
        Ok(())
    }
}

/// Motion lines `L_pq`, `p ∈ from`, `q ∈ to`, and their rich points.
pub fn motion_arrangement(from: &PointSet, to: &PointSet, opts: ArrangementOptions) -> Result<ArrangementReport> {
    let n = from.len().max(to.len());
    check_cap(n, opts.cap)?;
    let lines = lift_all(from, to, opts.include_identity_lines);
    let histogram = with_threads(opts.threads, || rich_points(&lines))?;
    let coplanarity = if n <= COPLANARITY_CAP { Some(coplanarity_audit(&lines, n as u64)?) } else { None };
    Ok(summarize(LiftKind::Motion, n, lines.len(), histogram, Regime::GuthKatz, None, coplanarity))
}

/// Conformal lines `L_pq`, `p ∈ from`, `q ∈ to`, and their rich points.
pub fn conformal_arrangement(from: &PointSet, to: &PointSet, opts: ArrangementOptions) -> Result<ArrangementReport> {
    let n = from.len().max(to.len());
    check_cap(n, opts.cap)?;
    let lines = lift_all_c(from, to, opts.reflections);
    let histogram = with_threads(opts.threads, || rich_points(&lines))?;
    let a_zero = a_zero_audit(&histogram, from.len() as u64, to.len() as u64);
    Ok(summarize(LiftKind::Conformal, n, lines.len(), histogram, Regime::SzemerediTrotter, Some(a_zero), None))
}

fn summarize(
    lift: LiftKind,
    n: usize,
    n_lines: usize,
    histogram: RichPointHistogram,
    regime: Regime,
    a_zero_ok: Option<bool>,
    coplanarity: Option<CoplanarityAudit>,
) -> ArrangementReport {
    ArrangementReport {
        lift,
        n_points: n,
        n_lines,
        triple_count: triple_count(&histogram),
        identity_triples: identity_triples(&histogram),
        dyadic: dyadic_buckets(&histogram, 3),
        envelope: bound_diagnostics(&histogram, n as u64, regime),
        concurrency: concurrency_audit(&histogram, n as u64),
        a_zero_ok,
        coplanarity,
        histogram,
    }
}
