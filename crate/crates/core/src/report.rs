//! Serializable run summaries: census reports, oracle cross-checks and
//! lattice sweeps.

use serde::Serialize;

use crate::arrangement::{
    conformal_arrangement, motion_arrangement, triple_count, ArrangementOptions, ArrangementReport,
};
use crate::census::{census, class_lower_bound, pair_counts, CensusOptions, ClassCensus};
use crate::error::{Error, Result};
use crate::generators::grid;
use crate::keys::{KeyKind, TriangleKey};
use crate::oracle::{
    census_equivalence_check_with, enumerate_motions, enumerate_similitudes, halving_check, EquivalenceReport,
    HalvingReport,
};
use crate::point::{validate_hypothesis, Hypothesis, PointSet};
use crate::rat::Rat;

/// Default limit on `N` for oracle runs.
pub const DEFAULT_ORACLE_CAP: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassEntry {
    pub key: TriangleKey,
    pub m: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub n_points: usize,
    pub n_triangles: u64,
    pub key_kind: KeyKind,
    pub include_degenerate: bool,
    pub n_classes: usize,
    #[serde(rename = "Q")]
    pub q: u64,
    pub sum_m_sq: u64,
    pub cs_lower_bound_num: String,
    pub cs_lower_bound_den: String,
    /// `classes / N²`.
    pub classes_over_n2: Rat,
    /// `classes · ln N / N²`.
    pub classes_log_n_over_n2: f64,
    pub hypothesis: Hypothesis,
    pub top_multiplicities: Vec<ClassEntry>,
}

impl CensusReport {
    pub fn from_census(c: &ClassCensus, hypothesis: Hypothesis, top: usize) -> Self {
        let pc = pair_counts(c);
        let bound = class_lower_bound(c);
        let n = c.n_points as f64;
        let classes = c.n_classes();
        CensusReport {
            n_points: c.n_points,
            n_triangles: c.n_triangles,
            key_kind: c.kind,
            include_degenerate: c.include_degenerate,
            n_classes: classes,
            q: pc.q,
            sum_m_sq: pc.sum_m_sq,
            cs_lower_bound_num: bound.numer().to_string(),
            cs_lower_bound_den: bound.denom().to_string(),
            classes_over_n2: Rat::new(classes as i64, (c.n_points * c.n_points) as i64),
            classes_log_n_over_n2: classes as f64 * n.ln() / (n * n),
            hypothesis,
            top_multiplicities: c.top(top).into_iter().map(|(key, m)| ClassEntry { key, m }).collect(),
        }
    }
}

/// Census plus summary statistics; fails on a hypothesis violation when `strict`.
pub fn census_report(
    points: &PointSet,
    kind: KeyKind,
    opts: CensusOptions,
    strict: bool,
    top: usize,
) -> Result<CensusReport> {
    let hypothesis = validate_hypothesis(points);
    if strict {
        if let Hypothesis::Violation { n, max_collinear, .. } = &hypothesis {
            return Err(Error::HypothesisViolation { n: *n, max_collinear: *max_collinear });
        }
    }
    let c = census(points, kind, opts)?;
    Ok(CensusReport::from_census(&c, hypothesis, top))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TripleComparison {
    pub oracle: u64,
    pub arrangement: u64,
}

impl TripleComparison {
    pub fn ok(&self) -> bool {
        self.oracle == self.arrangement
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCheckReport {
    pub n_points: usize,
    pub equivalence: Vec<EquivalenceReport>,
    /// Non-identity motions against the R³ arrangement without its identity section.
    pub motion_triples: TripleComparison,
    /// Similitudes against the C² arrangement at `a ≠ 0`.
    pub similitude_triples: TripleComparison,
    pub motion_concurrency_ok: bool,
    pub conformal_concurrency_ok: bool,
    pub a_zero_ok: bool,
    pub halving: HalvingReport,
    pub ok: bool,
}

/// Runs every oracle cross-check on one point set.
pub fn oracle_check(points: &PointSet, cap: usize, threads: usize) -> Result<OracleCheckReport> {
    if points.len() > cap {
        return Err(Error::CapExceeded { what: "oracle", cap, n: points.len() });
    }
    let equivalence = KeyKind::ALL
        .iter()
        .map(|&kind| {
            census_equivalence_check_with(points, kind, cap, |a, b, c| crate::keys::triangle_key(kind, a, b, c, false))
        })
        .collect::<Result<Vec<_>>>()?;

    let opts = ArrangementOptions { cap, threads, ..Default::default() };
    let motion = motion_arrangement(points, points, opts)?;
    let conformal = conformal_arrangement(points, points, opts)?;
    let motions = enumerate_motions(points)?;
    let similitudes = enumerate_similitudes(points)?;
    let motion_triples =
        TripleComparison { oracle: motions.non_identity_triples(), arrangement: triple_count(&motion.histogram) };
    let similitude_triples =
        TripleComparison { oracle: similitudes.triples(), arrangement: triple_count(&conformal.histogram) };
    let halving = halving_check(points)?;
    let a_zero_ok = conformal.a_zero_ok.unwrap_or(false);

    let ok = equivalence.iter().all(EquivalenceReport::ok)
        && motion_triples.ok()
        && similitude_triples.ok()
        && motion.concurrency.ok
        && conformal.concurrency.ok
        && a_zero_ok
        && halving.ok();
    Ok(OracleCheckReport {
        n_points: points.len(),
        equivalence,
        motion_triples,
        similitude_triples,
        motion_concurrency_ok: motion.concurrency.ok,
        conformal_concurrency_ok: conformal.concurrency.ok,
        a_zero_ok,
        halving,
        ok,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub m: usize,
    pub n: usize,
    pub n_triangles: u64,
    pub classes: usize,
    pub classes_over_n2: f64,
    pub classes_log_n_over_n2: f64,
    pub classes_over_triangles: f64,
}

/// Census of each grid `m × m`.
pub fn grid_sweep(ms: &[usize], kind: KeyKind, opts: CensusOptions) -> Result<Vec<SweepRow>> {
    ms.iter()
        .map(|&m| {
            let c = census(&grid(m)?, kind, opts)?;
            let n = (m * m) as f64;
            let classes = c.n_classes() as f64;
            Ok(SweepRow {
                m,
                n: m * m,
                n_triangles: c.n_triangles,
                classes: c.n_classes(),
                classes_over_n2: classes / (n * n),
                classes_log_n_over_n2: classes * n.ln() / (n * n),
                classes_over_triangles: classes / c.n_triangles as f64,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out =
        String::from("m,n,n_triangles,classes,classes_over_n2,classes_log_n_over_n2,classes_over_triangles\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{:.6},{:.6},{:.6}\n",
            r.m, r.n, r.n_triangles, r.classes, r.classes_over_n2, r.classes_log_n_over_n2, r.classes_over_triangles
        ));
    }
    out
}

/// Everything known about one point set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bundle {
    pub censuses: Vec<CensusReport>,
    pub motion_arrangement: Option<ArrangementReport>,
    pub conformal_arrangement: Option<ArrangementReport>,
    pub oracle: Option<OracleCheckReport>,
}

impl Bundle {
    pub fn ok(&self) -> bool {
        self.motion_arrangement.as_ref().is_none_or(ArrangementReport::audits_ok)
            && self.conformal_arrangement.as_ref().is_none_or(ArrangementReport::audits_ok)
            && self.oracle.as_ref().is_none_or(|o| o.ok)
    }
}

/// All four censuses, plus arrangements and oracle checks where `N` is
/// within their caps.
pub fn bundle(
    points: &PointSet,
    census_opts: CensusOptions,
    arrangement_opts: ArrangementOptions,
    oracle_cap: usize,
    top: usize,
) -> Result<Bundle> {
    let censuses =
        KeyKind::ALL.iter().map(|&k| census_report(points, k, census_opts, false, top)).collect::<Result<Vec<_>>>()?;
    let n = points.len();
    let (motion, conformal) = if n <= arrangement_opts.cap {
        (
            Some(motion_arrangement(points, points, arrangement_opts)?),
            Some(conformal_arrangement(points, points, arrangement_opts)?),
        )
    } else {
        (None, None)
    };
    let oracle = if n <= oracle_cap { Some(oracle_check(points, oracle_cap, census_opts.threads)?) } else { None };
    Ok(Bundle { censuses, motion_arrangement: motion, conformal_arrangement: conformal, oracle })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{random_rational, RandomParams};

    #[test]
    fn grid2_census_report() {
        let r = census_report(&grid(2).unwrap(), KeyKind::CongruenceFull, CensusOptions::default(), false, 5).unwrap();
        assert_eq!((r.n_classes, r.q, r.sum_m_sq), (1, 6, 16));
        assert_eq!((r.cs_lower_bound_num.as_str(), r.cs_lower_bound_den.as_str()), ("1", "1"));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["Q"], 6);
        assert_eq!(json["key_kind"], "congruence-full");
        assert_eq!(json["classes_over_n2"], "1/16");
        assert_eq!(json["top_multiplicities"][0]["m"], 4);
        assert_eq!(json["top_multiplicities"][0]["key"], serde_json::json!(["1/1", "1/1", "2/1"]));
    }

    #[test]
    fn strict_mode_rejects_violations() {
        let ps = PointSet::from_ints(&[(0, 0), (1, 0), (2, 0), (0, 1)]).unwrap();
        let opts = CensusOptions::default();
        assert!(census_report(&ps, KeyKind::CongruenceFull, opts, true, 3).is_err());
        let r = census_report(&ps, KeyKind::CongruenceFull, opts, false, 3).unwrap();
        assert!(!r.hypothesis.is_ok());
    }

    #[test]
    fn oracle_check_on_random_set() {
        let ps = random_rational(&RandomParams::new(6, 1)).unwrap();
        let r = oracle_check(&ps, DEFAULT_ORACLE_CAP, 0).unwrap();
        assert!(r.ok, "{r:?}");
        assert_eq!(r.equivalence.len(), 4);
    }

    #[test]
    fn sweep_shape() {
        let rows = grid_sweep(&[2, 3], KeyKind::CongruenceFull, CensusOptions::default()).unwrap();
        assert_eq!(rows.iter().map(|r| r.classes).collect::<Vec<_>>(), vec![1, 8]);
        let csv = sweep_csv(&rows);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(2).unwrap().starts_with("3,9,76,8,"));
    }

    #[test]
    fn bundle_respects_caps() {
        let g = grid(4).unwrap();
        let b = bundle(&g, CensusOptions::default(), ArrangementOptions::default(), DEFAULT_ORACLE_CAP, 3).unwrap();
        assert_eq!(b.censuses.len(), 4);
        assert!(b.motion_arrangement.is_some() && b.oracle.is_none());
        assert!(b.ok());
    }
}
