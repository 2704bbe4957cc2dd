use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tricensus::arrangement::{
    conformal_arrangement, coplanarity_audit, motion_arrangement, rich_points, triple_count, ArrangementOptions,
    RichPointHistogram,
};
use tricensus::conformal::lift_all_c;
use tricensus::generators::{default_mirror_line, grid, mirror, random_rational, RandomParams};
use tricensus::motion::lift_all;
use tricensus::oracle::{enumerate_motions_between, enumerate_similitudes_between};
use tricensus::PointSet;

fn small_set(seed: u64, n: usize) -> PointSet {
    random_rational(&RandomParams { n, seed, range: 2, denom_bits: 0 }).unwrap()
}

fn sections(h: &RichPointHistogram) -> impl PartialEq + std::fmt::Debug {
    (h.finite.clone(), h.translation.clone(), h.identity.clone(), h.a_zero.clone(), h.finite_pairs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn histograms_ignore_line_order(seed in 0u64..10_000, n in 3usize..7, shuffle in any::<u64>()) {
        let ps = small_set(seed, n);
        let mut rng = ChaCha8Rng::seed_from_u64(shuffle);

        let mut motion = lift_all(&ps, &ps, true);
        let before = rich_points(&motion).unwrap();
        motion.shuffle(&mut rng);
        prop_assert_eq!(sections(&before), sections(&rich_points(&motion).unwrap()));

        let mut conformal = lift_all_c(&ps, &ps, false);
        let before = rich_points(&conformal).unwrap();
        conformal.shuffle(&mut rng);
        prop_assert_eq!(sections(&before), sections(&rich_points(&conformal).unwrap()));
    }
}

#[test]
fn motions_onto_the_mirror_image() {
    // Lifting P → P' turns mirror-congruent pairs into direct ones.
    for seed in 0..6 {
        let p = small_set(seed, 6);
        let image = mirror(&p, &default_mirror_line(&p)).unwrap();
        let r = motion_arrangement(&p, &image, ArrangementOptions::default()).unwrap();
        let table = enumerate_motions_between(&p, &image);
        assert!(table.identity.is_none());
        assert!(r.histogram.identity.is_empty());
        assert_eq!(triple_count(&r.histogram), table.non_identity_triples(), "seed {seed}");
    }
}

#[test]
fn reflected_conformal_lift_matches_oracle() {
    for seed in 0..6 {
        let p = small_set(seed, 6);
        let opts = ArrangementOptions { reflections: true, ..Default::default() };
        let r = conformal_arrangement(&p, &p, opts).unwrap();
        let table = enumerate_similitudes_between(&p, &p, true);
        assert_eq!(triple_count(&r.histogram), table.triples(), "seed {seed}");
        assert_eq!(r.a_zero_ok, Some(true));
    }
}

#[test]
fn toy_scale_coplanarity() {
    let mut sets = vec![grid(2).unwrap(), grid(3).unwrap()];
    sets.extend((0..5).map(|s| small_set(s, 8)));
    for ps in &sets {
        let n = ps.len() as u64;
        let audit = coplanarity_audit(&lift_all(ps, ps, true), n).unwrap();
        assert!(audit.ok, "{audit:?}");
        assert!(audit.max_coplanar >= 2);
    }
    let g = grid(3).unwrap();
    assert_eq!(coplanarity_audit(&lift_all(&g, &g, true), 9).unwrap().max_coplanar, 9);
}
