mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ietlab::diagnostics::{correlation, invariance_window_measure, rigidity_measure};
use ietlab::dynpart::{lin_rec_stat, partition};
use ietlab::{Iet, IntervalUnion, Scalar, StepFunction};

fn arb_iet(max_d: usize) -> impl Strategy<Value = Iet> {
    any::<u64>().prop_map(move |seed| random_iet(&mut ChaCha8Rng::seed_from_u64(seed), max_d))
}

fn arb_fraction() -> impl Strategy<Value = Scalar> {
    (0i64..1000).prop_map(|k| Scalar::ratio(k, 1000))
}

fn arb_union() -> impl Strategy<Value = IntervalUnion> {
    prop::collection::vec((arb_fraction(), arb_fraction()), 1..4).prop_map(|pairs| {
        IntervalUnion::new(pairs.into_iter().map(|(a, b)| {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            ietlab::Interval::new(lo, hi)
        }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edges_match_one_sided_limits(iet in arb_iet(6)) {
        let d = iet.d();
        let images = iet.permutation().images().to_vec();
        for (j, k) in iet.permutation().endpoint_graph().edges() {
            let (plus_k, _) = iet.one_sided_limits(iet.omega(k));
            let (_, minus_j) = iet.one_sided_limits(iet.omega(j));
            if j == 0 {
                prop_assert_eq!(plus_k.unwrap(), Scalar::zero());
            } else if k == d {
                prop_assert_eq!(minus_j.unwrap(), Scalar::one());
            } else {
                prop_assert_eq!(minus_j.clone().unwrap(), plus_k.clone().unwrap());
                prop_assert_eq!(minus_j.unwrap(), image_right(iet.lengths(), &images, j));
                prop_assert_eq!(plus_k.unwrap(), image_left(iet.lengths(), &images, k + 1));
            }
        }
    }

    #[test]
    fn evaluate_inverse_round_trips(iet in arb_iet(6), x in arb_fraction()) {
        let y = iet.evaluate(&x).unwrap();
        prop_assert_eq!(iet.evaluate_inverse(&y).unwrap(), x.clone());
        prop_assert_eq!(iet.inverse().evaluate(&y).unwrap(), x);
    }

    #[test]
    fn powers_preserve_measure_and_bound_pieces(iet in arb_iet(5), n in 1i64..12) {
        let p = iet.power(n);
        prop_assert!(p.is_measure_preserving());
        prop_assert!(p.piece_count() <= n as usize * (iet.d() - 1) + 1);
        prop_assert!(p.compose(&p.inverse()).is_identity());
        prop_assert_eq!(iet.power(-n), p.inverse());
    }

    #[test]
    fn powers_agree_with_iteration(iet in arb_iet(5), m in 0i64..6, n in 0i64..6) {
        let total = iet.power(m + n);
        for (piece, _) in total.pieces() {
            let mid = (&piece.left + &piece.right) / Scalar::from_integer(2);
            let stepped = iterate(&iet, &iterate(&iet, &mid, n), m);
            prop_assert_eq!(total.evaluate(&mid).unwrap(), stepped);
        }
    }

    #[test]
    fn correlation_symmetric_under_inverse(
        iet in arb_iet(5), a in arb_union(), b in arb_union(), n in 0i64..8
    ) {
        prop_assert_eq!(correlation(&iet, &a, &b, n), correlation(&iet.inverse(), &b, &a, n));
        let full = IntervalUnion::single(Scalar::zero(), Scalar::one());
        prop_assert_eq!(correlation(&iet, &full, &b, n), b.measure());
    }

    #[test]
    fn rigidity_sum_rule_and_monotonicity(iet in arb_iet(5), n in 1i64..10, e1 in arb_fraction(), e2 in arb_fraction()) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let displacement = iet.displacement_profile(n);
        let close = displacement.measure_where(|v| v.abs() <= lo);
        prop_assert_eq!(rigidity_measure(&iet, n, &lo) + close, Scalar::one());
        prop_assert!(rigidity_measure(&iet, n, &hi) <= rigidity_measure(&iet, n, &lo));
    }

    #[test]
    fn window_measure_nests(iet in arb_iet(4), set in arb_union(), b in 0usize..3, shift in 1i64..3) {
        let f = StepFunction::indicator(&set);
        let delta = Scalar::ratio(1, 2);
        let wide = invariance_window_measure(&iet, &f, &delta, b + 1, shift);
        let narrow = invariance_window_measure(&iet, &f, &delta, b, shift);
        prop_assert!(wide <= narrow);
    }

    #[test]
    fn eps_matches_brute_force(iet in arb_iet(4), n in 0usize..15) {
        prop_assert_eq!(partition(&iet, n).eps, eps_oracle(&iet, n));
    }
}

#[test]
fn rigidity_zero_at_periodic_times() {
    let third = Iet::rotation(s("1/3")).unwrap();
    assert_eq!(rigidity_measure(&third, 6, &s("1/1000")), Scalar::zero());
}

#[test]
fn eps_nonincreasing_for_quadratic_systems() {
    let fhz = Iet::new(
        vec![s("3/2-1/2*sqrt(5)"), s("-1/4+1/4*sqrt(5)"), s("-1/4+1/4*sqrt(5)")],
        "3 2 1".parse().unwrap(),
    )
    .unwrap();
    let stat = lin_rec_stat(&fhz, 300);
    assert!(stat.rows.windows(2).all(|w| w[1].eps_n <= w[0].eps_n));
    for n in [1, 7, 30] {
        assert_eq!(stat.rows[n - 1].eps_n, eps_oracle(&fhz, n));
    }
}
