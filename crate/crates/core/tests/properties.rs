mod common;

use common::*;
use parsum::classify::{
    min_annihilator, scan_shifts, sigma_equivalent_bounded, special_test, EquivalenceResult, FactorClass,
};
use parsum::field::ShiftSystem;
use parsum::linalg::mat_mul;
use parsum::multipoly::{factor_with_hints, TRat};
use parsum::shift::{gp_form, sigma_x, solve_shift, ShiftSolution};
use parsum::telescope::{parallel_sum_factored, TelescopeConfig, TelescopeResult};
use parsum::{XPoly, XRat};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn system(k: usize) -> ShiftSystem {
    match k % 4 {
        0 => worked(),
        1 => fib(),
        2 => strange(),
        _ => ShiftSystem::make_companion(&[XRat::poly(XPoly::from_i64(&[1, 1])), XRat::int(2)]).unwrap(),
    }
}

fn random_rat(r: &mut ChaCha8Rng, n: usize) -> TRat {
    loop {
        let num = random_tpoly(r, n, 2, 1);
        let den = random_tpoly(r, n, 2, 1);
        if !num.is_zero() && !den.is_zero() {
            return TRat::new(num, den);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sigma_x_round_trip(seed in any::<u64>(), k in -10i64..=10) {
        let r = shifty_xrat(&mut rng(seed));
        prop_assert_eq!(sigma_x(&sigma_x(&r, k), -k), r);
    }

    #[test]
    fn solve_shift_recovers_planted_shift(seed in any::<u64>(), i in -8i64..=8) {
        let mut g = rng(seed);
        let a = shifty_xrat(&mut g);
        prop_assume!(!a.is_constant());
        prop_assert_eq!(solve_shift(&a, &sigma_x(&a, i)), ShiftSolution::Unique(i));
    }

    #[test]
    fn gp_form_reproduces_input(seed in any::<u64>()) {
        let r = shifty_xrat(&mut rng(seed));
        let gp = gp_form(&r).unwrap();
        prop_assert_eq!(gp.value(), r);
        prop_assert!(gp.check_invariants());
        for h in 0..=16 {
            prop_assert!(gp.b.gcd(&gp.c.shift_int(h)).is_one());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn apply_sigma_round_trip(seed in any::<u64>(), which in 0usize..4, k in -6i64..=6) {
        let sys = system(which);
        let f = random_rat(&mut rng(seed), 2);
        prop_assert_eq!(sys.apply_rat(&sys.apply_rat(&f, k), -k), f);
    }

    #[test]
    fn apply_sigma_is_a_homomorphism(seed in any::<u64>(), which in 0usize..4, k in -4i64..=4) {
        let sys = system(which);
        let mut g = rng(seed);
        let u = random_tpoly(&mut g, 2, 2, 1);
        let v = random_tpoly(&mut g, 2, 2, 1);
        prop_assert_eq!(sys.apply_poly(&(&u * &v), k), &sys.apply_poly(&u, k) * &sys.apply_poly(&v, k));
        prop_assert_eq!(sys.apply_poly(&(&u + &v), k), &sys.apply_poly(&u, k) + &sys.apply_poly(&v, k));
    }

    /// Uniqueness of the shift for normal p, checked against a direct scan.
    #[test]
    fn equivalence_shift_is_unique(seed in any::<u64>(), which in 0usize..4, i in -5i64..=5) {
        let sys = system(which);
        let mut g = rng(seed);
        let p = normal_linear(&mut g, &sys, 0.3);
        let q = sys.apply_poly(&p, i).scale(&unit(&mut g));
        match sigma_equivalent_bounded(&sys, &p, &q, 25).unwrap() {
            EquivalenceResult::Equivalent { i: got, .. } => {
                prop_assert_eq!(got, i);
                for j in -10..=10 {
                    if j != i {
                        prop_assert!(parsum::classify::proportional(&sys.apply_poly(&p, j), &q).is_none());
                    }
                }
            }
            EquivalenceResult::NotEquivalent => prop_assert!(false, "missed shift {} for {}", i, p),
        }
    }

    /// The exact algorithm agrees with a direct scan on unrelated forms.
    #[test]
    fn distinct_orbits_stay_apart(seed in any::<u64>()) {
        let sys = worked();
        let mut g = rng(seed);
        let p = normal_linear(&mut g, &sys, 0.0);
        let q = normal_linear(&mut g, &sys, 0.0);
        let direct = scan_shifts(&sys, &p, &q, 25);
        prop_assert_eq!(sigma_equivalent_bounded(&sys, &p, &q, 25).unwrap(), direct);
    }

    #[test]
    fn annihilators_agree_with_special_test(seed in any::<u64>(), which in 0usize..4) {
        let sys = system(which);
        let mut g = rng(seed);
        let p = normal_linear(&mut g, &sys, 0.3);
        let l = min_annihilator(&sys, &p);
        prop_assert!(l.order() >= 2);
        prop_assert!(l.term_count() >= 3, "normal {} has operator {}", p, l);
        prop_assert!(l.apply(&sys, &p).is_zero());
    }

    #[test]
    fn dispersion_grows_by_one_under_delta(seed in any::<u64>(), which in 0usize..3) {
        let sys = system(which);
        let mut g = rng(seed);
        let p = normal_linear(&mut g, &sys, 0.3);
        let k = g.gen_range(0..=3);
        let den = &p * &sys.apply_poly(&p, k);
        let f = TRat::new(random_tpoly(&mut g, 2, 1, 1), den);
        prop_assume!(!f.is_zero());
        let hints = shifted_hints(&sys, &[p], -1..=5);
        let d = dispersion_with_hints(&sys, f.den(), &hints).unwrap();
        let dd = dispersion_with_hints(&sys, sys.delta(&f).den(), &hints);
        prop_assert_eq!(dd, Some(d + 1));
    }

    /// NotSummable only ever comes with the dispersion-zero certificate.
    #[test]
    fn not_summable_means_dispersion_zero(seed in any::<u64>(), which in 0usize..2) {
        let sys = system(which);
        let mut g = rng(seed);
        let p = normal_linear(&mut g, &sys, 0.0);
        let f = TRat::new(random_tpoly(&mut g, 2, 1, 1), p.clone());
        prop_assume!(!f.is_zero() && !f.den().is_constant());
        let den = factor_with_hints(f.den(), &[p], &caps()).unwrap();
        let cfg = TelescopeConfig { max_t_degree: 3, max_x_degree: 2, ..TelescopeConfig::default() };
        let (res, trace) = parallel_sum_factored(&sys, &f, &den, &cfg).unwrap();
        prop_assert_eq!(trace.dispersion, Some(0));
        prop_assert!(matches!(res, TelescopeResult::NotSummable { .. }), "expected NotSummable, got {}", res);
    }
}

#[test]
fn system_power_recursion() {
    for which in 0..4 {
        let sys = system(which);
        for s in 1..=4usize {
            let shifted: Vec<Vec<XRat>> =
                sys.matrix().iter().map(|row| row.iter().map(|e| e.shift(s as i64)).collect()).collect();
            assert_eq!(sys.system_power(s + 1), mat_mul(&shifted, &sys.system_power(s)));
        }
    }
}

#[test]
fn constructed_specials_have_order_one_annihilators() {
    // sigma(t1 - 2 t0) = 3 (t1 - 2 t0) on the worked example
    let sys = worked();
    for p in [lin(-2, 1), lin(-3, 1)] {
        let l = min_annihilator(&sys, &p);
        assert_eq!(l.order(), 1);
        assert!(matches!(special_test(&sys, &p), FactorClass::Special { ell: 1, .. }));
    }
    // A^2 = -4 I: sigma^2 fixes every linear form up to -4
    let sys = ShiftSystem::make_general(vec![vec![XRat::int(0), XRat::int(2)], vec![XRat::int(-2), XRat::int(0)]]).unwrap();
    let p = lin(1, 3);
    let l = min_annihilator(&sys, &p);
    assert_eq!(l.coeffs, vec![XRat::int(4), XRat::zero(), XRat::one()]);
    assert_eq!(special_test(&sys, &p), FactorClass::Special { ell: 2, unit: XRat::int(-4) });
    assert!(l.apply(&sys, &p).is_zero());
}
