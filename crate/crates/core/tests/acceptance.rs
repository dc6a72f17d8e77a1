//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. All checks are exact; the only tolerances are wall-clock limits.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use parsum::classify::{
    sigma_equivalent, sigma_equivalent_bounded, special_test, split_factorization, EquivalenceResult, FactorClass,
};
use parsum::field::ShiftSystem;
use parsum::multipoly::{factor_with_hints, TPoly, TRat};
use parsum::shift::gp_form;
use parsum::specials::{cfinite_specials, find_linear_specials};
use parsum::telescope::{parallel_sum, parallel_sum_factored, verify, TelescopeConfig, TelescopeResult};
use parsum::{rat, XPoly, XRat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2026;

const LIMIT_EXAMPLE: Duration = Duration::from_secs(5);
const LIMIT_STRANGE: Duration = Duration::from_secs(2);
const LIMIT_ROUND_TRIP: Duration = Duration::from_secs(300);

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    check(t <= limit, || format!("took {:.2?}, limit {:?}", t, limit))?;
    Ok(t)
}

fn worked_example_end_to_end() -> Outcome {
    let start = Instant::now();
    let sys = worked();
    let f = example_f();
    let g = match parallel_sum(&sys, &f, &TelescopeConfig::default()).map_err(|e| e.to_string())? {
        TelescopeResult::Found { g } => g,
        r => return Err(format!("expected Found, got {}", r)),
    };
    check(verify(&sys, &g, &f), || "verify(g, f) is false".into())?;
    check(sys.delta(&g) == f, || "delta(g) != f".into())?;
    let printed = (&lin(1, 1).pow(3) * &lin(-1, 1).pow(2)).scale(&XRat::int(36));
    let split = split_factorization(&sys, g.den(), &caps()).map_err(|e| e.to_string())?;
    let normal = split.normal_part();
    check(normal.divides(&printed), || format!("normal part {} does not divide {}", normal, printed))?;
    let t = within(start, LIMIT_EXAMPLE)?;
    Ok(format!("g = {}, normal part {} | 36(t0+t1)^3(t1-t0)^2, {:.2?}", g, normal, t))
}

fn example_classification() -> Outcome {
    let sys = worked();
    let split = split_factorization(&sys, example_f().den(), &caps()).map_err(|e| e.to_string())?;
    check(split.factors.len() == 4, || format!("{} factors", split.factors.len()))?;
    let special = lin(2, -1).primitive_x().1;
    for (p, _, class) in &split.factors {
        if *p == special {
            check(*class == FactorClass::Special { ell: 1, unit: XRat::int(3) }, || format!("{} is {}", p, class))?;
        } else {
            check(*class == FactorClass::Normal, || format!("{} is {}", p, class))?;
        }
    }
    check(split.special_part() == special, || format!("special part {}", split.special_part()))?;
    let b = &(&lin(3, -2).pow(2) * &lin(1, -1).pow(2)) * &lin(1, 1);
    check(b.divides(&split.normal_part()) && split.normal_part().divides(&b), || "normal part differs from B".into())?;
    let d = parsum::classify::dispersion(&sys, &b, &caps(), 25).map_err(|e| e.to_string())?;
    check(d == Some(2), || format!("dispersion {:?}", d))?;
    Ok("2t0-t1 special (ell=1, unit 3), three normal factors, disp(B) = 2".into())
}

fn strange_example() -> Outcome {
    let start = Instant::now();
    let sys = strange();
    let half_x = TRat::constant(2, XRat::new(XPoly::x(), XPoly::from_i64(&[2])));
    let t0_t1 = TRat::new(lin(1, 0), lin(0, 1));
    check(verify(&sys, &t0_t1, &half_x), || "verify(t0/t1, x/2) is false".into())?;
    let g = match parallel_sum(&sys, &half_x, &TelescopeConfig::default()).map_err(|e| e.to_string())? {
        TelescopeResult::Found { g } => g,
        r => return Err(format!("expected Found, got {}", r)),
    };
    check(sys.delta(&g) == half_x, || format!("delta({}) != x/2", g))?;
    let t = within(start, LIMIT_STRANGE)?;
    Ok(format!("delta(g) = x/2 exactly, g - t0/t1 constant: {}, {:.2?}", sys.is_constant(&(&g - &t0_t1)), t))
}

fn fibonacci_constant() -> Outcome {
    let sys = fib();
    let p = tp(&[(1, &[0, 2]), (-1, &[2, 0]), (-1, &[1, 1])]).pow(2);
    check(sys.is_constant(&TRat::poly(p.clone())), || "not constant".into())?;
    check(sys.apply_poly(&p, 1) == p, || "sigma(p) != p".into())?;
    check(!sys.is_constant(&TRat::poly(lin(1, 0))), || "t0 reported constant".into())?;
    Ok("sigma((t1^2 - t0^2 - t0 t1)^2) = (t1^2 - t0^2 - t0 t1)^2".into())
}

/// `N / prod sigma^k(p)^m` over one or two random normal forms.
fn random_factor_normal(rng: &mut ChaCha8Rng, sys: &ShiftSystem) -> (TRat, Vec<TPoly>) {
    loop {
        let mut base = Vec::new();
        let mut den = TPoly::one(sys.n());
        for _ in 0..rng.gen_range(1..=2) {
            let p = if sys.n() == 2 && rng.gen_bool(0.2) {
                normal_quadratic(rng, sys)
            } else {
                normal_linear(rng, sys, 0.3)
            };
            for _ in 0..rng.gen_range(1..=2) {
                let k = rng.gen_range(0..=3);
                den = &den * &sys.apply_poly(&p, k).pow(rng.gen_range(1..=2));
            }
            base.push(p);
        }
        let num = random_tpoly(rng, sys.n(), 2, 1);
        if num.is_zero() {
            continue;
        }
        let f = TRat::new(num, den);
        if !f.den().is_constant() {
            return (f, base);
        }
    }
}

fn dispersion_lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let systems = [worked(), fib(), strange()];
    let mut seen = [0usize; 8];
    for case in 0..50 {
        let sys = &systems[case % 3];
        let (f, base) = random_factor_normal(&mut rng, sys);
        let hints = shifted_hints(sys, &base, -1..=5);
        let split = split_with_hints(sys, f.den(), &hints);
        check(split.special_factors().next().is_none(), || format!("case {}: special factor in {}", case, f.den()))?;
        let d = dispersion_with_hints(sys, f.den(), &hints).ok_or(format!("case {}: no normal factor", case))?;
        let df = sys.delta(&f);
        let dd = dispersion_with_hints(sys, df.den(), &hints);
        check(dd == Some(d + 1), || format!("case {}: disp(f) = {}, disp(delta f) = {:?}, f = {}", case, d, dd, f))?;
        seen[d.min(7) as usize] += 1;
    }
    let spread: Vec<String> = seen.iter().enumerate().filter(|(_, &c)| c > 0).map(|(d, c)| format!("{}x d={}", c, d)).collect();
    Ok(format!("50/50 ({})", spread.join(", ")))
}

fn planted_shift() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut fallback = 0;
    for case in 0..50 {
        let fibonacci = case % 2 == 1;
        let sys = if fibonacci { fib() } else { worked() };
        let p = if rng.gen_bool(0.25) { normal_quadratic(&mut rng, &sys) } else { normal_linear(&mut rng, &sys, 0.4) };
        let i = rng.gen_range(-5..=5);
        let u = unit(&mut rng);
        let q = sys.apply_poly(&p, i).scale(&u);
        let res = match sigma_equivalent(&sys, &p, &q) {
            Err(parsum::Error::UnsupportedEigenvalues) => {
                fallback += 1;
                sigma_equivalent_bounded(&sys, &p, &q, 25)
            }
            r => r,
        }
        .map_err(|e| format!("case {}: {}", case, e))?;
        match res {
            EquivalenceResult::Equivalent { i: got, u: v } => {
                check(got == i, || format!("case {}: planted {}, got {} for p = {}", case, i, got, p))?;
                check(v == u.recip(), || format!("case {}: unit {} instead of {}", case, v, u.recip()))?;
            }
            EquivalenceResult::NotEquivalent => return Err(format!("case {}: missed planted shift {} for p = {}", case, i, p)),
        }
    }
    Ok(format!("50/50 exact (worked example: exact algorithm; Fibonacci: {} via bounded scan, irrational eigenvalues)", fallback))
}

/// `N / D` with `D` a product of pieces of normal orbits and at most one
/// special factor.
fn random_summable(rng: &mut ChaCha8Rng, sys: &ShiftSystem, specials: &[TPoly]) -> (TRat, Vec<TPoly>) {
    loop {
        let mut base = Vec::new();
        let mut den = TPoly::one(sys.n());
        let mut degree = 0;
        for _ in 0..rng.gen_range(1..=2) {
            let p = normal_linear(rng, sys, 0.25);
            let mut offsets = vec![0i64, 1, 2];
            let take = rng.gen_range(1..=2);
            for _ in 0..take {
                let k = offsets.remove(rng.gen_range(0..offsets.len()));
                den = &den * &sys.apply_poly(&p, k);
                degree += 1;
            }
            base.push(p);
        }
        if !specials.is_empty() && rng.gen_bool(0.5) {
            let s = &specials[rng.gen_range(0..specials.len())];
            den = &den * s;
            degree += 1;
        }
        if degree > 4 {
            continue;
        }
        let num = random_tpoly(rng, sys.n(), 2, 2);
        if num.is_zero() {
            continue;
        }
        let g = TRat::new(num, den);
        if !g.den().is_constant() {
            return (g, base);
        }
    }
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let systems = [
        (worked(), vec![lin(-2, 1), lin(-3, 1)]),
        (fib(), vec![]),
        (strange(), vec![lin(0, 1)]),
    ];
    let cfg = TelescopeConfig::default();
    let mut with_special = 0;
    for case in 0..50 {
        let (sys, specials) = &systems[case % 3];
        let (g, base) = random_summable(&mut rng, sys, specials);
        let f = sys.delta(&g);
        if f.is_zero() {
            continue;
        }
        let mut hints = shifted_hints(sys, &base, -1..=4);
        hints.extend(specials.iter().cloned());
        let den = factor_with_hints(f.den(), &hints, &caps()).map_err(|e| format!("case {}: {}", case, e))?;
        let (res, trace) = parallel_sum_factored(sys, &f, &den, &cfg).map_err(|e| format!("case {}: {}", case, e))?;
        let h = match res {
            TelescopeResult::Found { g } => g,
            r => return Err(format!("case {}: {} for g = {}", case, r, g)),
        };
        check(verify(sys, &h, &f), || format!("case {}: verification failed", case))?;
        check(sys.is_constant(&(&h - &g)), || format!("case {}: g and found differ by a non-constant", case))?;
        let split = split_with_hints(sys, h.den(), &hints);
        let bound = trace.normal_bound.expand();
        check(split.normal_part().divides(&bound), || {
            format!("case {}: normal part {} of the telescoper does not divide the bound {}", case, split.normal_part(), bound)
        })?;
        if split.special_factors().next().is_some() {
            with_special += 1;
        }
        let _ = within(start, LIMIT_ROUND_TRIP)?;
    }
    let t = within(start, LIMIT_ROUND_TRIP)?;
    Ok(format!("50/50 found and verified, normal parts within the bound, {} with special factors, {:.2?}", with_special, t))
}

fn special_discovery() -> Outcome {
    let sys = worked();
    let forms = cfinite_specials(&sys).map_err(|e| e.to_string())?;
    check(forms.len() == 2, || format!("{} eigenforms", forms.len()))?;
    let expect = [(lin(-2, 1), rat(3)), (lin(-3, 1), rat(2))];
    for (w, lambda) in &expect {
        let (p, _) = forms
            .iter()
            .find(|(p, _)| parsum::classify::proportional(p, w).is_some())
            .ok_or(format!("no eigenform proportional to {}", w))?;
        let l = &forms.iter().find(|(q, _)| q == p).unwrap().1;
        check(l == lambda, || format!("{} has eigenvalue {}", p, l))?;
        check(special_test(&sys, p) == FactorClass::Special { ell: 1, unit: XRat::constant(lambda.clone()) }, || {
            format!("special_test rejects {}", p)
        })?;
    }
    let st = strange();
    let found = find_linear_specials(&st, 2).map_err(|e| e.to_string())?;
    check(found.iter().any(|(p, _, _)| *p == lin(0, 1)), || "t1 not discovered".into())?;
    for (p, _, _) in &found {
        check(special_test(&st, p).is_special(), || format!("{} is not special", p))?;
    }
    Ok(format!("t1-2t0 (3), t1-3t0 (2); strange system: t1 among {} linear specials", found.len()))
}

fn gp_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut nontrivial = 0;
    for case in 0..100 {
        let r = shifty_xrat(&mut rng);
        let gp = gp_form(&r).map_err(|e| format!("case {}: {}", case, e))?;
        check(gp.value() == r, || format!("case {}: {} does not reproduce {}", case, gp, r))?;
        check(gp.check_invariants(), || format!("case {}: invariants fail for {}", case, gp))?;
        // direct gcd checks, independent of the resultant
        let monic = |p: &XPoly| p.lc() == rat(1);
        check(monic(&gp.a) && monic(&gp.b) && monic(&gp.c), || format!("case {}: not monic: {}", case, gp))?;
        check(gp.a.shift_int(1).gcd(&gp.b).is_one(), || format!("case {}: gcd(a(x+1), b) != 1", case))?;
        check(gp.a.gcd(&gp.c).is_one(), || format!("case {}: gcd(a, c) != 1", case))?;
        for h in 0..=24 {
            check(gp.b.gcd(&gp.c.shift_int(h)).is_one(), || format!("case {}: gcd(b, c(x+{})) != 1", case, h))?;
        }
        if !gp.a.is_one() {
            nontrivial += 1;
        }
    }
    Ok(format!("100/100 ({} with nontrivial a)", nontrivial))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("worked example end-to-end", worked_example_end_to_end),
        ("classification and dispersion of the example", example_classification),
        ("strange example", strange_example),
        ("Fibonacci constant", fibonacci_constant),
        ("dispersion lemma, 50 cases", dispersion_lemma),
        ("planted shift recovery, 50 cases", planted_shift),
        ("round trip, 50 cases", round_trip),
        ("special discovery", special_discovery),
        ("GP-form invariants, 100 cases", gp_suite),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {} {} [{:.2?}]: {}", k + 1, name, t, detail),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {} [{:.2?}]: {}", k + 1, name, t, why);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
