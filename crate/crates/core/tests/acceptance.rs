//! Acceptance gate. One test per numbered criterion so the harness prints one
//! pass/fail line each. Wall-clock budgets are asserted inside the tests that
//! carry them; the shared fixture records how long its tables took to build.

use gentrace_core::hilbert::{
    fit_numerator, fit_numerator_dims, growth_exponent, parse_series, pole_multiplicity_at_one,
    search_fit, series_divide_by_free_ring, EstimatorMethod, DEFAULT_FIT_GUARD,
};
use gentrace_core::span::{
    growth_table, module_check, sandwich_check, trace_component_dim, trace_component_dim_naive,
    AlgebraKind, Backend, EngineOptions, GrowthTable, DEFAULT_PRIME,
};
use gentrace_core::{verify_all, CoeffMode, Form, IdentityStatus};
use num::BigRational;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

struct Fixture {
    c0_22: GrowthTable,
    l22: GrowthTable,
    w22: GrowthTable,
    c0_23: GrowthTable,
    l23: GrowthTable,
    w23: GrowthTable,
    c22: GrowthTable,
    t22: GrowthTable,
    t0_22: GrowthTable,
    m2_elapsed: Duration,
    m3_elapsed: Duration,
}

fn fixture() -> &'static Fixture {
    static FIX: OnceLock<Fixture> = OnceLock::new();
    FIX.get_or_init(|| {
        let opts = EngineOptions::with_backend(Backend::ModularThenExact(DEFAULT_PRIME));
        let start = Instant::now();
        let c0_22 = growth_table(AlgebraKind::Trace0, 2, 8, &opts).expect("c0_22");
        let l22 = growth_table(AlgebraKind::Lie, 2, 8, &opts).expect("l22");
        let w22 = growth_table(AlgebraKind::Assoc, 2, 8, &opts).expect("w22");
        let m2_elapsed = start.elapsed();
        let start = Instant::now();
        let c0_23 = growth_table(AlgebraKind::Trace0, 3, 6, &opts).expect("c0_23");
        let l23 = growth_table(AlgebraKind::Lie, 3, 6, &opts).expect("l23");
        let w23 = growth_table(AlgebraKind::Assoc, 3, 6, &opts).expect("w23");
        let m3_elapsed = start.elapsed();
        let c22 = growth_table(AlgebraKind::Trace, 2, 4, &opts).expect("c22");
        let t22 = growth_table(AlgebraKind::Mixed, 2, 4, &opts).expect("t22");
        let t0_22 = growth_table(AlgebraKind::Mixed0, 2, 5, &opts).expect("t0_22");
        Fixture {
            c0_22,
            l22,
            w22,
            c0_23,
            l23,
            w23,
            c22,
            t22,
            t0_22,
            m2_elapsed,
            m3_elapsed,
        }
    })
}

fn dims(table: &GrowthTable) -> Vec<u64> {
    table.dense_dims().into_iter().map(|(_, d)| d).collect()
}

/// Coefficientwise product with the expansion [1, 2, 3, ...] of 1/(1-t)^2.
fn convolve_with_plane(a: &[u64]) -> Vec<u64> {
    (0..a.len())
        .map(|n| (0..=n).map(|i| (n - i + 1) as u64 * a[i]).sum())
        .collect()
}

#[test]
fn criterion_01_identity_suite() {
    let start = Instant::now();
    let checks = verify_all(CoeffMode::Exact, Form::Direct).expect("verify runs");
    let elapsed = start.elapsed();
    assert_eq!(checks.len(), 7);
    for (i, check) in checks.iter().enumerate() {
        assert_eq!(check.id as usize, i + 1);
        assert!(
            matches!(check.status, IdentityStatus::Verified),
            "identity {} failed symbolically",
            check.id
        );
    }
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}, budget 10s");
}

#[test]
fn criterion_02_module_property() {
    let opts = EngineOptions::exact();
    let r2 = module_check(2, 8, &opts).expect("m=2 check runs");
    assert_eq!(r2.pairs.len(), 63);
    assert!(r2.all_inside, "an m=2 product left the Lie span");
    let r3 = module_check(3, 6, &opts).expect("m=3 check runs");
    assert_eq!(r3.pairs.len(), 185);
    assert!(r3.all_inside, "an m=3 product left the Lie span");
}

#[test]
fn criterion_03_sandwich_inequality() {
    let fix = fixture();
    for n in 1..=8 {
        let r = sandwich_check(&fix.c0_22, &fix.l22, &fix.w22, n).expect("m=2 sums");
        assert!(r.holds, "m=2 chain broken at n={n}: {} <= {} <= {}", r.c_sum, r.l_sum, r.w_sum);
    }
    for n in 1..=6 {
        let r = sandwich_check(&fix.c0_23, &fix.l23, &fix.w23, n).expect("m=3 sums");
        assert!(r.holds, "m=3 chain broken at n={n}: {} <= {} <= {}", r.c_sum, r.l_sum, r.w_sum);
    }
    let spot = sandwich_check(&fix.c0_22, &fix.l22, &fix.w22, 2).expect("m=2 n=2");
    assert_eq!((spot.c_sum, spot.l_sum, spot.w_sum), (1, 3, 7));
    let spot = sandwich_check(&fix.c0_22, &fix.l22, &fix.w22, 6).expect("m=2 n=6");
    assert_eq!((spot.c_sum, spot.l_sum, spot.w_sum), (10, 20, 50));
    let spot = sandwich_check(&fix.c0_23, &fix.l23, &fix.w23, 4).expect("m=3 n=4");
    assert_eq!((spot.c_sum, spot.l_sum, spot.w_sum), (7, 32, 71));
}

#[test]
fn criterion_04_gkdim_reproduction_m2() {
    let fix = fixture();
    let start = Instant::now();

    let c0 = fit_numerator(&fix.c0_22, &[2, 2, 2], DEFAULT_FIT_GUARD)
        .expect("fit runs")
        .expect("trace0 table fits");
    assert_eq!(c0, parse_series("1/((1-t^2)^3)").expect("known series"));

    let w = fit_numerator(&fix.w22, &[2, 2, 2], DEFAULT_FIT_GUARD)
        .expect("fit runs")
        .expect("assoc table fits");
    assert_eq!(w, parse_series("(1+2t+t^2)/((1-t^2)^3)").expect("known series"));

    // the Lie series splits off its degree-1 part: fit the commutator ideal,
    // then add the linear term back
    let mut ideal = dims(&fix.l22);
    ideal[1] = 0;
    let l_ideal = fit_numerator_dims(&ideal, &[2, 2, 2], DEFAULT_FIT_GUARD)
        .expect("fit runs")
        .expect("ideal table fits");
    let l = l_ideal.plus_polynomial(&[
        BigRational::from_integer(0.into()),
        BigRational::from_integer(2.into()),
    ]);
    assert_eq!(l, parse_series("2t+(t^2+2t^3)/((1-t^2)^3)").expect("known series"));

    for (name, series) in [("trace0", &c0), ("assoc", &w), ("lie", &l)] {
        let pole = pole_multiplicity_at_one(series).expect("rational series");
        assert_eq!(pole, 3, "{name} pole multiplicity is not 3(m-1)");
    }

    let elapsed = fix.m2_elapsed + start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}, budget 5min");
}

#[test]
fn criterion_05_gkdim_reproduction_m3() {
    let fix = fixture();
    let start = Instant::now();
    let fit = search_fit(&fix.c0_23, 6, 1, DEFAULT_FIT_GUARD)
        .expect("search runs")
        .expect("trace0 m=3 table fits with 2 held-out degrees");
    assert_eq!(fit, parse_series("(1+t^3)/((1-t^2)^6)").expect("known series"));
    assert_eq!(pole_multiplicity_at_one(&fit).expect("rational series"), 6);
    let elapsed = fix.m3_elapsed + start.elapsed();
    assert!(elapsed < Duration::from_secs(1800), "took {elapsed:?}, budget 30min");
}

#[test]
fn criterion_06_free_module_factorization() {
    let fix = fixture();
    let c22 = dims(&fix.c22);
    let t22 = dims(&fix.t22);
    assert_eq!(c22, [1, 2, 6, 10, 20]);
    assert_eq!(t22, [1, 4, 11, 24, 46]);
    assert_eq!(c22, convolve_with_plane(&dims(&fix.c0_22)[..=4]));
    assert_eq!(t22, convolve_with_plane(&dims(&fix.t0_22)[..=4]));

    // same statement at the series level: dividing out the two degree-1
    // trace generators recovers the traceless series
    let full = parse_series("1/((1-t)^2(1-t^2)^3)").expect("known series");
    assert_eq!(full.expand_dims(4).expect("nonnegative integers"), c22);
    let quotient = series_divide_by_free_ring(&full, 2).expect("divides");
    assert_eq!(quotient, parse_series("1/((1-t^2)^3)").expect("known series"));
}

#[test]
fn criterion_07_mixed_traceless_equals_assoc() {
    let fix = fixture();
    assert_eq!(dims(&fix.t0_22), dims(&fix.w22)[..=5]);
    assert_eq!(dims(&fix.t0_22), [1, 2, 4, 6, 9, 12]);
}

#[test]
fn criterion_08_trace_generator_reduction() {
    let opts = EngineOptions::exact();
    for n in 0..=4 {
        let reduced = trace_component_dim(2, n, &opts).expect("reduced set spans");
        let naive = trace_component_dim_naive(2, n, &opts).expect("naive set spans");
        assert_eq!(reduced, naive, "generator reduction changed the span at degree {n}");
        assert_eq!(reduced, [1, 2, 6, 10, 20][n as usize]);
    }
}

#[test]
fn criterion_09_estimator_sanity() {
    let series = parse_series("1/((1-t^2)^3)").expect("known series");
    let expansion = series.expand_dims(40).expect("nonnegative integers");
    let estimate =
        growth_exponent(&expansion, None, EstimatorMethod::LogPartialSums).expect("estimate");
    assert!(
        (estimate.exponent - 3.0).abs() < 0.35,
        "estimated {} from log partial sums, expected within 0.35 of 3",
        estimate.exponent
    );
    assert_eq!(pole_multiplicity_at_one(&series).expect("rational series"), 3);
    for (n, &a) in expansion.iter().enumerate().skip(1) {
        assert!(a <= (n * n) as u64, "a_{n} = {a} breaks the n^2 bound");
    }
}

#[test]
fn criterion_10_backend_agreement() {
    let fix = fixture();
    let tables = [
        &fix.c0_22, &fix.l22, &fix.w22, &fix.c0_23, &fix.l23, &fix.w23, &fix.c22, &fix.t22,
        &fix.t0_22,
    ];
    for table in tables {
        for row in &table.rows {
            assert_eq!(
                row.modular_dim,
                Some(row.dim),
                "{} m={} degree {}: modular prescreen disagrees with exact rank",
                table.algebra,
                table.m,
                row.degree
            );
        }
    }
}
