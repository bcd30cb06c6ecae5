use proptest::prelude::*;
use wps_core::number_field::{
    dedekind_zeta_with_error, factor_ideal, integral_ideals_up_to, moebius_ideal, FieldData, IdealRep,
};

fn fields() -> Vec<FieldData> {
    let mut out = vec![FieldData::rational()];
    out.extend([1u64, 2, 3, 5, 6, 23].map(|d| FieldData::imag_quadratic(d).unwrap()));
    out
}

#[test]
fn factorizations_multiply_back() {
    for f in fields() {
        let kind = f.kind();
        for ideal in integral_ideals_up_to(&f, 500) {
            let mut acc = IdealRep::unit(kind);
            for (p, e) in factor_ideal(&f, &ideal).unwrap() {
                acc = acc.mul(&p.ideal.pow(e as i64, kind), kind);
            }
            assert_eq!(acc, ideal, "{kind}");
        }
    }
}

#[test]
fn moebius_sums_over_divisors_vanish() {
    for f in fields() {
        let ideals = integral_ideals_up_to(&f, 300);
        for j in &ideals {
            let s: i64 = ideals
                .iter()
                .filter(|i| i.divides(j))
                .map(|i| moebius_ideal(&f, i).unwrap() as i64)
                .sum();
            assert_eq!(s, if j.is_unit() { 1 } else { 0 }, "{} {j}", f.kind());
        }
    }
}

#[test]
fn ideal_counts_match_divisor_sums() {
    // over ℚ(√−d) the number of ideals of norm n is Σ_{k|n} χ(k); check n <= 200 via totals
    for f in fields().into_iter().skip(1) {
        let ideals = integral_ideals_up_to(&f, 200);
        let mut by_norm = vec![0i64; 201];
        for i in &ideals {
            by_norm[i.integral_norm() as usize] += 1;
        }
        for n in 1..=200usize {
            let expected: i64 = (1..=n)
                .filter(|k| n % k == 0)
                .map(|k| wps_core::arith::kronecker(-(f.disc() as i128), k as u128) as i64)
                .sum();
            assert_eq!(by_norm[n], expected, "{} n={n}", f.kind());
        }
    }
}

#[test]
fn zeta_brackets_the_ideal_sum() {
    // partial sums over ideals of norm <= N are below ζ_k(s), and the tail is at
    // most Σ_{n>N} d(n)/n^s <= 2·Σ_{n>N} n^{1/2−s} <= 2N^{3/2−s}/(s−3/2)
    let n0 = 3000u64;
    for f in fields() {
        for s in [2u64, 3, 4] {
            let z = dedekind_zeta_with_error(&f, s, 1e-12).unwrap();
            let partial: f64 = integral_ideals_up_to(&f, n0)
                .iter()
                .map(|i| (i.integral_norm() as f64).powi(-(s as i32)))
                .sum();
            let tail = 2.0 * (n0 as f64).powf(1.5 - s as f64) / (s as f64 - 1.5);
            assert!(partial <= z.value + z.error, "{} s={s}", f.kind());
            assert!(z.value - z.error - partial <= tail, "{} s={s}", f.kind());
        }
    }
}

#[test]
fn gaussian_zeta_at_two() {
    let f = FieldData::imag_quadratic(1).unwrap();
    let z = dedekind_zeta_with_error(&f, 2, 1e-12).unwrap();
    assert!((z.value - 1.5067030099229863).abs() <= 1e-12 + z.error);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn norms_are_multiplicative(fi in 0usize..7, i in 0usize..400, j in 0usize..400) {
        let f = &fields()[fi];
        let ideals = integral_ideals_up_to(f, 120);
        let (a, b) = (&ideals[i % ideals.len()], &ideals[j % ideals.len()]);
        let ab = a.mul(b, f.kind());
        prop_assert_eq!(ab.norm(), a.norm() * b.norm());
        let inv = a.inverse(f.kind());
        prop_assert!(inv.mul(a, f.kind()).is_unit());
    }
}
