use num_integer::Integer;
use proptest::prelude::*;
use wps_core::number_field::{FieldData, FieldElement, IdealRep};
use wps_core::weighted_space::{
    canonicalize, h_infinity, int_tuple, size, size_value, weighted_action, weighted_content, Weight,
};

const WEIGHTS: [&str; 5] = ["1,1", "1,2", "1,1,2", "1,2,3", "2,3,5"];
const FIELDS: [u64; 6] = [0, 1, 2, 3, 5, 23];

fn field(d: u64) -> FieldData {
    if d == 0 {
        FieldData::rational()
    } else {
        FieldData::imag_quadratic(d).unwrap()
    }
}

fn weight(i: usize) -> Weight {
    Weight::jointly_coprime(WEIGHTS[i].split(',').map(|x| x.parse().unwrap()).collect()).unwrap()
}

fn element(d: u64, a: i128, b: i128, den: i128) -> FieldElement {
    if d == 0 {
        FieldElement::new(a, 0, den)
    } else {
        FieldElement::new(a, b, den)
    }
}

/// A field, a weight and an integral tuple that is not all zero.
fn tuple() -> impl Strategy<Value = (u64, usize, Vec<FieldElement>)> {
    (0..FIELDS.len(), 0..WEIGHTS.len()).prop_flat_map(|(fi, wi)| {
        let d = FIELDS[fi];
        let m = weight(wi).m();
        proptest::collection::vec((-60i128..=60, -60i128..=60), m)
            .prop_filter("nonzero", |v| v.iter().any(|&(a, b)| a != 0 || b != 0))
            .prop_map(move |v| {
                let x: Vec<FieldElement> = v.iter().map(|&(a, b)| element(d, a, b, 1)).collect();
                (d, wi, x)
            })
            .prop_filter("nonzero in field", |(_, _, x)| x.iter().any(|c| !c.is_zero()))
    })
}

fn scalar() -> impl Strategy<Value = (i128, i128, i128)> {
    (-12i128..=12, -12i128..=12, 1i128..=12).prop_filter("nonzero", |&(a, b, _)| a != 0 || b != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn scaling_leaves_the_canonical_point_unchanged((d, wi, x) in tuple(), (a, b, den) in scalar()) {
        let f = field(d);
        let w = weight(wi);
        let lambda = element(d, a, b, den);
        prop_assume!(!lambda.is_zero());
        let y = weighted_action(&lambda, &x, &w, f.kind()).unwrap();
        let p = canonicalize(&x, &w, &f).unwrap();
        let q = canonicalize(&y, &w, &f).unwrap();
        prop_assert_eq!(size_value(&p), size_value(&q));
        prop_assert_eq!(p, q);
    }

    #[test]
    fn content_scales_by_the_principal_ideal((d, wi, x) in tuple(), (a, b, den) in scalar()) {
        let f = field(d);
        let w = weight(wi);
        let lambda = element(d, a, b, den);
        prop_assume!(!lambda.is_zero());
        let y = weighted_action(&lambda, &x, &w, f.kind()).unwrap();
        let lhs = weighted_content(&y, &w, &f).unwrap();
        let rhs = IdealRep::principal(&lambda, f.kind()).mul(&weighted_content(&x, &w, &f).unwrap(), f.kind());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonicalization_is_idempotent((d, wi, x) in tuple()) {
        let f = field(d);
        let w = weight(wi);
        let p = canonicalize(&x, &w, &f).unwrap();
        let q = canonicalize(p.coords(), &w, &f).unwrap();
        prop_assert_eq!(&p, &q);
        // the canonical tuple is integral and its content is the class representative
        prop_assert!(p.coords().iter().all(|c| c.is_integral()));
        prop_assert_eq!(weighted_content(p.coords(), &w, &f).unwrap(), p.content().clone());
    }

    #[test]
    fn rational_size_is_the_smallest_integral_representative(
        wi in prop::sample::select(vec![0usize, 2, 3]),
        xs in proptest::collection::vec(-20i128..=20, 3),
    ) {
        let q = FieldData::rational();
        let w = weight(wi);
        let x = int_tuple(&xs[..w.m()]);
        prop_assume!(x.iter().any(|c| !c.is_zero()));
        let h = h_infinity(&x, &w, q.kind()).unwrap();
        // λ = a/b scales H_∞ by |λ|; try every small λ that keeps the tuple integral
        let mut best = f64::INFINITY;
        for bden in 1..=20i128 {
            for anum in 1..=4i128 {
                let lambda = FieldElement::new(anum, 0, bden);
                let y = weighted_action(&lambda, &x, &w, q.kind()).unwrap();
                if y.iter().all(|c| c.is_integral()) {
                    best = best.min(h_infinity(&y, &w, q.kind()).unwrap());
                }
            }
        }
        let s = size(&canonicalize(&x, &w, &q).unwrap());
        prop_assert!((s - best).abs() <= 1e-12 * best, "size {} vs brute {}", s, best);
        prop_assert!(s <= h * (1.0 + 1e-12));
    }

    #[test]
    fn equal_weights_give_the_primitive_height(xs in proptest::collection::vec(-1000i128..=1000, 2..5)) {
        prop_assume!(xs.iter().any(|&c| c != 0));
        let q = FieldData::rational();
        let w = Weight::projective(xs.len() - 1);
        let g = xs.iter().fold(0i128, |g, &c| g.gcd(&c));
        let expected = xs.iter().map(|c| c.abs()).max().unwrap() / g;
        let p = canonicalize(&int_tuple(&xs), &w, &q).unwrap();
        prop_assert_eq!(size(&p), expected as f64);
    }
}
