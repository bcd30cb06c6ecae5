//! Positive definite binary quadratic forms `a·x² + b·xy + c·y²` of negative
//! discriminant, used to build class groups and to label ideal classes.

use num_integer::Integer;

use super::element::norm_integral;
use super::ideal::IdealRep;
use super::FieldKind;

pub type Form = (i128, i128, i128);

pub fn discriminant((a, b, c): Form) -> i128 {
    b * b - 4 * a * c
}

pub fn is_reduced((a, b, c): Form) -> bool {
    -a < b && b <= a && a <= c && !(a == c && b < 0)
}

/// Reduce a positive definite form to the unique reduced form in its
/// proper equivalence class.
pub fn reduce(f: Form) -> Form {
    let (mut a, mut b, mut c) = f;
    assert!(a > 0 && discriminant(f) < 0, "form must be positive definite");
    loop {
        if b > a || b <= -a {
            // x -> x + k·y brings b into (-a, a]
            let k = Integer::div_floor(&(a - b), &(2 * a));
            c += a * k * k + b * k;
            b += 2 * a * k;
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return (a, b, c);
    }
}

/// All reduced primitive forms of discriminant `-big_d`, sorted by `(a, b)`.
/// Their count is the class number.
pub fn reduced_forms(big_d: i128) -> Vec<Form> {
    let disc = -big_d;
    let mut out = Vec::new();
    let mut a = 1i128;
    while 3 * a * a <= big_d {
        for b in (-a + 1)..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            out.push((a, b, c));
        }
        a += 1;
    }
    out
}

/// The norm form `N(x·α₁ + y·α₂) / N(I)` of an ideal with its oriented
/// Hermite basis. Fractional ideals use their integral part (same class).
pub fn ideal_form(ideal: &IdealRep, kind: FieldKind) -> Form {
    let (_, a, b, c) = ideal.hnf().expect("quadratic ideal");
    let (t, n) = kind.omega_poly();
    let fa = a / c;
    let fb = (2 * b + t * c) / c;
    let fc = norm_integral((b, c), t, n) / (a * c);
    (fa, fb, fc)
}

/// Integral ideal whose norm form reduces to the given reduced form.
pub fn form_ideal((a, b, _): Form, kind: FieldKind) -> IdealRep {
    let (t, _) = kind.omega_poly();
    IdealRep::from_vectors(&[(a, 0), ((b - t) / 2, 1)], 1)
}
