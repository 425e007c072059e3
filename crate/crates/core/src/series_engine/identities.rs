//! Closed-form summation at unit argument: Gauss for ₂F₁, Dixon and two Lavoie
//! contiguous variants for well-poised ₃F₂.

use crate::numerics::{gamma, rgamma, PrecComplex};

use super::pfq::three_f_two_at_unity;
use super::{as_integer, SeriesError, SumResult};

fn g(x: &PrecComplex) -> Result<PrecComplex, SeriesError> {
    gamma(x).map_err(|_| SeriesError::Pole)
}

fn close(a: &PrecComplex, b: &PrecComplex) -> bool {
    let d = a.digits().min(b.digits());
    a.dist(b) <= 10f64.powi(-(d as i32) + 10) * (1.0 + a.abs_f64())
}

fn half(x: &PrecComplex) -> PrecComplex {
    x.div_int(2)
}

fn rat_c(p: i64, q: i64, d: u32) -> PrecComplex {
    PrecComplex::from_int(p, d).div_int(q)
}

/// Γ(c)Γ(c−a−b) / (Γ(c−a)Γ(c−b)).
pub fn gauss_2f1_at_unity(a: &PrecComplex, b: &PrecComplex, c: &PrecComplex) -> Result<PrecComplex, SeriesError> {
    if let Some(n) = as_integer(c) {
        if n <= 0 {
            return Err(SeriesError::LowerPole(c.to_string()));
        }
    }
    let s = &(c - a) - b;
    if s.re().to_f64() <= 0.0 && as_integer(a).is_none_or(|n| n > 0) && as_integer(b).is_none_or(|n| n > 0) {
        return Err(SeriesError::Divergence("Re(c − a − b) ≤ 0".into()));
    }
    Ok(&(&g(c)? * &g(&s)?) * &(&rgamma(&(c - a)) * &rgamma(&(c - b))))
}

/// ₃F₂(a1, a2, a3; 1+a1−a2, 1+a1−a3; 1).
pub fn dixon_3f2(a: [&PrecComplex; 3], b: [&PrecComplex; 2]) -> Result<PrecComplex, SeriesError> {
    let [a1, a2, a3] = a;
    let d = a1.digits();
    let one = PrecComplex::one(d);
    let b1 = &(&one + a1) - a2;
    let b2 = &(&one + a1) - a3;
    if !((close(b[0], &b1) && close(b[1], &b2)) || (close(b[0], &b2) && close(b[1], &b1))) {
        return Err(SeriesError::Shape("Dixon"));
    }
    let h = &one + &half(a1);
    let num = &(&g(&h)? * &g(&(&(&h - a2) - a3))?) * &(&g(&b1)? * &g(&b2)?);
    let den = &(&rgamma(&(&one + a1)) * &rgamma(&(&(&(&one + a1) - a2) - a3)))
        * &(&rgamma(&(&h - a2)) * &rgamma(&(&h - a3)));
    Ok(&num * &den)
}

/// The two Lavoie companions of Dixon's sum:
/// kind 1 has lower parameters (a1−a2, 1+a1−a3), kind 2 has (2+a1−a2, 1+a1−a3).
pub fn lavoie_3f2_variant(kind: u8, a: [&PrecComplex; 3], b: [&PrecComplex; 2]) -> Result<PrecComplex, SeriesError> {
    let [a1, a2, a3] = a;
    let d = a1.digits();
    let one = PrecComplex::one(d);
    let hf = rat_c(1, 2, d);
    let two = PrecComplex::from_int(2, d);
    let x = half(a1);
    let second = &(&one + a1) - a3;
    match kind {
        1 => {
            let first = a1 - a2;
            if !((close(b[0], &first) && close(b[1], &second)) || (close(b[0], &second) && close(b[1], &first))) {
                return Err(SeriesError::Shape("Lavoie kind 1"));
            }
            let pre = &two.powc(&(-a3.scale_int(2)))
                * &(&(&g(&first)? * &g(&second)?)
                    * &(&rgamma(&(&(&one + a1) - &a3.scale_int(2))) * &rgamma(&(&(&(&one + a1) - a2) - a3))));
            let t1 = &(&g(&(&(&x - a3) + &hf))? * &g(&(&(&(&x - a2) - a3) + &one))?)
                * &(&rgamma(&(&x + &hf)) * &rgamma(&(&x - a2)));
            let t2 = &(&g(&(&(&x - a3) + &one))? * &g(&(&(&(&x - a2) - a3) + &hf))?)
                * &(&rgamma(&x) * &rgamma(&(&(&x - a2) + &hf)));
            Ok(&pre * &(&t1 + &t2))
        }
        2 => {
            let first = &(&two + a1) - a2;
            if !((close(b[0], &first) && close(b[1], &second)) || (close(b[0], &second) && close(b[1], &first))) {
                return Err(SeriesError::Shape("Lavoie kind 2"));
            }
            // Γ(a2−1)/Γ(a2) = 1/(a2−1)
            let am1 = a2 - &one;
            if am1.is_zero() {
                return Err(SeriesError::Pole);
            }
            let pre = &(&two.powc(&(&one - &a2.scale_int(2))) * &(&g(&second)? * &g(&first)?))
                * &(&(&rgamma(&(&(&two + a1) - &a2.scale_int(2))) * &rgamma(&(&(&(&two + a1) - a2) - a3)))
                    * &am1.recip());
            let three_half = rat_c(3, 2, d);
            let t1 = &(&g(&(&(&x - a2) + &three_half))? * &g(&(&(&(&x - a3) - a2) + &two))?)
                * &(&rgamma(&(&x + &hf)) * &rgamma(&(&(&x - a3) + &one)));
            let t2 = &(&g(&(&(&x - a2) + &one))? * &g(&(&(&(&x - a3) - a2) + &three_half))?)
                * &(&rgamma(&x) * &rgamma(&(&(&x - a3) + &hf)));
            Ok(&pre * &(&t2 - &t1))
        }
        _ => Err(SeriesError::Unsupported(format!("Lavoie kind {kind}"))),
    }
}

/// A ₃F₂ at 1 recognized as one of the closed forms, with the upper parameters
/// arranged as the formula expects.
#[derive(Clone, Debug)]
pub enum ClosedForm3F2 {
    Dixon([PrecComplex; 3]),
    Lavoie(u8, [PrecComplex; 3]),
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Try every arrangement of the upper parameters against the Dixon and Lavoie shapes.
pub fn recognize_3f2(a: [&PrecComplex; 3], b: [&PrecComplex; 2]) -> Option<ClosedForm3F2> {
    for p in PERMS {
        let arr = [a[p[0]], a[p[1]], a[p[2]]];
        let owned = || [arr[0].clone(), arr[1].clone(), arr[2].clone()];
        if dixon_3f2(arr, b).is_ok() {
            return Some(ClosedForm3F2::Dixon(owned()));
        }
        for kind in [1u8, 2] {
            if lavoie_3f2_variant(kind, arr, b).is_ok() {
                return Some(ClosedForm3F2::Lavoie(kind, owned()));
            }
        }
    }
    None
}

/// ₃F₂(a; b; 1) by a closed form when the shape allows, else by accelerated summation.
pub fn evaluate_3f2_at_unity(a: [&PrecComplex; 3], b: [&PrecComplex; 2], tol: f64) -> Result<SumResult, SeriesError> {
    match recognize_3f2(a, b) {
        Some(ClosedForm3F2::Dixon(x)) => Ok(SumResult::exact(dixon_3f2([&x[0], &x[1], &x[2]], b)?, 0)),
        Some(ClosedForm3F2::Lavoie(k, x)) => {
            Ok(SumResult::exact(lavoie_3f2_variant(k, [&x[0], &x[1], &x[2]], b)?, 0))
        }
        None => three_f_two_at_unity(a, b, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    const D: u32 = 60;

    fn r(p: i64, q: i64) -> PrecComplex {
        PrecComplex::from_rational(&rat(p, q), D)
    }

    #[test]
    fn gauss_golden_ratio() {
        let v = gauss_2f1_at_unity(&r(1, 5), &r(2, 5), &r(4, 5)).unwrap();
        let c = PrecComplex::pi(D).div_int(5).cos().scale_int(2);
        assert!(v.dist(&c) < 1e-55);
        assert!(gauss_2f1_at_unity(&r(0, 1), &r(2, 5), &r(4, 5)).unwrap().dist(&PrecComplex::one(D)) < 1e-55);
        assert!(gauss_2f1_at_unity(&r(1, 2), &r(1, 2), &r(1, 1)).is_err());
    }

    #[test]
    fn dixon_trivial_and_shape() {
        let v = dixon_3f2([&r(1, 3), &r(1, 7), &r(0, 1)], [&r(25, 21), &r(4, 3)]).unwrap();
        assert!(v.dist(&PrecComplex::one(D)) < 1e-55);
        assert!(matches!(dixon_3f2([&r(1, 3), &r(1, 7), &r(1, 5)], [&r(1, 1), &r(1, 1)]), Err(SeriesError::Shape(_))));
    }

    #[test]
    fn closed_forms_match_summation() {
        let tol = 1e-45;
        let cases: Vec<([PrecComplex; 3], [PrecComplex; 2])> = vec![
            ([r(1, 4), r(1, 2), r(1, 4)], [r(3, 4), r(1, 1)]),
            ([r(-1, 2), r(1, 4), r(1, 4)], [r(3, 4), r(1, 1)]),
            ([r(1, 4), r(1, 2), r(1, 4)], [r(7, 4), r(1, 1)]),
        ];
        for (a, b) in &cases {
            let a_ref = [&a[0], &a[1], &a[2]];
            let b_ref = [&b[0], &b[1]];
            let cf = recognize_3f2(a_ref, b_ref).expect("recognized");
            let closed = evaluate_3f2_at_unity(a_ref, b_ref, tol).unwrap().value;
            let direct = three_f_two_at_unity(a_ref, b_ref, tol).unwrap();
            assert!(closed.rel_dist(&direct.value) < 1e-35, "{cf:?}: {} vs {}", closed, direct.value);
        }
    }
}
