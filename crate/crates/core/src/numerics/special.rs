//! Gamma, digamma and polygamma by Stirling's series after an upward shift.
//!
//! The shift is chosen from the working precision so that the asymptotic
//! series is used only where |w| is comparable to the number of digits.

use std::sync::OnceLock;

use rug::{Integer, Rational};

use super::complex::{PrecComplex, GUARD_DIGITS};
use super::jet::Jet;
use super::rational::ExactRational;
use super::NumericsError;

const BERNOULLI_COUNT: usize = 320;

/// B_2, B_4, ..., B_{2K} from tangent numbers.
fn bernoulli_even() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = BERNOULLI_COUNT;
        let mut t = vec![Integer::new(); n + 1];
        t[1] = Integer::from(1);
        for k in 2..=n {
            t[k] = Integer::from(&t[k - 1] * (k as u32 - 1));
        }
        for k in 2..=n {
            for j in k..=n {
                let a = Integer::from(&t[j - 1] * (j - k) as u32);
                let b = Integer::from(&t[j] * (j - k + 2) as u32);
                t[j] = a + b;
            }
        }
        (1..=n)
            .map(|k| {
                let four_k = Integer::from(Integer::u_pow_u(4, k as u32));
                let den = &four_k * (Integer::from(&four_k - 1u32));
                let num = Integer::from(&t[k] * (2 * k) as u32);
                let mut b = Rational::from((num, den));
                if k % 2 == 0 {
                    b = -b;
                }
                b
            })
            .collect()
    })
}

/// Some(n) when z is exactly the integer n ≤ 0.
pub fn nonpositive_integer(z: &PrecComplex) -> Option<i64> {
    if !z.im().is_zero() {
        return None;
    }
    let re = z.re();
    if re.is_integer() && *re <= 0 {
        re.to_f64().round().to_string().parse::<i64>().ok()
    } else {
        None
    }
}

fn check_pole(z: &PrecComplex) -> Result<(), NumericsError> {
    match nonpositive_integer(z) {
        Some(k) => Err(NumericsError::Pole(k)),
        None => Ok(()),
    }
}

/// Radius beyond which the Stirling series is used.
fn stirling_radius(digits: u32) -> f64 {
    0.75 * (digits + GUARD_DIGITS) as f64 + 10.0
}

fn shift_count(z: &PrecComplex) -> usize {
    let w = stirling_radius(z.digits());
    let re = z.re().to_f64();
    let im = z.im().to_f64().abs();
    if re >= w || (re > 0.0 && im >= w) {
        0
    } else {
        (w - re).ceil().max(0.0) as usize
    }
}

fn eps_log10(digits: u32) -> f64 {
    -((digits + GUARD_DIGITS + 5) as f64)
}

/// log Γ(w) for large |w| with Re w > 0.
fn stirling_log_gamma(w: &PrecComplex) -> PrecComplex {
    let d = w.digits();
    let half = PrecComplex::from_f64(0.5, d);
    let two_pi = PrecComplex::pi(d).scale_int(2);
    let lnw = w.ln();
    let mut s = &(&(w - &half) * &lnw) - w;
    s += &(&two_pi.ln() * &half);
    let winv = w.recip();
    let winv2 = &winv * &winv;
    let mut pw = winv.clone();
    let eps = eps_log10(d);
    for (k, b) in bernoulli_even().iter().enumerate() {
        let k = k as i64 + 1;
        let coef = ExactRational::from_rug(Rational::from(b / ((2 * k) * (2 * k - 1))));
        let term = pw.scale(&coef);
        s += &term;
        if term.log10_abs() < eps + s.log10_abs().min(0.0) {
            break;
        }
        pw = &pw * &winv2;
    }
    s
}

/// Principal branch of log Γ(z).
pub fn log_gamma(z: &PrecComplex) -> Result<PrecComplex, NumericsError> {
    check_pole(z)?;
    let n = shift_count(z);
    if n == 0 {
        return Ok(stirling_log_gamma(z));
    }
    let d = z.digits();
    let mut prod = PrecComplex::one(d);
    let mut arg_sum = 0.0f64;
    for k in 0..n {
        let zk = z.add_rational(&ExactRational::from_int(k as i64));
        arg_sum += zk.im().to_f64().atan2(zk.re().to_f64());
        prod = &prod * &zk;
    }
    let big = stirling_log_gamma(&z.add_rational(&ExactRational::from_int(n as i64)));
    let lp = prod.ln();
    // ln(prod) agrees with Σ ln(z+k) up to 2πi m; recover m from the argument sum
    let principal = lp.im().to_f64();
    let m = ((arg_sum - principal) / (2.0 * std::f64::consts::PI)).round() as i64;
    let corr = PrecComplex::two_pi_i(d).scale_int(m);
    Ok(&big - &(&lp + &corr))
}

pub fn gamma(z: &PrecComplex) -> Result<PrecComplex, NumericsError> {
    check_pole(z)?;
    let n = shift_count(z);
    let d = z.digits();
    let big = stirling_log_gamma(&z.add_rational(&ExactRational::from_int(n as i64))).exp();
    let mut prod = PrecComplex::one(d);
    for k in 0..n {
        prod = &prod * &z.add_rational(&ExactRational::from_int(k as i64));
    }
    Ok(&big / &prod)
}

/// 1/Γ(z), entire: zero at the poles of Γ.
pub fn rgamma(z: &PrecComplex) -> PrecComplex {
    match gamma(z) {
        Ok(g) => g.recip(),
        Err(_) => PrecComplex::zero(z.digits()),
    }
}

pub fn gamma_rational(r: &ExactRational, digits: u32) -> Result<PrecComplex, NumericsError> {
    gamma(&PrecComplex::from_rational(r, digits))
}

fn stirling_polygamma(m: u32, w: &PrecComplex) -> PrecComplex {
    let d = w.digits();
    let winv = w.recip();
    let eps = eps_log10(d);
    if m == 0 {
        let mut s = &w.ln() - &winv.div_int(2);
        let winv2 = &winv * &winv;
        let mut pw = winv2.clone();
        for (k, b) in bernoulli_even().iter().enumerate() {
            let k = k as i64 + 1;
            let coef = ExactRational::from_rug(Rational::from(b / (2 * k)));
            let term = pw.scale(&coef);
            s -= &term;
            if term.log10_abs() < eps + s.log10_abs().min(0.0) {
                break;
            }
            pw = &pw * &winv2;
        }
        return s;
    }
    // (-1)^(m+1) [ (m-1)!/w^m + m!/(2 w^(m+1)) + Σ B_2k (2k+m-1)!/((2k)! w^(2k+m)) ]
    let mf = factorial_int(m as u64);
    let m1f = factorial_int(m as u64 - 1);
    let wm = winv.powi(m as i32);
    let mut s = wm.scale(&ExactRational::from_rug(Rational::from(m1f)));
    let wm1 = &wm * &winv;
    s += &wm1.scale(&ExactRational::from_rug(Rational::from((mf, 2u32))));
    let winv2 = &winv * &winv;
    let mut pw = &wm * &winv2;
    // ratio_k = (2k+m-1)!/(2k)!
    let mut ratio_k = Rational::from(factorial_int(m as u64 + 1)) / Rational::from(2u32);
    for (k, b) in bernoulli_even().iter().enumerate() {
        let k = k as u64 + 1;
        if k > 1 {
            // multiply by (2k+m-2)(2k+m-1)/((2k-1)(2k))
            ratio_k *= Rational::from((2 * k + m as u64 - 2) * (2 * k + m as u64 - 1));
            ratio_k /= Rational::from((2 * k - 1) * (2 * k));
        }
        let coef = ExactRational::from_rug(Rational::from(b * &ratio_k));
        let term = pw.scale(&coef);
        s += &term;
        if term.log10_abs() < eps + s.log10_abs().min(0.0) {
            break;
        }
        pw = &pw * &winv2;
    }
    if m.is_multiple_of(2) {
        -s
    } else {
        s
    }
}

fn factorial_int(n: u64) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

pub fn digamma(z: &PrecComplex) -> Result<PrecComplex, NumericsError> {
    polygamma(0, z)
}

/// ψ^(m)(z).
pub fn polygamma(m: u32, z: &PrecComplex) -> Result<PrecComplex, NumericsError> {
    check_pole(z)?;
    let n = shift_count(z);
    let d = z.digits();
    let mut s = stirling_polygamma(m, &z.add_rational(&ExactRational::from_int(n as i64)));
    // ψ^(m)(z) = ψ^(m)(z+n) - (-1)^m m! Σ 1/(z+k)^(m+1)
    let mut acc = PrecComplex::zero(d);
    for k in 0..n {
        let zk = z.add_rational(&ExactRational::from_int(k as i64));
        acc += &zk.recip().powi(m as i32 + 1);
    }
    let mf = ExactRational::from_rug(Rational::from(factorial_int(m as u64)));
    let acc = acc.scale(&mf);
    if m.is_multiple_of(2) {
        s -= &acc;
    } else {
        s += &acc;
    }
    Ok(s)
}

/// (a)_k = a (a+1) ... (a+k-1).
pub fn pochhammer(a: &PrecComplex, k: u64) -> PrecComplex {
    let mut p = PrecComplex::one(a.digits());
    for j in 0..k {
        p = &p * &a.add_rational(&ExactRational::from_int(j as i64));
    }
    p
}

/// Exact rational Pochhammer symbol.
pub fn pochhammer_rational(a: &ExactRational, k: u64) -> ExactRational {
    let mut p = ExactRational::one();
    for j in 0..k {
        p *= a + j as i64;
    }
    p
}

/// e^{iπ r}, exact when 2r is an integer.
pub fn unit_phase(r: &ExactRational, digits: u32) -> PrecComplex {
    let r2 = r.mod_two();
    let twice = &r2 * 2;
    if let Some(k) = twice.to_i64() {
        return match k {
            0 => PrecComplex::one(digits),
            1 => PrecComplex::i(digits),
            2 => PrecComplex::from_int(-1, digits),
            _ => -PrecComplex::i(digits),
        };
    }
    let x = PrecComplex::pi(digits).scale(&r2);
    (&x.cos()) + &x.sin().mul_i()
}

/// Laurent data of t ↦ Γ(a+t) at t=0: Γ(a+t) = t^(-pole_order) Σ coeffs[k] t^k.
#[derive(Clone, Debug)]
pub struct GammaJet {
    pub pole_order: u32,
    pub coeffs: Vec<PrecComplex>,
}

impl GammaJet {
    pub fn jet(&self) -> Jet {
        Jet { c: self.coeffs.clone() }
    }
}

/// Jet of log Γ(a+t) up to t^order.
pub fn log_gamma_jet(a: &PrecComplex, order: usize) -> Result<Jet, NumericsError> {
    let d = a.digits();
    let mut c = vec![PrecComplex::zero(d); order + 1];
    c[0] = log_gamma(a)?;
    let mut fact = ExactRational::one();
    for k in 1..=order {
        fact = fact * (k as i64);
        c[k] = &polygamma(k as u32 - 1, a)? / &PrecComplex::from_rational(&fact, d);
    }
    Ok(Jet { c })
}

pub fn taylor_jet_gamma(a: &PrecComplex, order: usize) -> Result<GammaJet, NumericsError> {
    let d = a.digits();
    if let Some(k) = nonpositive_integer(a) {
        // Γ(t-n) = Γ(1+t) / (t (t-1) ... (t-n))
        let n = (-k) as usize;
        let mut g = log_gamma_jet(&PrecComplex::one(d), order)?.exp();
        for j in 1..=n {
            let lin = Jet::linear(PrecComplex::from_int(-(j as i64), d), order + 1);
            g = g.div(&lin);
        }
        return Ok(GammaJet { pole_order: 1, coeffs: g.c });
    }
    let j = log_gamma_jet(a, order)?.exp();
    Ok(GammaJet { pole_order: 0, coeffs: j.c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::rat;
    use rug::Float;

    const D: u32 = 60;

    fn c(x: f64) -> PrecComplex {
        PrecComplex::from_f64(x, D)
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_even();
        assert_eq!(b[0], Rational::from((1, 6)));
        assert_eq!(b[1], Rational::from((-1, 30)));
        assert_eq!(b[5], Rational::from((691, -2730)));
    }

    #[test]
    fn gamma_basic() {
        assert!(gamma(&c(5.0)).unwrap().dist(&c(24.0)) < 1e-55);
        assert!(log_gamma(&c(1.0)).unwrap().abs_f64() < 1e-60);
        let half = PrecComplex::from_rational(&rat(1, 2), D);
        let g = log_gamma(&half).unwrap().exp();
        assert!((&g * &g).dist(&PrecComplex::pi(D)) < 1e-55);
        let gm = gamma(&PrecComplex::from_rational(&rat(-1, 2), D)).unwrap();
        let want = PrecComplex::pi(D).sqrt().scale_int(-2);
        assert!(gm.dist(&want) < 1e-55);
        assert!(matches!(gamma(&c(-3.0)), Err(NumericsError::Pole(-3))));
        assert!(matches!(gamma(&c(0.0)), Err(NumericsError::Pole(0))));
    }

    #[test]
    fn gamma_matches_mpfr_on_reals() {
        for x in [0.1, 0.75, 3.3, 17.25, 60.5, -2.5, -7.125] {
            let z = c(x);
            let bits = z.bits();
            let want = Float::with_val(bits, Float::with_val(bits, x).gamma_ref());
            let got = gamma(&z).unwrap();
            let w = PrecComplex::from_floats(want, Float::new(bits), D);
            assert!(got.rel_dist(&w) < 1e-58, "x={x}");
        }
    }

    #[test]
    fn log_gamma_branch_continuity() {
        // Im log Γ(x + i) is continuous across the region where the shift changes
        let mut prev = None;
        for k in -40..40 {
            let z = &c(k as f64 * 0.5) + &PrecComplex::i(D);
            let l = log_gamma(&z).unwrap();
            let g = gamma(&z).unwrap();
            assert!(l.exp().rel_dist(&g) < 1e-55);
            let im = l.im().to_f64();
            if let Some(p) = prev {
                let p: f64 = p;
                assert!((im - p).abs() < 3.0, "jump at {k}");
            }
            prev = Some(im);
        }
    }

    #[test]
    fn digamma_polygamma() {
        let one = c(1.0);
        let two = c(2.0);
        let d1 = digamma(&one).unwrap();
        assert!((&digamma(&two).unwrap() - &d1).dist(&one) < 1e-55);
        assert!(d1.dist(&-PrecComplex::euler_gamma(D)) < 1e-55);
        let half = PrecComplex::from_rational(&rat(1, 2), D);
        let ln2 = c(2.0).ln();
        assert!(digamma(&half).unwrap().dist(&(&d1 - &ln2.scale_int(2))) < 1e-55);
        let pi = PrecComplex::pi(D);
        assert!(polygamma(1, &one).unwrap().dist(&(&pi * &pi).div_int(6)) < 1e-55);
        // ψ''(1) = -2 ζ(3)
        let z3 = PrecComplex::zeta_int(3, D);
        assert!(polygamma(2, &one).unwrap().dist(&z3.scale_int(-2)) < 1e-55);
        // ψ'''(1) = 6 ζ(4) = π^4/15
        let p4 = (&(&pi * &pi) * &(&pi * &pi)).div_int(15);
        assert!(polygamma(3, &one).unwrap().dist(&p4) < 1e-55);
        assert!(digamma(&c(-1.0)).is_err());
    }

    #[test]
    fn gamma_complex_reflection() {
        let z = &c(0.3) + &c(0.7).mul_i();
        let g = gamma(&z).unwrap();
        let g1 = gamma(&(&PrecComplex::one(D) - &z)).unwrap();
        let pi = PrecComplex::pi(D);
        let s = (&pi * &z).sin();
        assert!((&(&g * &g1) * &s).dist(&pi) < 1e-55);
    }

    #[test]
    fn pochhammer_values() {
        let a = PrecComplex::from_rational(&rat(3, 5), D);
        assert!(pochhammer(&a, 2).dist(&PrecComplex::from_rational(&rat(24, 25), D)) < 1e-60);
        assert_eq!(pochhammer_rational(&rat(1, 1), 5), rat(120, 1));
        assert!(pochhammer(&a, 0).dist(&PrecComplex::one(D)) < 1e-60);
    }

    #[test]
    fn phases() {
        assert!(unit_phase(&rat(1, 2), D).dist(&PrecComplex::i(D)) == 0.0);
        assert!(unit_phase(&rat(-3, 1), D).dist(&PrecComplex::from_int(-1, D)) == 0.0);
        let p = unit_phase(&rat(2, 5), D);
        let x = PrecComplex::pi(D).scale(&rat(2, 5));
        assert!(p.dist(&(&x.cos() + &x.sin().mul_i())) < 1e-60);
        assert!(unit_phase(&rat(401, 5), D).dist(&unit_phase(&rat(1, 5), D)) < 1e-60);
    }

    #[test]
    fn jets() {
        let j = taylor_jet_gamma(&c(1.0), 1).unwrap();
        assert_eq!(j.pole_order, 0);
        assert!(j.coeffs[1].dist(&-PrecComplex::euler_gamma(D)) < 1e-55);
        let p = taylor_jet_gamma(&c(0.0), 2).unwrap();
        assert_eq!(p.pole_order, 1);
        assert!(p.coeffs[0].dist(&PrecComplex::one(D)) < 1e-55);
        // Γ(t-1) = -1/t + (γ-1) + ...
        let q = taylor_jet_gamma(&c(-1.0), 2).unwrap();
        assert!(q.coeffs[0].dist(&c(-1.0)) < 1e-55);
        let want = &PrecComplex::euler_gamma(D) - &PrecComplex::one(D);
        assert!(q.coeffs[1].dist(&want) < 1e-55);
    }
}
