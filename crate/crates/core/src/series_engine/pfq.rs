//! The generalized hypergeometric series pFq.

use crate::numerics::PrecComplex;

use super::accel::{accelerate, work_digits, Family, Plan};
use super::{as_integer, SeriesError, SumResult};

const MAX_TERMS: usize = 2_000_000;

fn max_param(a: &[PrecComplex], b: &[PrecComplex]) -> f64 {
    a.iter().chain(b).map(|x| x.abs_f64()).fold(0.0, f64::max)
}

fn check_lower(b: &[PrecComplex]) -> Result<(), SeriesError> {
    for x in b {
        if let Some(n) = as_integer(x) {
            if n <= 0 {
                return Err(SeriesError::LowerPole(x.to_string()));
            }
        }
    }
    Ok(())
}

/// Number of terms when some upper parameter is a non-positive integer.
fn terminating_length(a: &[PrecComplex]) -> Option<usize> {
    a.iter().filter_map(as_integer).filter(|&n| n <= 0).map(|n| (-n) as usize + 1).min()
}

/// Ratio t_{k+1}/t_k without z.
fn ratio(a: &[PrecComplex], b: &[PrecComplex], k: usize, d: u32) -> PrecComplex {
    let kc = PrecComplex::from_int(k as i64, d);
    let mut num = PrecComplex::one(d);
    for x in a {
        num = &num * &(x + &kc);
    }
    let mut den = PrecComplex::from_int(k as i64 + 1, d);
    for x in b {
        den = &den * &(x + &kc);
    }
    &num / &den
}

fn finite_sum(a: &[PrecComplex], b: &[PrecComplex], z: &PrecComplex, len: usize, d: u32) -> PrecComplex {
    let a: Vec<_> = a.iter().map(|x| x.with_digits(d)).collect();
    let b: Vec<_> = b.iter().map(|x| x.with_digits(d)).collect();
    let z = z.with_digits(d);
    let mut t = PrecComplex::one(d);
    let mut s = t.clone();
    for k in 0..len.saturating_sub(1) {
        t = &(&t * &ratio(&a, &b, k, d)) * &z;
        s += &t;
    }
    s
}

/// Plain summation until the ratio-based tail bound drops below `tol`·|sum|.
/// Returns (sum, tail, terms, max |term| / |sum|).
fn direct(
    a: &[PrecComplex],
    b: &[PrecComplex],
    z: &PrecComplex,
    tol: f64,
    d: u32,
) -> Result<(PrecComplex, f64, usize, f64), SeriesError> {
    let a: Vec<_> = a.iter().map(|x| x.with_digits(d)).collect();
    let b: Vec<_> = b.iter().map(|x| x.with_digits(d)).collect();
    let z = z.with_digits(d);
    let mut t = PrecComplex::one(d);
    let mut s = t.clone();
    let mut tmax = 1.0f64;
    let mut quiet = 0;
    for k in 0..MAX_TERMS {
        let r = &ratio(&a, &b, k, d) * &z;
        t = &t * &r;
        s += &t;
        let ta = t.abs_f64();
        tmax = tmax.max(ta);
        let sa = s.abs_f64().max(f64::MIN_POSITIVE);
        let ra = r.abs_f64();
        let tail = if ra < 0.99 { ta * ra / (1.0 - ra) } else { f64::INFINITY };
        if ta == 0.0 || tail <= tol * sa {
            quiet += 1;
            if quiet >= 2 || ta == 0.0 {
                return Ok((s, tail.min(ta), k + 2, tmax / sa));
            }
        } else {
            quiet = 0;
        }
    }
    Err(SeriesError::Divergence(format!("no convergence after {MAX_TERMS} terms")))
}

/// Σ_k ∏(a)_k/∏(b)_k z^k/k! to relative tolerance `tol`, at the precision of `z`.
pub fn pfq(a: &[PrecComplex], b: &[PrecComplex], z: &PrecComplex, tol: f64) -> Result<SumResult, SeriesError> {
    check_lower(b)?;
    let d = z.digits();
    if let Some(len) = terminating_length(a) {
        let wd = d + 20 + (len as u32) / 2;
        return Ok(SumResult::exact(finite_sum(a, b, z, len, wd).with_digits(d), len));
    }
    let p = a.len();
    let q = b.len();
    let za = z.abs_f64();
    if p > q + 1 {
        return Err(SeriesError::Divergence(format!("{p}F{q} has zero radius of convergence")));
    }
    if p == q + 1 && za > 1.0 + 1e-12 {
        return Err(SeriesError::Divergence("|z| > 1".into()));
    }
    if p == q + 1 && (za - 1.0).abs() <= 1e-12 {
        let one = PrecComplex::one(d);
        if z.dist(&one) < 10f64.powi(-(d as i32) + 5) {
            return unity_sum(a, b, tol, d);
        }
        return unit_circle(a, b, z, d);
    }
    let mut wd = d + 10;
    loop {
        let (s, tail, n, growth) = direct(a, b, z, tol, wd)?;
        let lost = growth.log10().max(0.0) as u32;
        if lost + 10 <= wd - d {
            return Ok(SumResult { value: s.with_digits(d), tail_estimate: tail, terms_used: n, accelerated: false });
        }
        wd = d + lost + 15;
    }
}

/// Σb − Σa.
fn excess(a: &[PrecComplex], b: &[PrecComplex], d: u32) -> PrecComplex {
    let mut s = PrecComplex::zero(d);
    for x in b {
        s += x;
    }
    for x in a {
        s -= x;
    }
    s
}

fn unity_sum(a: &[PrecComplex], b: &[PrecComplex], tol: f64, d: u32) -> Result<SumResult, SeriesError> {
    let s = excess(a, b, d);
    let sr = s.re().to_f64();
    if sr <= 0.0 {
        return Err(SeriesError::Divergence(format!("Re(Σb − Σa) = {sr} ≤ 0 at z = 1")));
    }
    let onset = max_param(a, b);
    // plain summation when N^{-Re s} is already negligible for moderate N
    let n_plain = (onset * 4.0).max(5000.0);
    if sr * n_plain.log10() > -tol.log10() + 5.0 {
        let wd = d + 15;
        let av: Vec<_> = a.iter().map(|x| x.with_digits(wd)).collect();
        let bv: Vec<_> = b.iter().map(|x| x.with_digits(wd)).collect();
        let mut t = PrecComplex::one(wd);
        let mut sum = t.clone();
        for k in 0..MAX_TERMS {
            t = &t * &ratio(&av, &bv, k, wd);
            sum += &t;
            // Σ_{j>N} j^{-s-1} ≈ N^{-s}/s, so the tail is about |t_N| N / Re s
            let tail = t.abs_f64() * (k as f64 + 2.0) / sr;
            if k as f64 > onset && tail <= tol * sum.abs_f64() {
                return Ok(SumResult { value: sum.with_digits(d), tail_estimate: tail, terms_used: k + 2, accelerated: false });
            }
        }
        return Err(SeriesError::Divergence("unity sum did not settle".into()));
    }
    let wd = work_digits(d);
    let av: Vec<_> = a.iter().map(|x| x.with_digits(wd)).collect();
    let bv: Vec<_> = b.iter().map(|x| x.with_digits(wd)).collect();
    let plan = Plan::standard(vec![Family::new(s.with_digits(wd), 0, 0)], onset, d);
    let mut t = PrecComplex::one(wd);
    let mut k = 0usize;
    accelerate(
        |_| {
            let out = t.clone();
            t = &t * &ratio(&av, &bv, k, wd);
            k += 1;
            out
        },
        &plan,
        d,
    )
}

/// |z| = 1, z ≠ 1: oscillating terms, summed with Wynn's ε on blocks of partial sums.
fn unit_circle(a: &[PrecComplex], b: &[PrecComplex], z: &PrecComplex, d: u32) -> Result<SumResult, SeriesError> {
    let s = excess(a, b, d);
    if s.re().to_f64() <= -1.0 {
        return Err(SeriesError::Divergence("terms do not decay on |z| = 1".into()));
    }
    let wd = work_digits(d);
    let av: Vec<_> = a.iter().map(|x| x.with_digits(wd)).collect();
    let bv: Vec<_> = b.iter().map(|x| x.with_digits(wd)).collect();
    let zw = z.with_digits(wd);
    let start = (max_param(a, b) * 2.0) as usize + 10;
    let mut t = PrecComplex::one(wd);
    let mut sum = t.clone();
    let mut partials = Vec::new();
    let total = start + 2 * (d as usize) + 20;
    for k in 0..total {
        t = &(&t * &ratio(&av, &bv, k, wd)) * &zw;
        sum += &t;
        if k + 1 >= start {
            partials.push(sum.clone());
        }
    }
    let half = partials.len() * 3 / 4;
    let v1 = super::accel::wynn_epsilon(&partials)?;
    let v2 = super::accel::wynn_epsilon(&partials[..half])?;
    let est = v1.dist(&v2);
    Ok(SumResult { value: v1.with_digits(d), tail_estimate: est, terms_used: total, accelerated: true })
}

/// ₃F₂(a1, a2, a3; b1, b2; 1), accelerated unless terminating or fast.
pub fn three_f_two_at_unity(a: [&PrecComplex; 3], b: [&PrecComplex; 2], tol: f64) -> Result<SumResult, SeriesError> {
    let d = a.iter().chain(b.iter()).map(|x| x.digits()).min().expect("five parameters");
    let av: Vec<PrecComplex> = a.iter().map(|x| (*x).clone()).collect();
    let bv: Vec<PrecComplex> = b.iter().map(|x| (*x).clone()).collect();
    pfq(&av, &bv, &PrecComplex::one(d), tol)
}
