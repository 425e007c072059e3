//! Bühring's expansion of Γ(a)/Γ(b)·nF(n−1)(a; b; z) about z = 1.
//!
//! Non-integer c: Σ g_m(0)(1−z)^m + (1−z)^c Σ g_m(c)(1−z)^m.
//! c = c₀ ∈ ℤ≥0: Σ_{m<c₀} l_m(1−z)^m + (1−z)^{c₀} Σ (w_m + q_m log(1−z))(1−z)^m.

use crate::equation::BuehringParameters;
use crate::numerics::{digamma, gamma, nonpositive_integer, pochhammer, PrecComplex};
use crate::series_engine::{evaluate_3f2_at_unity, SumResult};

use super::sums::{algebraic_sum, wd, Decay, Range};
use super::ConnectionError;

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn g(x: &PrecComplex) -> Result<PrecComplex, ConnectionError> {
    Ok(gamma(x)?)
}

/// c + a₁ or c + a₂ at a pole of Γ: the coefficients are a limit not covered here.
fn check_shifted(a: &[PrecComplex], c: &PrecComplex) -> Result<(), ConnectionError> {
    for x in &a[..2] {
        if let Some(k) = nonpositive_integer(&(c + x)) {
            return Err(ConnectionError::Precondition(format!("c + a_j = {k} for a_j = {x}")));
        }
    }
    Ok(())
}

fn check_order(p: &BuehringParameters) -> Result<usize, ConnectionError> {
    match p.a.len() {
        n @ (3 | 4) => Ok(n),
        n => Err(ConnectionError::Unsupported(format!("Bühring coefficients for n = {n}"))),
    }
}

fn at(p: &BuehringParameters, d: u32) -> BuehringParameters {
    BuehringParameters {
        a: p.a.iter().map(|x| x.with_digits(d)).collect(),
        b: p.b.iter().map(|x| x.with_digits(d)).collect(),
        c: p.c.with_digits(d),
    }
}

/// A⁽ⁿ⁾(0), A⁽ⁿ⁾(1), ... computed on demand.
pub struct ATable {
    n: usize,
    d: u32,
    // n = 3: (b2 − a3, b1 − a3); n = 4: the convolution pieces
    x: PrecComplex,
    y: PrecComplex,
    u: Vec<PrecComplex>,
    v: Vec<PrecComplex>,
    xk: PrecComplex,
    big_x: PrecComplex,
    v_up: [PrecComplex; 2],
    values: Vec<PrecComplex>,
}

impl ATable {
    pub fn new(p: &BuehringParameters) -> Result<Self, ConnectionError> {
        let n = check_order(p)?;
        let d = p.c.digits();
        let (a, b) = (&p.a, &p.b);
        let one = PrecComplex::one(d);
        let mut t = ATable {
            n,
            d,
            x: &b[1] - &a[2],
            y: &b[0] - &a[2],
            u: vec![one.clone()],
            v: vec![one.clone()],
            xk: one.clone(),
            big_x: PrecComplex::zero(d),
            v_up: [PrecComplex::zero(d), PrecComplex::zero(d)],
            values: vec![one],
        };
        if n == 4 {
            t.big_x = &(&(&b[2] + &b[1]) - &a[3]) - &a[2];
            t.v_up = [&b[2] - &a[3], &b[1] - &a[3]];
        }
        Ok(t)
    }

    pub fn get(&mut self, k: usize) -> Result<&PrecComplex, ConnectionError> {
        while self.values.len() <= k {
            self.extend()?;
        }
        Ok(&self.values[k])
    }

    fn extend(&mut self) -> Result<(), ConnectionError> {
        let k = self.values.len() - 1;
        let kc = PrecComplex::from_int(k as i64, self.d);
        let k1 = PrecComplex::from_int(k as i64 + 1, self.d);
        if self.n == 3 {
            let next = &(&self.values[k] * &(&(&self.x + &kc) * &(&self.y + &kc))) / &k1;
            self.values.push(next);
            return Ok(());
        }
        // u_i = (b1−a3)_i/i!, v_j = (b3−a4)_j(b2−a4)_j/((X)_j j!), A(k) = (X)_k Σ u_{k−j} v_j
        let uk = &(&self.u[k] * &(&self.y + &kc)) / &k1;
        let den = &(&self.big_x + &kc) * &k1;
        if den.is_zero() {
            return Err(ConnectionError::Precondition("A⁽⁴⁾: b3 + b2 − a4 − a3 is a non-positive integer".into()));
        }
        let vk = &(&self.v[k] * &(&(&self.v_up[0] + &kc) * &(&self.v_up[1] + &kc))) / &den;
        self.u.push(uk);
        self.v.push(vk);
        self.xk = &self.xk * &(&self.big_x + &kc);
        let k = k + 1;
        let mut s = PrecComplex::zero(self.d);
        for j in 0..=k {
            s += &(&self.u[k - j] * &self.v[j]);
        }
        self.values.push(&self.xk * &s);
        Ok(())
    }
}

/// A⁽ⁿ⁾(k) for n ∈ {3, 4}.
#[allow(non_snake_case)]
pub fn buehring_A(params: &BuehringParameters, k: usize) -> Result<PrecComplex, ConnectionError> {
    let mut t = ATable::new(params)?;
    Ok(t.get(k)?.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Zero,
    C,
}

/// Remainder exponents of the A(k)-weighted sums: shift + a_j for j ≥ 3, and
/// shift + a4 + b1 − a3 from the convolution in A⁽⁴⁾.
fn a_sum_decay(p: &BuehringParameters, shift: &PrecComplex) -> Decay {
    let mut families = vec![(shift + &p.a[2], 0)];
    if p.a.len() == 4 {
        families.push((shift + &p.a[3], 0));
        families.push((&(&(shift + &p.a[3]) + &p.b[0]) - &p.a[2], 0));
    }
    let onset = p.a.iter().chain(&p.b).map(|x| x.abs_f64()).fold(shift.abs_f64(), f64::max) + 1.0;
    Decay { families, onset }
}

/// Σ_k (top)_k / ((c+a1)_k (c+a2)_k) A(k) at the precision of `p`, for the l and g(0) families.
fn pochhammer_a_sum(
    p: &BuehringParameters,
    top: &PrecComplex,
    m: usize,
    tol: f64,
    digits: u32,
) -> Result<SumResult, ConnectionError> {
    let (a, b, c) = (&p.a, &p.b, &p.c);
    if a.len() == 3 {
        let up = [top, &(&b[0] - &a[2]), &(&b[1] - &a[2])];
        let lo = [&(c + &a[0]), &(c + &a[1])];
        let r = evaluate_3f2_at_unity(up, lo, tol)?;
        return Ok(SumResult { value: r.value.with_digits(digits), ..r });
    }
    let d = c.digits();
    let mut table = ATable::new(p)?;
    let ca1 = c + &a[0];
    let ca2 = c + &a[1];
    let mut r = PrecComplex::one(d);
    let decay = a_sum_decay(p, &PrecComplex::from_int(m as i64, d));
    algebraic_sum(
        |k| {
            let kc = PrecComplex::from_int(k as i64, d);
            let t = &r * table.get(k)?;
            r = &(&r * &(top + &kc)) / &(&(&ca1 + &kc) * &(&ca2 + &kc));
            Ok(t)
        },
        &decay,
        tol,
        Range::Long,
        digits,
    )
}

/// c when it is an integer up to rounding of the parameters.
fn integer_c(p: &BuehringParameters) -> Option<i64> {
    let c = &p.c;
    let r = c.re().to_f64().round();
    let eps = 10f64.powi(-(c.digits() as i32) + 8);
    (c.dist(&PrecComplex::from_f64(r, c.digits())) < eps).then_some(r as i64)
}

/// g_m(0) or g_m(c) for non-integer c.
pub fn g_coeff(params: &BuehringParameters, m: usize, branch: Branch, tol: f64) -> Result<SumResult, ConnectionError> {
    check_order(params)?;
    if let Some(c0) = integer_c(params) {
        return Err(ConnectionError::Precondition(format!("c = {c0} is an integer; use the l/q/w families")));
    }
    let digits = params.c.digits();
    let w = wd(digits);
    let p = at(params, w);
    let (a, c) = (&p.a, &p.c);
    check_shifted(a, c)?;
    let mc = PrecComplex::from_int(m as i64, w);
    let mfact = pochhammer(&PrecComplex::one(w), m as u64);
    match branch {
        Branch::C => {
            // (−1)^m (c+a1)_m (c+a2)_m Γ(−c−m)/m! · Σ_{k≤m} (−m)_k/((c+a1)_k(c+a2)_k) A(k)
            let ca1 = c + &a[0];
            let ca2 = c + &a[1];
            let pre = &(&(&pochhammer(&ca1, m as u64) * &pochhammer(&ca2, m as u64)) * &g(&(-&(c + &mc)))?) / &mfact;
            let mut table = ATable::new(&p)?;
            let mut s = PrecComplex::zero(w);
            let mut r = PrecComplex::one(w);
            for k in 0..=m {
                let kc = PrecComplex::from_int(k as i64, w);
                s += &(&r * table.get(k)?);
                r = &(&r * &(&kc - &mc)) / &(&(&ca1 + &kc) * &(&ca2 + &kc));
            }
            let v = (&pre * &s).scale_int(sign(m as i64));
            Ok(SumResult::exact(v.with_digits(digits), m + 1))
        }
        Branch::Zero => {
            for x in &a[2..] {
                if (x + &mc).re().to_f64() <= 0.0 {
                    return Err(ConnectionError::Precondition(format!("Re(a_j + m) ≤ 0 for a_j = {x}")));
                }
            }
            // (−1)^m Γ(a1+m)Γ(a2+m)Γ(c−m)/(Γ(c+a1)Γ(c+a2) m!) · Σ (c−m)_k/((c+a1)_k(c+a2)_k) A(k)
            let num = &(&g(&(&a[0] + &mc))? * &g(&(&a[1] + &mc))?) * &g(&(c - &mc))?;
            let den = &(&g(&(c + &a[0]))? * &g(&(c + &a[1]))?) * &mfact;
            let pre = (&num / &den).scale_int(sign(m as i64));
            let s = pochhammer_a_sum(&p, &(c - &mc), m, tol, w)?;
            Ok(SumResult { value: (&pre * &s.value).with_digits(digits), tail_estimate: s.tail_estimate * pre.abs_f64(), ..s })
        }
    }
}

/// The coefficients at (1−z)^m (l) and (1−z)^{c₀+m} (q, w) when c = c₀ ∈ ℤ≥0.
#[derive(Clone, Debug)]
pub struct Lqw {
    /// Present only for m < c₀.
    pub l: Option<SumResult>,
    pub q: PrecComplex,
    pub w: SumResult,
}

pub fn lqw_coeffs(params: &BuehringParameters, c0: i64, m: usize, tol: f64) -> Result<Lqw, ConnectionError> {
    check_order(params)?;
    if integer_c(params) != Some(c0) || c0 < 0 {
        return Err(ConnectionError::Precondition(format!("c = {} is not the integer {c0} ≥ 0", params.c)));
    }
    let digits = params.c.digits();
    let w = wd(digits);
    let p = at(params, w);
    let a = &p.a;
    let mc = PrecComplex::from_int(m as i64, w);
    let cc = PrecComplex::from_int(c0, w);
    check_shifted(a, &cc)?;
    let mfact = pochhammer(&PrecComplex::one(w), m as u64);
    for x in &a[2..] {
        if (&(x + &mc) + &cc).re().to_f64() <= 0.0 {
            return Err(ConnectionError::Precondition(format!("Re(c₀ + a_j + m) ≤ 0 for a_j = {x}")));
        }
    }

    let l = if (m as i64) < c0 {
        for x in &a[2..] {
            if (x + &mc).re().to_f64() <= 0.0 {
                return Err(ConnectionError::Precondition(format!("Re(a_j + m) ≤ 0 for a_j = {x}")));
            }
        }
        let num = &(&g(&(&a[0] + &mc))? * &g(&(&a[1] + &mc))?) * &g(&(&cc - &mc))?;
        let den = &(&g(&(&cc + &a[0]))? * &g(&(&cc + &a[1]))?) * &mfact;
        let pre = (&num / &den).scale_int(sign(m as i64));
        let s = pochhammer_a_sum(&p, &(&cc - &mc), m, tol, w)?;
        Some(SumResult { value: (&pre * &s.value).with_digits(digits), tail_estimate: s.tail_estimate * pre.abs_f64(), ..s })
    } else {
        None
    };

    let ac1 = &a[0] + &cc;
    let ac2 = &a[1] + &cc;
    let poch_m = &pochhammer(&ac1, m as u64) * &pochhammer(&ac2, m as u64);
    let g_cm1 = g(&PrecComplex::from_int(c0 + m as i64 + 1, w))?;
    let pm = &poch_m / &(&g_cm1 * &mfact);
    let psi_common = &(&digamma(&PrecComplex::from_int(1 + c0 + m as i64, w))? - &digamma(&(&ac1 + &mc))?)
        - &digamma(&(&ac2 + &mc))?;

    let mut table = ATable::new(&p)?;
    let mut f = PrecComplex::zero(w);
    let mut fpsi = PrecComplex::zero(w);
    let mut r = PrecComplex::one(w);
    for k in 0..=m {
        let kc = PrecComplex::from_int(k as i64, w);
        let t = &r * table.get(k)?;
        let psi = &digamma(&PrecComplex::from_int((1 + m - k) as i64, w))? + &psi_common;
        fpsi += &(&t * &psi);
        f += &t;
        r = &(&r * &(&kc - &mc)) / &(&(&ac1 + &kc) * &(&ac2 + &kc));
    }
    let q = (&pm * &f).scale_int(sign(c0 + 1));

    // Σ_{k>m} Γ(k−m) A(k)/((a1+c₀)_k (a2+c₀)_k), indexed by j = k − m − 1
    let mut r = PrecComplex::one(w);
    for k in 0..=m {
        let kc = PrecComplex::from_int(k as i64, w);
        r = &r / &(&(&ac1 + &kc) * &(&ac2 + &kc));
    }
    let decay = a_sum_decay(&p, &(&mc + &cc));
    let tail = algebraic_sum(
        |j| {
            let k = m + 1 + j;
            let kc = PrecComplex::from_int(k as i64, w);
            let t = &r * table.get(k)?;
            r = &(&r * &PrecComplex::from_int(j as i64 + 1, w)) / &(&(&ac1 + &kc) * &(&ac2 + &kc));
            Ok(t)
        },
        &decay,
        tol,
        Range::Long,
        w,
    )?;
    let second = (&(&poch_m / &g_cm1) * &tail.value).scale_int(sign(c0 + m as i64));
    let wv = &(&pm * &fpsi).scale_int(sign(c0)) + &second;
    let w_res = SumResult {
        value: wv.with_digits(digits),
        tail_estimate: tail.tail_estimate * (&poch_m / &g_cm1).abs_f64(),
        ..tail
    };
    Ok(Lqw { l, q: q.with_digits(digits), w: w_res })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::HypergeometricEquation;
    use crate::numerics::{gamma_rational, rat};

    const D: u32 = 40;

    #[test]
    fn a_examples() {
        let q = HypergeometricEquation::quartic().buehring_params(D);
        assert!(buehring_A(&q, 0).unwrap().dist(&PrecComplex::one(D)) < 1e-35);
        let want = PrecComplex::from_rational(&rat(1, 16), D);
        assert!(buehring_A(&q, 1).unwrap().dist(&want) < 1e-35);
        let p = HypergeometricEquation::quintic().buehring_params(D);
        assert!(buehring_A(&p, 0).unwrap().dist(&PrecComplex::one(D)) < 1e-35);
        let want = PrecComplex::from_rational(&rat(7, 25), D);
        assert!(buehring_A(&p, 1).unwrap().dist(&want) < 1e-35);
    }

    #[test]
    fn a4_convolution_matches_terminating_3f2() {
        use crate::series_engine::three_f_two_at_unity;
        let p = HypergeometricEquation::quintic().buehring_params(D);
        let mut t = ATable::new(&p).unwrap();
        let r = |a: i64, b: i64| PrecComplex::from_rational(&rat(a, b), D);
        for k in [2usize, 5, 11] {
            // (3/5)_k (2/5)_k / k! · ₃F₂(1/5, 1/5, −k; 3/5, 3/5 − k; 1)
            let pre = &(&pochhammer(&r(3, 5), k as u64) * &pochhammer(&r(2, 5), k as u64))
                / &pochhammer(&r(1, 1), k as u64);
            let f = three_f_two_at_unity(
                [&r(1, 5), &r(1, 5), &r(-(k as i64), 1)],
                [&r(3, 5), &(&r(3, 5) - &r(k as i64, 1))],
                1e-35,
            )
            .unwrap();
            let want = &pre * &f.value;
            assert!(t.get(k).unwrap().rel_dist(&want) < 1e-30, "k = {k}");
        }
    }

    #[test]
    fn quartic_g_closed_forms() {
        // g₀(c) = Γ(−1/2); g₀(0) = Γ(1/2)A/2; g₁(0) = 2Γ(1/2)(3A/64 + 1/A)
        let q = HypergeometricEquation::quartic().buehring_params(D);
        let tol = 1e-35;
        let g0c = g_coeff(&q, 0, Branch::C, tol).unwrap().value;
        assert!(g0c.dist(&gamma_rational(&rat(-1, 2), D).unwrap()) < 1e-33);
        let gr = |a, b| gamma_rational(&rat(a, b), D).unwrap();
        let big_a = &(&gr(1, 8) * &gr(3, 8)) / &(&gr(5, 8) * &gr(7, 8));
        let g00 = g_coeff(&q, 0, Branch::Zero, tol).unwrap().value;
        assert!(g00.rel_dist(&(&gr(1, 2) * &big_a).div_int(2)) < 1e-30);
        let g10 = g_coeff(&q, 1, Branch::Zero, tol).unwrap().value;
        let want = (&gr(1, 2) * &(&big_a.scale_int(3).div_int(64) + &big_a.recip())).scale_int(2);
        assert!(g10.rel_dist(&want) < 1e-30);
    }

    #[test]
    fn quintic_q0_is_one() {
        let p = HypergeometricEquation::quintic().buehring_params(D);
        let r = lqw_coeffs(&p, 1, 0, 1e-20).unwrap();
        assert!(r.q.dist(&PrecComplex::one(D)) < 1e-35);
        assert!(matches!(g_coeff(&p, 0, Branch::Zero, 1e-10), Err(ConnectionError::Precondition(_))));
    }

    #[test]
    fn quintic_lw_against_reference() {
        let p = HypergeometricEquation::quintic().buehring_params(D);
        let r0 = lqw_coeffs(&p, 1, 0, 1e-25).unwrap();
        let r1 = lqw_coeffs(&p, 1, 1, 1e-25).unwrap();
        let v = |x: &str| PrecComplex::parse(x, "0", D).unwrap();
        assert!(r0.l.unwrap().value.rel_dist(&v("18.90397045126412777564786")) < 1e-23);
        assert!(r0.w.value.dist(&v("-0.4362199654016225010798773")) < 1e-20);
        assert!(r1.w.value.dist(&v("-0.2032267744334427722363515")) < 1e-20);
    }

    fn pos_rat() -> impl proptest::strategy::Strategy<Value = crate::numerics::ExactRational> {
        use proptest::prelude::*;
        (1i64..30, 2i64..13).prop_map(|(p, q)| rat(p, q))
    }

    proptest::proptest! {
        #[test]
        fn a_zero_is_one(n in 3usize..5, a in proptest::collection::vec(pos_rat(), 4), g in proptest::collection::vec(pos_rat(), 3)) {
            let g: Vec<_> = g[..n - 1].iter().map(|x| x - &rat(1, 1)).collect();
            let eq = HypergeometricEquation::new(a[..n].to_vec(), g).unwrap();
            let v = buehring_A(&eq.buehring_params(D), 0).unwrap();
            proptest::prop_assert!(v.dist(&PrecComplex::one(D)) < 1e-35);
        }

        #[test]
        fn g_c_leading_is_gamma_minus_c(a in proptest::collection::vec(pos_rat(), 3), g in proptest::collection::vec(pos_rat(), 2)) {
            let g: Vec<_> = g.iter().map(|x| x - &rat(1, 1)).collect();
            let eq = HypergeometricEquation::new(a, g).unwrap();
            let c = eq.beta_n();
            proptest::prop_assume!(!c.is_integer());
            let v = g_coeff(&eq.buehring_params(D), 0, Branch::C, 1e-30).unwrap().value;
            proptest::prop_assert!(v.rel_dist(&gamma_rational(&-c, D).unwrap()) < 1e-30);
        }
    }
}
