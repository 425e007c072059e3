//! Taylor coefficients at z = 1 of G₂ (n = 3, 4) and G₃ (n = 4):
//! G₂ = z^{γ₁} Σ h_m (1−z)^m, G₃ = z^{γ₁} Σ k_m (1−z)^m.

use crate::equation::HypergeometricEquation;
use crate::numerics::{gamma, pochhammer, unit_phase, ExactRational, PrecComplex};
use crate::series_engine::{evaluate_3f2_at_unity, pfq, SumResult};

use super::sums::{algebraic_sum, wd, Decay, Range};
use super::ConnectionError;

fn g(x: &PrecComplex) -> Result<PrecComplex, ConnectionError> {
    Ok(gamma(x)?)
}

fn positive(x: &ExactRational, what: &str) -> Result<(), ConnectionError> {
    if x.signum() <= 0 {
        return Err(ConnectionError::Precondition(format!("{what} = {x} must be positive")));
    }
    Ok(())
}

/// Remainder families for exponents that may differ by integers.
fn families(exps: &[ExactRational], d: u32) -> Vec<(PrecComplex, u32)> {
    // a collision raises the log power, anchored at the smallest member of the class
    exps.iter()
        .enumerate()
        .map(|(i, e)| {
            let class: Vec<&ExactRational> = exps.iter().filter(|s| (e - *s).is_integer()).collect();
            let base = class.iter().copied().min().expect("contains e");
            let logs = exps[..i].iter().filter(|s| (e - *s).is_integer()).count() as u32;
            (PrecComplex::from_rational(base, d), logs)
        })
        .collect()
}

fn check_g2(eq: &HypergeometricEquation) -> Result<usize, ConnectionError> {
    let n = eq.order();
    if n != 3 && n != 4 {
        return Err(ConnectionError::Unsupported(format!("h_m for n = {n}")));
    }
    let gm = eq.gamma();
    if eq.is_resonant() && !(&gm[1] - &gm[0]).is_integer() {
        return Err(ConnectionError::Precondition("G₂ needs γ₁, γ₂ in the leading resonance class".into()));
    }
    Ok(n)
}

/// h_m, the (1−z)^m coefficient of z^{−γ₁} G₂(z).
pub fn h_coeff(eq: &HypergeometricEquation, m: usize, tol: f64, digits: u32) -> Result<SumResult, ConnectionError> {
    let n = check_g2(eq)?;
    let (al, gm) = (eq.alpha(), eq.gamma());
    let mr = ExactRational::from_int(m as i64);
    for a in &al[2..] {
        positive(&(&(a + &gm[1]) + &mr), "α_j + γ₂ + m")?;
    }
    let w = wd(digits);
    let r = |x: ExactRational| PrecComplex::from_rational(&x, w);
    let one = ExactRational::one();
    let mfact = pochhammer(&PrecComplex::one(w), m as u64);
    let top = &g(&r(&(&al[0] + &gm[1]) + &mr))? * &g(&r(&(&al[1] + &gm[1]) + &mr))?;
    let s12 = &(&(&al[0] + &al[1]) + &gm[0]) + &(&gm[1] + &mr);
    if n == 3 {
        let pre = &(&(&(&top * &g(&r(&al[0] + &gm[0]))?) * &g(&r(&al[1] + &gm[0]))?) * &g(&r(&al[2] + &gm[0]))?)
            / &(&(&g(&r(s12.clone()))? * &g(&r(&(&one + &gm[0]) - &gm[2]))?) * &mfact);
        let up = [r(&al[0] + &gm[0]), r(&al[1] + &gm[0]), r(&(&one - &al[2]) - &gm[2])];
        let lo = [r(s12), r(&(&one + &gm[0]) - &gm[2])];
        let f = evaluate_3f2_at_unity([&up[0], &up[1], &up[2]], [&lo[0], &lo[1]], tol / pre.abs_f64().max(1.0))?;
        return Ok(SumResult {
            value: (&pre * &f.value).with_digits(digits),
            tail_estimate: f.tail_estimate * pre.abs_f64(),
            ..f
        });
    }

    let c3 = &(&one - &gm[2]) + &gm[0];
    let c4 = &(&one - &gm[3]) + &gm[0];
    let pre = &(&(&top * &g(&r(&al[2] + &gm[0]))?) * &g(&r(&al[3] + &gm[0]))?)
        / &(&(&g(&r(c3.clone()))? * &g(&r(c4.clone()))?) * &mfact);
    // ℓ-term: Γ(α₁+γ₁+ℓ)Γ(α₂+γ₁+ℓ)/(Γ(s12+ℓ) ℓ!) · ₃F₂(−ℓ, α₃+γ₁, α₄+γ₁; c3, c4; 1)
    let (a1, a2) = (r(&al[0] + &gm[0]), r(&al[1] + &gm[0]));
    let s12c = r(s12.clone());
    let mut ratio = &(&g(&a1)? * &g(&a2)?) / &g(&s12c)?;
    let upper = [&al[2] + &gm[0], &al[3] + &gm[0]];
    let lower = [c3, c4];
    let decay = Decay {
        families: families(&[&(&al[2] + &gm[1]) + &mr, &(&al[3] + &gm[1]) + &mr], w),
        onset: [&upper[0], &upper[1], &lower[0], &lower[1], &s12].iter().map(|x| x.abs().to_f64()).fold(1.0, f64::max),
    };
    let s = algebraic_sum(
        |l| {
            let lc = PrecComplex::from_int(l as i64, w);
            let t = &ratio * &terminating_3f2(l, &upper, &lower, w)?;
            ratio = &(&ratio * &(&(&a1 + &lc) * &(&a2 + &lc))) / &(&(&s12c + &lc) * &PrecComplex::from_int(l as i64 + 1, w));
            Ok(t)
        },
        &decay,
        tol / pre.abs_f64().max(1.0),
        Range::Long,
        w,
    )?;
    Ok(SumResult { value: (&pre * &s.value).with_digits(digits), tail_estimate: s.tail_estimate * pre.abs_f64(), ..s })
}

/// ₃F₂(−ℓ, a, b; c, d; 1). The plain sum alternates with binomial-size terms, so it
/// is rewritten as (d−b)_ℓ/(d)_ℓ ₃F₂(−ℓ, c−a, b; c, 1+b−d−ℓ; 1), whose terms
/// stay polynomially bounded, whenever some pairing keeps 1+b−d−ℓ off the poles.
fn terminating_3f2(
    l: usize,
    upper: &[ExactRational; 2],
    lower: &[ExactRational; 2],
    d: u32,
) -> Result<PrecComplex, ConnectionError> {
    let r = |x: &ExactRational, dd: u32| PrecComplex::from_rational(x, dd);
    let one = ExactRational::one();
    let lr = ExactRational::from_int(l as i64);
    for (ai, bi) in [(0, 1), (1, 0)] {
        for (ci, di) in [(0, 1), (1, 0)] {
            let (a, b, c, dd) = (&upper[ai], &upper[bi], &lower[ci], &lower[di]);
            let dmb = dd - b;
            if dmb.is_integer() {
                continue;
            }
            let w = d + 10;
            let pre = &pochhammer(&r(&dmb, w), l as u64) / &pochhammer(&r(dd, w), l as u64);
            let up = [r(&(-&lr), w), r(&(c - a), w), r(b, w)];
            let lo = [r(c, w), r(&(&(&(&one + b) - dd) - &lr), w)];
            let f = pfq(&up, &lo, &PrecComplex::one(w), 0.0)?;
            return Ok((&pre * &f.value).with_digits(d));
        }
    }
    // every pairing hits a pole: plain sum with the binomial cancellation paid in digits
    let w = d + 10 + (l as u32) * 31 / 100;
    let up = [r(&(-&lr), w), r(&upper[0], w), r(&upper[1], w)];
    let lo = [r(&lower[0], w), r(&lower[1], w)];
    Ok(pfq(&up, &lo, &PrecComplex::one(w), 0.0)?.value.with_digits(d))
}

/// k_m, the (1−z)^m coefficient of z^{−γ₁} G₃(z), n = 4.
pub fn k_coeff(eq: &HypergeometricEquation, m: usize, tol: f64, digits: u32) -> Result<SumResult, ConnectionError> {
    let n = eq.order();
    if n != 4 {
        return Err(ConnectionError::Unsupported(format!("k_m for n = {n}")));
    }
    let (al, gm) = (eq.alpha(), eq.gamma());
    if eq.is_resonant() && !(&gm[2] - &gm[0]).is_integer() {
        return Err(ConnectionError::Precondition("G₃ needs γ₁, γ₂, γ₃ in the leading resonance class".into()));
    }
    if (&al[1] - &al[2]).is_integer() {
        return Err(ConnectionError::Precondition(format!("α₂ − α₃ = {} is an integer", &al[1] - &al[2])));
    }
    let one = ExactRational::one();
    let mr = ExactRational::from_int(m as i64);
    let sigma = &(&al[0] + &gm[2]) + &mr;
    positive(&sigma, "α₁ + γ₃ + m")?;
    positive(&(&al[3] + &gm[0]), "α₄ + γ₁")?;
    positive(&(&(&al[3] + &gm[2]) + &mr), "α₄ + γ₃ + m")?;

    let w = wd(digits);
    let r = |x: &ExactRational| PrecComplex::from_rational(x, w);
    let mfact = pochhammer(&PrecComplex::one(w), m as u64);
    let pre = &(&(&(&g(&r(&(&al[0] + &gm[1])))? * &g(&r(&(&(&al[1] + &gm[2]) + &mr)))?)
        * &g(&r(&(&(&al[2] + &gm[2]) + &mr)))?)
        * &g(&r(&(&al[3] + &gm[0])))?)
        / &(&g(&r(&(&(&one - &al[3]) - &gm[3])))? * &mfact);

    // Each bracket term after Thomae's relation with the ℓ-dependent upper parameter as pivot:
    // e^{−iπα_p} Γ(α_q−α_p)Γ(γ₁+α_p)Γ(1+α_p−α_q)Γ(σ) / (Γ(α_q+γ₃+m)Γ(σ+γ₁+α_p)Γ(σ+c))
    //   · ₃F₂(1−α_q−γ₂−ℓ, α₁+γ₁, σ; σ+γ₁+α_p, σ+c; 1),  c = 1−α_q−γ₃−m
    struct Branch {
        coeff: PrecComplex,
        x0: ExactRational,
        lower: [ExactRational; 2],
    }
    let mut branches = Vec::new();
    for (p, q) in [(1usize, 2usize), (2, 1)] {
        let c = &(&(&one - &al[q]) - &gm[2]) - &mr;
        let l1 = &(&sigma + &gm[0]) + &al[p];
        let l2 = &sigma + &c;
        let num = &(&(&g(&r(&(&al[q] - &al[p])))? * &g(&r(&(&gm[0] + &al[p])))?)
            * &g(&r(&(&(&one + &al[p]) - &al[q])))?)
            * &g(&r(&sigma))?;
        let den = &(&g(&r(&(&(&al[q] + &gm[2]) + &mr)))? * &g(&r(&l1))?) * &g(&r(&l2))?;
        let coeff = &unit_phase(&(-&al[p]), w) * &(&num / &den);
        branches.push(Branch { coeff, x0: &(&one - &al[q]) - &gm[1], lower: [l1, l2] });
    }
    let a1g1 = &al[0] + &gm[0];
    let a4 = &(&one - &al[3]) - &gm[3];
    let c14 = &(&one - &gm[3]) + &gm[0];
    // outer ℓ-term: Γ(α₁+γ₁+ℓ)Γ(1−α₄−γ₄+ℓ)/(Γ(1−γ₄+γ₁+ℓ) ℓ!)
    let (ua, ub, lc) = (r(&a1g1), r(&a4), r(&c14));
    let mut outer = &(&g(&ua)? * &g(&ub)?) / &g(&lc)?;
    let s_off = &(&gm[2] - &gm[0]) + &mr;
    let decay = Decay {
        families: families(&[&al[3] + &gm[0], &(&al[3] + &gm[0]) + &s_off], w),
        onset: [&a1g1, &a4, &c14, &sigma].iter().map(|x| x.abs().to_f64()).fold(1.0, f64::max),
    };
    let inner_tol = tol * 1e-5;
    let s = algebraic_sum(
        |l| {
            let lr = ExactRational::from_int(l as i64);
            let lc_ = PrecComplex::from_int(l as i64, w);
            // the first ~ℓ terms alternate with binomial size
            let wl = w + 10 + (l as u32) * 31 / 100;
            let rl = |x: &ExactRational| PrecComplex::from_rational(x, wl);
            let mut bracket = PrecComplex::zero(w);
            for b in &branches {
                let up = [rl(&(&b.x0 - &lr)), rl(&a1g1), rl(&sigma)];
                let lo = [rl(&b.lower[0]), rl(&b.lower[1])];
                let f = pfq(&up, &lo, &PrecComplex::one(wl), inner_tol)?;
                bracket += &(&b.coeff * &f.value.with_digits(w));
            }
            let t = &outer * &bracket;
            outer = &(&outer * &(&(&ua + &lc_) * &(&ub + &lc_))) / &(&(&lc + &lc_) * &PrecComplex::from_int(l as i64 + 1, w));
            Ok(t)
        },
        &decay,
        tol / pre.abs_f64().max(1.0),
        Range::Short,
        w,
    )?;
    Ok(SumResult { value: (&pre * &s.value).with_digits(digits), tail_estimate: s.tail_estimate * pre.abs_f64(), ..s })
}

/// Residuals of Im k_m against π h_m, π |h_m| and −π h_m.
#[derive(Clone, Debug)]
pub struct ImKResiduals {
    pub m: usize,
    pub h: PrecComplex,
    pub k: PrecComplex,
    pub minus_pi_h: f64,
    pub minus_pi_abs_h: f64,
    pub plus_pi_h: f64,
}

pub fn im_k_residuals(eq: &HypergeometricEquation, m: usize, tol: f64, digits: u32) -> Result<ImKResiduals, ConnectionError> {
    let h = h_coeff(eq, m, tol, digits)?.value;
    let k = k_coeff(eq, m, tol, digits)?.value;
    let pi = PrecComplex::pi(digits);
    let im_k = k.imag_part();
    let pih = &pi * &h;
    let pi_abs = &pi * &PrecComplex::from_floats(h.abs(), rug::Float::new(h.bits()), digits);
    Ok(ImKResiduals {
        m,
        minus_pi_h: im_k.dist(&pih),
        minus_pi_abs_h: im_k.dist(&pi_abs),
        plus_pi_h: (&im_k + &pih).abs_f64(),
        h,
        k,
    })
}
