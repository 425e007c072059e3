//! Residue sums of Mellin–Barnes integrands built from Γ factors.
//!
//! The integrand is Π Γ(c + s t)^{±1} · e^{iπ w t} · z^t. Closing the contour to
//! the right, ∫ dt/(2πi) = −Σ Res. At each candidate pole t₀ the Γ product is
//! carried as a truncated Laurent series in ε = t − t₀ and moved to t₀ + 1 by the
//! functional equation, so only the starting point needs polygamma values.

use crate::equation::{HypergeometricEquation, Point};
use crate::frobenius::LogPowerSeries;
use crate::numerics::{taylor_jet_gamma, unit_phase, ExactRational, Jet, PrecComplex};

use super::{SeriesError, SumResult};

/// Γ(shift + sign·t)^power, sign and power each ±1.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaFactor {
    pub shift: ExactRational,
    pub sign: i8,
    pub power: i8,
}

impl GammaFactor {
    pub fn num(shift: ExactRational, sign: i8) -> Self {
        GammaFactor { shift, sign, power: 1 }
    }

    pub fn den(shift: ExactRational, sign: i8) -> Self {
        GammaFactor { shift, sign, power: -1 }
    }

    fn arg(&self, t: &ExactRational) -> ExactRational {
        if self.sign > 0 {
            &self.shift + t
        } else {
            &self.shift - t
        }
    }
}

/// Π factors · e^{iπ·phase·t}.
#[derive(Clone, Debug)]
pub struct BarnesIntegrand {
    pub factors: Vec<GammaFactor>,
    pub phase: ExactRational,
}

/// ε^val (c₀ + c₁ ε + ...), with c₀ ≠ 0.
#[derive(Clone, Debug)]
struct Laurent {
    val: i32,
    c: Jet,
}

impl Laurent {
    fn mul(&self, o: &Laurent) -> Laurent {
        Laurent { val: self.val + o.val, c: self.c.mul(&o.c) }
    }

    fn inv(&self) -> Laurent {
        Laurent { val: -self.val, c: self.c.inv() }
    }

    /// x + s ε with x exact.
    fn linear(x: &ExactRational, s: i8, len: usize, d: u32) -> Laurent {
        let mut c = vec![PrecComplex::zero(d); len];
        if x.is_zero() {
            c[0] = PrecComplex::from_int(s as i64, d);
            Laurent { val: 1, c: Jet { c } }
        } else {
            c[0] = PrecComplex::from_rational(x, d);
            if len > 1 {
                c[1] = PrecComplex::from_int(s as i64, d);
            }
            Laurent { val: 0, c: Jet { c } }
        }
    }
}

impl BarnesIntegrand {
    fn factor_at(&self, f: &GammaFactor, t0: &ExactRational, len: usize, d: u32) -> Result<Laurent, SeriesError> {
        let a = PrecComplex::from_rational(&f.arg(t0), d);
        let gj = taylor_jet_gamma(&a, len - 1)?;
        let p = gj.pole_order as i32;
        // Γ(a + u) with u = sε
        let mut c = gj.coeffs;
        if f.sign < 0 {
            for (i, x) in c.iter_mut().enumerate() {
                if (i as i32 + p) % 2 == 1 {
                    *x = -x.clone();
                }
            }
        }
        let l = Laurent { val: -p, c: Jet { c } };
        Ok(if f.power > 0 { l } else { l.inv() })
    }

    /// Γ-product ratio between t₀ + 1 and t₀ for one factor.
    fn step(f: &GammaFactor, t0: &ExactRational, len: usize, d: u32) -> Laurent {
        let l = if f.sign > 0 {
            Laurent::linear(&f.arg(t0), 1, len, d)
        } else {
            Laurent::linear(&(f.arg(t0) - 1), -1, len, d).inv()
        };
        if f.power > 0 {
            l
        } else {
            l.inv()
        }
    }

    /// Upper bound on the pole order along base + ℤ.
    fn max_order(&self, base: &ExactRational) -> usize {
        self.factors.iter().filter(|f| f.power > 0 && f.arg(base).is_integer()).count()
    }

    /// −Σ Res over t = base, base+1, ..., base+terms−1, as a log-power series in z
    /// with exponent `base`: coefficient [j][k] multiplies z^{base+k} (log z)^j.
    pub fn right_residues(
        &self,
        base: &ExactRational,
        terms: usize,
        digits: u32,
    ) -> Result<LogPowerSeries<PrecComplex>, SeriesError> {
        let d = digits + 10;
        let order = self.max_order(base);
        let len = order + 1;
        let mut h = Laurent { val: 0, c: Jet::constant(PrecComplex::one(d), len) };
        for f in &self.factors {
            h = h.mul(&self.factor_at(f, base, len, d)?);
        }
        let iw = PrecComplex::pi(d).mul_i().scale(&self.phase);
        let e = Jet::exp_linear(&iw, len);
        let mut coeffs = vec![vec![PrecComplex::zero(digits); terms]; order.max(1)];
        let mut t0 = base.clone();
        for k in 0..terms {
            if h.val < 0 {
                let gfull = h.c.mul(&e);
                let ph = unit_phase(&(&self.phase * &t0), d);
                let top = (-1 - h.val) as usize;
                let mut fact = ExactRational::one();
                for j in 0..=top {
                    if j > 0 {
                        fact = fact * j as i64;
                    }
                    let v = &(&gfull.c[top - j] * &ph).scale(&fact.recip().expect("nonzero"));
                    coeffs[j][k] = (-v).with_digits(digits);
                }
            }
            if k + 1 < terms {
                for f in &self.factors {
                    h = h.mul(&Self::step(f, &t0, len, d));
                }
                t0 = &t0 + 1;
            }
        }
        Ok(LogPowerSeries { base_point: Point::Zero, exponent: base.clone(), coeffs })
    }
}

/// Distinct classes mod ℤ among `xs`, each represented by its smallest member.
fn class_bases(xs: &[ExactRational]) -> Vec<ExactRational> {
    let mut out: Vec<ExactRational> = Vec::new();
    for x in xs {
        match out.iter_mut().find(|b| (x - &**b).is_integer()) {
            Some(b) => {
                if x < b {
                    *b = x.clone();
                }
            }
            None => out.push(x.clone()),
        }
    }
    out
}

fn f_n_factors(eq: &HypergeometricEquation) -> Vec<GammaFactor> {
    let mut v = Vec::new();
    for a in eq.alpha() {
        v.push(GammaFactor::num(a.clone(), 1));
    }
    for g in eq.gamma() {
        v.push(GammaFactor::den(ExactRational::one() - g, 1));
    }
    v
}

fn check_separation(eq: &HypergeometricEquation, right: &[ExactRational]) -> Result<(), SeriesError> {
    for a in eq.alpha() {
        for g in right {
            let s = a + g;
            if s.is_integer() && s <= ExactRational::zero() {
                return Err(SeriesError::Unsupported(format!(
                    "pole of Γ(α + t) at t = {} collides with the right-hand poles",
                    -a.clone()
                )));
            }
        }
    }
    Ok(())
}

/// The integrand of G_p: f_n(t) e^{iπ(p−2)t} Π_{h≤p} Γ(γ_h − t)Γ(1 − γ_h + t).
pub fn gp_integrand(eq: &HypergeometricEquation, p: usize) -> BarnesIntegrand {
    let mut factors = f_n_factors(eq);
    for g in &eq.gamma()[..p] {
        factors.push(GammaFactor::num(g.clone(), -1));
        factors.push(GammaFactor::num(ExactRational::one() - g, 1));
    }
    BarnesIntegrand { factors, phase: ExactRational::from_int(p as i64 - 2) }
}

/// G_p(z) as log-power series at 0, one per exponent class among γ_1..γ_p.
pub fn gp_series(
    eq: &HypergeometricEquation,
    p: usize,
    terms: usize,
    digits: u32,
) -> Result<Vec<LogPowerSeries<PrecComplex>>, SeriesError> {
    let n = eq.order();
    if p == 0 || p > n {
        return Err(SeriesError::Unsupported(format!("G_p needs 1 ≤ p ≤ {n}, got {p}")));
    }
    let right = &eq.gamma()[..p];
    check_separation(eq, right)?;
    let integrand = gp_integrand(eq, p);
    class_bases(right).iter().map(|b| integrand.right_residues(b, terms, digits)).collect()
}

/// Sum of local series at a point z in (0, 1), with the largest retained-term size as tail.
pub fn eval_series_sum(series: &[LogPowerSeries<PrecComplex>], z: &PrecComplex, digits: u32) -> SumResult {
    let mut v = PrecComplex::zero(digits);
    let mut tail = 0.0f64;
    let mut terms = 0;
    for s in series {
        let (x, t) = s.eval_local(z, digits);
        v += &x;
        tail = tail.max(t);
        terms = terms.max(s.order());
    }
    SumResult { value: v, tail_estimate: tail, terms_used: terms, accelerated: false }
}

/// G_p(z) for z in (0, 1) from N residue terms per class.
pub fn gp_at_zero(
    eq: &HypergeometricEquation,
    p: usize,
    z: &PrecComplex,
    terms: usize,
    digits: u32,
) -> Result<SumResult, SeriesError> {
    let s = gp_series(eq, p, terms, digits)?;
    Ok(eval_series_sum(&s, z, digits))
}

/// y_j^*(z) = ∫ dt z^t f_n(t) (1 − e^{2πi(t−γ₁)})^{−j} over the class of γ₁, closed to the right.
/// The kernel is rewritten as [e^{−iπu} (i/2π) Γ(u)Γ(1−u)]^j with u = t − γ₁.
pub fn yj_star_series(
    eq: &HypergeometricEquation,
    j: usize,
    terms: usize,
    digits: u32,
) -> Result<LogPowerSeries<PrecComplex>, SeriesError> {
    let classes = eq.resonance_classes();
    let lead = &classes[0];
    if j == 0 || j > lead.len() {
        return Err(SeriesError::Unsupported(format!("y_j^* needs 1 ≤ j ≤ {}", lead.len())));
    }
    let g1 = eq.gamma()[0].clone();
    let members: Vec<ExactRational> = lead.iter().map(|&i| eq.gamma()[i].clone()).collect();
    check_separation(eq, &members)?;
    let mut factors = f_n_factors(eq);
    for _ in 0..j {
        factors.push(GammaFactor::num(-g1.clone(), 1));
        factors.push(GammaFactor::num(ExactRational::one() + &g1, -1));
    }
    let integrand = BarnesIntegrand { factors, phase: ExactRational::from_int(-(j as i64)) };
    let base = class_bases(&members).remove(0);
    let mut s = integrand.right_residues(&base, terms, digits)?;
    let d = digits + 10;
    let i2pi = PrecComplex::i(d) / &PrecComplex::pi(d).scale_int(2);
    let mut pre = &PrecComplex::two_pi_i(d) * &unit_phase(&(&g1 * j as i64), d);
    for _ in 0..j {
        pre = &pre * &i2pi;
    }
    for row in s.coeffs.iter_mut() {
        for c in row.iter_mut() {
            *c = (&*c * &pre).with_digits(digits);
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{gamma, rat};
    use crate::series_engine::pfq::pfq;

    const D: u32 = 50;

    #[test]
    fn quartic_g1_is_scaled_frobenius() {
        let eq = HypergeometricEquation::quartic();
        let s = gp_series(&eq, 1, 4, D).unwrap();
        assert_eq!(s.len(), 1);
        let c = &s[0].coeffs[0];
        let pref = gamma(&PrecComplex::from_rational(&rat(1, 4), D)).unwrap()
            * gamma(&PrecComplex::from_rational(&rat(1, 2), D)).unwrap()
            * gamma(&PrecComplex::from_rational(&rat(3, 4), D)).unwrap();
        assert!(c[0].dist(&pref) < 1e-45);
        let ratio = &c[1] / &c[0];
        assert!(ratio.dist(&PrecComplex::from_rational(&rat(3, 32), D)) < 1e-45);
    }

    #[test]
    fn nonresonant_g1_phase() {
        // the residue sum carries e^{−iπγ₁} relative to f_n(γ₁) z^{γ₁} ₙF_{n−1}
        let eq = HypergeometricEquation::parse(&["1/3", "1/2", "2/7"], &["1/5", "3/4", "0"]).unwrap();
        let z = PrecComplex::from_f64(0.4, D);
        let g1 = gp_at_zero(&eq, 1, &z, 200, D).unwrap().value;
        let g = eq.gamma()[0].clone();
        let a: Vec<PrecComplex> = eq.alpha().iter().map(|x| PrecComplex::from_rational(&(x + &g), D)).collect();
        let b: Vec<PrecComplex> =
            eq.gamma()[1..].iter().map(|x| PrecComplex::from_rational(&(ExactRational::one() - x + &g), D)).collect();
        let mut f = PrecComplex::one(D);
        for x in &a {
            f = &f * &gamma(x).unwrap();
        }
        for x in &b {
            f = &f / &gamma(x).unwrap();
        }
        let series = pfq(&a, &b, &z, 1e-45).unwrap().value;
        let zg = z.powc(&PrecComplex::from_rational(&g, D));
        let want = &(&(&f * &zg) * &series) * &unit_phase(&(-g), D);
        assert!(g1.dist(&want) < 1e-40, "{} vs {}", g1, want);
    }

    #[test]
    fn barnes_first_lemma_shape() {
        // ∫ Γ(a+t)Γ(b−t) z^t dt/2πi = Γ(a+b) z^b (1+z)^{−a−b}
        let (a, b) = (rat(1, 3), rat(2, 5));
        let integrand = BarnesIntegrand {
            factors: vec![GammaFactor::num(a.clone(), 1), GammaFactor::num(b.clone(), -1)],
            phase: ExactRational::zero(),
        };
        let s = integrand.right_residues(&b, 300, D).unwrap();
        let z = PrecComplex::from_f64(0.3, D);
        let (v, _) = s.eval_local(&z, D);
        let ab = PrecComplex::from_rational(&(&a + &b), D);
        let want = &(&gamma(&ab).unwrap() * &z.powc(&PrecComplex::from_rational(&b, D)))
            * &(&PrecComplex::one(D) + &z).powc(&(-ab));
        assert!(v.dist(&want) < 1e-40);
    }

    #[test]
    fn separation_is_checked() {
        let eq = HypergeometricEquation::parse(&["-1", "1/2"], &["0"]).unwrap();
        assert!(matches!(gp_series(&eq, 1, 5, D), Err(SeriesError::Unsupported(_))));
    }
}
