//! Barnes integrals of Γ quotients as finite sums of pFq values.
//!
//! I(z) = ∫ dt/(2πi) Π Γ(a_i + t) Π Γ(b_j − t) / (Π Γ(c_k + t) Π Γ(d_l − t)) z^t.
//! Closing right picks up the poles of Γ(b_j − t); closing left those of Γ(a_i + t).

use crate::numerics::{gamma, rgamma, PrecComplex};

use super::pfq::pfq;
use super::{as_integer, SeriesError};

/// z together with the branch of log z used for z^t.
#[derive(Clone, Debug)]
pub struct BarnesArg {
    pub z: PrecComplex,
    pub log_z: PrecComplex,
}

impl BarnesArg {
    pub fn principal(z: &PrecComplex) -> Self {
        BarnesArg { z: z.clone(), log_z: z.ln() }
    }

    /// z = e^{log_z} for an explicitly chosen logarithm.
    pub fn from_log(log_z: &PrecComplex) -> Self {
        BarnesArg { z: log_z.exp(), log_z: log_z.clone() }
    }

    fn pow(&self, e: &PrecComplex) -> PrecComplex {
        (&self.log_z * e).exp()
    }
}

/// Parameter lists of the integrand.
#[derive(Clone, Debug, Default)]
pub struct SlaterSpec {
    pub a: Vec<PrecComplex>,
    pub b: Vec<PrecComplex>,
    pub c: Vec<PrecComplex>,
    pub d: Vec<PrecComplex>,
}

fn nonresonant(xs: &[&PrecComplex]) -> bool {
    for (i, x) in xs.iter().enumerate() {
        for y in &xs[i + 1..] {
            if as_integer(&(*x - *y)).is_some() {
                return false;
            }
        }
    }
    true
}

fn g(x: &PrecComplex) -> Result<PrecComplex, SeriesError> {
    gamma(x).map_err(|_| SeriesError::Pole)
}

fn is_unit(z: &PrecComplex) -> bool {
    (z.abs_f64() - 1.0).abs() < 1e-12
}

/// One half of the lemma: poles of Γ(b_j − t) (right) with argument (−1)^{q+s} z.
fn right_sum(
    a: &[PrecComplex],
    b: &[PrecComplex],
    c: &[PrecComplex],
    d: &[PrecComplex],
    arg: &BarnesArg,
    tol: f64,
) -> Result<PrecComplex, SeriesError> {
    let dg = arg.z.digits();
    let one = PrecComplex::one(dg);
    let sgn = if (b.len() + d.len()).is_multiple_of(2) { one.clone() } else { -one.clone() };
    let w = &sgn * &arg.z;
    let mut total = PrecComplex::zero(dg);
    for (m, bm) in b.iter().enumerate() {
        let mut pre = arg.pow(bm);
        let mut up = Vec::new();
        let mut lo = Vec::new();
        for ai in a {
            let x = ai + bm;
            pre = &pre * &g(&x)?;
            up.push(x);
        }
        for dl in d {
            pre = &pre * &rgamma(&(dl - bm));
            up.push(&(&one + bm) - dl);
        }
        for ck in c {
            let x = ck + bm;
            pre = &pre * &rgamma(&x);
            lo.push(x);
        }
        for (j, bj) in b.iter().enumerate() {
            if j != m {
                pre = &pre * &g(&(bj - bm))?;
                lo.push(&(&one + bm) - bj);
            }
        }
        if pre.is_zero() {
            continue;
        }
        let f = pfq(&up, &lo, &w, tol)?;
        total += &(&pre * &f.value);
    }
    Ok(total)
}

/// Evaluate I(z) by whichever half of the lemma applies.
pub fn slater_expand(spec: &SlaterSpec, arg: &BarnesArg, tol: f64) -> Result<PrecComplex, SeriesError> {
    let (p, q, r, s) = (spec.a.len(), spec.b.len(), spec.c.len(), spec.d.len());
    let dg = arg.z.digits();
    let za = arg.z.abs_f64();
    if za > 1.0 + 1e-12 {
        return Err(SeriesError::Divergence("|z| > 1".into()));
    }
    if is_unit(&arg.z) {
        let mut e = PrecComplex::zero(dg);
        for x in spec.c.iter().chain(&spec.d) {
            e += x;
        }
        for x in spec.a.iter().chain(&spec.b) {
            e -= x;
        }
        if e.re().to_f64() <= 0.0 {
            return Err(SeriesError::Divergence("Re(Σc + Σd − Σa − Σb) ≤ 0 on |z| = 1".into()));
        }
    }
    let right_ok = q + r >= p + s && nonresonant(&spec.b.iter().chain(&spec.c).collect::<Vec<_>>());
    let left_ok = p + s >= q + r && nonresonant(&spec.a.iter().chain(&spec.d).collect::<Vec<_>>());
    if right_ok && q > 0 {
        return right_sum(&spec.a, &spec.b, &spec.c, &spec.d, arg, tol);
    }
    if left_ok && p > 0 {
        return left_sum(spec, arg, tol);
    }
    Err(SeriesError::Resonant("pole differences are integers on the side to be closed".into()))
}

/// Poles of Γ(a_i + t) at t = −a_m − k: z^{−a_m} times a series in (−1)^{p+r}/z.
fn left_sum(spec: &SlaterSpec, arg: &BarnesArg, tol: f64) -> Result<PrecComplex, SeriesError> {
    let dg = arg.z.digits();
    let one = PrecComplex::one(dg);
    let sgn = if (spec.a.len() + spec.c.len()).is_multiple_of(2) { one.clone() } else { -one.clone() };
    let w = &sgn * &arg.z.recip();
    let mut total = PrecComplex::zero(dg);
    for (m, am) in spec.a.iter().enumerate() {
        let mut pre = arg.pow(&(-am.clone()));
        let mut up = Vec::new();
        let mut lo = Vec::new();
        for bj in &spec.b {
            let x = bj + am;
            pre = &pre * &g(&x)?;
            up.push(x);
        }
        for ck in &spec.c {
            pre = &pre * &rgamma(&(ck - am));
            up.push(&(&one + am) - ck);
        }
        for dl in &spec.d {
            let x = dl + am;
            pre = &pre * &rgamma(&x);
            lo.push(x);
        }
        for (i, ai) in spec.a.iter().enumerate() {
            if i != m {
                pre = &pre * &g(&(ai - am))?;
                lo.push(&(&one + am) - ai);
            }
        }
        if pre.is_zero() {
            continue;
        }
        let f = pfq(&up, &lo, &w, tol)?;
        total += &(&pre * &f.value);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, ExactRational};
    use crate::series_engine::residues::{BarnesIntegrand, GammaFactor};

    const D: u32 = 50;

    fn r(p: i64, q: i64) -> PrecComplex {
        PrecComplex::from_rational(&rat(p, q), D)
    }

    #[test]
    fn barnes_one_f_zero_against_residues() {
        let spec = SlaterSpec { a: vec![r(1, 3)], b: vec![r(2, 5)], ..Default::default() };
        let z = PrecComplex::from_f64(0.3, D);
        let v = slater_expand(&spec, &BarnesArg::principal(&z), 1e-45).unwrap();
        let integrand = BarnesIntegrand {
            factors: vec![GammaFactor::num(rat(1, 3), 1), GammaFactor::num(rat(2, 5), -1)],
            phase: ExactRational::zero(),
        };
        let (w, _) = integrand.right_residues(&rat(2, 5), 300, D).unwrap().eval_local(&z, D);
        assert!(v.dist(&w) < 1e-40);
    }

    #[test]
    fn two_right_poles_against_residues() {
        // Γ(a+t)Γ(b1−t)Γ(b2−t)/Γ(c+t), nonresonant b's
        let spec = SlaterSpec { a: vec![r(1, 3)], b: vec![r(1, 7), r(2, 5)], c: vec![r(3, 4)], d: vec![] };
        let z = PrecComplex::from_f64(0.45, D);
        let v = slater_expand(&spec, &BarnesArg::principal(&z), 1e-45).unwrap();
        let integrand = BarnesIntegrand {
            factors: vec![
                GammaFactor::num(rat(1, 3), 1),
                GammaFactor::num(rat(1, 7), -1),
                GammaFactor::num(rat(2, 5), -1),
                GammaFactor::den(rat(3, 4), 1),
            ],
            phase: ExactRational::zero(),
        };
        let mut w = PrecComplex::zero(D);
        for base in [rat(1, 7), rat(2, 5)] {
            w += &integrand.right_residues(&base, 400, D).unwrap().eval_local(&z, D).0;
        }
        assert!(v.dist(&w) < 1e-35, "{} vs {}", v, w);
    }

    #[test]
    fn resonant_side_rejected() {
        let spec = SlaterSpec { a: vec![r(1, 3), r(4, 3)], b: vec![r(0, 1), r(1, 1)], c: vec![r(1, 2)], d: vec![r(1, 5)] };
        let z = PrecComplex::from_f64(0.5, D);
        assert!(matches!(slater_expand(&spec, &BarnesArg::principal(&z), 1e-30), Err(SeriesError::Resonant(_))));
    }
}
