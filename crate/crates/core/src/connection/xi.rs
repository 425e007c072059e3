//! Continuation of ξ_n, the solution with exponent β_n at z = 1, into the y_j^* basis at 0,
//! and the expansion of G_p in the same basis.

use crate::equation::HypergeometricEquation;
use crate::numerics::{gamma_rational, rgamma, unit_phase, ExactRational, Jet, PrecComplex};

use super::ConnectionError;

/// ψ(x) = −e^{−iπβ_n} Π_k (x − e^{−2πiα_k}) / Π_{k>q} (x − e^{2πiγ_k}).
#[derive(Clone, Debug)]
pub struct PsiData {
    pub zeros: Vec<PrecComplex>,
    pub poles: Vec<PrecComplex>,
    pub prefactor: PrecComplex,
    /// ψ^{(r)}(e^{2πiγ₁})/r! for r = 0..q.
    pub taylor: Vec<PrecComplex>,
}

impl PsiData {
    pub fn eval(&self, x: &PrecComplex) -> PrecComplex {
        let mut v = self.prefactor.clone();
        for z in &self.zeros {
            v = &v * &(x - z);
        }
        for p in &self.poles {
            v = &v / &(x - p);
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct XiContinuationData {
    pub resonant: bool,
    /// Size of the leading resonance class (1 when nonresonant).
    pub q: usize,
    /// ξ_n = Σ_j coefficients[j] y_{j+1}^*.
    pub coefficients: Vec<PrecComplex>,
    pub psi: Option<PsiData>,
    /// False when the second sum of the resonant formula is nonempty (q < n); that
    /// part has not been checked against the oracle.
    pub verified: bool,
}

/// Γ(β+1) Π_{k≠j} Γ(γ_k − γ_j) / Π_k Γ(1 − α_k − γ_j).
fn simple_coefficient(eq: &HypergeometricEquation, j: usize, digits: u32) -> Result<PrecComplex, ConnectionError> {
    let gm = eq.gamma();
    let one = ExactRational::one();
    let mut v = gamma_rational(&(&eq.beta_n() + &one), digits)?;
    for (k, g) in gm.iter().enumerate() {
        if k != j {
            v = &v * &gamma_rational(&(g - &gm[j]), digits)?;
        }
    }
    for a in eq.alpha() {
        v = &v * &rgamma(&PrecComplex::from_rational(&(&(&one - a) - &gm[j]), digits));
    }
    Ok(v)
}

/// The leading class must be γ₁..γ_q and every other γ must be on its own.
fn leading_class(eq: &HypergeometricEquation) -> Result<usize, ConnectionError> {
    let classes = eq.resonance_classes();
    let q = classes[0].len();
    if classes[0] != (0..q).collect::<Vec<_>>() || classes[1..].iter().any(|c| c.len() > 1) {
        return Err(ConnectionError::Unsupported(format!(
            "resonance classes {classes:?}: only a single leading class γ₁..γ_q is covered"
        )));
    }
    Ok(q)
}

pub fn xi_continuation(eq: &HypergeometricEquation, digits: u32) -> Result<XiContinuationData, ConnectionError> {
    let beta = eq.beta_n();
    if beta.is_integer() && beta.signum() < 0 {
        return Err(ConnectionError::Unsupported(format!("β_n = {beta} is a negative integer (η_n case)")));
    }
    let n = eq.order();
    let q = leading_class(eq)?;
    if q == 1 {
        let coefficients = (0..n).map(|j| simple_coefficient(eq, j, digits)).collect::<Result<_, _>>()?;
        return Ok(XiContinuationData { resonant: false, q, coefficients, psi: None, verified: true });
    }

    let d = digits + 10;
    let gm = eq.gamma();
    let zeros: Vec<PrecComplex> = eq.alpha().iter().map(|a| unit_phase(&(-(a * 2)), d)).collect();
    let poles: Vec<PrecComplex> = gm[q..].iter().map(|g| unit_phase(&(g * 2), d)).collect();
    let prefactor = -unit_phase(&(-beta.clone()), d);
    let x0 = unit_phase(&(&gm[0] * 2), d);
    let mut jet = Jet::constant(prefactor.clone(), q);
    for z in &zeros {
        jet = jet.mul(&Jet::linear(&x0 - z, q));
    }
    for p in &poles {
        jet = jet.div(&Jet::linear(&x0 - p, q));
    }
    let taylor: Vec<PrecComplex> = jet.c.clone();

    let pre = &gamma_rational(&(&beta + &ExactRational::one()), d)? / &PrecComplex::two_pi_i(d);
    let mut coefficients = Vec::with_capacity(n);
    for j in 1..=q {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let ph = unit_phase(&(-(&gm[0] * (2 * j as i64))), d);
        coefficients.push((&(&pre * &taylor[q - j]) * &ph).scale_int(sign).with_digits(digits));
    }
    let pi = PrecComplex::pi(d);
    for j in q..n {
        // printed with 1/π where the nonresonant formula has Γ(β+1)
        let c = &(&simple_coefficient(eq, j, d)? / &gamma_rational(&(&beta + &ExactRational::one()), d)?) / &pi;
        coefficients.push(c.with_digits(digits));
    }
    let psi = PsiData {
        zeros: zeros.iter().map(|x| x.with_digits(digits)).collect(),
        poles: poles.iter().map(|x| x.with_digits(digits)).collect(),
        prefactor: prefactor.with_digits(digits),
        taylor: taylor.iter().map(|x| x.with_digits(digits)).collect(),
    };
    Ok(XiContinuationData { resonant: true, q, coefficients, psi: Some(psi), verified: q == n })
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// Coefficients A_{p1}, ..., A_{pp} with G_p = Σ_j A_{pj} y_j^*.
///
/// Nonresonant: y_j^* is the integral representation, and
/// A_{pj} = e^{iπ(p−1)γ_j} Π_{k≠j, k≤p} π / sin π(γ_k − γ_j).
/// Resonant (p ≤ q): A_{pj} = e^{−2πiγ₁} e^{iπ Σ_{h≤p} γ_h} (2πi)^{p−1} (−1)^{p−j} C(p−1, p−j).
pub fn gp_basis_change(eq: &HypergeometricEquation, p: usize, digits: u32) -> Result<Vec<PrecComplex>, ConnectionError> {
    let n = eq.order();
    if p == 0 || p > n {
        return Err(ConnectionError::Precondition(format!("G_p needs 1 ≤ p ≤ {n}, got {p}")));
    }
    let gm = eq.gamma();
    let classes = eq.resonance_classes();
    let lead = &classes[0];
    if lead.len() > 1 {
        let q = leading_class(eq)?;
        if p > q {
            return Err(ConnectionError::Precondition(format!("resonant G_p needs p ≤ q = {q}")));
        }
        let mut phase = -(&gm[0] * 2);
        for g in &gm[..p] {
            phase += g;
        }
        let mut pre = unit_phase(&phase, digits);
        for _ in 1..p {
            pre = &pre * &PrecComplex::two_pi_i(digits);
        }
        return Ok((1..=p)
            .map(|j| {
                let sign = if (p - j).is_multiple_of(2) { 1 } else { -1 };
                pre.scale_int(sign * binomial(p - 1, p - j))
            })
            .collect());
    }
    if gm[..p].iter().enumerate().any(|(i, a)| gm[..i].iter().any(|b| (a - b).is_integer())) {
        return Err(ConnectionError::Precondition("γ₁..γ_p are not pairwise nonresonant".into()));
    }
    let pi = PrecComplex::pi(digits);
    Ok((0..p)
        .map(|j| {
            let mut v = unit_phase(&(&gm[j] * (p as i64 - 1)), digits);
            for k in (0..p).filter(|&k| k != j) {
                let s = (&pi * &PrecComplex::from_rational(&(&gm[k] - &gm[j]), digits)).sin();
                v = &v * &(&pi / &s);
            }
            v
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    const D: u32 = 40;

    fn close(a: &PrecComplex, b: &PrecComplex) -> bool {
        a.dist(b) < 1e-35
    }

    #[test]
    fn quartic_psi_and_xi() {
        let x = xi_continuation(&HypergeometricEquation::quartic(), D).unwrap();
        let psi = x.psi.as_ref().unwrap();
        let i = PrecComplex::i(D);
        // ψ(1) = 4i, ψ'(1) = 6i, ψ''(1)/2 = 4i
        for (t, w) in psi.taylor.iter().zip([4, 6, 4]) {
            assert!(close(t, &i.scale_int(w)), "{t}");
        }
        assert!(close(&psi.eval(&PrecComplex::one(D)), &i.scale_int(4)));
        // ξ₃ = −(Γ(3/2)/π)(2y₁* − 3y₂* + 2y₃*)
        let g = &gamma_rational(&rat(3, 2), D).unwrap() / &PrecComplex::pi(D);
        for (c, w) in x.coefficients.iter().zip([2, -3, 2]) {
            assert!(close(c, &g.scale_int(-w)), "{c}");
        }
        assert!(x.verified);
    }

    #[test]
    fn quintic_xi() {
        let x = xi_continuation(&HypergeometricEquation::quintic(), D).unwrap();
        let psi = x.psi.unwrap();
        for (t, w) in psi.taylor.iter().zip([5, 10, 10, 5]) {
            assert!(close(t, &PrecComplex::from_int(w, D)), "{t}");
        }
        // ξ₄ = (5/2πi)(y₄* − 2y₃* + 2y₂* − y₁*)
        let f = PrecComplex::from_int(5, D) / &PrecComplex::two_pi_i(D);
        for (c, w) in x.coefficients.iter().zip([-1, 2, -2, 1]) {
            assert!(close(c, &f.scale_int(w)), "{c}");
        }
    }

    #[test]
    fn negative_integer_beta_rejected() {
        let eq = HypergeometricEquation::parse(&["1", "1", "1"], &["1/2", "1/2", "0"]).unwrap();
        assert_eq!(eq.beta_n(), rat(-2, 1));
        assert!(matches!(xi_continuation(&eq, D), Err(ConnectionError::Unsupported(_))));
    }

    #[test]
    fn basis_change_rows() {
        let eq = HypergeometricEquation::quintic();
        let r1 = gp_basis_change(&eq, 1, D).unwrap();
        assert!(close(&r1[0], &PrecComplex::one(D)));
        let r2 = gp_basis_change(&eq, 2, D).unwrap();
        let tpi = PrecComplex::two_pi_i(D);
        assert!(close(&r2[0], &(-&tpi)) && close(&r2[1], &tpi));
        assert!(gp_basis_change(&eq, 5, D).is_err());
    }

    proptest::proptest! {
        #[test]
        fn basis_change_is_triangular(q in 2usize..7, num in -5i64..5, den in 2i64..7) {
            let g = rat(num, den);
            proptest::prop_assume!(!g.is_integer());
            let mut gamma = vec![g; q];
            gamma.push(ExactRational::zero());
            let alpha: Vec<_> = (1..=q as i64 + 1).map(|k| rat(k, q as i64 + 2)).collect();
            let eq = HypergeometricEquation::new(alpha, gamma).unwrap();
            let two_pi = 2.0 * std::f64::consts::PI;
            for p in 1..=q {
                let row = gp_basis_change(&eq, p, D).unwrap();
                proptest::prop_assert_eq!(row.len(), p);
                // |A_pp| = (2π)^{p−1}
                let want = two_pi.powi(p as i32 - 1);
                proptest::prop_assert!((row[p - 1].abs_f64() - want).abs() < 1e-10 * want);
            }
            proptest::prop_assert!(gp_basis_change(&eq, q + 1, D).is_err());
        }
    }
}
