//! Numerical connection matrix from the overlap of the two convergence disks.
//!
//! Both local series converge on (0, 1), so M = Φ₁(1 − z)⁻¹ Φ₀(z) can be read
//! off at any point there. Agreement across several points is the convergence
//! diagnostic.

use thiserror::Error;

use crate::connection::{ConnectionMatrix, Method};
use crate::equation::{HypergeometricEquation, Point};
use crate::frobenius::{evaluate_rows, frobenius_basis, FrobeniusError, Normalization, Preset};
use crate::numerics::{rat, CMatrix, NumericsError, PrecComplex, DEFAULT_DIGITS, GUARD_DIGITS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("bad oracle configuration: {0}")]
    Config(String),
    #[error("Φ₁ is ill-conditioned at z = {point} (condition {condition:e})")]
    IllConditioned { point: f64, condition: f64 },
    #[error("matrices disagree across points by {deviation:e} (limit {limit:e}); raise the series order")]
    Inconsistent { deviation: f64, limit: f64 },
    #[error("unknown calibration target {0:?}")]
    UnknownTarget(String),
    #[error(transparent)]
    Frobenius(#[from] FrobeniusError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub points: Vec<f64>,
    pub order: usize,
    pub digits: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { points: vec![0.3, 0.5, 0.7], order: 400, digits: DEFAULT_DIGITS }
    }
}

impl OracleConfig {
    fn validate(&self, n: usize) -> Result<(), OracleError> {
        if self.points.is_empty() {
            return Err(OracleError::Config("no evaluation points".into()));
        }
        if let Some(p) = self.points.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
            return Err(OracleError::Config(format!("point {p} is not in (0,1)")));
        }
        if self.order < 2 * n {
            return Err(OracleError::Config(format!("order {} is below 2n = {}", self.order, 2 * n)));
        }
        Ok(())
    }

    /// Agreement across points required of a trustworthy result.
    pub fn consistency_limit(&self) -> f64 {
        10f64.powf(-(self.digits as f64) / 4.0)
    }
}

/// Per-point matrices before averaging.
#[derive(Clone, Debug)]
pub struct PointwiseConnection {
    pub points: Vec<f64>,
    pub matrices: Vec<CMatrix>,
    pub conditions: Vec<f64>,
    pub tails: Vec<f64>,
}

/// Normalizations of Φ₀ and Φ₁ for an equation: the preset bases for the two
/// worked examples, the raw Frobenius bases otherwise.
pub fn default_normalizations(eq: &HypergeometricEquation) -> (Normalization, Normalization) {
    for p in [Preset::Quartic, Preset::Quintic] {
        if *eq == p.equation() {
            return (Normalization::Preset(p.clone()), Normalization::Preset(p));
        }
    }
    (Normalization::Identity, Normalization::Identity)
}

/// M at every configured point, no averaging or consistency check.
pub fn connection_at_points(
    eq: &HypergeometricEquation,
    norm0: Normalization,
    norm1: Normalization,
    cfg: &OracleConfig,
) -> Result<PointwiseConnection, OracleError> {
    let n = eq.order();
    cfg.validate(n)?;
    let wd = cfg.digits + GUARD_DIGITS;
    let phi0 = frobenius_basis(eq, Point::Zero, cfg.order, norm0)?;
    let phi1 = frobenius_basis(eq, Point::One, cfg.order, norm1)?;
    let rows0 = phi0.rows();
    let rows1 = phi1.rows();
    let mut out = PointwiseConnection {
        points: cfg.points.clone(),
        matrices: Vec::new(),
        conditions: Vec::new(),
        tails: Vec::new(),
    };
    for &p in &cfg.points {
        let z = PrecComplex::from_f64(p, wd);
        let e0 = evaluate_rows(&phi0, &rows0, &z, wd)?;
        let e1 = evaluate_rows(&phi1, &rows1, &z, wd)?;
        let cond = e1.matrix.condition_inf();
        if !cond.is_finite() || cond.log10() > wd as f64 / 2.0 {
            return Err(OracleError::IllConditioned { point: p, condition: cond });
        }
        let m = e1.matrix.inverse()?.mul(&e0.matrix)?;
        out.matrices.push(m);
        out.conditions.push(cond);
        out.tails.push(e0.tail_estimate.max(e1.tail_estimate));
    }
    Ok(out)
}

/// Largest entrywise deviation between any two matrices.
pub fn cross_point_consistency(ms: &[CMatrix]) -> f64 {
    let mut dev = 0.0f64;
    for (i, a) in ms.iter().enumerate() {
        for b in &ms[i + 1..] {
            dev = dev.max(a.max_abs_diff(b));
        }
    }
    dev
}

/// The oracle M₁₀, averaged over the configured points.
pub fn numeric_connection(
    eq: &HypergeometricEquation,
    norm0: Normalization,
    norm1: Normalization,
    cfg: &OracleConfig,
) -> Result<ConnectionMatrix, OracleError> {
    let pw = connection_at_points(eq, norm0, norm1, cfg)?;
    let dev = cross_point_consistency(&pw.matrices);
    let limit = cfg.consistency_limit();
    if dev > limit {
        return Err(OracleError::Inconsistent { deviation: dev, limit });
    }
    let k = pw.matrices.len();
    let mut sum = pw.matrices[0].clone();
    for m in &pw.matrices[1..] {
        sum = sum.add(m);
    }
    let mean = sum.scale(&PrecComplex::one(cfg.digits + GUARD_DIGITS).div_int(k as i64));
    let rows = mean.to_rows().into_iter().map(|r| r.into_iter().map(|x| x.with_digits(cfg.digits)).collect()).collect();
    Ok(ConnectionMatrix {
        from_point: Point::Zero,
        to_point: Point::One,
        entries: CMatrix::from_rows(rows)?,
        method: Method::Oracle,
        error_estimate: dev,
    })
}

/// M₁₀ of a preset in its preset bases.
pub fn preset_connection(preset: &Preset, cfg: &OracleConfig) -> Result<ConnectionMatrix, OracleError> {
    numeric_connection(&preset.equation(), Normalization::Preset(preset.clone()), Normalization::Preset(preset.clone()), cfg)
}

fn parse_entry(s: &str) -> Option<(usize, usize)> {
    let rest = s.strip_prefix("M[")?;
    let (i, rest) = rest.split_once("][")?;
    let j = rest.strip_suffix(']')?;
    let (i, j): (usize, usize) = (i.parse().ok()?, j.parse().ok()?);
    (i >= 1 && j >= 1).then_some((i - 1, j - 1))
}

/// Names accepted by [`calibrate_target`] besides the `M[i][j]` entries (1-based).
pub const NAMED_TARGETS: &[&str] = &[
    "quartic.g0_0",
    "quartic.g1_0",
    "quartic.g0_c",
    "quartic.h0",
    "quartic.h1",
    "quintic.l0",
    "quintic.w0",
    "quintic.q0-slot",
    "quintic.w1",
    "quintic.h0",
    "quintic.h1",
    "quintic.h2",
    "quintic.k0",
    "quintic.k1",
    "quintic.k2",
];

/// Extract a named coefficient from an oracle matrix of the given preset.
///
/// The named coefficients invert the row assembly of the preset matrices: for
/// the quartic the Φ₀ columns carry the factor Γ(1/4)Γ(1/2)Γ(3/4); for the
/// quintic column 1 is (l₀, w₀, q₀, w₁ − 7w₀/10), column 2 is −h/(2πi) and
/// column 3 is 5k/(2πi)², with the same −7/10 correction in row 4.
pub fn target_from_matrix(preset: &Preset, m: &CMatrix, name: &str) -> Result<PrecComplex, OracleError> {
    let unknown = || OracleError::UnknownTarget(format!("{}.{}", preset.name(), name));
    let n = m.rows();
    if let Some((i, j)) = parse_entry(name) {
        return if i < n && j < n { Ok(m[(i, j)].clone()) } else { Err(unknown()) };
    }
    let d = m.digits();
    let tpi = PrecComplex::two_pi_i(d);
    let seven_tenths = PrecComplex::from_rational(&rat(7, 10), d);
    match preset {
        Preset::Quartic => {
            let pi = PrecComplex::pi(d);
            // Γ(1/4)Γ(1/2)Γ(3/4) = √2 π^{3/2}
            let g3 = &(&PrecComplex::from_int(2, d).sqrt() * &pi) * &pi.sqrt();
            match name {
                "g0_0" => Ok(&g3 * &m[(0, 0)]),
                "g1_0" => Ok(&g3 * &m[(1, 0)]),
                "g0_c" => Ok(&g3 * &m[(2, 0)]),
                "h0" => Ok(-(&(&tpi * &g3) * &m[(0, 1)])),
                "h1" => Ok(-(&(&tpi * &g3) * &m[(1, 1)])),
                _ => Err(unknown()),
            }
        }
        Preset::Quintic => {
            let kf = (&tpi * &tpi).div_int(5);
            let h1 = -(&tpi * &m[(1, 1)]);
            let k1 = &kf * &m[(1, 2)];
            match name {
                "l0" => Ok(m[(0, 0)].clone()),
                "w0" => Ok(m[(1, 0)].clone()),
                "q0-slot" => Ok(m[(2, 0)].clone()),
                "w1" => Ok(&m[(3, 0)] + &(&seven_tenths * &m[(1, 0)])),
                "h0" => Ok(-(&tpi * &m[(0, 1)])),
                "h1" => Ok(h1),
                "h2" => Ok(&(-(&tpi * &m[(3, 1)])) + &(&seven_tenths * &h1)),
                "k0" => Ok(&kf * &m[(0, 2)]),
                "k1" => Ok(k1),
                "k2" => Ok(&(&kf * &m[(3, 2)]) + &(&seven_tenths * &k1)),
                _ => Err(unknown()),
            }
        }
    }
}

/// Oracle value of a target such as `"quartic.M[3][3]"` or `"quintic.h0"`.
pub fn calibrate_target(name: &str, cfg: &OracleConfig) -> Result<PrecComplex, OracleError> {
    let (p, rest) = name.split_once('.').ok_or_else(|| OracleError::UnknownTarget(name.into()))?;
    let preset = Preset::parse(p).ok_or_else(|| OracleError::UnknownTarget(name.into()))?;
    let m = preset_connection(&preset, cfg)?;
    target_from_matrix(&preset, &m.entries, rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gamma_rational;

    fn quick(order: usize, digits: u32) -> OracleConfig {
        OracleConfig { points: vec![0.4, 0.5, 0.6], order, digits }
    }

    #[test]
    fn constant_input_has_zero_deviation() {
        let m = CMatrix::identity(3, 30);
        assert_eq!(cross_point_consistency(&[m.clone(), m.clone(), m]), 0.0);
    }

    #[test]
    fn small_order_is_flagged() {
        let eq = HypergeometricEquation::quartic();
        let cfg = OracleConfig { order: 20, ..OracleConfig::default() };
        let (a, b) = default_normalizations(&eq);
        assert!(matches!(numeric_connection(&eq, a, b, &cfg), Err(OracleError::Inconsistent { .. })));
    }

    #[test]
    fn config_is_validated() {
        let eq = HypergeometricEquation::quartic();
        let cfg = OracleConfig { points: vec![1.2], ..OracleConfig::default() };
        assert!(matches!(
            numeric_connection(&eq, Normalization::Identity, Normalization::Identity, &cfg),
            Err(OracleError::Config(_))
        ));
    }

    #[test]
    fn quartic_matches_printed_entries() {
        let d = 40;
        let m = preset_connection(&Preset::Quartic, &quick(300, d)).unwrap().entries;
        let pi = PrecComplex::pi(d);
        let s2pi = &PrecComplex::from_int(2, d).sqrt() * &pi;
        assert!(m[(2, 2)].dist(&(-s2pi.recip())) < 1e-25);
        assert!(m[(2, 0)].dist(&(-s2pi.recip().scale_int(2))) < 1e-25);
        for (i, j) in [(0, 2), (1, 2), (2, 1)] {
            assert!(m[(i, j)].abs_f64() < 1e-25);
        }
        let g = |p, q| gamma_rational(&rat(p, q), d).unwrap();
        let a = &(&g(1, 8) * &g(3, 8)) / &(&g(5, 8) * &g(7, 8));
        assert!(m[(0, 0)].dist(&(&a / &s2pi.scale_int(2))) < 1e-25, "{}", m[(0, 0)]);
    }

    #[test]
    fn two_f_one_classical() {
        // θ(θ − γ) − z(θ + a)(θ + b): ₂F₁(a, b; 1 − γ; z)
        let d = 40;
        let eq = HypergeometricEquation::parse(&["1/3", "2/7"], &["-1/5"]).unwrap();
        let m = numeric_connection(&eq, Normalization::Identity, Normalization::Identity, &quick(300, d))
            .unwrap()
            .entries;
        let g = |x: &PrecComplex| crate::numerics::gamma(x).unwrap();
        let q = |p, r| PrecComplex::from_rational(&rat(p, r), d);
        let one = PrecComplex::one(d);
        // columns: exponent 1 − c, then 0; rows: exponent 0, then c − a − b
        let classical = |a: &PrecComplex, b: &PrecComplex, c: &PrecComplex| {
            let first = &(&g(c) * &g(&(&(c - a) - b))) / &(&g(&(c - a)) * &g(&(c - b)));
            let second = &(&g(c) * &g(&(&(a + b) - c))) / &(&g(a) * &g(b));
            (first, second)
        };
        let (a, b, c) = (q(1, 3), q(2, 7), q(6, 5));
        let (c1, c2) = classical(&a, &b, &c);
        let shift = &c - &one;
        let (s1, s2) = classical(&(&a - &shift), &(&b - &shift), &(&(&one + &one) - &c));
        assert!(m[(0, 1)].dist(&c1) < 1e-30, "{} vs {}", m[(0, 1)], c1);
        assert!(m[(1, 1)].dist(&c2) < 1e-30);
        assert!(m[(0, 0)].dist(&s1) < 1e-30);
        assert!(m[(1, 0)].dist(&s2) < 1e-30);
    }
}
