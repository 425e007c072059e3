//! M₁₀ from closed-form expansions.
//!
//! A set of n independent solutions ("sources") is expanded at both points. Their
//! coordinates U in Φ₀ and W in Φ₁ give M = W U⁻¹, since Φ₀ = Φ₁ M.
//!
//! Covered configurations:
//! - n = 3, nonresonant: the sources are y_j^* = G₁ with γ_j moved first, each a
//!   Bühring function with parameters α + γ_j, 1 + γ_j − γ_k.
//! - n = 3 or 4 with all γ = 0: the sources are G₁ (g or l/q/w), G₂ (h), G₃ (k, n = 4)
//!   and ξ_n, with Φ₀ coordinates from the basis change to y_j^*.

use crate::equation::{BuehringParameters, HypergeometricEquation, Point};
use crate::frobenius::{frobenius_basis, FundamentalMatrix, LogPowerSeries, Normalization};
use crate::numerics::{gamma_rational, pochhammer, unit_phase, CMatrix, ExactRational, PrecComplex};
use crate::series_engine::yj_star_series;

use super::buehring::{g_coeff, lqw_coeffs, Branch};
use super::coords::{leading_slots, local_coordinates};
use super::resonant::{h_coeff, k_coeff};
use super::xi::{gp_basis_change, xi_continuation};
use super::{ConnectionError, ConnectionMatrix, Method};

#[derive(Clone, Debug)]
pub struct ClosedConfig {
    pub digits: u32,
    /// Target for every accelerated sum.
    pub tol: f64,
}

impl Default for ClosedConfig {
    fn default() -> Self {
        ClosedConfig { digits: crate::numerics::DEFAULT_DIGITS, tol: 1e-40 }
    }
}

/// Which closed-form route covers an equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    NonresonantOrder3,
    Mum,
}

pub fn coverage(eq: &HypergeometricEquation) -> Result<Coverage, ConnectionError> {
    let n = eq.order();
    if n == 3 && !eq.is_resonant() {
        return Ok(Coverage::NonresonantOrder3);
    }
    if (n == 3 || n == 4) && eq.is_mum() {
        return Ok(Coverage::Mum);
    }
    Err(ConnectionError::OracleOnly(format!(
        "closed forms cover n = 3 nonresonant and n = 3, 4 with all γ = 0; got n = {n}, γ = {:?}",
        eq.gamma().iter().map(|g| g.to_string()).collect::<Vec<_>>()
    )))
}

/// Terms needed per exponent class to cover every leading slot of Φ₁.
fn needed_terms(phi1: &FundamentalMatrix<ExactRational>, base: &ExactRational) -> usize {
    leading_slots(phi1)
        .iter()
        .filter_map(|(e, _)| {
            let d = e - base;
            (d.is_integer() && d.signum() >= 0).then(|| d.to_i64().expect("small") as usize + 1)
        })
        .max()
        .unwrap_or(0)
}

fn series(point: Point, exponent: ExactRational, coeffs: Vec<Vec<PrecComplex>>) -> LogPowerSeries<PrecComplex> {
    LogPowerSeries { base_point: point, exponent, coeffs }
}

/// Multiply by z^γ = (1 − x)^γ at z = 1.
fn times_z_power(s: &LogPowerSeries<PrecComplex>, gamma: &ExactRational, d: u32) -> LogPowerSeries<PrecComplex> {
    if gamma.is_zero() {
        return s.clone();
    }
    let len = s.order();
    let ng = PrecComplex::from_rational(&(-gamma.clone()), d);
    let b: Vec<PrecComplex> = (0..len)
        .map(|i| &pochhammer(&ng, i as u64) / &pochhammer(&PrecComplex::one(d), i as u64))
        .collect();
    let coeffs = s
        .coeffs
        .iter()
        .map(|row| {
            (0..len)
                .map(|m| {
                    let mut v = PrecComplex::zero(d);
                    for i in 0..=m {
                        v += &(&b[i] * &row[m - i]);
                    }
                    v
                })
                .collect()
        })
        .collect();
    series(s.base_point, s.exponent.clone(), coeffs)
}

fn scale_series(s: &LogPowerSeries<PrecComplex>, f: &PrecComplex) -> LogPowerSeries<PrecComplex> {
    let coeffs = s.coeffs.iter().map(|row| row.iter().map(|x| x * f).collect()).collect();
    series(s.base_point, s.exponent.clone(), coeffs)
}

/// Γ(a)/Γ(b) ₙF_{n−1}(a; b; z) about z = 1, as local series in x = 1 − z.
/// `c` is the exact value of Σb − Σa. Returns the series and the largest tail estimate.
fn buehring_expansion(
    p: &BuehringParameters,
    c: &ExactRational,
    phi1: &FundamentalMatrix<ExactRational>,
    tol: f64,
    d: u32,
) -> Result<(Vec<LogPowerSeries<PrecComplex>>, f64), ConnectionError> {
    let zero = ExactRational::zero();
    let n0 = needed_terms(phi1, &zero);
    let mut tail = 0.0f64;
    if c.is_integer() {
        let c0 = c.to_i64().expect("small");
        if c0 < 0 {
            return Err(ConnectionError::OracleOnly(format!("c = {c0} is a negative integer")));
        }
        let c0 = c0 as usize;
        let len = n0.max(c0 + 1);
        let mut rows = vec![vec![PrecComplex::zero(d); len]; 2];
        for m in 0..c0.min(len).max(len.saturating_sub(c0)) {
            let r = lqw_coeffs(p, c0 as i64, m, tol)?;
            if let Some(l) = r.l.as_ref().filter(|_| m < len) {
                rows[0][m] = l.value.clone();
                tail = tail.max(l.tail_estimate);
            }
            if c0 + m < len {
                rows[0][c0 + m] = r.w.value.clone();
                rows[1][c0 + m] = r.q.clone();
                tail = tail.max(r.w.tail_estimate);
            }
        }
        return Ok((vec![series(Point::One, zero, rows)], tail));
    }
    let nc = needed_terms(phi1, c).max(1);
    let mut g0 = Vec::with_capacity(n0);
    for m in 0..n0.max(1) {
        let r = g_coeff(p, m, Branch::Zero, tol)?;
        tail = tail.max(r.tail_estimate);
        g0.push(r.value);
    }
    let mut gc = Vec::with_capacity(nc);
    for m in 0..nc {
        gc.push(g_coeff(p, m, Branch::C, tol)?.value);
    }
    Ok((vec![series(Point::One, zero, vec![g0]), series(Point::One, c.clone(), vec![gc])], tail))
}

/// Φ₀ coordinates of y_1^*, ..., y_q^*.
fn y_star_coordinates(
    eq: &HypergeometricEquation,
    phi0: &FundamentalMatrix<ExactRational>,
    d: u32,
) -> Result<Vec<Vec<PrecComplex>>, ConnectionError> {
    let n = eq.order();
    (1..=eq.resonance_classes()[0].len())
        .map(|j| {
            let s = yj_star_series(eq, j, n + 2, d)?;
            local_coordinates(phi0, &[s], d)
        })
        .collect()
}

fn combine(ys: &[Vec<PrecComplex>], coef: &[PrecComplex], d: u32) -> Vec<PrecComplex> {
    let mut v = vec![PrecComplex::zero(d); ys.first().map_or(0, |y| y.len())];
    for (c, y) in coef.iter().zip(ys) {
        for (vi, yi) in v.iter_mut().zip(y) {
            *vi += &(c * yi);
        }
    }
    v
}

struct Source {
    at_zero: Vec<PrecComplex>,
    at_one: Vec<PrecComplex>,
}

/// M₁₀ in the given bases from closed-form coefficients.
pub fn connection_matrix_closed(
    eq: &HypergeometricEquation,
    norm0: Normalization,
    norm1: Normalization,
    cfg: &ClosedConfig,
) -> Result<ConnectionMatrix, ConnectionError> {
    let route = coverage(eq)?;
    let n = eq.order();
    let d = cfg.digits + 10;
    let phi0 = frobenius_basis(eq, Point::Zero, 2 * n + 2, norm0)?;
    let phi1 = frobenius_basis(eq, Point::One, 2 * n + 2, norm1)?;
    let beta = eq.beta_n();
    let mut tail = 0.0f64;
    let mut sources = Vec::with_capacity(n);
    let sorted_eq = eq.with_sorted_alpha();

    match route {
        Coverage::NonresonantOrder3 => {
            let (al, gm) = (sorted_eq.alpha(), sorted_eq.gamma());
            let one = ExactRational::one();
            for j in 0..n {
                if let Some(x) = al.iter().find(|x| {
                    let s = *x + &gm[j];
                    s.is_integer() && s.signum() <= 0
                }) {
                    return Err(ConnectionError::Precondition(format!(
                        "α = {x} with γ = {} gives a Γ pole in y_j^* (reducible equation)",
                        gm[j]
                    )));
                }
                let a: Vec<PrecComplex> = al.iter().map(|x| PrecComplex::from_rational(&(x + &gm[j]), d)).collect();
                let b: Vec<PrecComplex> = (0..n)
                    .filter(|&k| k != j)
                    .map(|k| PrecComplex::from_rational(&(&(&one + &gm[j]) - &gm[k]), d))
                    .collect();
                let mut c = PrecComplex::zero(d);
                for x in &b {
                    c += x;
                }
                for x in &a {
                    c -= x;
                }
                let params = BuehringParameters { a, b, c };
                let (parts, t) = buehring_expansion(&params, &beta, &phi1, cfg.tol, d)?;
                tail = tail.max(t);
                let phase = unit_phase(&(-gm[j].clone()), d);
                let parts: Vec<_> = parts.iter().map(|s| scale_series(&times_z_power(s, &gm[j], d), &phase)).collect();
                // leading coefficient at 0: e^{−iπγ_j} Π Γ(α_k+γ_j) / Π_{k≠j} Γ(1−γ_k+γ_j)
                let mut lead = phase.clone();
                for x in al {
                    lead = &lead * &gamma_rational(&(x + &gm[j]), d)?;
                }
                for k in (0..n).filter(|&k| k != j) {
                    lead = &lead / &gamma_rational(&(&(&one + &gm[j]) - &gm[k]), d)?;
                }
                let at0 = series(Point::Zero, gm[j].clone(), vec![vec![lead]]);
                sources.push(Source {
                    at_zero: local_coordinates(&phi0, &[at0], d)?,
                    at_one: local_coordinates(&phi1, &parts, d)?,
                });
            }
        }
        Coverage::Mum => {
            let ys = y_star_coordinates(&sorted_eq, &phi0, d)?;
            let combine = |coef: &[PrecComplex]| combine(&ys, coef, d);
            let n0 = needed_terms(&phi1, &ExactRational::zero());

            let params = sorted_eq.buehring_params(d);
            let (g1, t) = buehring_expansion(&params, &beta, &phi1, cfg.tol, d)?;
            tail = tail.max(t);
            sources.push(Source { at_zero: combine(&gp_basis_change(eq, 1, d)?), at_one: local_coordinates(&phi1, &g1, d)? });

            let mut hs = Vec::with_capacity(n0);
            for m in 0..n0 {
                let r = h_coeff(&sorted_eq, m, cfg.tol, d)?;
                tail = tail.max(r.tail_estimate);
                hs.push(r.value);
            }
            let g2 = series(Point::One, ExactRational::zero(), vec![hs]);
            sources.push(Source { at_zero: combine(&gp_basis_change(eq, 2, d)?), at_one: local_coordinates(&phi1, &[g2], d)? });

            if n == 4 {
                let mut ks = Vec::with_capacity(n0);
                for m in 0..n0 {
                    let r = k_coeff(&sorted_eq, m, cfg.tol, d)?;
                    tail = tail.max(r.tail_estimate);
                    ks.push(r.value);
                }
                let g3 = series(Point::One, ExactRational::zero(), vec![ks]);
                sources
                    .push(Source { at_zero: combine(&gp_basis_change(eq, 3, d)?), at_one: local_coordinates(&phi1, &[g3], d)? });
            }

            let xi = xi_continuation(eq, d)?;
            let jb = phi1
                .leading
                .iter()
                .position(|e| *e == beta)
                .ok_or_else(|| ConnectionError::Precondition("no Φ₁ column with exponent β_n".into()))?;
            let col = &phi1.columns[jb];
            let raw = series(
                Point::One,
                col.exponent.clone(),
                col.coeffs.iter().map(|row| row.iter().map(|x| PrecComplex::from_rational(x, d)).collect()).collect(),
            );
            sources.push(Source { at_zero: combine(&xi.coefficients), at_one: local_coordinates(&phi1, &[raw], d)? });
        }
    }

    let cols = |f: &dyn Fn(&Source) -> &Vec<PrecComplex>| {
        CMatrix::from_rows((0..n).map(|i| sources.iter().map(|s| f(s)[i].clone()).collect()).collect())
    };
    let u = cols(&|s| &s.at_zero)?;
    let w = cols(&|s| &s.at_one)?;
    let uinv = u.inverse()?;
    let m = w.mul(&uinv)?;
    let rows = m.to_rows().into_iter().map(|r| r.into_iter().map(|x| x.with_digits(cfg.digits)).collect()).collect();
    Ok(ConnectionMatrix {
        from_point: Point::Zero,
        to_point: Point::One,
        entries: CMatrix::from_rows(rows)?,
        method: Method::ClosedForm,
        error_estimate: tail * uinv.norm_inf().max(1.0),
    })
}

/// [`connection_matrix_closed`] in the preset bases for the two worked examples and
/// the raw Frobenius bases otherwise.
pub fn closed_connection(eq: &HypergeometricEquation, cfg: &ClosedConfig) -> Result<ConnectionMatrix, ConnectionError> {
    let (a, b) = crate::oracle::default_normalizations(eq);
    connection_matrix_closed(eq, a, b, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{default_normalizations, numeric_connection, OracleConfig};
    use crate::series_engine::gp_series;

    const D: u32 = 50;

    fn cfg() -> ClosedConfig {
        ClosedConfig { digits: D, tol: 1e-40 }
    }

    #[test]
    fn quartic_symbolic_matrix() {
        let m = closed_connection(&HypergeometricEquation::quartic(), &cfg()).unwrap();
        let want = super::super::reference::quartic_matrix(D);
        assert!(m.entries.max_abs_diff(&want) < 1e-30);
        // M[3,1] = 2 M[3,3]
        assert!(m.entries[(2, 0)].dist(&m.entries[(2, 2)].scale_int(2)) < 1e-30);
    }

    #[test]
    fn nonresonant_order3_matches_oracle() {
        for (al, gm) in [(["1/3", "1/2", "5/7"], ["1/4", "2/5", "0"]), (["2/9", "4/5", "1/6"], ["-1/3", "1/7", "0"])] {
            let eq = HypergeometricEquation::parse(&al, &gm).unwrap();
            assert_eq!(coverage(&eq).unwrap(), Coverage::NonresonantOrder3);
            let c = closed_connection(&eq, &cfg()).unwrap();
            let (a, b) = default_normalizations(&eq);
            let o = numeric_connection(&eq, a, b, &OracleConfig::default()).unwrap();
            let diff = c.entries.max_abs_diff(&o.entries);
            assert!(diff < 1e-30, "{eq}: {diff:e}");
        }
    }

    #[test]
    fn mum_order3_matches_oracle() {
        let eq = HypergeometricEquation::parse(&["1/3", "1/2", "1/7"], &["0", "0", "0"]).unwrap();
        let c = closed_connection(&eq, &cfg()).unwrap();
        let (a, b) = default_normalizations(&eq);
        let o = numeric_connection(&eq, a, b, &OracleConfig::default()).unwrap();
        assert!(c.entries.max_abs_diff(&o.entries) < 1e-30);
    }

    #[test]
    fn gp_coordinates_agree_with_basis_change() {
        for eq in [HypergeometricEquation::quartic(), HypergeometricEquation::quintic()] {
            let n = eq.order();
            let (a, _) = default_normalizations(&eq);
            let phi0 = frobenius_basis(&eq, Point::Zero, 2 * n + 2, a).unwrap();
            let ys = y_star_coordinates(&eq, &phi0, D).unwrap();
            for p in 1..n {
                let via = combine(&ys, &gp_basis_change(&eq, p, D).unwrap(), D);
                let direct = local_coordinates(&phi0, &gp_series(&eq, p, n + 2, D).unwrap(), D).unwrap();
                for (x, y) in via.iter().zip(&direct) {
                    assert!(x.dist(y) < 1e-35, "{eq} p={p}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn coverage_boundary() {
        let oracle_only = |al: &[&str], gm: &[&str]| {
            let eq = HypergeometricEquation::parse(al, gm).unwrap();
            matches!(closed_connection(&eq, &cfg()), Err(ConnectionError::OracleOnly(_)))
        };
        assert!(oracle_only(&["1/3", "2/3"], &["0", "0"]));
        assert!(oracle_only(&["1/7", "2/7", "3/7", "4/7", "5/7"], &["0", "0", "0", "0", "0"]));
        assert!(oracle_only(&["1/5", "2/5", "3/5", "4/5"], &["1/2", "0", "0", "0"]));
        assert!(oracle_only(&["1/5", "2/5", "3/5"], &["1/2", "0", "0"]));
    }

    #[test]
    fn degenerate_parameters_are_preconditions() {
        let precondition = |al: &[&str], gm: &[&str]| {
            let eq = HypergeometricEquation::parse(al, gm).unwrap();
            matches!(closed_connection(&eq, &cfg()), Err(ConnectionError::Precondition(_)))
        };
        // α + γ_j = 0
        assert!(precondition(&["1/2", "1/2", "2"], &["-1/3", "-1/2", "0"]));
        // c + a₁ = −2 for the γ = 5/4 source
        assert!(precondition(&["1", "3/2", "2"], &["5/4", "1/2", "0"]));
    }

    fn rat_in(lo: i64, hi: i64) -> impl proptest::strategy::Strategy<Value = ExactRational> {
        use proptest::prelude::*;
        (lo..hi, 2i64..10).prop_map(|(p, q)| crate::numerics::rat(p, q))
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(8))]
        #[test]
        fn closed_equals_oracle_nonresonant(a in proptest::collection::vec(rat_in(1, 12), 3), g in proptest::collection::vec(rat_in(-7, 7), 2)) {
            let eq = HypergeometricEquation::new(a, g).unwrap();
            proptest::prop_assume!(coverage(&eq).ok() == Some(Coverage::NonresonantOrder3) && !eq.beta_n().is_integer());
            let c = closed_connection(&eq, &ClosedConfig { digits: 40, tol: 1e-30 });
            // α + γ_j ≤ 0 is outside the Bühring sum's domain
            proptest::prop_assume!(!matches!(c, Err(ConnectionError::Precondition(_))));
            let c = c.unwrap();
            let o = numeric_connection(&eq, Normalization::Identity, Normalization::Identity,
                &OracleConfig { order: 300, digits: 40, ..OracleConfig::default() }).unwrap();
            let d = c.entries.max_abs_diff(&o.entries);
            proptest::prop_assert!(d < 1e-25 * c.entries.max_abs().max(1.0), "{}: {:e}", eq, d);
        }
    }
}
