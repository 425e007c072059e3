//! Extrapolation of slowly convergent partial sums.
//!
//! The workhorse is a generalized Richardson scheme: the remainder S − S_N is
//! modelled as a sum of families N^{−(e+i)} (ln N)^L with the exponents e known
//! from the summand's asymptotics, and the limit is read off a linear solve at
//! geometrically spaced N. Levin's u transform and Wynn's ε algorithm are kept
//! as independent cross-checks.

use crate::numerics::{CMatrix, PrecComplex};

use super::{SeriesError, SumResult};

/// Remainder terms N^{−(exponent+i)} (ln N)^log_power, i = 0..terms.
#[derive(Clone, Debug)]
pub struct Family {
    pub exponent: PrecComplex,
    pub log_power: u32,
    pub terms: usize,
}

impl Family {
    pub fn new(exponent: PrecComplex, log_power: u32, terms: usize) -> Self {
        Family { exponent, log_power, terms }
    }
}

/// Node range and remainder model for one extrapolation.
#[derive(Clone, Debug)]
pub struct Plan {
    pub families: Vec<Family>,
    pub n_min: usize,
    pub n_max: usize,
}

/// Extra digits carried while summing terms that feed the extrapolation.
pub const EXTRA_DIGITS: u32 = 40;

pub fn work_digits(digits: u32) -> u32 {
    digits + EXTRA_DIGITS
}

impl Plan {
    fn unknowns(&self) -> usize {
        1 + self.families.iter().map(|f| f.terms).sum::<usize>()
    }

    /// The default plan for a sum whose terms settle into their asymptotic form
    /// after about `onset` terms.
    pub fn standard(families: Vec<Family>, onset: f64, digits: u32) -> Plan {
        let per = (digits as usize / 2 + 6).max(8);
        let nf = families.len().max(1);
        let per_family = (per / nf).max(4);
        let families = families
            .into_iter()
            .map(|mut f| {
                f.terms = if f.terms == 0 { per_family } else { f.terms };
                f
            })
            .collect();
        let n_min = (onset.max(1.0) * 6.0).max(80.0) as usize;
        Plan { families, n_min, n_max: n_min * 20 }
    }

    fn nodes(&self, n_max: usize, n_min: usize) -> Result<Vec<usize>, SeriesError> {
        let k = self.unknowns();
        if n_max <= n_min + k {
            return Err(SeriesError::Extrapolation(format!("range {n_min}..{n_max} too short for {k} nodes")));
        }
        let ratio = (n_min as f64 / n_max as f64).powf(1.0 / (k - 1) as f64);
        let mut out: Vec<usize> = Vec::with_capacity(k);
        let mut x = n_max as f64;
        for _ in 0..k {
            let mut n = x.round() as usize;
            if let Some(&last) = out.last() {
                if n >= last {
                    n = last - 1;
                }
            }
            out.push(n);
            x *= ratio;
        }
        if *out.last().expect("k > 0") < 2 {
            return Err(SeriesError::Extrapolation("nodes collapsed".into()));
        }
        Ok(out)
    }
}

/// Limit of the partial sums `partials[N]` (sum of the first N terms) under the
/// remainder model of `plan`, using nodes in [n_min, n_max].
pub fn richardson(
    partials: &[PrecComplex],
    plan: &Plan,
    n_min: usize,
    n_max: usize,
) -> Result<PrecComplex, SeriesError> {
    if n_max >= partials.len() {
        return Err(SeriesError::Extrapolation("not enough partial sums".into()));
    }
    let nodes = plan.nodes(n_max, n_min)?;
    let d = partials[n_max].digits();
    let k = nodes.len();
    let mut a = CMatrix::zeros(k, k, d);
    let mut rhs = Vec::with_capacity(k);
    let ln_ref = PrecComplex::from_int(n_min as i64, d).ln();
    for (row, &n) in nodes.iter().enumerate() {
        a[(row, 0)] = PrecComplex::one(d);
        let nc = PrecComplex::from_int(n as i64, d);
        let lr = &nc.ln() - &ln_ref;
        let step = PrecComplex::from_int(n_min as i64, d) / &nc;
        let lfac = &nc.ln() / &ln_ref;
        let mut col = 1;
        for f in &plan.families {
            // (n_min/N)^e (ln N / ln n_min)^L, then successive factors n_min/N
            let mut v = (-(&f.exponent.with_digits(d) * &lr)).exp();
            for _ in 0..f.log_power {
                v = &v * &lfac;
            }
            for _ in 0..f.terms {
                a[(row, col)] = v.clone();
                v = &v * &step;
                col += 1;
            }
        }
        rhs.push(partials[n].clone());
    }
    let x = a.solve(&rhs).map_err(|_| SeriesError::Extrapolation("singular node system".into()))?;
    Ok(x[0].clone())
}

/// Sum `term(k)`, k = 0, 1, ..., by extrapolating the partial sums under `plan`.
/// The caller evaluates terms at [`work_digits`] precision; the result carries `digits`.
/// The error estimate compares against a second extrapolation on a range scaled by 3/4.
pub fn accelerate<F: FnMut(usize) -> PrecComplex>(
    mut term: F,
    plan: &Plan,
    digits: u32,
) -> Result<SumResult, SeriesError> {
    let wd = work_digits(digits);
    let mut partials = Vec::with_capacity(plan.n_max + 1);
    let mut s = PrecComplex::zero(wd);
    partials.push(s.clone());
    for k in 0..plan.n_max {
        s += &term(k);
        partials.push(s.clone());
    }
    let v1 = richardson(&partials, plan, plan.n_min, plan.n_max)?;
    let v2 = richardson(&partials, plan, plan.n_min * 3 / 4, plan.n_max * 3 / 4)?;
    let est = v1.dist(&v2);
    Ok(SumResult { value: v1.with_digits(digits), tail_estimate: est, terms_used: plan.n_max, accelerated: true })
}

/// Levin's u transform of the partial sums s_0, ..., s_k (s_n includes term n).
pub fn levin_u(partials: &[PrecComplex]) -> Result<PrecComplex, SeriesError> {
    let k = partials.len();
    if k < 3 {
        return Err(SeriesError::Extrapolation("Levin needs at least three sums".into()));
    }
    let k = k - 1;
    let d = partials[k].digits();
    let mut num = PrecComplex::zero(d);
    let mut den = PrecComplex::zero(d);
    let mut binom = PrecComplex::one(d);
    for j in 0..=k {
        let a = if j == 0 { partials[0].clone() } else { &partials[j] - &partials[j - 1] };
        if a.is_zero() {
            return Err(SeriesError::Extrapolation("vanishing term in Levin transform".into()));
        }
        let omega = a.scale_int(j as i64 + 1);
        // C(k,j) ((j+1)/(k+1))^{k−1} / ω_j with alternating sign
        let ratio = PrecComplex::from_int(j as i64 + 1, d).div_int(k as i64 + 1);
        let mut w = &binom * &ratio.powi(k as i32 - 1);
        if j % 2 == 1 {
            w = -w;
        }
        let w = &w / &omega;
        num += &(&w * &partials[j]);
        den += &w;
        binom = binom.scale_int((k - j) as i64).div_int(j as i64 + 1);
    }
    Ok(&num / &den)
}

/// Wynn's ε algorithm; returns the deepest even-column entry.
pub fn wynn_epsilon(partials: &[PrecComplex]) -> Result<PrecComplex, SeriesError> {
    let n = partials.len();
    if n == 0 {
        return Err(SeriesError::Extrapolation("empty sequence".into()));
    }
    let d = partials[0].digits();
    let mut prev: Vec<PrecComplex> = vec![PrecComplex::zero(d); n + 1];
    let mut cur: Vec<PrecComplex> = partials.to_vec();
    let mut best = partials[n - 1].clone();
    let mut col = 0usize;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = &cur[i + 1] - &cur[i];
            if diff.is_zero() {
                return Ok(cur[i + 1].clone());
            }
            next.push(&prev[i + 1] + &diff.recip());
        }
        col += 1;
        if col.is_multiple_of(2) {
            best = next.last().expect("nonempty").clone();
        }
        prev = cur;
        cur = next;
    }
    Ok(best)
}
