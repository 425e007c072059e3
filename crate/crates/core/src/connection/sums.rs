//! Sums whose terms decay like a power of the index, extrapolated from partial sums.

use crate::numerics::PrecComplex;
use crate::series_engine::{accelerate, work_digits, Family, Plan, SumResult};

use super::ConnectionError;

/// Remainder families of a sum: N^{−(e + i)} (ln N)^L for each (e, L).
#[derive(Clone, Debug)]
pub(crate) struct Decay {
    pub families: Vec<(PrecComplex, u32)>,
    /// Index after which the terms follow their asymptotic form.
    pub onset: f64,
}

/// How far out the partial sums go. Cheap terms use the long default range;
/// terms that cost O(k) each use a shorter one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Range {
    Long,
    Short,
}

pub(crate) fn plan(decay: &Decay, tol: f64, range: Range) -> Result<Plan, ConnectionError> {
    for (e, _) in &decay.families {
        if e.re().to_f64() <= 0.0 {
            return Err(ConnectionError::Precondition(format!("divergent sum: remainder exponent {e}")));
        }
    }
    let want = (-tol.log10()).ceil().max(8.0) as u32;
    let fams = decay.families.iter().map(|(e, l)| Family::new(e.clone(), *l, 0)).collect();
    let mut p = Plan::standard(fams, decay.onset, want);
    // every family needs enough terms on its own to reach the target at n_min
    let per = (want as f64 / (p.n_min as f64).log10()).ceil() as usize + 1;
    for f in &mut p.families {
        f.terms = f.terms.max(per);
    }
    if range == Range::Short {
        let unknowns: usize = 1 + p.families.iter().map(|f| f.terms).sum::<usize>();
        p.n_min = ((decay.onset * 6.0) as usize).max(2 * unknowns).max(40);
        p.n_max = p.n_min * 10;
    }
    Ok(p)
}

/// Σ_k term(k) with `term` evaluated at working precision; `term` may fail.
pub(crate) fn algebraic_sum<F>(
    mut term: F,
    decay: &Decay,
    tol: f64,
    range: Range,
    digits: u32,
) -> Result<SumResult, ConnectionError>
where
    F: FnMut(usize) -> Result<PrecComplex, ConnectionError>,
{
    let p = plan(decay, tol, range)?;
    let mut terms = Vec::with_capacity(p.n_max);
    for k in 0..p.n_max {
        terms.push(term(k)?);
    }
    Ok(accelerate(|k| terms[k].clone(), &p, digits)?)
}

/// Working precision for terms that feed [`algebraic_sum`].
pub(crate) fn wd(digits: u32) -> u32 {
    work_digits(digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, PrecComplex};

    #[test]
    fn zeta_three_halves() {
        // Σ (k+1)^{-3/2} = ζ(3/2) = 2.612375348685488343348567567924...
        let d = 40;
        let w = wd(d);
        let half = PrecComplex::from_rational(&rat(1, 2), w);
        let decay = Decay { families: vec![(half.clone(), 0)], onset: 1.0 };
        let s = algebraic_sum(
            |k| Ok(PrecComplex::from_int(k as i64 + 1, w).powc(&(-&(&half + &PrecComplex::one(w))))),
            &decay,
            1e-30,
            Range::Long,
            d,
        )
        .unwrap();
        let want = PrecComplex::parse("2.612375348685488343348567567924071630570", "0", d).unwrap();
        assert!(s.value.dist(&want) < 1e-28, "{}", s.value);
    }

    #[test]
    fn divergent_rejected() {
        let d = 30;
        let decay = Decay { families: vec![(PrecComplex::from_int(-1, d), 0)], onset: 1.0 };
        assert!(matches!(plan(&decay, 1e-10, Range::Short), Err(ConnectionError::Precondition(_))));
    }
}
