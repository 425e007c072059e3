//! The hypergeometric equation
//! (θ ∏_{j<n}(θ − γ_j) − z ∏_j (θ + α_j)) y = 0,
//! its exponents at 0, 1, ∞ and its resonance structure.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{ExactRational, NumericsError, PrecComplex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquationError {
    #[error("order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("alpha has {alpha} entries but gamma has {gamma}")]
    OrderMismatch { alpha: usize, gamma: usize },
    #[error("the last gamma exponent must be 0, got {0}")]
    LastGammaNonzero(ExactRational),
    #[error("bad exponent: {0}")]
    Parse(#[from] NumericsError),
    #[error("bad equation JSON: {0}")]
    Json(String),
}

/// Singular point at which local data are requested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Point {
    Zero,
    One,
}

impl Point {
    pub fn from_index(p: u32) -> Option<Point> {
        match p {
            0 => Some(Point::Zero),
            1 => Some(Point::One),
            _ => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Zero => write!(f, "0"),
            Point::One => write!(f, "1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergeometricEquation {
    alpha: Vec<ExactRational>,
    gamma: Vec<ExactRational>,
}

impl HypergeometricEquation {
    /// `gamma` may have n entries ending in 0, or n-1 entries with the 0 implied.
    pub fn new(
        alpha: Vec<ExactRational>,
        mut gamma: Vec<ExactRational>,
    ) -> Result<Self, EquationError> {
        let n = alpha.len();
        if n < 2 {
            return Err(EquationError::OrderTooSmall(n));
        }
        if gamma.len() + 1 == n {
            gamma.push(ExactRational::zero());
        }
        if gamma.len() != n {
            return Err(EquationError::OrderMismatch { alpha: n, gamma: gamma.len() });
        }
        if !gamma[n - 1].is_zero() {
            return Err(EquationError::LastGammaNonzero(gamma[n - 1].clone()));
        }
        Ok(HypergeometricEquation { alpha, gamma })
    }

    pub fn parse(alpha: &[&str], gamma: &[&str]) -> Result<Self, EquationError> {
        let a = alpha.iter().map(|s| s.parse()).collect::<Result<Vec<_>, _>>()?;
        let g = gamma.iter().map(|s| s.parse()).collect::<Result<Vec<_>, _>>()?;
        Self::new(a, g)
    }

    /// α = (1/4, 2/4, 3/4), γ = 0.
    pub fn quartic() -> Self {
        Self::parse(&["1/4", "1/2", "3/4"], &["0", "0", "0"]).expect("valid preset")
    }

    /// α = (1/5, ..., 4/5), γ = 0.
    pub fn quintic() -> Self {
        Self::parse(&["1/5", "2/5", "3/5", "4/5"], &["0", "0", "0", "0"]).expect("valid preset")
    }

    pub fn order(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[ExactRational] {
        &self.alpha
    }

    /// All n exponents at 0, the last one being 0.
    pub fn gamma(&self) -> &[ExactRational] {
        &self.gamma
    }

    /// β_n = n − 1 − Σα − Σγ, the non-integer exponent at 1.
    pub fn beta_n(&self) -> ExactRational {
        let mut b = ExactRational::from_int(self.order() as i64 - 1);
        for a in &self.alpha {
            b -= a;
        }
        for g in &self.gamma {
            b -= g;
        }
        b
    }

    /// Maximal sets of γ indices with pairwise integer differences, in order of first index.
    pub fn resonance_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, g) in self.gamma.iter().enumerate() {
            match classes.iter_mut().find(|c| (g - &self.gamma[c[0]]).is_integer()) {
                Some(c) => c.push(i),
                None => classes.push(vec![i]),
            }
        }
        classes
    }

    pub fn is_resonant(&self) -> bool {
        self.resonance_classes().iter().any(|c| c.len() > 1)
    }

    /// All γ equal to zero: a single Jordan block at 0.
    pub fn is_mum(&self) -> bool {
        self.gamma.iter().all(|g| g.is_zero())
    }

    /// Exponents at 0 are the γ's; at 1 they are 0, 1, ..., n−2 and β_n.
    pub fn local_exponents(&self, p: Point) -> Vec<ExactRational> {
        match p {
            Point::Zero => self.gamma.clone(),
            Point::One => {
                let mut v: Vec<ExactRational> =
                    (0..self.order() as i64 - 1).map(ExactRational::from_int).collect();
                v.push(self.beta_n());
                v
            }
        }
    }

    /// The equation with α and γ swapped (the z ↦ 1/z picture, up to a shift).
    pub fn swapped(&self) -> Result<Self, EquationError> {
        // γ_n must stay 0, so shift everything by -α_n
        let shift = self.alpha[self.order() - 1].clone();
        let a = self.gamma.iter().map(|g| g + &shift).collect();
        let g = self.alpha.iter().map(|a| a - &shift).collect();
        Self::new(a, g)
    }

    /// The same equation with α in ascending order. Solutions built from F and G_p
    /// are symmetric in α.
    pub fn with_sorted_alpha(&self) -> Self {
        let mut alpha = self.alpha.clone();
        alpha.sort();
        HypergeometricEquation { alpha, gamma: self.gamma.clone() }
    }

    pub fn buehring_params(&self, digits: u32) -> BuehringParameters {
        let n = self.order();
        let a: Vec<PrecComplex> =
            self.alpha.iter().map(|x| PrecComplex::from_rational(x, digits)).collect();
        let b: Vec<PrecComplex> = self.gamma[..n - 1]
            .iter()
            .map(|g| PrecComplex::from_rational(&(ExactRational::one() - g), digits))
            .collect();
        let mut c = PrecComplex::zero(digits);
        for x in &b {
            c += x;
        }
        for x in &a {
            c -= x;
        }
        BuehringParameters { a, b, c }
    }

    pub fn from_json(s: &str) -> Result<Self, EquationError> {
        let j: EquationJson = serde_json::from_str(s).map_err(|e| EquationError::Json(e.to_string()))?;
        Self::new(j.alpha, j.gamma)
    }

    pub fn to_json(&self) -> EquationJson {
        EquationJson { alpha: self.alpha.clone(), gamma: self.gamma.clone() }
    }
}

impl fmt::Display for HypergeometricEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |v: &[ExactRational]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "alpha = ({}), gamma = ({})", s(&self.alpha), s(&self.gamma))
    }
}

/// `{"alpha": ["1/5", ...], "gamma": ["0", ...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquationJson {
    pub alpha: Vec<ExactRational>,
    #[serde(default)]
    pub gamma: Vec<ExactRational>,
}

/// a_j = α_j, b_j = 1 − γ_j (j < n), c = Σb − Σa.
#[derive(Clone, Debug)]
pub struct BuehringParameters {
    pub a: Vec<PrecComplex>,
    pub b: Vec<PrecComplex>,
    pub c: PrecComplex,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;
    use proptest::prelude::*;

    #[test]
    fn presets() {
        let q = HypergeometricEquation::quartic();
        assert_eq!(q.beta_n(), rat(1, 2));
        assert_eq!(q.local_exponents(Point::One), vec![rat(0, 1), rat(1, 1), rat(1, 2)]);
        let p = HypergeometricEquation::quintic();
        assert_eq!(p.beta_n(), rat(1, 1));
        assert_eq!(p.resonance_classes(), vec![vec![0, 1, 2, 3]]);
        assert!(p.is_mum());
        let bp = p.buehring_params(40);
        assert!(bp.c.dist(&PrecComplex::one(40)) < 1e-40);
        assert_eq!(bp.b.len(), 3);
    }

    #[test]
    fn classes_and_errors() {
        let e = HypergeometricEquation::parse(&["1/3", "1/2"], &["1/5"]).unwrap();
        assert_eq!(e.beta_n(), rat(1, 1) - rat(1, 3) - rat(1, 2) - rat(1, 5));
        assert!(!e.is_resonant());
        let e = HypergeometricEquation::parse(&["1/3", "1/2", "1/7"], &["1/5", "0", "0"]).unwrap();
        assert_eq!(e.resonance_classes(), vec![vec![0], vec![1, 2]]);
        let e = HypergeometricEquation::parse(&["1/3", "1/2", "1/7"], &["6/5", "1/5", "0"]).unwrap();
        assert_eq!(e.resonance_classes(), vec![vec![0, 1], vec![2]]);
        assert!(matches!(
            HypergeometricEquation::parse(&["1/3", "1/2"], &["1/5", "1"]),
            Err(EquationError::LastGammaNonzero(_))
        ));
        assert!(matches!(
            HypergeometricEquation::parse(&["1/3", "1/2", "1"], &["1/5"]),
            Err(EquationError::OrderMismatch { .. })
        ));
        assert!(HypergeometricEquation::parse(&["1/3"], &[]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let e = HypergeometricEquation::from_json(r#"{"alpha":["1/5","2/5","3/5","4/5"],"gamma":["0","0","0"]}"#)
            .unwrap();
        assert_eq!(e, HypergeometricEquation::quintic());
        let s = serde_json::to_string(&e.to_json()).unwrap();
        assert_eq!(HypergeometricEquation::from_json(&s).unwrap(), e);
        assert!(HypergeometricEquation::from_json(r#"{"alpha":["x"]}"#).is_err());
    }

    fn small_rat() -> impl Strategy<Value = ExactRational> {
        (-20i64..20, 1i64..12).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #[test]
        fn swap_keeps_beta(a in prop::collection::vec(small_rat(), 3), g in prop::collection::vec(small_rat(), 2)) {
            let e = HypergeometricEquation::new(a, g).unwrap();
            prop_assert_eq!(e.swapped().unwrap().beta_n(), e.beta_n());
        }

        #[test]
        fn classes_permutation_invariant(g in prop::collection::vec((-3i64..3, prop::sample::select(vec![1i64, 2, 3])), 4), rot in 0usize..4) {
            let mut gs: Vec<ExactRational> = g.iter().map(|&(p, q)| rat(p, q)).collect();
            gs.push(ExactRational::zero());
            let a: Vec<ExactRational> = (1..=5).map(|k| rat(k, 7)).collect();
            let e = HypergeometricEquation::new(a.clone(), gs.clone()).unwrap();
            let mut perm = gs[..4].to_vec();
            perm.rotate_left(rot);
            perm.push(ExactRational::zero());
            let f = HypergeometricEquation::new(a, perm.clone()).unwrap();
            let key = |eq: &HypergeometricEquation| {
                let mut v: Vec<Vec<ExactRational>> = eq.resonance_classes().iter()
                    .map(|c| { let mut x: Vec<_> = c.iter().map(|&i| eq.gamma()[i].clone()).collect(); x.sort(); x })
                    .collect();
                v.sort();
                v
            };
            prop_assert_eq!(key(&e), key(&f));
        }

        #[test]
        fn c_equals_beta(a in prop::collection::vec(small_rat(), 4), g in prop::collection::vec(small_rat(), 3)) {
            let e = HypergeometricEquation::new(a, g).unwrap();
            let c = e.buehring_params(40).c;
            prop_assert!(c.dist(&PrecComplex::from_rational(&e.beta_n(), 40)) < 1e-35);
        }
    }
}
