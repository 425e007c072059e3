//! Local fundamental matrices Φ = S (z−z₀)^R C at z₀ = 0 and z₀ = 1.
//!
//! The operator is θ ∏_{j<n}(θ − γ_j) − z ∏_j (θ + α_j), so that the α_j are
//! the exponents at ∞ in the variable 1/z.
//!
//! The operator is rewritten in Euler form around the base point,
//! x^t L = Σ_i x^i P_i(θ_x), and solutions are sought as
//! x^ρ Σ_m Σ_k c_{m,k} x^m (log x)^k / k!.
//! With s = ρ+m and N the shift c_k ← c_{k+1} this gives
//! P_0(s+N) c_m = −Σ_{i≥1} P_i(s−i+N) c_{m−i}.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::equation::{HypergeometricEquation, Point};
use crate::numerics::{CMatrix, ExactRational, NumericsError, PrecComplex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrobeniusError {
    #[error("series order {order} is too small for an equation of order {n}")]
    OrderTooSmall { order: usize, n: usize },
    #[error("preset {0} does not match the equation")]
    PresetMismatch(String),
    #[error("point lies outside the convergence disk of the base point")]
    OutsideDisk,
    #[error("point lies on the branch cut; pass a real point in (0,1)")]
    OnBranchCut,
    #[error("the companion matrix is singular at z = 1")]
    SingularPoint,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Coefficient field for the recursions: exact rationals or working-precision complex numbers.
pub trait Scalar: Clone + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times_rat(&self, r: &ExactRational) -> Self;
    fn to_complex(&self, digits: u32) -> PrecComplex;
}

impl Scalar for ExactRational {
    fn zero_like(&self) -> Self {
        ExactRational::zero()
    }
    fn is_zero(&self) -> bool {
        ExactRational::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times_rat(&self, r: &ExactRational) -> Self {
        self * r
    }
    fn to_complex(&self, digits: u32) -> PrecComplex {
        PrecComplex::from_rational(self, digits)
    }
}

impl Scalar for PrecComplex {
    fn zero_like(&self) -> Self {
        PrecComplex::zero(self.digits())
    }
    fn is_zero(&self) -> bool {
        PrecComplex::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times_rat(&self, r: &ExactRational) -> Self {
        self.scale(r)
    }
    fn to_complex(&self, digits: u32) -> PrecComplex {
        self.with_digits(digits)
    }
}

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<ExactRational>);

impl Poly {
    fn from_roots(roots: &[ExactRational]) -> Poly {
        let mut c = vec![ExactRational::one()];
        for r in roots {
            let mut next = vec![ExactRational::zero(); c.len() + 1];
            for (k, a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= &(a * r);
            }
            c = next;
        }
        Poly(c)
    }

    fn falling(j: usize) -> Poly {
        let roots: Vec<ExactRational> = (0..j as i64).map(ExactRational::from_int).collect();
        Poly::from_roots(&roots)
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn eval(&self, s: &ExactRational) -> ExactRational {
        let mut acc = ExactRational::zero();
        for a in self.0.iter().rev() {
            acc = acc * s + a;
        }
        acc
    }

    /// Coefficients of t ↦ P(s+t).
    pub fn taylor_at(&self, s: &ExactRational) -> Vec<ExactRational> {
        let mut c = self.0.clone();
        let d = c.len();
        for i in 0..d {
            for k in (i..d.saturating_sub(1)).rev() {
                let t = &c[k + 1] * s;
                c[k] += t;
            }
        }
        c
    }

    fn add_scaled(&mut self, o: &Poly, f: &ExactRational) {
        if self.0.len() < o.0.len() {
            self.0.resize(o.0.len(), ExactRational::zero());
        }
        for (k, a) in o.0.iter().enumerate() {
            self.0[k] += &(a * f);
        }
    }
}

/// Stirling numbers of the second kind S(k, j), 0 ≤ j ≤ k ≤ n.
fn stirling2(n: usize) -> Vec<Vec<i64>> {
    let mut s = vec![vec![0i64; n + 1]; n + 1];
    s[0][0] = 1;
    for k in 1..=n {
        for j in 1..=k {
            s[k][j] = j as i64 * s[k - 1][j] + s[k - 1][j - 1];
        }
    }
    s
}

fn binomial_row(p: usize) -> Vec<i64> {
    let mut r = vec![1i64];
    for _ in 0..p {
        let mut n = vec![1i64; r.len() + 1];
        for k in 1..r.len() {
            n[k] = r[k - 1] + r[k];
        }
        r = n;
    }
    r
}

/// ∏(s − γ_j) and ∏(s + α_j).
fn operator_polys(eq: &HypergeometricEquation) -> (Poly, Poly) {
    let neg: Vec<ExactRational> = eq.alpha().iter().map(|a| -a).collect();
    (Poly::from_roots(eq.gamma()), Poly::from_roots(&neg))
}

/// The polynomials P_i of the Euler form of the operator at the base point.
pub fn euler_form(eq: &HypergeometricEquation, point: Point) -> Vec<Poly> {
    let n = eq.order();
    let (p0, p1) = operator_polys(eq);
    let st = stirling2(n);
    // θ^k = Σ_j S(k,j) z^j D^j, so L = Σ_j (a_j z^j − b_j z^{j+1}) D^j
    let coef = |p: &Poly, j: usize| -> ExactRational {
        let mut acc = ExactRational::zero();
        for (k, pk) in p.0.iter().enumerate() {
            if st[k][j] != 0 {
                acc += &(pk * st[k][j]);
            }
        }
        acc
    };
    let mut cj: Vec<Poly> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let a = coef(&p0, j);
        let b = coef(&p1, j);
        let poly = match point {
            Point::Zero => {
                let mut v = vec![ExactRational::zero(); j + 2];
                v[j] = a;
                v[j + 1] = -b;
                Poly(v)
            }
            Point::One => {
                // z = 1 − y and D_z = −D_y
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let mut v = vec![ExactRational::zero(); j + 2];
                for (k, c) in binomial_row(j).into_iter().enumerate() {
                    let sgn = if k % 2 == 0 { c } else { -c };
                    v[k] += &(&a * (sgn * sign));
                }
                for (k, c) in binomial_row(j + 1).into_iter().enumerate() {
                    let sgn = if k % 2 == 0 { c } else { -c };
                    v[k] -= &(&b * (sgn * sign));
                }
                Poly(v)
            }
        };
        cj.push(poly);
    }
    let ord = |p: &Poly| p.0.iter().position(|x| !x.is_zero());
    let t = cj
        .iter()
        .enumerate()
        .filter_map(|(j, p)| ord(p).map(|o| j as i64 - o as i64))
        .max()
        .unwrap_or(0);
    let max_i = cj.iter().enumerate().map(|(j, p)| p.0.len() as i64 - 1 - j as i64 + t).max().unwrap_or(0);
    let mut out = Vec::new();
    for i in 0..=max_i.max(0) {
        let mut pi = Poly(vec![ExactRational::zero()]);
        for (j, c) in cj.iter().enumerate() {
            let idx = i + j as i64 - t;
            if idx >= 0 && (idx as usize) < c.0.len() && !c.0[idx as usize].is_zero() {
                pi.add_scaled(&Poly::falling(j), &c.0[idx as usize]);
            }
        }
        out.push(pi);
    }
    while out.len() > 1 && out.last().is_some_and(|p| p.is_zero()) {
        out.pop();
    }
    out
}

/// x^e Σ_k Σ_m coeffs[k][m] x^m (log x)^k with x = z − z₀ (x = 1 − z at z₀ = 1).
#[derive(Clone, Debug, PartialEq)]
pub struct LogPowerSeries<T> {
    pub base_point: Point,
    pub exponent: ExactRational,
    pub coeffs: Vec<Vec<T>>,
}

impl<T: Scalar> LogPowerSeries<T> {
    pub fn order(&self) -> usize {
        self.coeffs.first().map_or(0, |c| c.len())
    }

    pub fn log_degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| c.iter().any(|x| !x.is_zero())).unwrap_or(0)
    }

    /// Coefficient of x^(exponent+m) (log x)^k.
    pub fn coeff(&self, k: usize, m: usize) -> Option<&T> {
        self.coeffs.get(k).and_then(|c| c.get(m))
    }

    /// θ = z d/dz in the local variable of the base point.
    pub fn theta(&self) -> LogPowerSeries<T> {
        theta_apply(self)
    }

    /// Sum of two series whose exponents differ by an integer; the result keeps the
    /// smaller exponent and the shorter valid range.
    pub fn add(&self, o: &LogPowerSeries<T>) -> LogPowerSeries<T> {
        let (lo, hi) = if self.exponent <= o.exponent { (self, o) } else { (o, self) };
        let shift = (&hi.exponent - &lo.exponent).to_i64().expect("integer exponent difference") as usize;
        let len = lo.order().min(hi.order() + shift);
        let kk = lo.coeffs.len().max(hi.coeffs.len());
        let zero = lo.coeffs[0][0].zero_like();
        let mut c = vec![vec![zero; len]; kk];
        for (k, row) in c.iter_mut().enumerate() {
            for (m, v) in row.iter_mut().enumerate() {
                if let Some(a) = lo.coeff(k, m) {
                    *v = v.plus(a);
                }
                if m >= shift {
                    if let Some(b) = hi.coeff(k, m - shift) {
                        *v = v.plus(b);
                    }
                }
            }
        }
        LogPowerSeries { base_point: lo.base_point, exponent: lo.exponent.clone(), coeffs: c }
    }

    pub fn scale(&self, r: &ExactRational) -> LogPowerSeries<T> {
        let coeffs = self.coeffs.iter().map(|row| row.iter().map(|x| x.times_rat(r)).collect()).collect();
        LogPowerSeries { base_point: self.base_point, exponent: self.exponent.clone(), coeffs }
    }

    /// Multiply by z: at z₀ = 0 a shift, at z₀ = 1 multiplication by 1 − y.
    pub fn times_z(&self) -> LogPowerSeries<T> {
        let shifted = LogPowerSeries {
            base_point: self.base_point,
            exponent: &self.exponent + 1,
            coeffs: self.coeffs.clone(),
        };
        match self.base_point {
            Point::Zero => shifted,
            Point::One => self.add(&shifted.scale(&ExactRational::from_int(-1))),
        }
    }

    /// Value at the local variable x (real x in (0,1) gives real logs).
    pub fn eval_local(&self, x: &PrecComplex, digits: u32) -> (PrecComplex, f64) {
        let lx = x.ln();
        let xe = (&lx * &PrecComplex::from_rational(&self.exponent, digits)).exp();
        let mut total = PrecComplex::zero(digits);
        let mut lpow = PrecComplex::one(digits);
        let mut tail = 0.0f64;
        let xa = x.abs_f64();
        for row in &self.coeffs {
            let mut acc = PrecComplex::zero(digits);
            for c in row.iter().rev() {
                acc = &(&acc * x) + &c.to_complex(digits);
            }
            if let Some(last) = row.last() {
                let t = last.to_complex(digits).abs_f64() * xa.powi(row.len() as i32 - 1) * lpow.abs_f64();
                tail = tail.max(t);
            }
            total += &(&acc * &lpow);
            lpow = &lpow * &lx;
        }
        let scale = xe.abs_f64();
        (&total * &xe, tail * scale)
    }
}

/// θ applied to a log-power series.
pub fn theta_apply<T: Scalar>(s: &LogPowerSeries<T>) -> LogPowerSeries<T> {
    let kk = s.coeffs.len();
    let len = s.order();
    let zero = s.coeffs[0][0].zero_like();
    // θ_x on x^(e+m) L^k: (e+m) x^(e+m) L^k + k x^(e+m) L^(k−1)
    let mut tx = vec![vec![zero.clone(); len]; kk];
    for k in 0..kk {
        for m in 0..len {
            let em = &s.exponent + m as i64;
            let mut v = s.coeffs[k][m].times_rat(&em);
            if k + 1 < kk {
                v = v.plus(&s.coeffs[k + 1][m].times_rat(&ExactRational::from_int(k as i64 + 1)));
            }
            tx[k][m] = v;
        }
    }
    match s.base_point {
        Point::Zero => LogPowerSeries { base_point: Point::Zero, exponent: s.exponent.clone(), coeffs: tx },
        Point::One => {
            // θ_z = −(1−y) d/dy = −y⁻¹ θ_y + θ_y, written with exponent e−1
            let mut c = vec![vec![zero; len]; kk];
            let neg = ExactRational::from_int(-1);
            for k in 0..kk {
                for m in 0..len {
                    let mut v = tx[k][m].times_rat(&neg);
                    if m > 0 {
                        v = v.plus(&tx[k][m - 1]);
                    }
                    c[k][m] = v;
                }
            }
            LogPowerSeries { base_point: Point::One, exponent: &s.exponent - 1, coeffs: c }
        }
    }
}

/// The operator of the equation applied to a series, computed with θ only.
pub fn apply_operator<T: Scalar>(eq: &HypergeometricEquation, y: &LogPowerSeries<T>) -> LogPowerSeries<T> {
    let (p0, p1) = operator_polys(eq);
    let mut powers = vec![y.clone()];
    for _ in 0..eq.order() {
        let next = theta_apply(powers.last().expect("nonempty"));
        powers.push(next);
    }
    let combine = |p: &Poly| {
        let mut acc: Option<LogPowerSeries<T>> = None;
        for (k, c) in p.0.iter().enumerate() {
            let term = powers[k].scale(c);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        acc.expect("nonempty polynomial")
    };
    let lhs = combine(&p0);
    let rhs = combine(&p1).times_z();
    lhs.add(&rhs.scale(&ExactRational::from_int(-1)))
}

/// Named normalizations of the fundamental matrices of the two worked examples.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Quartic,
    Quintic,
}

impl Preset {
    pub fn equation(&self) -> HypergeometricEquation {
        match self {
            Preset::Quartic => HypergeometricEquation::quartic(),
            Preset::Quintic => HypergeometricEquation::quintic(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Quartic => "quartic",
            Preset::Quintic => "quintic",
        }
    }

    pub fn parse(s: &str) -> Option<Preset> {
        match s {
            "quartic" => Some(Preset::Quartic),
            "quintic" => Some(Preset::Quintic),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub enum Normalization {
    Identity,
    Preset(Preset),
    Matrix(CMatrix),
}

/// First-row local solutions (the columns of S x^R) together with R and C.
#[derive(Clone, Debug)]
pub struct FundamentalMatrix<T> {
    pub equation: HypergeometricEquation,
    pub base_point: Point,
    pub order: usize,
    pub columns: Vec<LogPowerSeries<T>>,
    /// Exponent of the leading term of each column (diagonal of R).
    pub leading: Vec<ExactRational>,
    pub r: Vec<Vec<ExactRational>>,
    pub normalization: Normalization,
}

/// Evaluated Φ with the size of the last retained terms.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub matrix: CMatrix,
    pub tail_estimate: f64,
}

struct SlotSolver<'a, T> {
    polys: &'a [Poly],
    rho: ExactRational,
    kk: usize,
    order: usize,
    zero: T,
    /// Taylor coefficients of P_i at ρ+m−i, indexed [i][m].
    taylor: Vec<Vec<Vec<ExactRational>>>,
    exact: bool,
}

impl<'a, T: Scalar> SlotSolver<'a, T> {
    fn new(polys: &'a [Poly], rho: ExactRational, kk: usize, order: usize, zero: T, exact: bool) -> Self {
        let taylor = polys
            .iter()
            .enumerate()
            .map(|(i, p)| (0..order).map(|m| p.taylor_at(&(&rho + (m as i64 - i as i64)))).collect())
            .collect();
        SlotSolver { polys, rho, kk, order, zero, taylor, exact }
    }

    /// Divided-power coefficients c[m][k] of the solution started by e_k0 at position m0.
    fn solve(&self, m0: usize, k0: usize, one: &T) -> Vec<Vec<T>> {
        let kk = self.kk;
        let mut c: Vec<Vec<T>> = vec![vec![self.zero.clone(); kk]; self.order];
        if m0 >= self.order {
            return c;
        }
        c[m0][k0] = one.clone();
        for m in m0 + 1..self.order {
            let mut rhs = vec![self.zero.clone(); kk];
            for i in 1..self.polys.len().min(m - m0 + 1) {
                let tay = &self.taylor[i][m];
                let prev = &c[m - i];
                for k in 0..kk {
                    let mut acc = self.zero.clone();
                    for (j, pj) in tay.iter().enumerate() {
                        if k + j >= kk {
                            break;
                        }
                        if !pj.is_zero() && !prev[k + j].is_zero() {
                            acc = acc.plus(&prev[k + j].times_rat(pj));
                        }
                    }
                    rhs[k] = rhs[k].minus(&acc);
                }
            }
            let p = &self.taylor[0][m];
            let mu = p.iter().position(|x| !x.is_zero()).expect("P_0 is not identically zero");
            let inv = p[mu].recip().expect("nonzero");
            let cm = &mut c[m];
            if kk > mu {
                for k in (0..kk - mu).rev() {
                    let mut v = rhs[k].clone();
                    for j in mu + 1..p.len() {
                        if k + j < kk && !p[j].is_zero() {
                            v = v.minus(&cm[k + j].times_rat(&p[j]));
                        }
                    }
                    cm[k + mu] = v.times_rat(&inv);
                }
            }
            if self.exact {
                for r in rhs.iter().skip(kk.saturating_sub(mu)) {
                    debug_assert!(r.is_zero(), "log degree exceeded at position {m}");
                }
            }
        }
        c
    }

    fn to_series(&self, c: &[Vec<T>], point: Point) -> LogPowerSeries<T> {
        let mut coeffs = vec![vec![self.zero.clone(); self.order]; self.kk];
        let mut fact = ExactRational::one();
        for k in 0..self.kk {
            if k > 0 {
                fact = fact * k as i64;
            }
            let inv = fact.recip().expect("nonzero");
            for m in 0..self.order {
                coeffs[k][m] = c[m][k].times_rat(&inv);
            }
        }
        let last = coeffs.iter().rposition(|r| r.iter().any(|x| !x.is_zero())).unwrap_or(0);
        coeffs.truncate(last + 1);
        LogPowerSeries { base_point: point, exponent: self.rho.clone(), coeffs }
    }
}

/// Exponents grouped into classes with integer differences, in order of first appearance:
/// (base ρ, position m ↦ multiplicity).
pub fn exponent_classes(exps: &[ExactRational]) -> Vec<(ExactRational, BTreeMap<usize, usize>)> {
    let mut classes: Vec<Vec<ExactRational>> = Vec::new();
    for e in exps {
        match classes.iter_mut().find(|c| (e - &c[0]).is_integer()) {
            Some(c) => c.push(e.clone()),
            None => classes.push(vec![e.clone()]),
        }
    }
    classes
        .into_iter()
        .map(|c| {
            let rho = c.iter().min().expect("nonempty").clone();
            let mut pos = BTreeMap::new();
            for e in &c {
                let m = (e - &rho).to_i64().expect("integer") as usize;
                *pos.entry(m).or_insert(0) += 1;
            }
            (rho, pos)
        })
        .collect()
}

fn build<T: Scalar>(
    eq: &HypergeometricEquation,
    point: Point,
    order: usize,
    normalization: Normalization,
    one: T,
    exact: bool,
) -> Result<FundamentalMatrix<T>, FrobeniusError> {
    let n = eq.order();
    if order < n {
        return Err(FrobeniusError::OrderTooSmall { order, n });
    }
    if let Normalization::Preset(p) = &normalization {
        if &p.equation() != eq {
            return Err(FrobeniusError::PresetMismatch(p.name().into()));
        }
    }
    let polys = euler_form(eq, point);
    let zero = one.zero_like();
    let mut columns = Vec::with_capacity(n);
    let mut leading = Vec::with_capacity(n);
    let mut chain_link = Vec::with_capacity(n);
    for (rho, positions) in exponent_classes(&eq.local_exponents(point)) {
        let solver = SlotSolver::new(&polys, rho.clone(), n, order, zero.clone(), exact);
        for (&m, &mu) in &positions {
            let top = solver.solve(m, mu - 1, &one);
            // v_{μ−1} = top, v_k = N v_{k+1}; emitted as v_0, ..., v_{μ−1}
            let mut chain = vec![top];
            for _ in 1..mu {
                let prev = chain.last().expect("nonempty");
                let shifted: Vec<Vec<T>> = prev
                    .iter()
                    .map(|row| {
                        let mut r: Vec<T> = row[1..].to_vec();
                        r.push(zero.clone());
                        r
                    })
                    .collect();
                chain.push(shifted);
            }
            for (idx, c) in chain.iter().rev().enumerate() {
                columns.push(solver.to_series(c, point));
                leading.push(&rho + m as i64);
                chain_link.push(idx > 0);
            }
        }
    }
    let mut r = vec![vec![ExactRational::zero(); n]; n];
    for j in 0..n {
        r[j][j] = leading[j].clone();
        if chain_link[j] {
            r[j - 1][j] = ExactRational::one();
        }
    }
    Ok(FundamentalMatrix { equation: eq.clone(), base_point: point, order, columns, leading, r, normalization })
}

/// Exact fundamental matrix; coefficients are rationals.
pub fn frobenius_basis(
    eq: &HypergeometricEquation,
    point: Point,
    order: usize,
    normalization: Normalization,
) -> Result<FundamentalMatrix<ExactRational>, FrobeniusError> {
    build(eq, point, order, normalization, ExactRational::one(), true)
}

/// The same recursion carried out at `digits` working precision.
pub fn frobenius_basis_numeric(
    eq: &HypergeometricEquation,
    point: Point,
    order: usize,
    normalization: Normalization,
    digits: u32,
) -> Result<FundamentalMatrix<PrecComplex>, FrobeniusError> {
    build(eq, point, order, normalization, PrecComplex::one(digits), false)
}

/// exp(t·R) for nilpotent R.
fn nilpotent_exp(r: &CMatrix, t: &PrecComplex) -> CMatrix {
    let n = r.rows();
    let d = t.digits();
    let tr = r.scale(t);
    let mut out = CMatrix::identity(n, d);
    let mut pw = CMatrix::identity(n, d);
    for k in 1..=n {
        pw = pw.mul(&tr).expect("square").scale(&PrecComplex::one(d).div_int(k as i64));
        out = out.add(&pw);
    }
    out
}

fn rational_matrix(r: &[Vec<ExactRational>], digits: u32) -> CMatrix {
    CMatrix::from_rows(
        r.iter().map(|row| row.iter().map(|x| PrecComplex::from_rational(x, digits)).collect()).collect(),
    )
    .expect("rectangular")
}

impl<T: Scalar> FundamentalMatrix<T> {
    pub fn n(&self) -> usize {
        self.columns.len()
    }

    /// Coefficient of x^(R_jj + i) in S_{1j} (0-based j).
    pub fn s_coefficient(&self, j: usize, i: usize) -> Option<&T> {
        let col = &self.columns[j];
        let shift = (&self.leading[j] - &col.exponent).to_i64()? as usize;
        col.coeff(0, shift + i)
    }

    /// The normalization matrix C at the given precision.
    pub fn c_matrix(&self, digits: u32) -> CMatrix {
        let n = self.n();
        match &self.normalization {
            Normalization::Identity => CMatrix::identity(n, digits),
            Normalization::Matrix(m) => m.clone(),
            Normalization::Preset(p) => preset_c(p, self.base_point, &self.r, digits),
        }
    }

    /// Rows θ^r of the first-row solutions, r = 0..n−1.
    pub fn rows(&self) -> Vec<Vec<LogPowerSeries<T>>> {
        let mut rows = vec![self.columns.clone()];
        for _ in 1..self.n() {
            let next = rows.last().expect("nonempty").iter().map(theta_apply).collect();
            rows.push(next);
        }
        rows
    }
}

fn preset_c(p: &Preset, point: Point, r: &[Vec<ExactRational>], d: u32) -> CMatrix {
    let tpi = PrecComplex::two_pi_i(d);
    let c = |x: i64, y: i64| PrecComplex::from_rational(&ExactRational::new(x, y).expect("nonzero"), d);
    let z = PrecComplex::zero(d);
    match (p, point) {
        (Preset::Quartic, Point::Zero) => {
            let c0 = CMatrix::from_rows(vec![
                vec![c(1, 1), z.clone(), c(1, 4)],
                vec![z.clone(), tpi.recip(), z.clone()],
                vec![z.clone(), z.clone(), (&tpi * &tpi).recip()],
            ])
            .expect("3x3");
            let k = -PrecComplex::from_int(256, d).ln();
            nilpotent_exp(&rational_matrix(r, d), &k).mul(&c0).expect("3x3")
        }
        (Preset::Quartic, Point::One) => CMatrix::identity(3, d),
        (Preset::Quintic, Point::Zero) => {
            let t2 = &tpi * &tpi;
            let t3 = &t2 * &tpi;
            let diag = CMatrix::from_rows(vec![
                vec![c(1, 1), z.clone(), z.clone(), z.clone()],
                vec![z.clone(), tpi.recip(), z.clone(), z.clone()],
                vec![z.clone(), z.clone(), t2.recip(), z.clone()],
                vec![z.clone(), z.clone(), z.clone(), t3.recip()],
            ])
            .expect("4x4");
            let zeta = PrecComplex::zeta_int(3, d).scale_int(200);
            let inner = CMatrix::from_rows(vec![
                vec![c(1, 1), z.clone(), c(-25, 12), &zeta / &t3],
                vec![z.clone(), c(1, 1), c(5, 2), c(-25, 12)],
                vec![z.clone(), z.clone(), c(5, 1), z.clone()],
                vec![z.clone(), z.clone(), z.clone(), c(-5, 1)],
            ])
            .expect("4x4");
            let c0 = diag.mul(&inner).expect("4x4");
            let k = -PrecComplex::from_int(3125, d).ln();
            nilpotent_exp(&rational_matrix(r, d), &k).mul(&c0).expect("4x4")
        }
        (Preset::Quintic, Point::One) => {
            let pi = PrecComplex::pi(d);
            let s = &PrecComplex::from_int(5, d).sqrt() / &(&pi * &pi).scale_int(4);
            CMatrix::identity(4, d).scale(&s)
        }
    }
}

/// Φ(z) = [θ^r y_j(z)] C, with the local variable x = z or x = 1 − z.
pub fn evaluate_fundamental<T: Scalar>(
    phi: &FundamentalMatrix<T>,
    z: &PrecComplex,
    digits: u32,
) -> Result<Evaluation, FrobeniusError> {
    let rows = phi.rows();
    evaluate_rows(phi, &rows, z, digits)
}

/// As [`evaluate_fundamental`] with the θ rows computed once by the caller.
pub fn evaluate_rows<T: Scalar>(
    phi: &FundamentalMatrix<T>,
    rows: &[Vec<LogPowerSeries<T>>],
    z: &PrecComplex,
    digits: u32,
) -> Result<Evaluation, FrobeniusError> {
    let x = match phi.base_point {
        Point::Zero => z.with_digits(digits),
        Point::One => &PrecComplex::one(digits) - &z.with_digits(digits),
    };
    if x.abs_f64() >= 1.0 {
        return Err(FrobeniusError::OutsideDisk);
    }
    if x.im().is_zero() && *x.re() <= 0 {
        return Err(FrobeniusError::OnBranchCut);
    }
    let n = phi.n();
    let mut m = CMatrix::zeros(n, n, digits);
    let mut tail = 0.0f64;
    for (r, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            let (v, t) = s.eval_local(&x, digits);
            m[(r, j)] = v;
            tail = tail.max(t);
        }
    }
    let c = phi.c_matrix(digits);
    Ok(Evaluation { matrix: m.mul(&c)?, tail_estimate: tail })
}

fn elementary_symmetric(k: usize, xs: &[ExactRational]) -> ExactRational {
    // e_k = 0 for k beyond the number of variables
    let mut e = vec![ExactRational::zero(); xs.len() + 1];
    e[0] = ExactRational::one();
    for x in xs {
        for j in (1..e.len()).rev() {
            let t = &e[j - 1] * x;
            e[j] += t;
        }
    }
    e.get(k).cloned().unwrap_or_else(ExactRational::zero)
}

/// A(z) with θΦ = AΦ: ones on the superdiagonal and last row
/// a_i = (−1)^(n−i) (e_{n+1−i}(γ_1..γ_{n−1}) − z e_{n+1−i}(−α)) / (1 − z).
pub fn companion_matrix(eq: &HypergeometricEquation, z: &PrecComplex) -> Result<CMatrix, FrobeniusError> {
    let n = eq.order();
    let d = z.digits();
    let one_minus = &PrecComplex::one(d) - z;
    if one_minus.is_zero() {
        return Err(FrobeniusError::SingularPoint);
    }
    let g = &eq.gamma()[..n - 1];
    let mut a = CMatrix::zeros(n, n, d);
    for i in 0..n - 1 {
        a[(i, i + 1)] = PrecComplex::one(d);
    }
    for i in 1..=n {
        let k = n + 1 - i;
        let eg = PrecComplex::from_rational(&elementary_symmetric(k, g), d);
        let neg: Vec<ExactRational> = eq.alpha().iter().map(|a| -a).collect();
        let ea = PrecComplex::from_rational(&elementary_symmetric(k, &neg), d);
        let mut v = &(&eg - &(z * &ea)) / &one_minus;
        if (n - i) % 2 == 1 {
            v = -v;
        }
        a[(n - 1, i - 1)] = v;
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn s(phi: &FundamentalMatrix<ExactRational>, j: usize, i: usize) -> ExactRational {
        phi.s_coefficient(j, i).cloned().unwrap()
    }

    #[test]
    fn quartic_goldens() {
        let eq = HypergeometricEquation::quartic();
        let p0 = frobenius_basis(&eq, Point::Zero, 8, Normalization::Preset(Preset::Quartic)).unwrap();
        assert_eq!(s(&p0, 0, 1), rat(3, 32));
        assert_eq!(s(&p0, 0, 2), rat(315, 8192));
        assert_eq!(s(&p0, 0, 3), rat(5775, 262144));
        assert_eq!(s(&p0, 1, 1), rat(13, 32));
        assert_eq!(s(&p0, 1, 3), rat(176005, 1572864));
        assert_eq!(s(&p0, 2, 2), rat(169, 2048));
        assert_eq!(s(&p0, 2, 3), rat(35841, 524288));
        let r0: Vec<Vec<i64>> = vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(p0.r[i][j], rat(r0[i][j], 1));
            }
        }
        let p1 = frobenius_basis(&eq, Point::One, 8, Normalization::Preset(Preset::Quartic)).unwrap();
        assert_eq!(p1.leading, vec![rat(0, 1), rat(1, 1), rat(1, 2)]);
        assert_eq!(s(&p1, 0, 1), rat(0, 1));
        assert_eq!(s(&p1, 0, 2), rat(-1, 32));
        assert_eq!(s(&p1, 0, 3), rat(-131, 3840));
        assert_eq!(s(&p1, 1, 1), rat(35, 48));
        assert_eq!(s(&p1, 1, 2), rat(665, 1152));
        assert_eq!(s(&p1, 2, 0), rat(1, 1));
        assert_eq!(s(&p1, 2, 1), rat(11, 24));
        assert_eq!(s(&p1, 2, 3), rat(1181, 5120));
    }

    #[test]
    fn quintic_goldens() {
        let eq = HypergeometricEquation::quintic();
        let p0 = frobenius_basis(&eq, Point::Zero, 6, Normalization::Preset(Preset::Quintic)).unwrap();
        assert_eq!(s(&p0, 0, 1), rat(24, 625));
        assert_eq!(s(&p0, 0, 2), rat(4536, 390625));
        assert_eq!(s(&p0, 1, 1), rat(154, 625));
        assert_eq!(s(&p0, 1, 2), rat(32409, 390625));
        assert_eq!(s(&p0, 2, 2), rat(168327, 1562500));
        assert_eq!(s(&p0, 3, 1), rat(-46, 125));
        assert_eq!(s(&p0, 3, 2), rat(-26387, 312500));
        let p1 = frobenius_basis(&eq, Point::One, 8, Normalization::Preset(Preset::Quintic)).unwrap();
        assert_eq!(p1.leading, vec![rat(0, 1), rat(1, 1), rat(1, 1), rat(2, 1)]);
        assert_eq!(p1.r[1][2], rat(1, 1));
        assert_eq!(s(&p1, 0, 3), rat(2, 625));
        assert_eq!(s(&p1, 0, 5), rat(2971, 468750));
        assert_eq!(s(&p1, 1, 1), rat(7, 10));
        assert_eq!(s(&p1, 1, 2), rat(41, 75));
        assert_eq!(s(&p1, 1, 5), rat(160979, 468750));
        assert_eq!(s(&p1, 2, 1), rat(0, 1));
        assert_eq!(s(&p1, 2, 2), rat(-23, 360));
        assert_eq!(s(&p1, 2, 5), rat(-33777511, 225000000));
        assert_eq!(s(&p1, 3, 1), rat(37, 30));
        assert_eq!(s(&p1, 3, 5), rat(237108737, 196875000));
        // the log column pairs with the ξ column: its log part is y·S_12
        let flog = &p1.columns[2];
        for m in 0..8 {
            assert_eq!(flog.coeff(1, m), p1.columns[1].coeff(0, m));
        }
    }

    #[test]
    fn theta_examples() {
        let one = ExactRational::one();
        let z = ExactRational::zero();
        let e = rat(2, 5);
        let s = LogPowerSeries { base_point: Point::Zero, exponent: e.clone(), coeffs: vec![vec![one.clone(), z.clone()]] };
        assert_eq!(theta_apply(&s).coeffs[0][0], e);
        let l = LogPowerSeries { base_point: Point::Zero, exponent: z.clone(), coeffs: vec![vec![z.clone()], vec![one.clone()]] };
        let t = theta_apply(&l);
        assert_eq!(t.coeffs[0][0], one);
        assert!(t.coeffs[1][0].is_zero());
        let el = LogPowerSeries { base_point: Point::Zero, exponent: e.clone(), coeffs: vec![vec![z.clone()], vec![one.clone()]] };
        let t = theta_apply(&el);
        assert_eq!(t.coeffs[0][0], one);
        assert_eq!(t.coeffs[1][0], e);
    }

    #[test]
    fn residual_vanishes() {
        let eqs = vec![
            HypergeometricEquation::quartic(),
            HypergeometricEquation::quintic(),
            HypergeometricEquation::parse(&["1/3", "1/2", "1/7"], &["6/5", "1/5", "0"]).unwrap(),
            HypergeometricEquation::parse(&["1/3", "3/4"], &["1/5"]).unwrap(),
            HypergeometricEquation::parse(&["1/3", "2/3", "1/2"], &["0", "0"]).unwrap(),
            HypergeometricEquation::parse(&["1/6", "1/3", "2/3", "5/6"], &["1/2", "1/2", "0"]).unwrap(),
        ];
        let order = 14;
        for eq in &eqs {
            for point in [Point::Zero, Point::One] {
                let phi = frobenius_basis(eq, point, order, Normalization::Identity).unwrap();
                for col in &phi.columns {
                    let res = apply_operator(eq, col);
                    for row in &res.coeffs {
                        for (m, c) in row.iter().enumerate().take(order - eq.order() - 1) {
                            assert!(c.is_zero(), "{eq} at {point}: residual at {m}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn companion_system() {
        let d = 50;
        for eq in [
            HypergeometricEquation::quintic(),
            HypergeometricEquation::parse(&["1/3", "1/2", "1/7"], &["2/5", "1/5", "0"]).unwrap(),
        ] {
            let phi = frobenius_basis_numeric(&eq, Point::Zero, 200, Normalization::Identity, d).unwrap();
            let z = PrecComplex::from_f64(0.3, d);
            let e = evaluate_fundamental(&phi, &z, d).unwrap().matrix;
            let a = companion_matrix(&eq, &z).unwrap();
            let rows = phi.rows();
            let n = eq.order();
            let x = z.clone();
            let lhs: Vec<PrecComplex> = rows[n - 1].iter().map(|s| theta_apply(s).eval_local(&x, d).0).collect();
            let ae = a.mul(&e).unwrap();
            for j in 0..n {
                assert!(ae[(n - 1, j)].dist(&lhs[j]) < 1e-40);
                for i in 0..n - 1 {
                    assert!(ae[(i, j)].dist(&e[(i + 1, j)]) < 1e-40);
                }
            }
        }
        assert!(companion_matrix(&HypergeometricEquation::quartic(), &PrecComplex::one(d)).is_err());
    }

    #[test]
    fn exact_and_numeric_agree() {
        let eq = HypergeometricEquation::quintic();
        let d = 40;
        let a = frobenius_basis(&eq, Point::One, 30, Normalization::Identity).unwrap();
        let b = frobenius_basis_numeric(&eq, Point::One, 30, Normalization::Identity, d).unwrap();
        for (ca, cb) in a.columns.iter().zip(&b.columns) {
            for (ra, rb) in ca.coeffs.iter().zip(&cb.coeffs) {
                for (x, y) in ra.iter().zip(rb) {
                    assert!(PrecComplex::from_rational(x, d).dist(y) < 1e-30);
                }
            }
        }
    }

    #[test]
    fn truncation_ladder() {
        let eq = HypergeometricEquation::quartic();
        let d = 60;
        let z = PrecComplex::from_f64(0.5, d);
        let n = Normalization::Preset(Preset::Quartic);
        let a = frobenius_basis_numeric(&eq, Point::Zero, 200, n.clone(), d).unwrap();
        let b = frobenius_basis_numeric(&eq, Point::Zero, 220, n, d).unwrap();
        let ea = evaluate_fundamental(&a, &z, d).unwrap();
        let eb = evaluate_fundamental(&b, &z, d).unwrap();
        assert!(ea.matrix.max_abs_diff(&eb.matrix) < 1e-55);
        assert!(ea.tail_estimate < 1e-50);
        assert!(matches!(evaluate_fundamental(&a, &PrecComplex::from_f64(1.5, d), d), Err(FrobeniusError::OutsideDisk)));
        assert!(matches!(evaluate_fundamental(&a, &PrecComplex::from_f64(-0.5, d), d), Err(FrobeniusError::OnBranchCut)));
    }

    #[test]
    fn preset_mismatch_and_small_order() {
        let eq = HypergeometricEquation::quintic();
        assert!(matches!(
            frobenius_basis(&eq, Point::Zero, 10, Normalization::Preset(Preset::Quartic)),
            Err(FrobeniusError::PresetMismatch(_))
        ));
        assert!(matches!(frobenius_basis(&eq, Point::Zero, 2, Normalization::Identity), Err(FrobeniusError::OrderTooSmall { .. })));
    }

    #[test]
    fn jordan_log_entry() {
        // exp(R log y) has a y log y entry exactly at (2,3)
        let eq = HypergeometricEquation::quintic();
        let p1 = frobenius_basis(&eq, Point::One, 6, Normalization::Identity).unwrap();
        let off: Vec<(usize, usize)> =
            (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).filter(|&(i, j)| i != j && !p1.r[i][j].is_zero()).collect();
        assert_eq!(off, vec![(1, 2)]);
        assert_eq!(p1.columns[2].log_degree(), 1);
        assert_eq!(p1.columns[0].log_degree(), 0);
    }
}
