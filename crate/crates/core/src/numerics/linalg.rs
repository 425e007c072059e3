//! Small dense complex matrices at working precision.

use std::fmt;
use std::ops::{Index, IndexMut};

use super::complex::PrecComplex;
use super::NumericsError;

#[derive(Clone, Debug)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<PrecComplex>,
}

/// LU factors with row permutation, P A = L U packed in one matrix.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: CMatrix,
    perm: Vec<usize>,
    sign: i64,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize, digits: u32) -> Self {
        CMatrix { rows, cols, data: vec![PrecComplex::zero(digits); rows * cols] }
    }

    pub fn identity(n: usize, digits: u32) -> Self {
        let mut m = Self::zeros(n, n, digits);
        for i in 0..n {
            m[(i, i)] = PrecComplex::one(digits);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<PrecComplex>>) -> Result<Self, NumericsError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(NumericsError::Dimension("ragged rows".into()));
        }
        Ok(CMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn digits(&self) -> u32 {
        self.data.iter().map(|x| x.digits()).min().unwrap_or(super::DEFAULT_DIGITS)
    }

    pub fn row(&self, i: usize) -> Vec<PrecComplex> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<PrecComplex> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<PrecComplex>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn mul(&self, o: &CMatrix) -> Result<CMatrix, NumericsError> {
        if self.cols != o.rows {
            return Err(NumericsError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let d = self.digits().min(o.digits());
        let mut out = CMatrix::zeros(self.rows, o.cols, d);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    out[(i, j)] += a * &o[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &PrecComplex) -> CMatrix {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn sub(&self, o: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, o: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Largest entrywise |a - b|.
    pub fn max_abs_diff(&self, o: &CMatrix) -> f64 {
        self.data.iter().zip(&o.data).map(|(a, b)| a.dist(b)).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.abs_f64()).fold(0.0, f64::max)
    }

    /// Infinity norm, as f64.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs_f64()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn lu(&self) -> Result<Lu, NumericsError> {
        if self.rows != self.cols {
            return Err(NumericsError::Dimension("LU of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1;
        for k in 0..n {
            let mut p = k;
            let mut best = a[(k, k)].abs();
            for i in k + 1..n {
                let v = a[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best.is_zero() {
                return Err(NumericsError::Singular);
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let piv = a[(k, k)].recip();
            for i in k + 1..n {
                let f = &a[(i, k)] * &piv;
                if f.is_zero() {
                    a[(i, k)] = f;
                    continue;
                }
                for j in k + 1..n {
                    let t = &f * &a[(k, j)];
                    a[(i, j)] -= &t;
                }
                a[(i, k)] = f;
            }
        }
        Ok(Lu { lu: a, perm, sign })
    }

    pub fn solve(&self, b: &[PrecComplex]) -> Result<Vec<PrecComplex>, NumericsError> {
        Ok(self.lu()?.solve(b))
    }

    pub fn inverse(&self) -> Result<CMatrix, NumericsError> {
        let lu = self.lu()?;
        let n = self.rows;
        let d = self.digits();
        let mut inv = CMatrix::zeros(n, n, d);
        for j in 0..n {
            let mut e = vec![PrecComplex::zero(d); n];
            e[j] = PrecComplex::one(d);
            let x = lu.solve(&e);
            for i in 0..n {
                inv[(i, j)] = x[i].clone();
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> Result<PrecComplex, NumericsError> {
        match self.lu() {
            Ok(lu) => {
                let mut d = PrecComplex::from_int(lu.sign, self.digits());
                for i in 0..self.rows {
                    d = &d * &lu.lu[(i, i)];
                }
                Ok(d)
            }
            Err(NumericsError::Singular) => Ok(PrecComplex::zero(self.digits())),
            Err(e) => Err(e),
        }
    }

    /// ‖A‖∞ ‖A⁻¹‖∞; infinite when singular.
    pub fn condition_inf(&self) -> f64 {
        match self.inverse() {
            Ok(inv) => self.norm_inf() * inv.norm_inf(),
            Err(_) => f64::INFINITY,
        }
    }
}

impl Lu {
    pub fn solve(&self, b: &[PrecComplex]) -> Vec<PrecComplex> {
        let n = self.perm.len();
        let mut y: Vec<PrecComplex> = self.perm.iter().map(|&p| b[p].clone()).collect();
        for i in 0..n {
            for j in 0..i {
                let t = &self.lu[(i, j)] * &y[j];
                y[i] -= &t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = &self.lu[(i, j)] * &y[j];
                y[i] -= &t;
            }
            y[i] = &y[i] / &self.lu[(i, i)];
        }
        y
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = PrecComplex;
    fn index(&self, (i, j): (usize, usize)) -> &PrecComplex {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut PrecComplex {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: u32 = 50;

    fn m(v: &[&[f64]]) -> CMatrix {
        CMatrix::from_rows(
            v.iter().map(|r| r.iter().map(|&x| PrecComplex::from_f64(x, D)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn inverse_roundtrip() {
        let mut a = m(&[&[0.0, 2.0, 1.0], &[1.0, 1.0, 0.0], &[3.0, 0.0, 5.0]]);
        a[(0, 0)] = PrecComplex::i(D);
        let p = a.mul(&a.inverse().unwrap()).unwrap();
        assert!(p.max_abs_diff(&CMatrix::identity(3, D)) < 1e-48);
        assert!(a.condition_inf().is_finite());
    }

    #[test]
    fn det_and_singular() {
        let a = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert!(a.det().unwrap().dist(&PrecComplex::from_int(-2, D)) < 1e-48);
        let s = m(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(matches!(s.inverse(), Err(NumericsError::Singular)));
        assert!(s.det().unwrap().is_zero());
    }

    #[test]
    fn solve_permuted() {
        let a = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let x = a.solve(&[PrecComplex::from_int(3, D), PrecComplex::from_int(4, D)]).unwrap();
        assert!(x[0].dist(&PrecComplex::from_int(4, D)) < 1e-48);
        assert!(x[1].dist(&PrecComplex::from_int(3, D)) < 1e-48);
    }
}
