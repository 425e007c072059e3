//! Truncated power series in a small parameter t, used for residues of order > 1.

use super::complex::PrecComplex;

/// Coefficients c[0] + c[1] t + ... + c[len-1] t^(len-1).
#[derive(Clone, Debug)]
pub struct Jet {
    pub c: Vec<PrecComplex>,
}

impl Jet {
    pub fn constant(v: PrecComplex, len: usize) -> Self {
        let d = v.digits();
        let mut c = vec![PrecComplex::zero(d); len.max(1)];
        c[0] = v;
        Jet { c }
    }

    /// a + t, truncated.
    pub fn linear(a: PrecComplex, len: usize) -> Self {
        let d = a.digits();
        let mut j = Self::constant(a, len);
        if len > 1 {
            j.c[1] = PrecComplex::one(d);
        }
        j
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let n = self.len().min(o.len());
        let d = self.c[0].digits().min(o.c[0].digits());
        let mut c = vec![PrecComplex::zero(d); n];
        for i in 0..n {
            for j in 0..n - i {
                c[i + j] += &self.c[i] * &o.c[j];
            }
        }
        Jet { c }
    }

    pub fn scale(&self, s: &PrecComplex) -> Jet {
        Jet { c: self.c.iter().map(|x| x * s).collect() }
    }

    /// 1/self; requires a nonzero constant term.
    pub fn inv(&self) -> Jet {
        let n = self.len();
        let d = self.c[0].digits();
        let inv0 = self.c[0].recip();
        let mut r = vec![PrecComplex::zero(d); n];
        r[0] = inv0.clone();
        for k in 1..n {
            let mut s = PrecComplex::zero(d);
            for j in 1..=k {
                s += &self.c[j] * &r[k - j];
            }
            r[k] = -(&s * &inv0);
        }
        Jet { c: r }
    }

    pub fn div(&self, o: &Jet) -> Jet {
        self.mul(&o.inv())
    }

    pub fn exp(&self) -> Jet {
        let n = self.len();
        let d = self.c[0].digits();
        let mut g = vec![PrecComplex::zero(d); n];
        g[0] = self.c[0].exp();
        for k in 1..n {
            let mut s = PrecComplex::zero(d);
            for j in 1..=k {
                s += &self.c[j].scale_int(j as i64) * &g[k - j];
            }
            g[k] = s.div_int(k as i64);
        }
        Jet { c: g }
    }

    /// exp(w t) truncated.
    pub fn exp_linear(w: &PrecComplex, len: usize) -> Jet {
        let d = w.digits();
        let mut c = vec![PrecComplex::one(d); len.max(1)];
        for k in 1..c.len() {
            c[k] = (&c[k - 1] * w).div_int(k as i64);
        }
        Jet { c }
    }

    /// (π t / sin π t)^p truncated.
    pub fn pi_t_over_sin(p: usize, len: usize, digits: u32) -> Jet {
        // sin(πt)/(πt) = Σ (-1)^k (πt)^(2k)/(2k+1)!
        let pi = PrecComplex::pi(digits);
        let pi2 = &pi * &pi;
        let mut c = vec![PrecComplex::zero(digits); len.max(1)];
        let mut term = PrecComplex::one(digits);
        let mut k = 0usize;
        while 2 * k < c.len() {
            c[2 * k] = term.clone();
            let den = ((2 * k + 2) * (2 * k + 3)) as i64;
            term = -(&term * &pi2).div_int(den);
            k += 1;
        }
        let base = Jet { c }.inv();
        let mut out = Jet::constant(PrecComplex::one(digits), len);
        for _ in 0..p {
            out = out.mul(&base);
        }
        out
    }
}
