//! Printed connection matrices of the two worked examples.

use crate::equation::Point;
use crate::frobenius::Preset;
use crate::numerics::{gamma_rational, rat, CMatrix, ExactRational, PrecComplex};

/// The quartic M₁₀ with A = Γ(1/8)Γ(3/8)/(Γ(5/8)Γ(7/8)).
pub fn quartic_matrix(d: u32) -> CMatrix {
    let g = |a, b| gamma_rational(&rat(a, b), d).expect("positive argument");
    let a = &(&g(1, 8) * &g(3, 8)) / &(&g(5, 8) * &g(7, 8));
    let pi = PrecComplex::pi(d);
    let s2p = &PrecComplex::from_int(2, d).sqrt() * &pi;
    let pii = &pi * &PrecComplex::i(d);
    let t = a.scale(&rat(3, 64));
    let r = a.recip();
    let z = PrecComplex::zero(d);
    CMatrix::from_rows(vec![
        vec![&a / &s2p.scale_int(2), -(&a / &pii.scale_int(4)), z.clone()],
        vec![&(&t + &r).scale_int(2) / &s2p, -(&(&t - &r) / &pii), z.clone()],
        vec![-(&PrecComplex::from_int(2, d) / &s2p), z, -(&s2p.recip())],
    ])
    .expect("square")
}

/// Entries of the quintic M₁₀ fixed exactly: row 3 = (1, 0, 0, 0), (2, 4) = 2πi, and
/// zeros at (1, 4), (4, 4). Indices are 0-based.
pub fn quintic_structure(d: u32) -> Vec<((usize, usize), PrecComplex)> {
    let z = PrecComplex::zero(d);
    vec![
        ((2, 0), PrecComplex::one(d)),
        ((2, 1), z.clone()),
        ((2, 2), z.clone()),
        ((2, 3), z.clone()),
        ((1, 3), PrecComplex::two_pi_i(d)),
        ((0, 3), z.clone()),
        ((3, 3), z),
    ]
}

/// Zero entries of the quartic M₁₀ (0-based).
pub const QUARTIC_ZEROS: [(usize, usize); 3] = [(0, 2), (1, 2), (2, 1)];

/// Printed Frobenius coefficients: (point, column j, index i, S_{1j} coefficient of x^{R_jj + i}).
pub fn series_goldens(preset: &Preset) -> Vec<(Point, usize, usize, ExactRational)> {
    match preset {
        Preset::Quartic => vec![
            (Point::Zero, 0, 1, rat(3, 32)),
            (Point::Zero, 0, 2, rat(315, 8192)),
            (Point::Zero, 0, 3, rat(5775, 262144)),
        ],
        Preset::Quintic => vec![
            (Point::Zero, 0, 1, rat(24, 625)),
            (Point::Zero, 0, 2, rat(4536, 390625)),
            (Point::One, 1, 1, rat(7, 10)),
            (Point::One, 1, 2, rat(41, 75)),
        ],
    }
}
