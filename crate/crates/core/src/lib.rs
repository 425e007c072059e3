//! Connection matrices of generalized hypergeometric equations between the
//! singular points z=0 and z=1, in closed form and by series overlap.

pub mod numerics;
pub mod equation;
pub mod frobenius;
pub mod series_engine;
pub mod connection;
pub mod oracle;
pub mod cli;
