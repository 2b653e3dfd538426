//! Eta quotients on Γ0(N): order matrices and their inverses, cusp orders,
//! Atkin–Lehner involutions, q-expansions, exponent bounds and enumeration
//! of holomorphic quotients of given weight and level.

pub mod arithmetic;
pub mod bounds;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod etaquotient;
pub mod ordermatrix;
pub mod qseries;

pub use error::{EtaError, Result};
