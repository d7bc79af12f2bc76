//! Quantum privacy amplification toolkit.
//!
//! Classical-quantum states `ρ = Σ_a P(a)|a⟩⟨a| ⊗ ρ_a`, the conditional entropies and
//! mutual-information variants that govern how much a universal₂ hash leaks to an
//! eavesdropper holding `E`, exact enumeration of Toeplitz hash families, machine checks
//! of the leaked-information bounds, and the security exponents / equivocation rates.
//!
//! The crate is `no_std` (it needs `alloc`); IO, CLI and parallel execution live in the
//! `qpa` companion crate. All information quantities are in nats.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

mod error;
pub mod exec;
pub mod exponents;
pub mod hash;
pub mod hermitian;
pub mod optimize;
pub mod quantities;
pub mod state;
pub mod sum;
pub mod verify;

pub use error::{Error, Result};
pub use exec::{Executor, Sequential};
pub use exponents::{ExponentCurve, ExponentRow, Optimum, RatePoint};
pub use hash::{FamilyKind, FamilyMember, HashFamily};
pub use hermitian::{HermitianMatrix, MatrixFunction, Spectrum};
pub use quantities::{PreparedState, QuantityReport, RenyiOrder};
pub use state::{CQState, ClassicalFunction};
pub use verify::BoundReport;

pub use num_complex::Complex64;
