//! Exact solutions of the Dirac equation in a rotating electromagnetic field.
//!
//! The field is a circularly polarized plane wave travelling along `z` on top of
//! a constant axial magnetic field. The library provides
//!
//! * fixed-size Dirac algebra ([`spinor`]),
//! * the non-Galilean transformation to a point-rotating frame ([`frame`]),
//! * the field itself ([`field`]),
//! * mode bookkeeping, the characteristic cubic and closed-form states ([`modes`]),
//! * an independent residual verifier ([`residual`]) with quadrature ([`quadrature`]).
//!
//! Everything in the library is dimensionless: `ħ = c = Ω = 1`, so time is measured
//! in `1/Ω`, length in `c/Ω` and energy in `ħΩ`. The time constant of the
//! transformation enters only through the group `τΩ`. Conversion from SI inputs is
//! done by the command line front end in [`cli`].

#[cfg(feature = "cli")]
pub mod cli;
pub mod field;
pub mod frame;
pub mod modes;
pub mod quadrature;
pub mod residual;
pub mod sign;
pub mod spinor;

pub use field::{Branch, FieldConfig};
pub use frame::{Event, FrameParams};
pub use modes::{Family, Mode, WaveFunctionModel};
pub use sign::Sign;
pub use spinor::{Complex, Matrix4, Spinor4};
