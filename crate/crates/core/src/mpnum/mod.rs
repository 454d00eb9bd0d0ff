//! Arbitrary-precision reals and the special functions built on them.

pub mod consts;
pub mod elementary;
pub mod elliptic;
pub mod gamma;
pub mod real;
pub mod trig;

pub use consts::{const_euler_gamma, const_log2, const_pi};
pub use elementary::{exp, ln};
pub use elliptic::{agm, elliptic_k_agm};
pub use gamma::{gamma, log_gamma, GammaArg};
pub use real::{BigReal, Precision};
pub use trig::{trig_pi, TrigKind};
