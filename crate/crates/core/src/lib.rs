//! Hodge numbers, periods and regulators of the cyclic-cover surfaces
//! y^p = x^a (1−x)^b (t^l − x)^{p−b} fibred over the projective line,
//! together with independent quadrature oracles for every closed form.

pub mod connection;
pub mod error;
pub mod fibration;
pub mod numvalue;
pub mod periods;
pub mod quad;
pub mod rational;
pub mod regulator;
pub mod specialfn;
pub mod verify;

pub use error::{Error, Result};
pub use numvalue::NumValue;
pub use rational::Q;
pub use specialfn::Precision;
