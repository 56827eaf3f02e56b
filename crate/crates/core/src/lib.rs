//! Limit shapes of random signatures from extreme characters of `U(infinity)`.
//!
//! The pipeline starts from Voiculescu parameter data ([`charparams`]), turns
//! it into exact Taylor data of `P'`, and from there produces the limit
//! moments ([`limitshape`]), the limit density and shape function, the
//! quantized free convolution ([`qfc`]) and the growth velocities
//! ([`hydro`]). [`finiten`] is an exact finite-N oracle used to check the
//! limits at desk scale.

pub mod charparams;
pub mod critical;
pub mod error;
pub mod finiten;
pub mod fps;
pub mod hydro;
pub mod io;
pub mod limitshape;
pub mod ncomb;
pub mod paramfile;
pub mod qfc;
pub mod roots;

pub use charparams::{Atom, ClosedForm, LimitParams, OmegaParams, Param, TSeries};
pub use error::{Error, Result};
pub use fps::{Series, Q};
