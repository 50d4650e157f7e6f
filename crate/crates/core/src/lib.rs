//! Exact computations for isotonian algebras `K[P,Q]`: the toric rings
//! generated by the monomials `u_phi = prod_p x_{p,phi(p)}` over all isotone
//! maps `phi: P -> Q`.

mod bits;
pub mod cycles;
pub mod error;
pub mod limits;
pub mod linalg;
pub mod poset;

pub use error::{Error, Result};
pub use limits::{Caps, Limits};
pub use poset::Poset;
pub mod hom;
pub mod ideal;
pub mod normality;
pub mod straighten;
pub mod sweep;
pub mod toric;
