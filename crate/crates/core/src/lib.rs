pub mod ck_k0;
pub mod elliptic;
pub mod error;
pub mod ffield;
pub mod functor;
pub mod intmat;
pub mod quadratic_cf;
pub mod zeta;

pub use error::{Error, Result};
