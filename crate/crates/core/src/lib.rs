//! Exact computer algebra for left and right n-regular functions on the
//! complexified quaternions.

pub mod basis;
pub mod diffops;
pub mod error;
pub mod func;
pub mod kernel;
pub mod lie;
pub mod poly;
pub mod quat;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use func::{LaurentFn, TensorFn};
pub use quat::{Biquaternion, EBasisCoords};
pub use scalar::GaussianRational;
pub use tensor::{Side, SpinorTensor, TensorRank};
