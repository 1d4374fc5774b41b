//! Exact-arithmetic engine for quasi-trigonometric solutions of the classical
//! Yang-Baxter equation over classical simple Lie algebras.

pub mod bdtriples;
pub mod cli;
pub mod error;
pub mod grading;
pub mod lie;
pub mod linalg;
pub mod manin;
pub mod pipeline;
pub mod rmatrix;
pub mod roots;
pub mod scalar;
pub mod tensor;
pub mod uq;

pub use error::CoreError;
pub use scalar::Scalar;
