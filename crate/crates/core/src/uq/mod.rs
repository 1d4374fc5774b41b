//! The quantum loop algebra `U_q(g[u])`, its classical counterpart and
//! the checks relating them.

pub mod algebra;
pub mod hopf;
pub mod limit;
pub mod presentation;
pub mod qscalar;
pub mod rewrite;

pub use algebra::{Gen, NcPoly};
pub use presentation::{Mode, Presentation};
pub use qscalar::QScalar;
