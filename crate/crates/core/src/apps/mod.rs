//! Application drivers built on the quantum QR pipeline.

pub mod eigen;
pub mod fit;
pub mod laplace;
pub mod linsys;
pub mod spin;
