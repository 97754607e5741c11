//! Exact rational engine for L∞-algebras, higher derived brackets, homotopy
//! Rota-Baxter operators, shifted Poisson doubles and r∞-matrices.

pub mod exec;
pub mod graded;
pub mod multibracket;
pub mod poly;
pub mod scalar;
pub mod vector;
pub mod vector_field;
pub mod check;
pub mod linfty;
pub mod examples;
pub mod derived;
pub mod lie;
pub mod rota_baxter;
pub mod poisson;
pub mod bridge;
pub mod io;
