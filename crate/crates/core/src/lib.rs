//! Symbolic-numeric verification of Ricci-soliton equations on coordinate
//! pseudo-Riemannian metrics.
//!
//! - [`expr`]: expression language, parser, symbolic differentiation, evaluation.
//! - [`geometry`]: metrics, pointwise connection and curvature, Lie derivatives.
//! - [`soliton`]: soliton residuals and gradient-potential diagnostics.
//! - [`families`]: Egorov, Cahen–Wallach and ε-space metrics with their soliton fields.
//! - [`cli`]: scenario files, sampling, batch verification and reports.

pub mod cli;
pub mod expr;
pub mod families;
pub mod geometry;
pub mod soliton;
