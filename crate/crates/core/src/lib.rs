//! Complex quasiprobability representations of finite quantum and classical
//! systems: frames and dual frames, Kirkwood–Dirac distributions, the
//! `χ`/`φ` factorization of a representation, and the complexification
//! functor underneath it.

pub mod channel;
pub mod cli;
pub mod complexify;
pub mod error;
pub mod frames;
pub mod gpt;
pub mod kd;
pub mod linalg;
pub mod random;
pub mod structure;

pub use channel::Channel;
pub use error::{Error, Result};
pub use frames::{DualPair, Frame};
pub use gpt::{GptSystem, SystemKind};
pub use kd::KdBases;
pub use linalg::{CMat, CVec, RMat, RVec, Tolerance, C64};
pub use structure::{AuditReport, ChiPhi, Representation};
