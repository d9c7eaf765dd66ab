//! Exact symbolic computation of classical finite and affine W-algebras.
//!
//! Start from a [`GradedSetup`] (a Lie algebra with an invariant form and an
//! sl2-triple), then use [`finite`] for the Slodowy slice Poisson algebra,
//! [`WAlgebra`] for generators and λ-brackets, [`zhu`] for the Zhu algebras
//! and [`miura`] for the generalized Miura map. [`verify`] runs every
//! cross-check on one setup.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod export;
pub mod finite;
pub mod lambda;
pub mod lie;
pub mod linalg;
pub mod miura;
pub mod poly;
pub mod pva;
pub mod rational;
pub mod report;
pub mod setup;
pub mod spec;
pub mod verify;
pub mod walg;
pub mod zhu;

pub use error::{Error, Result};
pub use lambda::{LambdaPoly, ZPoly};
pub use lie::{build_sl, sl2_triple_from_partition, LieAlgebra, Sl2Triple};
pub use poly::{DiffPoly, Monomial, Var, WeightClass};
pub use pva::GenTable;
pub use rational::{Vector, Q};
pub use report::{Check, Report};
pub use setup::{graded_setup, validate_setup, GradedSetup, Projection};
pub use spec::{parse_spec, AlgebraSpec};
pub use walg::{Route, Twist, WAlgebra, WGenerator};
pub use zhu::ZhuRoute;
