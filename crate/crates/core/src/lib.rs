//! Invariant Drinfeld twists on group algebras and the second lazy cohomology
//! of finite groups, computed with exact cyclotomic arithmetic.

pub mod cyclo;
pub mod error;
pub mod fixtures;
pub mod groups;
pub mod hopf;
pub mod lazy;
pub mod pontryagin;

pub use cyclo::{CycNum, Root};
pub use error::{Error, Result};
pub use groups::{AbelianStructure, FiniteGroup, GroupMap, Subgroup};
