//! Exact computations with small nilpotent rings over `Z_p`: structure
//! constant algebras, their zero-divisor graphs, polynomial identities and a
//! catalog of rings in `var⟨xyz = 0, x² = 0, 2x = 0⟩`.

pub mod algebra;
pub mod catalog;
pub mod constructions;
pub mod error;
pub mod fp;
pub mod hash;
pub mod identities;
pub mod ring;
pub mod verify;
pub mod zdg;

pub use algebra::{AlgebraJson, Element, Projection, Quotient, ScAlgebra};
pub use error::{Error, Result};
pub use fp::{FpMatrix, FpVector, PrimeField, Subspace};
pub use ring::{FiniteRing, RingTable};
pub use zdg::{BlowupGraph, ZdGraph};
