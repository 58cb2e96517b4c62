//! Kite pseudo effect algebras over partially ordered groups.

pub mod axioms;
pub mod cli;
pub mod error;
pub mod ideals;
pub mod kite;
pub mod perm;
pub mod repr;
pub mod riesz;
pub mod pogroup;
pub mod verdict;

pub use axioms::{Budget, Pea, PseudoMv};
pub use error::{Error, Result};
pub use kite::{Kite, KiteElement, KiteMv, KiteShape, Tag};
pub use perm::Perm;
pub use repr::{IntervalPea, MapSpec};
pub use riesz::{ConeCtx, PeaCtx, RdpLevel, Refinable, RefinementTable};
pub use pogroup::{Elem, GroupDescriptor, PoGroup};
pub use verdict::{Status, Verdict, Witness};
