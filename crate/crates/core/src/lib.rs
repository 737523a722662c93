//! Exact factorizations `X = G⟨c⟩` of a dihedral or generalized quaternion
//! group `G` by a core-free cyclic group: table arithmetic, coset
//! enumeration, the parametric families, a brute-force oracle and the
//! structural classifier.

pub mod census;
pub mod classify;
pub mod coset;
pub mod error;
pub mod families;
pub mod group;
pub mod iso;
pub mod marked;
pub mod modarith;
pub mod oracle;

pub use error::{CosetError, GroupError};
pub use group::{Elem, GroupTable, SmallTag, SubgroupSet};
