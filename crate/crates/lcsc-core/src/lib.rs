//! Left cancellative small categories and the structures built from them:
//! zigzag maps and their inverse semigroup, the ring of zigzag sets, the
//! spectrum and boundary, the germ groupoids, amalgamations, fraction
//! groupoids, and finite operator models.
#![no_std]

extern crate alloc;

pub mod alignment;
pub mod amalgam;
pub mod category;
pub mod fixtures;
pub mod germ;
pub mod operator;
pub mod ore;
pub mod setring;
pub mod spectrum;
pub mod wiener_hopf;
pub mod zigzag;

pub use category::{CategoryBuilder, Mor, Obj, SmallCategory, Totality};
pub use zigzag::{InverseSemigroup, PartialMap, Zigzag};
