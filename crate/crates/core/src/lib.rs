//! Best Möbius approximations of locally univalent maps of the unit disk:
//! pole functions, Pommerenke orders, localization bounds, polygon pole
//! counting and Schwarzian convexity criteria.

pub mod blaschke;
pub mod bma;
pub mod bounds;
pub mod dsl;
pub mod jet;
pub mod model;
pub mod moebius;
pub mod orders;
pub mod poly;
pub mod polygon;
pub mod sampling;
pub mod schwarzian;
pub mod search;

pub use jet::{Jet3, JetError, C64};

/// Serializes a complex number as `[re, im]`.
pub fn serialize_complex<S: serde::Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    [z.re, z.im].serialize(s)
}
