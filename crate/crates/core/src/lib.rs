//! Exact classification of three-qubit X-shaped states against the lattice
//! of separability cones built from the partial-product cones.

#![allow(clippy::needless_range_loop, clippy::large_enum_variant)]

/// Serialize through `Display` and deserialize through `FromStr`.
macro_rules! string_serde {
    ($t:ty) => {
        impl serde::Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }
        impl<'de> serde::Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

pub mod arith;
pub mod cones;
pub mod error;
pub mod fixtures;
pub mod ghzpoly;
pub mod ineq;
pub mod io;
pub mod report;
pub mod sampling;
pub mod suites;
pub mod witness;
pub mod xcore;

pub use arith::{Real, Scalar, Surd, CQ, Q};
pub use error::{Error, Result};
