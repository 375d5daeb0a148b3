//! Exact counting scalars.
//!
//! Every count in this crate is a nonnegative integer. The engine and the
//! analysis routines are generic over the integer type so that small runs can
//! use machine words while the default stays unbounded. Fixed-width types
//! report overflow through `checked_*` instead of wrapping.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, Unsigned};

/// An exact nonnegative integer usable as a path count.
pub trait Count:
    Integer
    + Unsigned
    + CheckedAdd
    + CheckedMul
    + FromPrimitive
    + Clone
    + Hash
    + Debug
    + Display
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Returns `self / 2` if `self` is even, `None` otherwise.
    fn halve_exact(&self) -> Option<Self> {
        let two = Self::one() + Self::one();
        let (q, r) = self.div_rem(&two);
        r.is_zero().then_some(q)
    }

    fn from_u64_exact(v: u64) -> Option<Self> {
        <Self as FromPrimitive>::from_u64(v)
    }
}

impl<T> Count for T where
    T: Integer
        + Unsigned
        + CheckedAdd
        + CheckedMul
        + FromPrimitive
        + Clone
        + Hash
        + Debug
        + Display
        + FromStr
        + Send
        + Sync
        + 'static
{
}

/// Serde adapter that writes counts as decimal strings.
///
/// JSON numbers lose precision past 2^53 in most consumers, so counts never
/// travel as native numbers.
pub mod decimal {
    use super::Count;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<C: Count, S: Serializer>(v: &C, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, C: Count, D: Deserializer<'de>>(d: D) -> Result<C, D::Error> {
        let text = String::deserialize(d)?;
        text.parse::<C>()
            .map_err(|_| de::Error::custom(format!("invalid decimal count {text:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn halving() {
        assert_eq!(10u64.halve_exact(), Some(5));
        assert_eq!(7u64.halve_exact(), None);
        assert_eq!(0u128.halve_exact(), Some(0));
        let big: BigUint = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(
            big.halve_exact().unwrap().to_string(),
            "61728394506172839450617283945"
        );
    }
}
