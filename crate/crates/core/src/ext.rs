//! Extended naturals and resource levels.

use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A value in `{0, 1, 2, ...} ∪ {∞}`.
///
/// Variant order gives the total order with `Inf` as the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

impl ExtNat {
    pub const ZERO: ExtNat = ExtNat::Fin(0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Fin(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(v) => Some(v),
            ExtNat::Inf => None,
        }
    }

    /// Saturating at infinity, checked on finite overflow.
    pub fn checked_add(self, rhs: ExtNat) -> Result<ExtNat> {
        match (self, rhs) {
            (ExtNat::Fin(a), ExtNat::Fin(b)) => a.checked_add(b).map(ExtNat::Fin).ok_or(Error::Overflow),
            _ => Ok(ExtNat::Inf),
        }
    }

    pub fn add_u64(self, rhs: u64) -> Result<ExtNat> {
        self.checked_add(ExtNat::Fin(rhs))
    }

    /// `true` if the value is finite and at most `bound`.
    pub fn le_u64(self, bound: u64) -> bool {
        matches!(self, ExtNat::Fin(v) if v <= bound)
    }
}

impl From<u64> for ExtNat {
    fn from(v: u64) -> Self {
        ExtNat::Fin(v)
    }
}

impl PartialEq<u64> for ExtNat {
    fn eq(&self, other: &u64) -> bool {
        *self == ExtNat::Fin(*other)
    }
}

impl PartialOrd<u64> for ExtNat {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        Some(self.cmp(&ExtNat::Fin(*other)))
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(v) => write!(f, "{v}"),
            ExtNat::Inf => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtNat::Fin(v) => serializer.serialize_u64(*v),
            ExtNat::Inf => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExtNatVisitor;

        impl Visitor<'_> for ExtNatVisitor {
            type Value = ExtNat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative integer or \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtNat, E> {
                Ok(ExtNat::Fin(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtNat, E> {
                u64::try_from(v).map(ExtNat::Fin).map_err(|_| E::invalid_value(de::Unexpected::Signed(v), &self))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtNat, E> {
                if v == "inf" {
                    Ok(ExtNat::Inf)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(ExtNatVisitor)
    }
}

/// Resource level carried along a history: exhausted (`⊥`) or a value in `[0, cap]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Exhausted,
    Units(u64),
}

impl Level {
    pub fn is_exhausted(self) -> bool {
        matches!(self, Level::Exhausted)
    }

    pub fn units(self) -> Option<u64> {
        match self {
            Level::Units(v) => Some(v),
            Level::Exhausted => None,
        }
    }
}

// ⊥ sits below every number.
impl PartialOrd for Level {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Level {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Level::Exhausted, Level::Exhausted) => Ordering::Equal,
            (Level::Exhausted, _) => Ordering::Less,
            (_, Level::Exhausted) => Ordering::Greater,
            (Level::Units(a), Level::Units(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Exhausted => f.write_str("⊥"),
            Level::Units(v) => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_addition() {
        assert_eq!(ExtNat::Inf.add_u64(3).unwrap(), ExtNat::Inf);
        assert_eq!(ExtNat::Fin(3).checked_add(ExtNat::Inf).unwrap(), ExtNat::Inf);
        assert_eq!(ExtNat::Fin(3).add_u64(4).unwrap(), ExtNat::Fin(7));
    }

    #[test]
    fn finite_overflow_is_signalled() {
        assert!(matches!(ExtNat::Fin(u64::MAX).add_u64(1), Err(Error::Overflow)));
    }

    #[test]
    fn infinity_is_the_maximum() {
        assert!(ExtNat::Fin(u64::MAX) < ExtNat::Inf);
        assert!(ExtNat::Fin(2) < ExtNat::Fin(3));
        assert!(ExtNat::Inf > 7u64);
    }

    #[test]
    fn json_uses_inf_string() {
        let v = vec![ExtNat::Fin(2), ExtNat::Inf];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[2,"inf"]"#);
        let back: Vec<ExtNat> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<ExtNat>(r#""infinity""#).is_err());
        assert!(serde_json::from_str::<ExtNat>("-1").is_err());
    }

    #[test]
    fn exhausted_below_every_level() {
        assert!(Level::Exhausted < Level::Units(0));
        assert!(Level::Units(1) < Level::Units(2));
    }
}
