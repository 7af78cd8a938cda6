//! JSON helpers. Complex numbers are always written as `{"re": .., "im": ..}`.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexJson {
    fn from(z: C64) -> Self {
        ComplexJson { re: z.re, im: z.im }
    }
}

impl From<ComplexJson> for C64 {
    fn from(z: ComplexJson) -> Self {
        C64::new(z.re, z.im)
    }
}

pub mod complex {
    use super::*;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson::from(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<C64, D::Error> {
        ComplexJson::deserialize(d).map(Into::into)
    }
}

pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|z| ComplexJson::from(*z)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<C64>, D::Error> {
        Vec::<ComplexJson>::deserialize(d).map(|v| v.into_iter().map(Into::into).collect())
    }
}

pub mod complex_vec_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<C64>], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(
            v.iter()
                .map(|row| row.iter().map(|z| ComplexJson::from(*z)).collect::<Vec<_>>()),
        )
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<C64>>, D::Error> {
        Vec::<Vec<ComplexJson>>::deserialize(d)
            .map(|v| v.into_iter().map(|row| row.into_iter().map(Into::into).collect()).collect())
    }
}

/// Parses JSON, mapping serde failures to a schema error carrying the path
/// of the offending field (`.` when the failure is at the top level).
pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Schema { path, message: e.into_inner().to_string() }
    })
}

pub fn to_string_pretty<T: Serialize>(value: &T) -> String {
    // Only types with string keys and finite floats reach this.
    serde_json::to_string_pretty(value).expect("serializable value")
}
