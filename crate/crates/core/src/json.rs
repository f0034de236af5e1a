//! JSON parsing that reports the pointer of the offending field.

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        use serde_path_to_error::Segment::*;
        out.push('/');
        match seg {
            Seq { index } => out.push_str(&index.to_string()),
            Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Enum { variant } => out.push_str(variant),
            Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

/// Deserialize from text.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
        pointer: pointer_of(e.path()),
        message: e.inner().to_string(),
    })
}

/// Deserialize from an already parsed value.
pub fn from_value<T: DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| Error::Parse {
        pointer: pointer_of(e.path()),
        message: e.inner().to_string(),
    })
}
