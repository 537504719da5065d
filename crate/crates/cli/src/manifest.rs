use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Record of one invocation, embedded in every output it produces.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub input_hashes: BTreeMap<String, String>,
    pub tool_version: String,
    pub outcome: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: impl Serialize) -> RunManifest {
        RunManifest {
            command: command.to_string(),
            parameters: serde_json::to_value(parameters).unwrap_or(Value::Null),
            input_hashes: BTreeMap::new(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outcome: String::new(),
        }
    }

    pub fn input(&mut self, name: &str, bytes: &[u8]) {
        self.input_hashes.insert(name.to_string(), sha256_hex(bytes));
    }

    /// Hash over the manifest's own fields; object keys serialize sorted.
    pub fn hash(&self) -> String {
        sha256_hex(serde_json::to_string(self).expect("manifest serializes").as_bytes())
    }

    pub fn to_value(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("manifest serializes");
        v["hash"] = json!(self.hash());
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable_and_sensitive() {
        let mut m = RunManifest::new("mr", json!({"a": 2, "b": 4}));
        m.outcome = "ok".into();
        let h = m.hash();
        assert_eq!(h, m.clone().hash());
        assert_eq!(h.len(), 64);
        m.outcome = "other".into();
        assert_ne!(h, m.hash());
        assert_eq!(m.to_value()["hash"], json!(m.hash()));
    }

    #[test]
    fn known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
