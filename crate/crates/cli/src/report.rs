//! Versioned machine-readable report.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    /// SHA-256 over the command parameters and the input documents.
    pub inputs_digest: String,
    pub verdicts: Vec<Value>,
}

impl Report {
    pub fn new(command: &str, inputs_digest: String, verdicts: Vec<Value>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs_digest,
            verdicts,
        }
    }
}

/// Hex SHA-256 of length-prefixed parts, so part boundaries matter.
pub fn digest<I, P>(parts: I) -> String
where
    I: IntoIterator<Item = P>,
    P: AsRef<[u8]>,
{
    let mut h = Sha256::new();
    for p in parts {
        let p = p.as_ref();
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_respects_boundaries() {
        assert_ne!(digest(["ab", "c"]), digest(["a", "bc"]));
        assert_eq!(digest(["x"]), digest(["x"]));
        assert_eq!(digest(["x"]).len(), 64);
    }
}
