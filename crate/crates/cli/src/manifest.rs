use serde::Serialize;
use sha2::{Digest, Sha256};

/// Provenance record for one invocation. The digest covers stdout only, so
/// it depends on the inputs and not on timing or thread count.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    pub wall_time_secs: f64,
    pub output_sha256: String,
}

impl RunManifest {
    pub fn new(
        command: &str,
        parameters: serde_json::Value,
        seed: Option<u64>,
        wall_time_secs: f64,
        output: &[u8],
    ) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_secs,
            output_sha256: hex::encode(Sha256::digest(output)),
        }
    }
}
