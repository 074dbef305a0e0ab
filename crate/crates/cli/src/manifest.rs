use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

/// Compact JSON with object keys sorted; independent of input whitespace and key order.
pub fn canonical_json(value: &Value) -> String {
    // serde_json's default map is ordered by key.
    serde_json::to_string(value).expect("JSON values always serialize")
}

pub fn digest(value: &Value) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(canonical_json(value).as_bytes())))
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

pub struct Manifest {
    pub command: &'static str,
    pub config: Value,
    pub seed: Option<u64>,
    pub metrics: Map<String, Value>,
    pub outputs: Vec<String>,
    pub extra: Map<String, Value>,
}

impl Manifest {
    pub fn new(command: &'static str, config: Value) -> Self {
        Manifest {
            command,
            config,
            seed: None,
            metrics: Map::new(),
            outputs: Vec::new(),
            extra: Map::new(),
        }
    }

    pub fn metric(&mut self, key: &str, value: impl Into<Value>) {
        self.metrics.insert(key.to_owned(), value.into());
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config_digest": digest(&self.config),
            "seed": self.seed,
            "metrics": self.metrics,
            "outputs": self.outputs,
        });
        let obj = v.as_object_mut().expect("manifest is an object");
        for (k, val) in &self.extra {
            obj.insert(k.clone(), val.clone());
        }
        v
    }
}
