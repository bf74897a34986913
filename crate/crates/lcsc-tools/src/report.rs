//! Report envelope shared by all commands.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "lcsc";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit codes: 0 pass, 1 checked and failed, 2 usage or parse error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputInfo {
    /// File path or fixture name.
    pub source: String,
    pub sha256: String,
}

impl InputInfo {
    pub fn new(source: impl Into<String>, bytes: &[u8]) -> Self {
        InputInfo {
            source: source.into(),
            sha256: sha256_hex(bytes),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input: InputInfo,
    pub status: Status,
    pub result: Value,
}

impl Report {
    pub fn new(command: &str, input: InputInfo, status: Status, result: Value) -> Self {
        Report {
            tool: TOOL,
            version: VERSION,
            command: command.into(),
            input,
            status,
            result,
        }
    }

    pub fn error(command: &str, input: InputInfo, module: &str, message: impl Into<String>) -> Self {
        let result = serde_json::json!({ "error": { "module": module, "message": message.into() } });
        Report::new(command, input, Status::Error, result)
    }

    pub fn code(&self) -> i32 {
        self.status.code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_hex() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
