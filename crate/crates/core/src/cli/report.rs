use std::collections::BTreeMap;

use serde::Serialize;

/// Version of the JSON report layout; bumped on any field rename or removal.
pub const SCHEMA_VERSION: u32 = 1;

/// One command run: echoed canonical inputs plus a command-specific result.
///
/// Nothing time- or environment-dependent goes in here, so the same argv and
/// seed always serialize to the same bytes.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport<T: Serialize> {
    pub schema_version: u32,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: BTreeMap<&'static str, String>,
    pub seed: u64,
    pub result: T,
}

impl<T: Serialize> RunReport<T> {
    pub fn new(
        command: &'static str,
        inputs: BTreeMap<&'static str, String>,
        seed: u64,
        result: T,
    ) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs,
            seed,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report types serialize");
        s.push('\n');
        s
    }
}
