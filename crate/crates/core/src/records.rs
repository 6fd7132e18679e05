//! Line-delimited record IO and content digests.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CoreError;

/// Version stamped on every record and manifest this tool writes.
pub const SCHEMA_VERSION: u32 = 1;

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<(), CoreError> {
    let display = path.display().to_string();
    let mut file = std::fs::File::create(path).map_err(|e| CoreError::io(&display, e))?;
    for item in items {
        let line = serde_json::to_string(item).map_err(|e| CoreError::MalformedRecord {
            path: display.clone(),
            line: 0,
            source: e,
        })?;
        writeln!(file, "{line}").map_err(|e| CoreError::io(&display, e))?;
    }
    Ok(())
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, CoreError> {
    let display = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| CoreError::io(&display, e))?;
    let reader = BufReader::new(file);
    let mut items = Vec::new();
    for (number, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| CoreError::io(&display, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line).map_err(|e| CoreError::MalformedRecord {
            path: display.clone(),
            line: number + 1,
            source: e,
        })?;
        items.push(item);
    }
    Ok(items)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> Result<String, CoreError> {
    let bytes = std::fs::read(path).map_err(|e| CoreError::io(path.display().to_string(), e))?;
    Ok(sha256_hex(&bytes))
}
