//! Exchange cache: raw prompt/response pairs persisted for exact replay.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, TransportError};
use crate::harness::transport::{ModelConfig, Transport};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExchangeKey {
    pub story_id: String,
    pub model_name: String,
    pub template_digest: String,
}

impl ExchangeKey {
    fn sanitize(part: &str) -> String {
        part.chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect()
    }

    pub fn file_name(&self) -> String {
        let digest8 = &self.template_digest[..self.template_digest.len().min(8)];
        format!(
            "{}__{}__{}.json",
            Self::sanitize(&self.model_name),
            Self::sanitize(&self.story_id),
            digest8
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exchange {
    pub key: ExchangeKey,
    pub prompt: String,
    /// Stored verbatim, exactly as the transport returned it.
    pub raw_response: String,
    pub unix_time_secs: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub usage: Option<serde_json::Value>,
}

/// Directory-backed cache, one JSON file per key. Files are written via a
/// temp file and rename, so readers never see partial exchanges.
pub struct ExchangeCache {
    dir: PathBuf,
}

impl ExchangeCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, CoreError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| CoreError::io(dir.display().to_string(), e))?;
        Ok(ExchangeCache { dir })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn get(&self, key: &ExchangeKey) -> Result<Option<Exchange>, CoreError> {
        let path = self.dir.join(key.file_name());
        if !path.exists() {
            return Ok(None);
        }
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CoreError::io(path.display().to_string(), e))?;
        let exchange = serde_json::from_str(&text).map_err(|e| CoreError::MalformedRecord {
            path: path.display().to_string(),
            line: 0,
            source: e,
        })?;
        Ok(Some(exchange))
    }

    pub fn put(&self, exchange: &Exchange) -> Result<(), CoreError> {
        let path = self.dir.join(exchange.key.file_name());
        let tmp = path.with_extension("json.tmp");
        let text = serde_json::to_string_pretty(exchange).expect("exchange serializes");
        std::fs::write(&tmp, text).map_err(|e| CoreError::io(tmp.display().to_string(), e))?;
        std::fs::rename(&tmp, &path).map_err(|e| CoreError::io(path.display().to_string(), e))?;
        Ok(())
    }
}

/// Returns the cached exchange on a key hit without touching the transport;
/// otherwise runs the request under the retry policy and persists the
/// exchange before returning. Failures leave the cache unmodified.
pub fn query(
    config: &ModelConfig,
    key: &ExchangeKey,
    prompt: &str,
    cache: &ExchangeCache,
    transport: &dyn Transport,
) -> Result<Exchange, CoreError> {
    if let Some(exchange) = cache.get(key)? {
        return Ok(exchange);
    }
    transport.preflight(config)?;
    let mut backoff = config.retry.initial_backoff_ms;
    let mut attempts = 0;
    let mut last_failure = None;
    while attempts < config.retry.max_attempts {
        attempts += 1;
        match transport.send(config, key, prompt) {
            Ok(raw_response) => {
                let exchange = Exchange {
                    key: key.clone(),
                    prompt: prompt.to_string(),
                    raw_response,
                    unix_time_secs: SystemTime::now()
                        .duration_since(UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or(0),
                    usage: None,
                };
                cache.put(&exchange)?;
                return Ok(exchange);
            }
            Err(failure) => {
                let retryable = failure.retryable;
                last_failure = Some(failure);
                if !retryable || attempts == config.retry.max_attempts {
                    break;
                }
                std::thread::sleep(std::time::Duration::from_millis(backoff));
                backoff = backoff.saturating_mul(2);
            }
        }
    }
    let failure = last_failure.expect("at least one attempt ran");
    Err(CoreError::Transport(TransportError {
        attempts,
        message: failure.message,
        status: failure.status,
    }))
}
