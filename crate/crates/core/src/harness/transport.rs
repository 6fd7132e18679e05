//! Transports: live chat-completion HTTP and deterministic replay.

use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::harness::cache::ExchangeKey;
use crate::harness::template::DialectSpec;

/// One failed attempt; the retry loop in `query` decides what to do with it.
#[derive(Debug, Clone)]
pub struct AttemptFailure {
    pub message: String,
    pub status: Option<u16>,
    pub retryable: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub initial_backoff_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 3,
            initial_backoff_ms: 500,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelConfig {
    pub model_name: String,
    pub endpoint: String,
    pub temperature: f64,
    pub max_output_tokens: u32,
    /// Name of the environment variable holding the credential. The secret
    /// itself is never stored or serialized.
    pub api_key_env: String,
    pub timeout_secs: u64,
    pub retry: RetryPolicy,
    #[serde(default)]
    pub dialect: DialectSpec,
}

impl ModelConfig {
    pub fn validate(&self) -> Result<(), CoreError> {
        if self.timeout_secs == 0 {
            return Err(CoreError::InvalidConfig("timeout_secs must be > 0".into()));
        }
        if self.retry.max_attempts == 0 {
            return Err(CoreError::InvalidConfig("retry.max_attempts must be >= 1".into()));
        }
        Ok(())
    }

    /// Built-in configurations for the three evaluated model families.
    pub fn preset(name: &str) -> Option<ModelConfig> {
        let base = ModelConfig {
            model_name: String::new(),
            endpoint: String::new(),
            temperature: 0.0,
            max_output_tokens: 2048,
            api_key_env: "NORMBENCH_API_KEY".into(),
            timeout_secs: 120,
            retry: RetryPolicy::default(),
            dialect: DialectSpec::default(),
        };
        match name {
            "chatgpt-4" => Some(ModelConfig {
                model_name: "gpt-4".into(),
                endpoint: "https://api.openai.com/v1/chat/completions".into(),
                api_key_env: "OPENAI_API_KEY".into(),
                ..base
            }),
            "llama-2" => Some(ModelConfig {
                model_name: "Llama-2-7b-chat-hf".into(),
                endpoint: "http://localhost:8000/v1/chat/completions".into(),
                dialect: DialectSpec {
                    prefix: "<s>[INST] <<SYS>>\nYou are a helpful assistant.\n<</SYS>>\n\n".into(),
                    suffix: " [/INST]".into(),
                },
                ..base
            }),
            "mixtral" => Some(ModelConfig {
                model_name: "Mixtral-8x7B-Instruct-v0.1".into(),
                endpoint: "http://localhost:8000/v1/chat/completions".into(),
                dialect: DialectSpec {
                    prefix: "<s>[INST] ".into(),
                    suffix: " [/INST]".into(),
                },
                ..base
            }),
            _ => None,
        }
    }

    pub fn preset_names() -> [&'static str; 3] {
        ["chatgpt-4", "llama-2", "mixtral"]
    }
}

/// A way to obtain a raw model response for a prompt. `send` is one
/// attempt; retries live in `query`.
pub trait Transport: Send + Sync {
    fn send(
        &self,
        config: &ModelConfig,
        key: &ExchangeKey,
        prompt: &str,
    ) -> Result<String, AttemptFailure>;

    /// Checked once per query, before any attempt; e.g. credential lookup.
    fn preflight(&self, _config: &ModelConfig) -> Result<(), CoreError> {
        Ok(())
    }

    fn name(&self) -> &'static str;
}

/// Live HTTP chat-completion transport (OpenAI-style request body).
pub struct LiveTransport {
    client: reqwest::blocking::Client,
}

impl LiveTransport {
    pub fn new() -> Self {
        LiveTransport {
            client: reqwest::blocking::Client::new(),
        }
    }
}

impl Default for LiveTransport {
    fn default() -> Self {
        Self::new()
    }
}

impl Transport for LiveTransport {
    fn preflight(&self, config: &ModelConfig) -> Result<(), CoreError> {
        if std::env::var(&config.api_key_env).is_err() {
            return Err(CoreError::MissingCredential(config.api_key_env.clone()));
        }
        Ok(())
    }

    fn send(
        &self,
        config: &ModelConfig,
        _key: &ExchangeKey,
        prompt: &str,
    ) -> Result<String, AttemptFailure> {
        let api_key = std::env::var(&config.api_key_env).map_err(|_| AttemptFailure {
            message: format!("credential env var {} unset", config.api_key_env),
            status: None,
            retryable: false,
        })?;
        let body = serde_json::json!({
            "model": config.model_name,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": config.temperature,
            "max_tokens": config.max_output_tokens,
        });
        let response = self
            .client
            .post(&config.endpoint)
            .bearer_auth(api_key)
            .timeout(Duration::from_secs(config.timeout_secs))
            .json(&body)
            .send()
            .map_err(|e| AttemptFailure {
                message: e.to_string(),
                status: None,
                retryable: true,
            })?;
        let status = response.status();
        if !status.is_success() {
            return Err(AttemptFailure {
                message: format!("HTTP {status}"),
                status: Some(status.as_u16()),
                retryable: status.is_server_error() || status.as_u16() == 429,
            });
        }
        let value: serde_json::Value = response.json().map_err(|e| AttemptFailure {
            message: format!("response body is not JSON: {e}"),
            status: Some(status.as_u16()),
            retryable: false,
        })?;
        value["choices"][0]["message"]["content"]
            .as_str()
            .map(|s| s.to_string())
            .ok_or_else(|| AttemptFailure {
                message: "response JSON lacks choices[0].message.content".into(),
                status: Some(status.as_u16()),
                retryable: false,
            })
    }

    fn name(&self) -> &'static str {
        "live"
    }
}

/// Replays canned responses from a directory of `{story_id}.txt` files.
pub struct ReplayTransport {
    dir: PathBuf,
}

impl ReplayTransport {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        ReplayTransport { dir: dir.into() }
    }
}

impl Transport for ReplayTransport {
    fn send(
        &self,
        _config: &ModelConfig,
        key: &ExchangeKey,
        _prompt: &str,
    ) -> Result<String, AttemptFailure> {
        let path = self.dir.join(format!("{}.txt", key.story_id));
        std::fs::read_to_string(&path).map_err(|e| AttemptFailure {
            message: format!("no canned response at {}: {e}", path.display()),
            status: None,
            retryable: false,
        })
    }

    fn name(&self) -> &'static str {
        "replay"
    }
}

/// Wraps any transport and counts `send` invocations.
pub struct CountingTransport<'a> {
    inner: &'a dyn Transport,
    calls: AtomicU64,
}

impl<'a> CountingTransport<'a> {
    pub fn new(inner: &'a dyn Transport) -> Self {
        CountingTransport {
            inner,
            calls: AtomicU64::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

impl Transport for CountingTransport<'_> {
    fn preflight(&self, config: &ModelConfig) -> Result<(), CoreError> {
        self.inner.preflight(config)
    }

    fn send(
        &self,
        config: &ModelConfig,
        key: &ExchangeKey,
        prompt: &str,
    ) -> Result<String, AttemptFailure> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.inner.send(config, key, prompt)
    }

    fn name(&self) -> &'static str {
        self.inner.name()
    }
}
