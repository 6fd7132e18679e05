//! Prompt templating.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::norms::NormSpec;
use crate::records::sha256_hex;
use crate::story::Story;

/// Embedded copy of `config/prompt_template.txt`, the default prompt.
pub const DEFAULT_TEMPLATE_TEXT: &str = include_str!("../../../../config/prompt_template.txt");

/// Model-specific wrapper tags around the rendered prompt body. Data, not
/// code: chat conventions differ per model family and change often.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DialectSpec {
    #[serde(default)]
    pub prefix: String,
    #[serde(default)]
    pub suffix: String,
}

#[derive(Debug, Clone)]
pub struct PromptTemplate {
    pub text: String,
    pub dialect: DialectSpec,
}

impl PromptTemplate {
    pub fn new(text: impl Into<String>, dialect: DialectSpec) -> Result<Self, CoreError> {
        let text = text.into();
        for placeholder in ["{norms}", "{story}"] {
            match text.matches(placeholder).count() {
                1 => {}
                n => {
                    return Err(CoreError::InvalidTemplate(format!(
                        "placeholder {placeholder} must appear exactly once, found {n}"
                    )))
                }
            }
        }
        Ok(PromptTemplate { text, dialect })
    }

    pub fn default_template() -> PromptTemplate {
        PromptTemplate::new(DEFAULT_TEMPLATE_TEXT, DialectSpec::default())
            .expect("built-in template is valid")
    }

    pub fn load(path: &Path, dialect: DialectSpec) -> Result<Self, CoreError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CoreError::io(path.display().to_string(), e))?;
        PromptTemplate::new(text, dialect)
    }

    /// Digest over template text and dialect tags; part of the cache key.
    pub fn digest(&self) -> String {
        let mut bytes = Vec::new();
        bytes.extend_from_slice(self.dialect.prefix.as_bytes());
        bytes.push(0);
        bytes.extend_from_slice(self.text.as_bytes());
        bytes.push(0);
        bytes.extend_from_slice(self.dialect.suffix.as_bytes());
        sha256_hex(&bytes)
    }

    pub fn render(&self, norms: &[NormSpec], story: &Story) -> Result<String, CoreError> {
        render_prompt(self, norms, story)
    }
}

/// Substitutes the norm list and story into the template. Norms render as
/// `<id> - <text>` lines; the story renders one event sentence per line,
/// exactly as generated. Byte-stable for fixed inputs.
pub fn render_prompt(
    template: &PromptTemplate,
    norms: &[NormSpec],
    story: &Story,
) -> Result<String, CoreError> {
    if norms.is_empty() {
        return Err(CoreError::InvalidTemplate("norm list is empty".into()));
    }
    let norm_lines: Vec<String> = norms.iter().map(|n| format!("{} - {}", n.id, n.text)).collect();
    let story_lines: Vec<&str> = story.events.iter().map(|e| e.text.as_str()).collect();
    let body = template
        .text
        .replacen("{norms}", &norm_lines.join("\n"), 1)
        .replacen("{story}", &story_lines.join("\n"), 1);
    Ok(format!("{}{}{}", template.dialect.prefix, body, template.dialect.suffix))
}
