//! Optional text-generation behavior.
//!
//! The scripted behavior decides what to do; a [`TextGenerator`] only
//! rewrites the wording of outgoing dialogue. Never used by the benchmark
//! suite.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{AgentBehavior, DecisionInput, ScriptedBehavior};
use crate::rng::keyed_hash;
use crate::scenarios::Action;

#[derive(Debug, Error)]
pub enum TextGenError {
    #[error("text generator is not configured: {0}")]
    NotConfigured(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("malformed response: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextRequest {
    pub system: String,
    pub context: Vec<String>,
    pub prompt: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextResponse {
    pub text: String,
}

pub trait TextGenerator {
    fn generate(&mut self, req: &TextRequest) -> Result<TextResponse, TextGenError>;
}

/// Deterministic stand-in: echoes the prompt with a short digest of the
/// request so recall keys and lexicon placeholders survive.
#[derive(Debug, Clone, Default)]
pub struct MockTextGenerator {
    pub calls: u64,
}

impl TextGenerator for MockTextGenerator {
    fn generate(&mut self, req: &TextRequest) -> Result<TextResponse, TextGenError> {
        self.calls += 1;
        let mut parts: Vec<&str> = vec![&req.system];
        parts.extend(req.context.iter().map(String::as_str));
        parts.push(&req.prompt);
        let h = keyed_hash(&parts, 0);
        Ok(TextResponse { text: format!("{} #{:04x}", req.prompt, h & 0xffff) })
    }
}

/// Generator backed by an HTTP endpoint taking a JSON [`TextRequest`] and
/// returning a JSON [`TextResponse`].
#[cfg(feature = "http-adapter")]
pub struct HttpTextGenerator {
    url: String,
    token: Option<String>,
    client: reqwest::blocking::Client,
}

#[cfg(feature = "http-adapter")]
impl HttpTextGenerator {
    pub const URL_VAR: &'static str = "MARSOPS_TEXTGEN_URL";
    pub const TOKEN_VAR: &'static str = "MARSOPS_TEXTGEN_TOKEN";

    pub fn from_env() -> Result<Self, TextGenError> {
        let url = std::env::var(Self::URL_VAR).map_err(|_| TextGenError::NotConfigured(Self::URL_VAR.into()))?;
        Ok(HttpTextGenerator { url, token: std::env::var(Self::TOKEN_VAR).ok(), client: reqwest::blocking::Client::new() })
    }
}

#[cfg(feature = "http-adapter")]
impl TextGenerator for HttpTextGenerator {
    fn generate(&mut self, req: &TextRequest) -> Result<TextResponse, TextGenError> {
        let mut call = self.client.post(&self.url).json(req);
        if let Some(t) = &self.token {
            call = call.bearer_auth(t);
        }
        let resp = call.send().map_err(|e| TextGenError::Transport(e.to_string()))?;
        let resp = resp.error_for_status().map_err(|e| TextGenError::Transport(e.to_string()))?;
        resp.json().map_err(|e| TextGenError::Malformed(e.to_string()))
    }
}

/// Scripted decisions with generated wording. Falls back to the scripted
/// text when the generator fails.
pub struct TextGenBehavior<G> {
    scripted: ScriptedBehavior,
    generator: G,
    pub fallbacks: u64,
}

impl<G: TextGenerator> TextGenBehavior<G> {
    pub fn new(generator: G) -> Self {
        TextGenBehavior { scripted: ScriptedBehavior, generator, fallbacks: 0 }
    }

    pub fn generator(&self) -> &G {
        &self.generator
    }
}

impl<G: TextGenerator> AgentBehavior for TextGenBehavior<G> {
    fn decide(&mut self, input: &DecisionInput<'_>) -> Vec<Action> {
        let mut actions = self.scripted.decide(input);
        for action in &mut actions {
            if let Action::Send { template, .. } = action {
                let req = TextRequest {
                    system: format!("You are {} in scenario {}. Leader: {}.", input.agent, input.scenario.id, input.leader),
                    context: input.context.iter().map(|c| c.text().to_string()).collect(),
                    prompt: template.clone(),
                };
                match self.generator.generate(&req) {
                    Ok(r) => *template = r.text,
                    Err(_) => self.fallbacks += 1,
                }
            }
        }
        actions
    }
}
