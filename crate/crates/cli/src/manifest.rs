//! Run manifests: enough metadata to reproduce a run and find its outputs.

use anyhow::{anyhow, bail};
use descent_lab::harness::ExperimentConfig;

use crate::config::{parse_config, serialize_config};

/// Written next to the output files of every invocation. The config echo
/// parses back to the identical `ExperimentConfig`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub tool_version: String,
    pub timestamp: String,
    pub command: String,
    pub base_seed: Option<u64>,
    /// Command-specific parameters (e.g. the spectrum family).
    pub parameters: Vec<(String, String)>,
    /// Output file names, relative to the manifest location.
    pub outputs: Vec<String>,
    /// Full experiment config echo for `run` invocations.
    pub config: Option<ExperimentConfig<f64>>,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut out = String::from("# descent-lab run manifest\n");
        out.push_str(&format!("tool_version={}\n", self.tool_version));
        out.push_str(&format!("timestamp={}\n", self.timestamp));
        out.push_str(&format!("command={}\n", self.command));
        if let Some(seed) = self.base_seed {
            out.push_str(&format!("base_seed={seed}\n"));
        }
        for (key, value) in &self.parameters {
            out.push_str(&format!("param.{key}={value}\n"));
        }
        for output in &self.outputs {
            out.push_str(&format!("output={output}\n"));
        }
        if let Some(config) = &self.config {
            for line in serialize_config(config).lines() {
                out.push_str(&format!("config.{line}\n"));
            }
        }
        out
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut tool_version = None;
        let mut timestamp = None;
        let mut command = None;
        let mut base_seed = None;
        let mut parameters = Vec::new();
        let mut outputs = Vec::new();
        let mut config_lines = String::new();

        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("manifest line '{line}' is not key=value"))?;
            match key {
                "tool_version" => tool_version = Some(value.to_string()),
                "timestamp" => timestamp = Some(value.to_string()),
                "command" => command = Some(value.to_string()),
                "base_seed" => base_seed = Some(value.parse()?),
                "output" => outputs.push(value.to_string()),
                other => {
                    if let Some(param) = other.strip_prefix("param.") {
                        parameters.push((param.to_string(), value.to_string()));
                    } else if let Some(config_key) = other.strip_prefix("config.") {
                        config_lines.push_str(config_key);
                        config_lines.push('=');
                        config_lines.push_str(value);
                        config_lines.push('\n');
                    } else {
                        bail!("unknown manifest key '{other}'");
                    }
                }
            }
        }

        let config = if config_lines.is_empty() {
            None
        } else {
            Some(parse_config(&config_lines)?)
        };

        Ok(Self {
            tool_version: tool_version.ok_or_else(|| anyhow!("manifest missing tool_version"))?,
            timestamp: timestamp.ok_or_else(|| anyhow!("manifest missing timestamp"))?,
            command: command.ok_or_else(|| anyhow!("manifest missing command"))?,
            base_seed,
            parameters,
            outputs,
            config,
        })
    }
}
