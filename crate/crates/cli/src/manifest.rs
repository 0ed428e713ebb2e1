use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to rerun a command and check its outputs.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub inputs: Vec<FileDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema: Option<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn digest(path: &Path) -> Result<FileDigest, CliError> {
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: sha256_file(path)?,
    })
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            tool: "surveynet",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            parameters: BTreeMap::new(),
            inputs: Vec::new(),
            schema: None,
            outputs: Vec::new(),
        }
    }

    pub fn param(&mut self, name: &str, value: impl Serialize) -> &mut Self {
        self.parameters
            .insert(name.to_string(), serde_json::to_value(value).expect("serializable parameter"));
        self
    }

    pub fn input(&mut self, path: &Path) -> Result<&mut Self, CliError> {
        self.inputs.push(digest(path)?);
        Ok(self)
    }

    pub fn schema(&mut self, path: &Path) -> Result<&mut Self, CliError> {
        self.schema = Some(digest(path)?);
        Ok(self)
    }

    /// Digests `outputs` and writes the manifest to `path`.
    pub fn finish(mut self, outputs: &[PathBuf], path: &Path) -> Result<(), CliError> {
        for out in outputs {
            self.outputs.push(digest(out)?);
        }
        let text = serde_json::to_string_pretty(&self).expect("manifest serializes") + "\n";
        std::fs::write(path, text).map_err(|e| CliError::io(path, e))
    }
}
