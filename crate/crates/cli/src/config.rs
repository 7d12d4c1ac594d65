use std::path::{Path, PathBuf};

use knotdraw::{BadnessWeights, OptimizeOptions, RenderOptions};
use serde::Deserialize;

use crate::error::CliError;

/// Project file: paths to the auxiliary inputs and option tables. Relative
/// paths are taken from the project file's directory.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Project {
    pub weights: Option<PathBuf>,
    pub symmetry: Option<PathBuf>,
    pub overunder: Option<PathBuf>,
    pub badness: Option<BadnessWeights>,
    pub optimize: Option<OptimizeOptions>,
    pub render: Option<RenderOptions>,
}

impl Project {
    pub fn load(path: Option<&Path>) -> Result<Project, CliError> {
        let Some(path) = path else {
            return Ok(Project::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let mut p: Project = toml::from_str(&text)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for slot in [&mut p.weights, &mut p.symmetry, &mut p.overunder] {
            if let Some(rel) = slot.as_mut() {
                if rel.is_relative() {
                    *rel = base.join(&*rel);
                }
            }
        }
        Ok(p)
    }

    /// Weights from the flag's file, else the project's table or file, else the defaults; then overrides.
    pub fn weights(
        &self,
        file: Option<&Path>,
        overrides: &[String],
    ) -> Result<BadnessWeights, CliError> {
        let mut w = match (file, &self.badness, &self.weights) {
            (Some(f), _, _) => BadnessWeights::load(f).map_err(CliError::from)?,
            (None, Some(table), _) => table.clone(),
            (None, None, Some(f)) => BadnessWeights::load(f).map_err(CliError::from)?,
            (None, None, None) => BadnessWeights::default(),
        };
        for kv in overrides {
            w.apply_override(kv)?;
        }
        w.validate()?;
        Ok(w)
    }

    pub fn symmetry<'a>(&'a self, flag: Option<&'a Path>) -> Option<&'a Path> {
        flag.or(self.symmetry.as_deref())
    }

    pub fn overunder<'a>(&'a self, flag: Option<&'a Path>) -> Option<&'a Path> {
        flag.or(self.overunder.as_deref())
    }
}
