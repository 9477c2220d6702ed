//! The on-disk set format: one JSON object with `dim` and `points`, plus an
//! optional `holes` list written by `latsf sum --holes`.

use std::fmt::Write;
use std::path::Path;

use latsf::{LatticePoint, LatticeSet};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFile {
    pub dim: usize,
    pub points: Vec<LatticePoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holes: Option<Vec<LatticePoint>>,
}

impl SetFile {
    pub fn from_set(s: &LatticeSet) -> Self {
        SetFile { dim: s.dim(), points: s.points().to_vec(), holes: None }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: SetFile = serde_json::from_str(text).map_err(|e| CliError::usage(format!("malformed set file: {e}")))?;
        file.to_set()?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        SetFile::parse(&text).map_err(|e| CliError::usage(format!("{}: {}", path.display(), e.message)))
    }

    /// Validates and converts. Duplicate points are rejected so that a file
    /// always round-trips to itself up to ordering.
    pub fn to_set(&self) -> Result<LatticeSet, CliError> {
        if self.dim == 0 {
            return Err(CliError::usage("dim must be positive"));
        }
        if self.points.is_empty() {
            return Err(CliError::usage("a set file needs at least one point"));
        }
        if let Some(p) = self.points.iter().find(|p| p.len() != self.dim) {
            return Err(CliError::usage(format!("point {p:?} does not have dim {} coordinates", self.dim)));
        }
        let set = LatticeSet::new(self.dim, self.points.iter().cloned()).map_err(CliError::from)?;
        if set.len() != self.points.len() {
            return Err(CliError::usage("duplicate points in set file"));
        }
        if let Some(holes) = &self.holes {
            if let Some(p) = holes.iter().find(|p| p.len() != self.dim) {
                return Err(CliError::usage(format!("hole {p:?} does not have dim {} coordinates", self.dim)));
            }
        }
        Ok(set)
    }

    /// Canonical text: sorted points, one per line.
    pub fn render(&self) -> String {
        let mut points = self.points.clone();
        points.sort();
        let mut out = format!("{{\n  \"dim\": {},\n  \"points\": {}", self.dim, render_list(&points));
        if let Some(holes) = &self.holes {
            let mut holes = holes.clone();
            holes.sort();
            let _ = write!(out, ",\n  \"holes\": {}", render_list(&holes));
        }
        out.push_str("\n}\n");
        out
    }
}

fn render_list(points: &[LatticePoint]) -> String {
    if points.is_empty() {
        return "[]".into();
    }
    let rows: Vec<String> = points
        .iter()
        .map(|p| format!("    [{}]", p.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[\n{}\n  ]", rows.join(",\n"))
}
