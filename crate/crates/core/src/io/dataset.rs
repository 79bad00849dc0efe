use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::Reference;
use crate::oracle::{EmpiricalOracle, Oracle, OracleMode, SyntheticOracle};
use crate::pcm::{Pair, Pcm};

/// On-disk dataset: either recorded complete-design matrices or synthetic
/// quality models, one entry per reference.
///
/// ```json
/// { "name": "iqa", "subjects": 15,
///   "references": [ { "id": "img01", "n": 2, "pcm": [[0, 3], [1, 0]] } ] }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subjects: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub references: Option<Vec<ReferencePcm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<Vec<SyntheticReference>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferencePcm {
    pub id: String,
    pub n: usize,
    pub pcm: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticReference {
    pub id: String,
    #[serde(flatten)]
    pub model: SyntheticOracle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedDataset {
    pub name: String,
    pub subjects: Option<usize>,
    pub references: Vec<Reference>,
}

fn check_reference(r: &ReferencePcm) -> std::result::Result<Pcm, String> {
    if r.n < 2 {
        return Err(format!("n = {} but at least 2 stimuli are required", r.n));
    }
    if r.pcm.len() != r.n {
        return Err(format!("dimension mismatch: n = {} but pcm has {} rows", r.n, r.pcm.len()));
    }
    for (i, row) in r.pcm.iter().enumerate() {
        if row.len() != r.n {
            return Err(format!(
                "dimension mismatch: row {i} has {} entries, expected {}",
                row.len(),
                r.n
            ));
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(format!("cell [{i}][{j}] = {v} is not a nonnegative count"));
            }
            if i == j && v != 0.0 {
                return Err(format!("diagonal cell [{i}][{i}] = {v} must be 0"));
            }
        }
    }
    let pcm = Pcm::from_rows(&r.pcm).map_err(|e| e.to_string())?;
    if let Some(p) = Pair::all(r.n).find(|p| pcm.pair_total(p.a(), p.b()) <= 0.0) {
        return Err(format!(
            "incomplete design: cells [{a}][{b}] and [{b}][{a}] are both 0",
            a = p.a(),
            b = p.b()
        ));
    }
    Ok(pcm)
}

/// Parses and validates dataset text; `origin` is only used in messages.
pub fn parse_dataset(text: &str, origin: &Path, mode: OracleMode) -> Result<LoadedDataset> {
    let parse_err = |message: String| Error::Parse {
        path: origin.to_path_buf(),
        message,
    };
    let file: DatasetFile = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let mut references = Vec::new();
    match (&file.references, &file.synthetic) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(parse_err(
                "exactly one of `references` or `synthetic` must be present".into(),
            ))
        }
        (Some(recorded), None) => {
            for r in recorded {
                let pcm = check_reference(r)
                    .map_err(|m| Error::InvalidDataset(format!("reference `{}`: {m}", r.id)))?;
                let oracle = EmpiricalOracle::new(pcm, mode)
                    .map_err(|e| Error::InvalidDataset(format!("reference `{}`: {e}", r.id)))?;
                references.push(Reference {
                    id: r.id.clone(),
                    oracle: Oracle::Empirical(oracle),
                });
            }
        }
        (None, Some(models)) => {
            for r in models {
                r.model
                    .validate()
                    .map_err(|e| Error::InvalidDataset(format!("reference `{}`: {e}", r.id)))?;
                references.push(Reference {
                    id: r.id.clone(),
                    oracle: Oracle::Synthetic(r.model.clone()),
                });
            }
        }
    }
    if references.is_empty() {
        return Err(Error::InvalidDataset("dataset has no references".into()));
    }
    let mut ids: Vec<&str> = references.iter().map(|r| r.id.as_str()).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidDataset(format!("duplicate reference id `{}`", w[0])));
    }
    Ok(LoadedDataset {
        name: file.name,
        subjects: file.subjects,
        references,
    })
}

/// Reads a dataset file; every matrix is validated before anything runs.
pub fn load_dataset(path: &Path, mode: OracleMode) -> Result<LoadedDataset> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_dataset(&text, path, mode)
}

/// Writes synthetic references in the dataset schema.
pub fn save_synthetic(name: &str, references: &[Reference], path: &Path) -> Result<()> {
    let synthetic = references
        .iter()
        .filter_map(|r| match &r.oracle {
            Oracle::Synthetic(model) => Some(SyntheticReference {
                id: r.id.clone(),
                model: model.clone(),
            }),
            Oracle::Empirical(_) => None,
        })
        .collect();
    let file = DatasetFile {
        name: name.to_string(),
        subjects: None,
        references: None,
        synthetic: Some(synthetic),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("dataset serializes");
    text.push('\n');
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
