//! The on-disk model format: JSON with structure constants and the
//! symplectic form, rationals as strings so nothing ever becomes a float.
//!
//! ```json
//! {
//!   "name": "kt4",
//!   "dim": 4,
//!   "d": { "4": [ { "coeff": "1", "indices": [2, 3] } ] },
//!   "omega": [ { "coeff": "1", "indices": [1, 2] },
//!              { "coeff": "1", "indices": [3, 4] } ]
//! }
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exterior::{Form, MultiIndex};
use crate::model::LieModel;
use crate::scalar::{format_scalar, parse_scalar};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermSpec {
    pub coeff: String,
    pub indices: Vec<u8>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub d: BTreeMap<String, Vec<TermSpec>>,
    pub omega: Vec<TermSpec>,
}

fn form_from_terms(terms: &[TermSpec], dim: usize, context: &str) -> Result<Form, Error> {
    let mut form = Form::zero();
    for (i, term) in terms.iter().enumerate() {
        let coeff = parse_scalar(&term.coeff).map_err(|_| Error::ModelFile {
            path: String::new(),
            detail: format!("{context}[{i}].coeff: cannot parse rational {:?}", term.coeff),
        })?;
        if term.indices.iter().any(|&ix| ix == 0 || ix as usize > dim) {
            return Err(Error::BadMultiIndex {
                context: format!("{context}[{i}]"),
                dim,
                indices: term.indices.clone(),
            });
        }
        let index = MultiIndex::new(term.indices.clone()).ok_or(Error::BadMultiIndex {
            context: format!("{context}[{i}]"),
            dim,
            indices: term.indices.clone(),
        })?;
        form.add_term(index, coeff);
    }
    Ok(form)
}

fn terms_from_form(form: &Form) -> Vec<TermSpec> {
    form.terms()
        .map(|(ix, c)| TermSpec {
            coeff: format_scalar(c),
            indices: ix.labels().to_vec(),
        })
        .collect()
}

impl ModelFile {
    pub fn to_model(&self) -> Result<LieModel, Error> {
        if self.dim == 0 || self.dim % 2 != 0 {
            return Err(Error::ModelFile {
                path: String::new(),
                detail: format!("dim must be a positive even integer, got {}", self.dim),
            });
        }
        if self.dim > u8::MAX as usize {
            return Err(Error::ModelFile {
                path: String::new(),
                detail: format!("dim {} is too large", self.dim),
            });
        }
        let mut structure = BTreeMap::new();
        for (key, terms) in &self.d {
            let label: u8 = key.parse().map_err(|_| Error::ModelFile {
                path: String::new(),
                detail: format!("d key {key:?} is not a generator index"),
            })?;
            if label == 0 || label as usize > self.dim {
                return Err(Error::ModelFile {
                    path: String::new(),
                    detail: format!("d key {key:?} outside 1..={}", self.dim),
                });
            }
            let form = form_from_terms(terms, self.dim, &format!("d[{key:?}]"))?;
            if !form.is_zero() {
                structure.insert(label, form);
            }
        }
        let omega = form_from_terms(&self.omega, self.dim, "omega")?;
        Ok(LieModel::new(
            self.name.clone(),
            self.dim / 2,
            structure,
            omega,
        ))
    }

    pub fn from_model(model: &LieModel) -> ModelFile {
        ModelFile {
            name: model.name().to_string(),
            dim: model.dim(),
            d: model
                .structure()
                .iter()
                .filter(|(_, form)| !form.is_zero())
                .map(|(label, form)| (label.to_string(), terms_from_form(form)))
                .collect(),
            omega: terms_from_form(model.omega()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model file serialization cannot fail")
    }
}

/// Reads a model file without running the model validator; the caller
/// decides whether a failing model is an error or a report.
pub fn read_model_unvalidated(path: &Path) -> Result<LieModel, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: ModelFile = serde_json::from_str(&text).map_err(|e| Error::ModelFile {
        path: path.display().to_string(),
        detail: format!("line {}, column {}: {e}", e.line(), e.column()),
    })?;
    file.to_model().map_err(|e| match e {
        Error::ModelFile { detail, .. } => Error::ModelFile {
            path: path.display().to_string(),
            detail,
        },
        other => other,
    })
}

/// Reads and fully validates a model file.
pub fn read_model(path: &Path) -> Result<LieModel, Error> {
    let model = read_model_unvalidated(path)?;
    let report = model.validate();
    if !report.passed() {
        return Err(Error::InvalidModel {
            name: model.name().to_string(),
            failures: report.failure_summary(),
        });
    }
    Ok(model)
}
