//! Matrix documents: `{dim, entries: [[re, im], ...], name?, source?, ...}`.

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use qil_core::constructions::CatalogEntry;
use qil_core::defect::Window;
use qil_core::Matrix;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub dim: usize,
    /// Row-major `[re, im]` pairs.
    pub entries: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    /// Truncated operators: only the leading `dim - interior_margin` basis
    /// vectors are trusted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interior_margin: Option<usize>,
    /// Known disagreement between a recorded claim and direct computation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<String>,
}

impl MatrixDocument {
    pub fn from_matrix(t: &Matrix) -> Self {
        MatrixDocument {
            dim: t.rows(),
            entries: t.as_slice().iter().map(|z| [z.re, z.im]).collect(),
            name: None,
            source: None,
            interior_margin: None,
            discrepancy: None,
        }
    }

    /// One document per member of a catalog entry.
    pub fn from_catalog(entry: &CatalogEntry) -> Vec<Self> {
        entry
            .members
            .iter()
            .map(|c| MatrixDocument {
                name: Some(format!("{}/{}", entry.id, c.label)),
                source: Some(format!("catalog:{}", entry.id)),
                interior_margin: entry.interior_margin,
                discrepancy: entry.discrepancy.map(str::to_string),
                ..MatrixDocument::from_matrix(&c.matrix)
            })
            .collect()
    }

    pub fn label(&self, index: usize) -> String {
        self.name.clone().unwrap_or_else(|| format!("document {index}"))
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            bail!("dim must be positive");
        }
        let expected = self.dim.checked_mul(self.dim).context("dim too large")?;
        if self.entries.len() != expected {
            bail!("entries has {} pairs, expected dim^2 = {expected}", self.entries.len());
        }
        if let Some(k) = self.entries.iter().position(|e| !(e[0].is_finite() && e[1].is_finite())) {
            bail!("entry ({}, {}) is not finite", k / self.dim, k % self.dim);
        }
        if let Some(margin) = self.interior_margin {
            if margin >= self.dim {
                bail!("interior_margin {margin} leaves no interior in dimension {}", self.dim);
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> Result<Matrix> {
        self.validate()?;
        let data = self.entries.iter().map(|e| Complex64::new(e[0], e[1])).collect();
        Ok(Matrix::from_row_major(self.dim, self.dim, data)?)
    }

    pub fn window(&self) -> Option<Window> {
        self.interior_margin.map(|m| Window::leading(self.dim - m))
    }
}

/// Parses a whitespace-separated stream of documents. At least one is
/// required and each must validate.
pub fn parse_documents(text: &str) -> Result<Vec<MatrixDocument>> {
    let mut docs = Vec::new();
    for (i, item) in serde_json::Deserializer::from_str(text).into_iter::<MatrixDocument>().enumerate() {
        let doc = item.with_context(|| format!("document {i}: malformed matrix document"))?;
        doc.validate().with_context(|| format!("document {i}"))?;
        docs.push(doc);
    }
    if docs.is_empty() {
        bail!("no matrix document in input");
    }
    Ok(docs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let t = Matrix::real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let doc = MatrixDocument::from_matrix(&t);
        let text = serde_json::to_string(&doc).unwrap();
        let back = parse_documents(&text).unwrap();
        assert_eq!(back[0].matrix().unwrap(), t);
    }

    #[test]
    fn stream_of_two() {
        let text = r#"{"dim":1,"entries":[[1,0]]} {"dim":1,"entries":[[0,1]],"name":"i"}"#;
        let docs = parse_documents(text).unwrap();
        assert_eq!(docs.len(), 2);
        assert_eq!(docs[1].label(1), "i");
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "",
            "{",
            r#"{"dim":2,"entries":[[1,0]]}"#,
            r#"{"dim":0,"entries":[]}"#,
            r#"{"dim":1,"entries":[[1e400,0]]}"#,
            r#"{"dim":1,"entries":[[1,0]],"extra":1}"#,
            r#"{"dim":2,"entries":[[1,0],[0,0],[0,0],[1,0]],"interior_margin":2}"#,
        ] {
            assert!(parse_documents(text).is_err(), "{text}");
        }
    }
}
