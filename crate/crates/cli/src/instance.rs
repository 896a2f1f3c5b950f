//! The JSON instance format.
//!
//! ```json
//! {"schema_version": "1", "n": 2, "A": [[1, 0], [0, 1]], "B": [[[1, 0], [0, -1]]], "metadata": {}}
//! ```
//!
//! Matrices are row-major lists of rows. Each entry is a real number or a `[re, im]` pair.

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use pencil_core::gen::Generated;
use pencil_core::{HermitianMatrix, PencilFamily};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn from_complex(z: Complex64) -> Self {
        if z.im == 0.0 {
            Entry::Real(z.re)
        } else {
            Entry::Complex([z.re, z.im])
        }
    }

    fn value(self) -> Complex64 {
        match self {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

pub type MatrixRows = Vec<Vec<Entry>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: String,
    pub n: usize,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MatrixRows>,
    #[serde(rename = "B", default)]
    pub b: Vec<MatrixRows>,
    #[serde(default)]
    pub metadata: BTreeMap<String, Value>,
}

/// Parsed and validated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub n: usize,
    pub a: Option<HermitianMatrix>,
    pub b: Vec<HermitianMatrix>,
    pub metadata: BTreeMap<String, Value>,
}

pub fn encode(m: &HermitianMatrix) -> MatrixRows {
    m.rows()
        .into_iter()
        .map(|r| r.into_iter().map(Entry::from_complex).collect())
        .collect()
}

fn decode(rows: &MatrixRows, n: usize, name: &str) -> Result<HermitianMatrix> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        bail!("{name} is not {n}×{n}");
    }
    let rows: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|e| e.value()).collect())
        .collect();
    HermitianMatrix::from_rows(&rows).with_context(|| format!("{name} is not a valid Hermitian matrix"))
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).context("malformed instance file")?;
        if file.schema_version != SCHEMA_VERSION {
            bail!(
                "unsupported schema_version {:?} (expected {SCHEMA_VERSION:?})",
                file.schema_version
            );
        }
        if file.n == 0 {
            bail!("n must be positive");
        }
        Ok(file)
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let a = self.a.as_ref().map(|m| decode(m, self.n, "A")).transpose()?;
        let b = self
            .b
            .iter()
            .enumerate()
            .map(|(i, m)| decode(m, self.n, &format!("B[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance {
            n: self.n,
            a,
            b,
            metadata: self.metadata.clone(),
        })
    }

    pub fn from_generated(g: &Generated, metadata: BTreeMap<String, Value>) -> Self {
        let mut metadata = metadata;
        if let Some(star) = &g.lambda_star {
            metadata.insert("lambda_star".into(), serde_json::json!(star));
        }
        Self {
            schema_version: SCHEMA_VERSION.into(),
            n: g.family.dim(),
            a: g.a.as_ref().map(encode),
            b: g.family.members().iter().map(encode).collect(),
            metadata,
        }
    }
}

impl Instance {
    pub fn family(&self) -> Result<PencilFamily> {
        if self.b.is_empty() {
            bail!("the instance has no B matrices");
        }
        PencilFamily::new(self.b.clone()).context("invalid family")
    }

    pub fn base(&self) -> Result<&HermitianMatrix> {
        self.a.as_ref().context("the instance has no A matrix")
    }
}
