//! File formats: quiver documents (JSON), class dumps (NDJSON), DOT export
//! and seed serialization. All indices in these formats are 1-based.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::action::{ActionError, GroupAction, GroupTag};
use crate::canon::hash_matrix;
use crate::class::MutationClass;
use crate::seed::Seed;
use crate::{ExchangeMatrix, MatrixError, Permutation};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DocError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error("unsupported document version {0}")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Action(#[from] ActionError),
}

/// A group action as stored in a document: generators as 1-based image lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub group: String,
    pub generators: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverDocument {
    pub version: u32,
    pub n: usize,
    /// Rows of the exchange matrix.
    pub b: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionDoc>,
    /// Informational Dynkin type label, such as `E~6`.
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    pub type_name: Option<String>,
}

const KNOWN_FIELDS: [&str; 7] = ["version", "n", "b", "d", "names", "action", "type"];

impl QuiverDocument {
    /// Parses a document. Strict mode rejects unknown fields; otherwise they are
    /// dropped and reported as warnings.
    pub fn parse(text: &str, strict: bool) -> Result<(QuiverDocument, Vec<String>), DocError> {
        let value: Value = serde_json::from_str(text).map_err(|e| DocError::Json(e.to_string()))?;
        Self::from_value(value, strict)
    }

    pub fn from_value(mut value: Value, strict: bool) -> Result<(QuiverDocument, Vec<String>), DocError> {
        let mut warnings = Vec::new();
        if !strict {
            if let Value::Object(map) = &mut value {
                let unknown: Vec<String> =
                    map.keys().filter(|k| !KNOWN_FIELDS.contains(&k.as_str())).cloned().collect();
                for k in unknown {
                    map.remove(&k);
                    warnings.push(format!("ignored unknown field {k:?}"));
                }
            }
        }
        let doc: QuiverDocument = serde_json::from_value(value).map_err(|e| DocError::Invalid(e.to_string()))?;
        doc.validate()?;
        Ok((doc, warnings))
    }

    fn validate(&self) -> Result<(), DocError> {
        if self.version != FORMAT_VERSION {
            return Err(DocError::UnsupportedVersion(self.version));
        }
        if self.b.len() != self.n {
            return Err(DocError::Invalid(format!("n is {} but b has {} rows", self.n, self.b.len())));
        }
        if let Some(names) = &self.names {
            if names.len() != self.n {
                return Err(DocError::Invalid(format!("expected {} names, got {}", self.n, names.len())));
            }
        }
        self.matrix()?;
        self.group_action()?;
        Ok(())
    }

    pub fn matrix(&self) -> Result<ExchangeMatrix, DocError> {
        Ok(match &self.d {
            Some(d) => ExchangeMatrix::with_symmetrizer(self.b.clone(), d)?,
            None => ExchangeMatrix::new(self.b.clone())?,
        })
    }

    pub fn group_action(&self) -> Result<Option<GroupAction>, DocError> {
        let Some(a) = &self.action else {
            return Ok(None);
        };
        let tag: GroupTag = a.group.parse()?;
        let mut gens = Vec::with_capacity(a.generators.len());
        for g in &a.generators {
            if g.len() != self.n || g.contains(&0) {
                return Err(DocError::Invalid("generators must list 1-based images of every vertex".into()));
            }
            let images = g.iter().map(|x| x - 1).collect();
            gens.push(
                Permutation::from_images(images)
                    .ok_or_else(|| DocError::Invalid("generator is not a permutation".into()))?,
            );
        }
        Ok(Some(GroupAction::new(self.n, tag, gens)?))
    }

    /// The canonical document of a matrix, with its symmetrizer always present.
    pub fn from_matrix(m: &ExchangeMatrix, action: Option<&GroupAction>) -> QuiverDocument {
        QuiverDocument {
            version: FORMAT_VERSION,
            n: m.n(),
            b: m.rows(),
            d: Some(m.symmetrizer().to_vec()),
            names: None,
            action: action.map(action_doc),
            type_name: None,
        }
    }

    /// Replaces the matrix, keeping names, action and type label.
    pub fn with_matrix(&self, m: &ExchangeMatrix) -> QuiverDocument {
        QuiverDocument { b: m.rows(), d: Some(m.symmetrizer().to_vec()), n: m.n(), ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Vertex label for 0-based `i`.
    pub fn name(&self, i: usize) -> String {
        self.names.as_ref().map_or_else(|| (i + 1).to_string(), |n| n[i].clone())
    }
}

pub fn action_doc(a: &GroupAction) -> ActionDoc {
    ActionDoc {
        group: a.tag().to_string(),
        generators: a.generators().iter().map(|g| g.images().iter().map(|x| x + 1).collect()).collect(),
    }
}

/// One NDJSON line per class member in discovery order: canonical matrix,
/// symmetrizer, 1-based mutation path from the seed matrix and content hash.
pub fn class_dump(class: &MutationClass) -> String {
    let mut out = String::new();
    for (idx, m) in class.members.iter().enumerate() {
        let line = json!({
            "index": idx + 1,
            "b": m.canonical.rows(),
            "d": m.canonical.symmetrizer(),
            "path": m.path.iter().map(|k| k + 1).collect::<Vec<_>>(),
            "hash": format!("{:016x}", hash_matrix(&m.canonical)),
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

/// Graphviz rendering: one node per vertex and one edge per nonzero pair,
/// labeled with its multiplicity when above one (`a:b` when `b_ij != -b_ji`).
pub fn to_dot(doc: &QuiverDocument) -> Result<String, DocError> {
    let m = doc.matrix()?;
    let quote = |s: String| format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""));
    let mut out = String::from("digraph quiver {\n");
    for i in 0..m.n() {
        out.push_str(&format!("  {};\n", quote(doc.name(i))));
    }
    for i in 0..m.n() {
        for j in 0..m.n() {
            let (bij, bji) = (m.get(i, j), m.get(j, i));
            if bij <= 0 {
                continue;
            }
            let label =
                if bij == -bji { (bij > 1).then(|| bij.to_string()) } else { Some(format!("{}:{}", bij, -bji)) };
            let attr = label.map_or(String::new(), |l| format!(" [label=\"{l}\"]"));
            out.push_str(&format!("  {} -> {}{};\n", quote(doc.name(i)), quote(doc.name(j)), attr));
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// Cluster variables as lists of `[exponents, coefficient]` pairs, coefficients as decimal strings.
pub fn seed_to_json(s: &Seed) -> Value {
    let cluster: Vec<Value> =
        s.cluster.iter().map(|p| Value::Array(p.terms().map(|(m, c)| json!([m.0, c.to_string()])).collect())).collect();
    json!({
        "version": FORMAT_VERSION,
        "matrix": QuiverDocument::from_matrix(&s.matrix, None),
        "cluster": cluster,
    })
}
