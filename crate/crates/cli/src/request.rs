//! Requests, group sources and failures.

use std::fs;
use std::sync::Arc;

use cmkit::gm::parse_builtin;
use cmkit::report::GroupFile;
use cmkit::{
    build_gm, Error, FiniteGroup, GeneratingVector, Permutation, QuasiplatonicSurface, Signature,
};
use serde::{Deserialize, Serialize};

pub const COMMANDS: [&str; 5] = ["analyze", "streit", "table", "quotients", "verify"];

/// One vector entry: a word in the generators, cycle notation, or an image array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorEntry {
    Text(String),
    Images(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisRequest {
    pub command: String,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<VectorEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_limit: Option<usize>,
    /// Relation document for `verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<serde_json::Value>,
}

/// A reportable failure with its exit code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub code: String,
    pub message: String,
    #[serde(skip)]
    pub exit: u8,
}

impl Failure {
    pub fn input(code: &str, message: impl Into<String>) -> Self {
        Self {
            code: code.into(),
            message: message.into(),
            exit: 1,
        }
    }

    pub fn line(&self) -> String {
        serde_json::json!({ "error": self.code, "message": self.message }).to_string()
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: e.code().into(),
            message: e.to_string(),
            exit: if e.is_resource_bound() { 2 } else { 1 },
        }
    }
}

/// A loaded group with the names usable in vector words.
pub struct Source {
    pub group: Arc<FiniteGroup>,
    pub names: Vec<(String, usize)>,
    pub default_signature: Option<Signature>,
}

pub fn load_source(source: &str, max_order: usize) -> Result<Source, Failure> {
    if let Some(m) = parse_builtin(source) {
        let m = m?;
        if m.saturating_mul(4) > max_order as u64 {
            return Err(Error::GroupTooLarge { bound: max_order }.into());
        }
        let inst = build_gm(m)?;
        let names = vec![
            ("a".into(), inst.a),
            ("b".into(), inst.b),
            ("t".into(), inst.t),
        ];
        return Ok(Source {
            group: inst.group.clone(),
            names,
            default_signature: Some(inst.expected.signature.clone()),
        });
    }
    let text =
        fs::read_to_string(source).map_err(|e| Failure::input("Io", format!("{source}: {e}")))?;
    let group = Arc::new(GroupFile::from_json(&text)?.build(max_order)?);
    let names = group
        .generator_indices()
        .iter()
        .enumerate()
        .map(|(i, &x)| (format!("g{i}"), x))
        .collect();
    Ok(Source {
        group,
        names,
        default_signature: None,
    })
}

/// Parses `2,3,7` as a spherical signature.
pub fn parse_signature(text: &str) -> Result<Signature, Failure> {
    let periods = text
        .trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|p| p.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::input("Parse", format!("bad signature {text:?}")))?;
    if periods.iter().any(|&p| p < 2) {
        return Err(Failure::input(
            "Parse",
            format!("periods must be at least 2 in {text:?}"),
        ));
    }
    Ok(Signature::spherical(periods))
}

/// Parses `--vector`: a JSON array of entries or comma-separated words.
pub fn parse_vector_arg(text: &str) -> Result<Vec<VectorEntry>, Failure> {
    if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(|e| Failure::input("Parse", format!("vector: {e}")))
    } else {
        Ok(text
            .split(',')
            .map(|w| VectorEntry::Text(w.trim().to_string()))
            .collect())
    }
}

fn parse_word(src: &Source, word: &str) -> Result<usize, Failure> {
    let g = &src.group;
    let bad = || Failure::input("Parse", format!("bad element word {word:?}"));
    let mut acc = g.identity();
    for token in word
        .split(|c: char| c == '*' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        let (name, exp) = match token.split_once('^') {
            Some((n, e)) => (n, e.parse::<i64>().map_err(|_| bad())?),
            None => (token, 1),
        };
        let x = if name == "1" || name == "e" {
            g.identity()
        } else {
            src.names
                .iter()
                .find(|(n, _)| n == name)
                .map(|&(_, x)| x)
                .ok_or_else(bad)?
        };
        acc = g.mul(acc, g.pow(x, exp));
    }
    Ok(acc)
}

fn parse_entry(src: &Source, entry: &VectorEntry) -> Result<usize, Failure> {
    let g = &src.group;
    let perm = match entry {
        VectorEntry::Images(images) => Permutation::new(images.clone())?,
        VectorEntry::Text(t) if t.trim_start().starts_with('(') => {
            Permutation::parse_cycles(t, g.degree())?
        }
        VectorEntry::Text(t) => return parse_word(src, t),
    };
    g.index_of(&perm)
        .ok_or_else(|| Error::ElementNotInGroup.into())
}

/// Surface from an explicit vector, a signature, or the family's default.
pub fn surface(
    src: &Source,
    vector: Option<&[VectorEntry]>,
    signature: Option<&str>,
) -> Result<QuasiplatonicSurface, Failure> {
    let v = if let Some(entries) = vector {
        let idx = entries
            .iter()
            .map(|e| parse_entry(src, e))
            .collect::<Result<Vec<_>, _>>()?;
        GeneratingVector::new(src.group.clone(), idx)?
    } else {
        let sig = match signature {
            Some(s) => parse_signature(s)?,
            None => src.default_signature.clone().ok_or_else(|| {
                Failure::input(
                    "MissingVector",
                    "a group file needs --vector or --signature",
                )
            })?,
        };
        cmkit::find_generating_vectors(&src.group, &sig, 1)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::VectorNotFound(sig.to_string()))?
    };
    Ok(QuasiplatonicSurface::new(v)?)
}
