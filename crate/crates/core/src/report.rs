//! JSON documents read and written by the command-line tool.
//!
//! Permutations are rendered in cycle notation, character values as
//! `c0+c1*z^1+…` with `z` a primitive root of unity of order the group
//! exponent.

use serde::{Deserialize, Serialize};

use crate::character::CharacterTable;
use crate::criteria::{
    CMVerdict, Evidence, FactorCertificate, IrreducibleCheck, IsogenyRelation, Route, Status,
};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::perm::Permutation;
use crate::scalar::Scalar;
use crate::surface::{BranchPoint, QuasiplatonicSurface, Signature};

/// `{ "degree": 6, "generators": [[1, 0, 2, 3, 4, 5], …] }`, 0-based images.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
}

impl GroupFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("group file: {e}")))
    }

    pub fn build(&self, max_order: usize) -> Result<FiniteGroup> {
        let gens = self
            .generators
            .iter()
            .map(|g| Permutation::new(g.clone()))
            .collect::<Result<Vec<_>>>()?;
        FiniteGroup::from_generators_bounded(self.degree, gens, max_order)
    }
}

fn gens_of(g: &FiniteGroup, h: &Subgroup) -> Vec<String> {
    h.generators()
        .iter()
        .map(|&x| g.element(x).to_string())
        .collect()
}

fn subgroup_from_strings(g: &FiniteGroup, gens: &[String]) -> Result<Subgroup> {
    let perms = gens
        .iter()
        .map(|s| Permutation::parse_cycles(s, g.degree()))
        .collect::<Result<Vec<_>>>()?;
    g.subgroup_from_perms(&perms)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub representative: String,
    pub size: usize,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub group_order: usize,
    pub exponent: u64,
    pub classes: Vec<ClassReport>,
    pub irreducibles: Vec<Vec<String>>,
}

impl TableReport {
    pub fn new<T: Scalar>(table: &CharacterTable<T>) -> Self {
        let g = table.group();
        let e = g.exponent();
        Self {
            group_order: g.order(),
            exponent: e,
            classes: g
                .conjugacy_classes()
                .iter()
                .map(|c| ClassReport {
                    representative: g.element(c.representative()).to_string(),
                    size: c.size(),
                    order: c.order(),
                })
                .collect(),
            irreducibles: table
                .irreducibles()
                .iter()
                .map(|chi| {
                    chi.values()
                        .iter()
                        .map(|v| v.embed(e).to_string())
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientRow {
    pub subgroup_gens: Vec<String>,
    pub order: usize,
    pub index: usize,
    pub genus: u64,
    pub branch_data: Vec<BranchPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub group_order: usize,
    pub signature: Signature,
    pub genus: u64,
    pub vector: Vec<String>,
    pub quotients: Vec<QuotientRow>,
}

impl SurfaceReport {
    /// One row per conjugacy class of proper non-trivial subgroups, ordered
    /// by subgroup order.
    pub fn new(x: &QuasiplatonicSurface) -> Result<Self> {
        let g = x.group();
        let subs = g.all_subgroups()?;
        let mut quotients = Vec::new();
        for class in g.subgroup_conjugacy_classes(&subs) {
            let h = &subs[class[0]];
            if h.is_trivial() || h.order() == g.order() {
                continue;
            }
            let q = x.quotient(h)?;
            quotients.push(QuotientRow {
                subgroup_gens: gens_of(g, h),
                order: h.order(),
                index: q.index,
                genus: q.genus,
                branch_data: q.branch_data,
            });
        }
        quotients.sort_by_key(|r| r.order);
        Ok(Self {
            group_order: g.order(),
            signature: x.signature().clone(),
            genus: x.genus(),
            vector: x
                .vector()
                .entry_perms()
                .iter()
                .map(|p| p.to_string())
                .collect(),
            quotients,
        })
    }
}

/// A relation factor. Only `subgroup_gens` and `multiplicity` are read back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReport {
    pub subgroup_gens: Vec<String>,
    pub multiplicity: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<Route>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Evidence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub n: u64,
    pub factors: Vec<FactorReport>,
}

impl RelationReport {
    pub fn new(
        g: &FiniteGroup,
        relation: &IsogenyRelation,
        certificates: &[FactorCertificate],
    ) -> Self {
        let factors = relation
            .factors
            .iter()
            .map(|(h, k)| {
                let cert = certificates.iter().find(|c| &c.subgroup == h);
                FactorReport {
                    subgroup_gens: gens_of(g, h),
                    multiplicity: *k,
                    genus: cert.map(|c| c.genus),
                    route: cert.map(|c| c.route),
                    evidence: cert.map(|c| c.evidence.clone()),
                }
            })
            .collect();
        Self {
            n: relation.n,
            factors,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        // Either a bare relation or a whole verdict carrying one.
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("relation: {e}")))?;
        let inner = match value.get("relation") {
            Some(r) if !r.is_null() => r.clone(),
            Some(_) => return Err(Error::Parse("verdict carries no relation".into())),
            None => value,
        };
        serde_json::from_value(inner).map_err(|e| Error::Parse(format!("relation: {e}")))
    }

    pub fn to_relation(&self, g: &FiniteGroup) -> Result<IsogenyRelation> {
        let factors = self
            .factors
            .iter()
            .map(|f| Ok((subgroup_from_strings(g, &f.subgroup_gens)?, f.multiplicity)))
            .collect::<Result<Vec<_>>>()?;
        IsogenyRelation::new(g, self.n, factors)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub status: Status,
    pub streit_value: Option<u64>,
    pub relation: Option<RelationReport>,
    pub irreducible_report: Vec<IrreducibleCheck>,
    #[serde(default)]
    pub log: Vec<String>,
}

impl VerdictReport {
    pub fn new(g: &FiniteGroup, verdict: &CMVerdict) -> Self {
        Self {
            status: verdict.status,
            streit_value: verdict.streit_value,
            relation: verdict
                .relation
                .as_ref()
                .map(|r| RelationReport::new(g, r, &verdict.certificates)),
            irreducible_report: verdict.irreducible_report.clone(),
            log: verdict.log.clone(),
        }
    }
}
