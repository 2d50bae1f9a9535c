//! Command execution.

use cmkit::report::{RelationReport, SurfaceReport, TableReport, VerdictReport};
use cmkit::{certify_relation, cm_verdict, streit_test, ExactTable, Status};
use rayon::prelude::*;
use serde::Serialize;

use crate::request::{load_source, surface, AnalysisRequest, Failure, COMMANDS};

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub search_limit: usize,
    pub max_order: usize,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub source: String,
    #[serde(flatten)]
    pub surface: SurfaceReport,
    #[serde(flatten)]
    pub verdict: VerdictReport,
}

#[derive(Debug, Serialize)]
pub struct StreitReport {
    pub source: String,
    pub genus: u64,
    pub streit_value: u64,
    /// Verdict reachable from the Streit value alone.
    pub status: Status,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub source: String,
    pub holds: bool,
    #[serde(flatten)]
    pub verdict: VerdictReport,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Report {
    Analyze(AnalyzeReport),
    Streit(StreitReport),
    Table(TableReport),
    Quotients(SurfaceReport),
    Verify(VerifyReport),
}

impl Report {
    /// One line describing the outcome.
    pub fn summary(&self) -> String {
        match self {
            Report::Analyze(r) => format!(
                "{} genus={} streit={} relation={}",
                status_name(r.verdict.status),
                r.surface.genus,
                r.verdict.streit_value.map_or("-".into(), |v| v.to_string()),
                r.verdict.relation.as_ref().map_or("-".into(), |rel| {
                    rel.factors
                        .iter()
                        .map(|f| f.multiplicity.to_string())
                        .collect::<Vec<_>>()
                        .join("+")
                }),
            ),
            Report::Streit(r) => format!("{} streit={}", status_name(r.status), r.streit_value),
            Report::Table(r) => format!("order={} classes={}", r.group_order, r.classes.len()),
            Report::Quotients(r) => format!("genus={} rows={}", r.genus, r.quotients.len()),
            Report::Verify(r) => format!("{} holds={}", status_name(r.verdict.status), r.holds),
        }
    }
}

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::CmCertified => "CM_CERTIFIED",
        Status::Inconclusive => "INCONCLUSIVE",
    }
}

pub fn run(req: &AnalysisRequest, settings: Settings) -> Result<Report, Failure> {
    if !COMMANDS.contains(&req.command.as_str()) {
        return Err(Failure::input(
            "UnknownCommand",
            format!("unknown command {:?}", req.command),
        ));
    }
    let src = load_source(&req.source, settings.max_order)?;
    if req.command == "table" {
        return Ok(Report::Table(TableReport::new(&ExactTable::compute(
            src.group.clone(),
        )?)));
    }
    let x = surface(&src, req.vector.as_deref(), req.signature.as_deref())?;
    let source = req.source.clone();
    let report = match req.command.as_str() {
        "quotients" => Report::Quotients(SurfaceReport::new(&x)?),
        "streit" => {
            let t = ExactTable::compute(src.group.clone())?;
            let v = streit_test(&x, &t)?;
            Report::Streit(StreitReport {
                source,
                genus: x.genus(),
                streit_value: v,
                status: if v == 0 {
                    Status::CmCertified
                } else {
                    Status::Inconclusive
                },
            })
        }
        "analyze" => {
            let t = ExactTable::compute(src.group.clone())?;
            let limit = req.search_limit.unwrap_or(settings.search_limit);
            let verdict = cm_verdict(&x, &t, limit)?;
            Report::Analyze(AnalyzeReport {
                source,
                surface: SurfaceReport::new(&x)?,
                verdict: VerdictReport::new(&src.group, &verdict),
            })
        }
        _ => {
            let doc = req
                .relation
                .as_ref()
                .ok_or_else(|| Failure::input("MissingRelation", "verify needs a relation"))?;
            let relation = RelationReport::from_json(&doc.to_string())?.to_relation(&src.group)?;
            let t = ExactTable::compute(src.group.clone())?;
            let verdict = certify_relation(&x, &t, &relation)?;
            Report::Verify(VerifyReport {
                source,
                holds: verdict.irreducible_report.iter().all(|r| r.lhs == r.rhs),
                verdict: VerdictReport::new(&src.group, &verdict),
            })
        }
    };
    Ok(report)
}

#[derive(Debug, Serialize)]
pub struct BatchRow {
    pub request: AnalysisRequest,
    pub exit_code: u8,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Failure>,
}

#[derive(Debug, Serialize)]
pub struct BatchReport {
    pub exit_code: u8,
    pub rows: Vec<BatchRow>,
}

/// Runs requests concurrently; rows keep request order.
pub fn batch(requests: Vec<AnalysisRequest>, settings: Settings) -> Result<BatchReport, Failure> {
    if requests.is_empty() {
        return Err(Failure::input(
            "EmptyBatch",
            "batch needs at least one request",
        ));
    }
    let rows: Vec<BatchRow> = requests
        .into_par_iter()
        .map(|request| match run(&request, settings) {
            Ok(report) => BatchRow {
                summary: format!(
                    "{} {}: {}",
                    request.source,
                    request.command,
                    report.summary()
                ),
                request,
                exit_code: 0,
                report: Some(report),
                error: None,
            },
            Err(e) => BatchRow {
                summary: format!("{} {}: error {}", request.source, request.command, e.code),
                request,
                exit_code: e.exit,
                report: None,
                error: Some(e),
            },
        })
        .collect();
    let exit_code = rows.iter().map(|r| r.exit_code).max().unwrap_or(0);
    Ok(BatchReport { exit_code, rows })
}
