use super::config::Cache;
use super::curves::{count_points, CurveCountRequest};
use super::rhs::{rhs_assemble, RhsOptions, RhsReport};
use crate::{Error, Result};
use num_rational::Ratio;
use serde_json::{json, Value};
use std::time::Instant;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Default)]
pub struct Timings {
    pub lhs_ms: Option<f64>,
    pub rhs_ms: Option<f64>,
}

/// Both sides of the point-counting identity for one request.
#[derive(Clone, Debug)]
pub struct PcfReport {
    pub request: CurveCountRequest,
    pub lhs: Option<u64>,
    pub rhs: Option<RhsReport>,
    pub timings: Timings,
}

pub fn ratio_string(r: &Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl PcfReport {
    /// Exact equality of both sides; `false` if either side is missing.
    pub fn matched(&self) -> bool {
        match (&self.lhs, &self.rhs) {
            (Some(l), Some(r)) => r.total.is_integer() && *r.total.numer() == *l as i64,
            _ => false,
        }
    }

    pub fn to_json(&self) -> Value {
        let req = &self.request;
        let rhs = self.rhs.as_ref().map(|r| {
            let terms: Vec<Value> = r
                .terms
                .iter()
                .map(|t| {
                    json!({
                        "charpoly": t.charpoly,
                        "kind": t.kind,
                        "c1": ratio_string(&t.c1),
                        "c2": ratio_string(&t.c2),
                        "O": ratio_string(&t.orbital),
                        "TO": ratio_string(&t.twisted),
                    })
                })
                .collect();
            json!({ "convention": r.convention, "terms": terms, "total": ratio_string(&r.total) })
        });
        json!({
            "schema_version": SCHEMA_VERSION,
            "request": { "p": req.p, "m": req.m, "N": req.level, "kind": req.kind.label() },
            "lhs": self.lhs,
            "rhs": rhs,
            "match": self.matched(),
            "timings": { "lhs_ms": self.timings.lhs_ms, "rhs_ms": self.timings.rhs_ms },
        })
    }

    /// One row per term; request, totals and the match flag are repeated on
    /// every row.
    pub fn to_csv(&self) -> String {
        let req = &self.request;
        let mut out = String::from("schema_version,p,m,N,kind,lhs,rhs_total,match,charpoly,term_kind,c1,c2,O,TO\n");
        let lhs = self.lhs.map(|l| l.to_string()).unwrap_or_default();
        let total = self.rhs.as_ref().map(|r| ratio_string(&r.total)).unwrap_or_default();
        let prefix = format!("{SCHEMA_VERSION},{},{},{},{},{lhs},{total},{}", req.p, req.m, req.level, req.kind.label(), self.matched());
        match &self.rhs {
            Some(r) if !r.terms.is_empty() => {
                for t in &r.terms {
                    let cp = format!("{} {} {}", t.charpoly[0], t.charpoly[1], t.charpoly[2]);
                    let kind = serde_json::to_value(t.kind).unwrap();
                    out += &format!(
                        "{prefix},{cp},{},{},{},{},{}\n",
                        kind.as_str().unwrap_or(""),
                        ratio_string(&t.c1),
                        ratio_string(&t.c2),
                        ratio_string(&t.orbital),
                        ratio_string(&t.twisted)
                    );
                }
            }
            _ => out += &format!("{prefix},,,,,,\n"),
        }
        out
    }

    pub fn to_text(&self) -> String {
        let req = &self.request;
        let mut out = format!("{} over F_{}^{}, N = {}\n", req.kind.label(), req.p, req.m, req.level);
        if let Some(l) = self.lhs {
            out += &format!("  points: {l}\n");
        }
        if let Some(r) = &self.rhs {
            for t in &r.terms {
                let c = t.contribution();
                if c == Ratio::from_integer(0) {
                    continue;
                }
                out += &format!(
                    "  x^2 {:+} x {:+}: c1 {} O {} TO {} -> {}\n",
                    t.charpoly[1],
                    t.charpoly[2],
                    ratio_string(&t.c1),
                    ratio_string(&t.orbital),
                    ratio_string(&t.twisted),
                    c
                );
            }
            out += &format!("  trace formula: {}\n", r.total);
        }
        if self.lhs.is_some() && self.rhs.is_some() {
            out += &format!("  match: {}\n", self.matched());
        }
        out
    }
}

fn side<T>(name: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Side { side: name, source: Box::new(e) })
}

/// Runs both sides.
pub fn compare(req: &CurveCountRequest, opts: &RhsOptions, cache: &Cache) -> Result<PcfReport> {
    req.validate()?;
    let t = Instant::now();
    let lhs = side("lhs", count_points(req))?;
    let lhs_ms = t.elapsed().as_secs_f64() * 1e3;
    let t = Instant::now();
    let rhs = side("rhs", rhs_assemble(req, opts, cache))?;
    let rhs_ms = t.elapsed().as_secs_f64() * 1e3;
    Ok(PcfReport {
        request: *req,
        lhs: Some(lhs),
        rhs: Some(rhs),
        timings: Timings { lhs_ms: Some(lhs_ms), rhs_ms: Some(rhs_ms) },
    })
}
