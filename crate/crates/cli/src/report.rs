//! The `analyze` report.

use std::time::Instant;

use anyhow::Result;
use chainkit_core::bounds::best_upper_bound;
use chainkit_core::recognition::min_c_bisect;
use chainkit_core::{Backend, BoundReport, PolygonalChain, Ratio, TripleWitness};
use serde::Serialize;

/// Chains up to this size get the exact cubic scan; larger ones use bisection.
pub const BRUTE_LIMIT: usize = 1025;
pub const BISECT_REL_TOL: f64 = 1e-9;
const ENVELOPE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MinCMethod {
    Brute,
    Bisect,
}

#[derive(Debug, Serialize)]
pub struct MinCReport {
    pub value: Ratio,
    pub witness: Option<TripleWitness>,
    pub method: MinCMethod,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub min_c_seconds: f64,
    pub simplicity_seconds: f64,
    pub total_seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub n: usize,
    pub chain_length: f64,
    /// `None` when the endpoints coincide.
    pub stretch_factor: Option<f64>,
    pub min_c: MinCReport,
    pub is_simple: bool,
    pub offending_segments: Option<(usize, usize)>,
    /// Upper bounds evaluated at the measured min-c; absent when it is unbounded.
    pub bounds: Option<BoundReport>,
    /// Whether the stretch factor lies under the best bound; `None` when
    /// either side is undefined.
    pub within_envelope: Option<bool>,
    pub timing: Timing,
}

pub fn min_c(
    chain: &PolygonalChain,
    method: MinCMethod,
    rel_tol: f64,
    backend: Backend,
) -> Result<MinCReport> {
    let m = match method {
        MinCMethod::Brute => chain.min_c_bruteforce(),
        MinCMethod::Bisect => min_c_bisect(chain, rel_tol, backend)?,
    };
    Ok(MinCReport {
        value: m.value,
        witness: m.witness,
        method,
    })
}

pub fn analyze(chain: &PolygonalChain, method: Option<MinCMethod>) -> Result<ReportDocument> {
    let start = Instant::now();
    let method = method.unwrap_or(if chain.len() <= BRUTE_LIMIT {
        MinCMethod::Brute
    } else {
        MinCMethod::Bisect
    });
    let min_c = min_c(chain, method, BISECT_REL_TOL, Backend::GridIndex)?;
    let min_c_seconds = start.elapsed().as_secs_f64();

    let t = Instant::now();
    let simplicity = chain.is_simple();
    let simplicity_seconds = t.elapsed().as_secs_f64();

    let stretch_factor = chain.stretch_factor().ok();
    let bounds = match min_c.value {
        Ratio::Bounded(c) => Some(best_upper_bound(c, chain.len() as u64)?),
        Ratio::Unbounded => None,
    };
    let within_envelope = match (stretch_factor, &bounds) {
        (Some(s), Some(b)) => Some(s <= b.best_value() * (1.0 + ENVELOPE_SLACK)),
        _ => None,
    };
    Ok(ReportDocument {
        n: chain.len(),
        chain_length: chain.chain_length(),
        stretch_factor,
        min_c,
        is_simple: simplicity.simple,
        offending_segments: simplicity.offending,
        bounds,
        within_envelope,
        timing: Timing {
            min_c_seconds,
            simplicity_seconds,
            total_seconds: start.elapsed().as_secs_f64(),
        },
    })
}
