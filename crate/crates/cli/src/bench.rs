//! Backend timing table. Sizes of the form `4^k + 1` use `P^k`; other sizes
//! use a seeded random chain, so every backend sees the same workload.

use std::io::Write;
use std::time::Instant;

use anyhow::{bail, Result};
use chainkit_core::fractal::{depth_of, generate};
use chainkit_core::{Backend, FractalParams, Point, PolygonalChain, RecursionTree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const MAX_SIZE: usize = 4usize.pow(6) + 1;

pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub backends: Vec<Backend>,
    pub trials: usize,
    pub seed: u64,
    /// Fractal parameter and decision threshold.
    pub c: f64,
    /// Also time the cubic min-c scan.
    pub brute: bool,
}

#[derive(Serialize)]
struct Row {
    size: usize,
    workload: &'static str,
    backend: &'static str,
    trials: usize,
    build_ms: f64,
    decide_ms: f64,
    queries: Option<u64>,
    pairs: Option<u64>,
    is_c_chain: bool,
}

fn workload(size: usize, c: f64, rng: &mut ChaCha8Rng) -> Result<(PolygonalChain, &'static str)> {
    if let Some(k) = depth_of(size) {
        return Ok((generate(&FractalParams::standard(c, k))?.0, "fractal"));
    }
    let pts = (0..size)
        .map(|_| Point::new(rng.gen(), rng.gen()))
        .collect();
    Ok((PolygonalChain::new(pts)?, "random"))
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

/// Rounds milliseconds to whole nanoseconds for a readable table.
fn round_ns(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

pub fn run(cfg: &BenchConfig, out: &mut dyn Write) -> Result<()> {
    if cfg.trials == 0 {
        bail!("--trials must be positive");
    }
    if !(cfg.c >= 4.0) {
        bail!("--c must be at least 4 for the fractal workloads");
    }
    if let Some(&bad) = cfg.sizes.iter().find(|&&s| !(2..=MAX_SIZE).contains(&s)) {
        bail!("size {bad} outside 2..={MAX_SIZE}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut w = csv::Writer::from_writer(out);
    for &size in &cfg.sizes {
        let (chain, kind) = workload(size, cfg.c, &mut rng)?;
        for &backend in &cfg.backends {
            let (mut build, mut decide) = (Vec::new(), Vec::new());
            let mut outcome = None;
            for _ in 0..cfg.trials {
                let t = Instant::now();
                let tree = RecursionTree::build(&chain, backend);
                build.push(ms(t));
                let t = Instant::now();
                let o = tree.decide(cfg.c);
                decide.push(ms(t));
                outcome = Some(o);
            }
            let o = outcome.expect("at least one trial");
            w.serialize(Row {
                size,
                workload: kind,
                backend: backend.name(),
                trials: cfg.trials,
                build_ms: round_ns(median(build)),
                decide_ms: round_ns(median(decide)),
                queries: Some(o.queries_issued),
                pairs: Some(o.pairs_tested),
                is_c_chain: o.is_c_chain,
            })?;
        }
        if cfg.brute {
            let mut times = Vec::new();
            let mut verdict = false;
            for _ in 0..cfg.trials {
                let t = Instant::now();
                verdict = chain.min_c_bruteforce().value.within(cfg.c);
                times.push(ms(t));
            }
            w.serialize(Row {
                size,
                workload: kind,
                backend: "brute",
                trials: cfg.trials,
                build_ms: 0.0,
                decide_ms: round_ns(median(times)),
                queries: None,
                pairs: None,
                is_c_chain: verdict,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}
