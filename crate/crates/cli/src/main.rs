#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod bench;
mod io;
mod report;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use chainkit_core::fractal::generate;
use chainkit_core::recognition::decide_c_chain;
use chainkit_core::{Backend, FocalEllipse, FractalParams, PolygonalChain, Variant};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::io::Format;
use crate::report::MinCMethod;
use crate::svg::Overlay;

/// Generate, verify and analyze c-chains.
#[derive(Parser)]
#[command(name = "chainkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Standard,
    Refined,
    Experimental,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Standard => Variant::Standard,
            VariantArg::Refined => Variant::Refined,
            VariantArg::Experimental => Variant::ExperimentalC,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyMethod {
    Brute,
    Fast,
}

#[derive(Clone, Copy, ValueEnum)]
enum OverlayArg {
    None,
    Hull,
    Ellipse,
}

#[derive(Subcommand)]
enum Command {
    /// Write a fractal chain and print its generator report.
    Generate {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "standard")]
        variant: VariantArg,
        /// Apex parameter; defaults to the largest value keeping the chain simple.
        #[arg(long)]
        a: Option<f64>,
        /// Output file; the chain goes to stdout (and the report to stderr) when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Defaults to the extension of --out, else json.
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Exit 0 if the chain is a c-chain, 1 (printing a witness) if not.
    Verify {
        path: PathBuf,
        #[arg(long)]
        c: f64,
        #[arg(long, value_enum, default_value = "fast")]
        method: VerifyMethod,
        #[arg(long, default_value = "grid")]
        backend: Backend,
    },
    /// Minimum c for which the chain is a c-chain.
    Minc {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "brute")]
        method: MinCMethod,
        #[arg(long, default_value_t = report::BISECT_REL_TOL)]
        rel_tol: f64,
        #[arg(long, default_value = "grid")]
        backend: Backend,
    },
    /// Full JSON report: stretch, min-c, simplicity and bounds.
    Analyze {
        path: PathBuf,
        /// Defaults to brute up to 1025 vertices, bisect above.
        #[arg(long, value_enum)]
        method: Option<MinCMethod>,
    },
    /// Draw the chain as SVG.
    Plot {
        path: PathBuf,
        #[arg(long)]
        out_svg: PathBuf,
        #[arg(long, value_enum, default_value = "none")]
        overlay: OverlayArg,
        /// First focus of the ellipse overlay (1-based, default 1).
        #[arg(long)]
        i: Option<usize>,
        /// Second focus of the ellipse overlay (1-based, default n).
        #[arg(long)]
        k: Option<usize>,
        /// Ellipse parameter for the overlay.
        #[arg(long)]
        c: Option<f64>,
    },
    /// CSV timing table of the decision procedure per backend.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "65,257,1025")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "naive,grid")]
        backends: Vec<Backend>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fractal parameter and decision threshold.
        #[arg(long, default_value_t = 6.0)]
        c: f64,
        /// Add rows timing the cubic min-c scan.
        #[arg(long)]
        brute: bool,
    },
}

fn check_threshold(c: f64) -> Result<()> {
    if !(c >= 1.0 && c.is_finite()) {
        bail!("--c must be a finite number >= 1, got {c}");
    }
    Ok(())
}

fn load(path: &Path) -> Result<PolygonalChain> {
    io::read_chain(path)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate {
            c,
            k,
            variant,
            a,
            out,
            format,
        } => {
            let mut params = FractalParams::new(c, k, variant.into());
            if let Some(a) = a {
                params = params.with_a(a);
            }
            let (chain, report) = generate(&params)?;
            let format = format
                .or_else(|| out.as_deref().and_then(Format::from_path))
                .unwrap_or(Format::Json);
            let line = serde_json::to_string(&report)?;
            match out {
                Some(path) => {
                    io::save_chain(&chain, format, &path)?;
                    println!("{line}");
                }
                None => {
                    io::write_chain(&chain, format, &mut std::io::stdout().lock())?;
                    eprintln!("{line}");
                }
            }
        }
        Command::Verify {
            path,
            c,
            method,
            backend,
        } => {
            check_threshold(c)?;
            let chain = load(&path)?;
            let witness = match method {
                VerifyMethod::Brute => chain.is_c_chain_bruteforce(c).err(),
                VerifyMethod::Fast => decide_c_chain(&chain, c, backend)?.witness,
            };
            if let Some(w) = witness {
                println!("{w}");
                return Ok(ExitCode::from(1));
            }
            println!("c-chain");
        }
        Command::Minc {
            path,
            method,
            rel_tol,
            backend,
        } => {
            let chain = load(&path)?;
            let t = Instant::now();
            let m = report::min_c(&chain, method, rel_tol, backend)?;
            let doc = json!({
                "value": m.value,
                "witness": m.witness,
                "method": m.method,
                "elapsed_seconds": t.elapsed().as_secs_f64(),
            });
            println!("{doc}");
        }
        Command::Analyze { path, method } => {
            let chain = load(&path)?;
            let doc = report::analyze(&chain, method)?;
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Command::Plot {
            path,
            out_svg,
            overlay,
            i,
            k,
            c,
        } => {
            let chain = load(&path)?;
            let n = chain.len();
            let mut contains_all = None;
            let overlay = match overlay {
                OverlayArg::None => Overlay::None,
                OverlayArg::Hull => Overlay::Hull,
                OverlayArg::Ellipse => {
                    let c = c.context("--overlay ellipse needs --c")?;
                    check_threshold(c)?;
                    let (i, k) = (i.unwrap_or(1), k.unwrap_or(n));
                    if !(1 <= i && i < k && k <= n) {
                        bail!("ellipse foci need 1 <= i < k <= {n}, got i = {i}, k = {k}");
                    }
                    let e = FocalEllipse::new(chain.vertex(i), chain.vertex(k), c);
                    let inside = chain
                        .vertices()
                        .iter()
                        .all(|p| e.contains(*p, chainkit_core::EPS_REL));
                    contains_all = Some(inside);
                    Overlay::Ellipse(e)
                }
            };
            let fig = svg::render(&chain, overlay);
            std::fs::write(&out_svg, &fig.svg)
                .with_context(|| format!("cannot write {}", out_svg.display()))?;
            let doc = json!({
                "svg": out_svg,
                "polyline_points": fig.polyline_points,
                "overlay_points": fig.overlay_points,
                "ellipse_contains_all": contains_all,
            });
            println!("{doc}");
        }
        Command::Bench {
            sizes,
            backends,
            trials,
            seed,
            c,
            brute,
        } => {
            let cfg = bench::BenchConfig {
                sizes,
                backends,
                trials,
                seed,
                c,
                brute,
            };
            bench::run(&cfg, &mut std::io::stdout().lock())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
