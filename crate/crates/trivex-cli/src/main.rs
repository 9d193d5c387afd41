//! Command-line driver: builds the groups, graphs, surfaces and spectra,
//! writes the export artifacts, and runs the one-shot verification
//! pipeline.

mod cache;
mod config;
mod ledger;
mod pipeline;
mod verify;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use pipeline::Pipeline;
use std::path::PathBuf;
use trivex::graph::export;

#[derive(Parser)]
#[command(name = "trivex", version, about = "trivalent expander laboratory")]
struct Cli {
    /// TOML configuration file (flags override it).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cache directory; the TRIVEX_CACHE environment variable also works.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true)]
    dense_cap: Option<usize>,
    /// Tolerance against the published 6-decimal table values.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    X,
    T,
    Dual,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Edgelist,
    Graph6,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectrumFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the class-k quotient group and write its presentation.
    Group {
        #[arg(long)]
        k: usize,
    },
    /// Export the Cayley graph, its transform, or the dual.
    Graph {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "t")]
        which: Which,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: GraphFormat,
    },
    /// Spectrum report for `X<k>`, `T<k>`, `dual<k>` or `pi<N>`.
    Spectrum {
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value = "json")]
        format: SpectrumFormat,
    },
    /// Face-tracing and genus report for the class-k surface.
    Faces {
        #[arg(long)]
        k: usize,
    },
    /// Build the Platonic graph Pi_N.
    Platonic {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "graph6")]
        format: GraphFormat,
    },
    /// Poincare-disk rendering of the universal-cover patch.
    Render {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        radius: usize,
    },
    /// Run every verification claim and print the ledger.
    VerifyAll {
        #[arg(long)]
        k_max: Option<usize>,
    },
}

fn main() {
    let cli = Cli::parse();
    let mut flags = config::Overrides {
        dense_cap: cli.dense_cap,
        tol: cli.tol,
        out: cli.out.clone(),
        cache: cli.cache.clone(),
        threads: cli.threads,
        seed: cli.seed,
        ..Default::default()
    };
    if let Cmd::VerifyAll { k_max } = &cli.cmd {
        flags.k_max = *k_max;
    }
    let cfg = match config::load(cli.config.as_deref(), &flags) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("configuration error: {e:#}");
            std::process::exit(2);
        }
    };
    match run(&cli.cmd, cfg) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(classify(&e));
        }
    }
}

/// Exit code taxonomy: 0 pass, 1 verification/internal failure, 2 usage
/// (handled before this point), 3 resource caps.
fn classify(e: &anyhow::Error) -> i32 {
    use trivex::graph::GraphError;
    use trivex::group::GroupError;
    use trivex::spectral::SpectralError;
    use trivex::surface::SurfaceError;
    for cause in e.chain() {
        if let Some(g) = cause.downcast_ref::<GroupError>() {
            if matches!(
                g,
                GroupError::EnumerationCap { .. } | GroupError::ClassCap { .. }
            ) {
                return 3;
            }
        }
        if let Some(s) = cause.downcast_ref::<SpectralError>() {
            if matches!(
                s,
                SpectralError::SizeCap { .. } | SpectralError::NoConvergence { .. }
            ) {
                return 3;
            }
        }
        if let Some(g) = cause.downcast_ref::<GraphError>() {
            if matches!(g, GraphError::TooLarge { .. } | GraphError::SearchLimit) {
                return 3;
            }
        }
        if let Some(s) = cause.downcast_ref::<SurfaceError>() {
            if matches!(s, SurfaceError::RadiusCap(..) | SurfaceError::TooManyTiles(..)) {
                return 3;
            }
        }
    }
    1
}

fn check_k(k: usize) -> Result<()> {
    if !(1..=6).contains(&k) {
        // surfaced as a usage problem, not a computation failure
        eprintln!("--k must lie in 1..=6, got {k}");
        std::process::exit(2);
    }
    Ok(())
}

fn write_out(path: &PathBuf, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn json_envelope(input_hash: &str, key: &str, body: serde_json::Value) -> String {
    let doc = serde_json::json!({
        "tool": "trivex",
        "version": trivex::VERSION,
        "input_hash": input_hash,
        key: body,
    });
    serde_json::to_string_pretty(&doc).unwrap()
}

fn run(cmd: &Cmd, cfg: config::RunConfig) -> Result<i32> {
    let out = cfg.out.clone();
    let pipe = Pipeline::new(cfg);
    match cmd {
        Cmd::Group { k } => {
            check_k(*k)?;
            let pcp = pipe.pcp(*k)?;
            let hash = cache::short_hex(&cache::input_hash(&["group", &k.to_string()]));
            let mut body: serde_json::Value = serde_json::from_str(&pcp.to_json())?;
            body["note"] =
                serde_json::Value::String(trivex::group::FINITE_WIDTH_NOTE.to_string());
            write_out(
                &out.join(format!("group_k{k}.json")),
                &json_envelope(&hash, "pcp", body),
            )?;
            println!(
                "G_{k}: order 2^{}, layers {:?}",
                pcp.order_log2(),
                pcp.layer_sizes()
            );
            Ok(0)
        }
        Cmd::Graph { k, which, format } => {
            check_k(*k)?;
            let (g, name) = match which {
                Which::X => (pipe.level(*k)?.cay.graph, format!("X{k}")),
                Which::T => (pipe.level(*k)?.t, format!("T{k}")),
                Which::Dual => (pipe.dual(*k)?, format!("dual{k}")),
            };
            let hash = cache::short_hex(&cache::input_hash(&["graph", &name]));
            let header = vec![
                format!("trivex {}", trivex::VERSION),
                format!("input {hash}"),
                format!("{name}: {} vertices, {} edges", g.n(), g.num_edges()),
            ];
            match format {
                GraphFormat::Edgelist => write_out(
                    &out.join(format!("{name}.edges")),
                    &export::to_edge_list(&g, &header),
                )?,
                GraphFormat::Graph6 => {
                    // graph6 has no comment syntax; metadata goes next to it
                    write_out(&out.join(format!("{name}.g6")), &export::to_graph6(&g)?)?;
                    write_out(
                        &out.join(format!("{name}.g6.meta.json")),
                        &json_envelope(
                            &hash,
                            "graph",
                            serde_json::json!({"name": name, "vertices": g.n(), "edges": g.num_edges()}),
                        ),
                    )?;
                }
                GraphFormat::Dot => write_out(
                    &out.join(format!("{name}.dot")),
                    &export::to_dot(&g, &name, &header),
                )?,
            }
            Ok(0)
        }
        Cmd::Spectrum { target, format } => {
            let report = pipe.spectrum(target)?;
            let hash = cache::short_hex(&cache::input_hash(&["spectrum", &report.graph]));
            let name = report.graph.clone();
            match format {
                SpectrumFormat::Json => {
                    write_out(
                        &out.join(format!("spectrum_{name}.json")),
                        &json_envelope(&hash, "report", serde_json::to_value(&report)?),
                    )?;
                }
                SpectrumFormat::Csv => {
                    let Some(values) = &report.spectrum else {
                        bail!("full-spectrum CSV needs the dense path; {name} ran iteratively");
                    };
                    let mut csv = format!(
                        "# trivex {} input {hash} graph {name}\nindex,eigenvalue\n",
                        trivex::VERSION
                    );
                    for (i, v) in values.iter().enumerate() {
                        csv.push_str(&format!("{i},{v:.12e}\n"));
                    }
                    write_out(&out.join(format!("spectrum_{name}.csv")), &csv)?;
                }
            }
            println!(
                "{name}: n={} lambda1={:.6} sigma={:.6} ramanujan={} ({})",
                report.n, report.lambda1, report.sigma, report.ramanujan, report.method
            );
            Ok(0)
        }
        Cmd::Faces { k } => {
            check_k(*k)?;
            let hash = cache::short_hex(&cache::input_hash(&["faces", &k.to_string()]));
            let report = pipe.surface_report(*k)?;
            write_out(
                &out.join(format!("surface_k{k}.json")),
                &json_envelope(&hash, "report", serde_json::to_value(&report)?),
            )?;
            let mut csv = format!(
                "# trivex {} input {hash}\n{}\n",
                trivex::VERSION,
                trivex::surface::SurfaceReport::csv_header()
            );
            for kk in 1..=*k {
                csv.push_str(&pipe.surface_report(kk)?.csv_row());
                csv.push('\n');
            }
            write_out(&out.join("surfaces.csv"), &csv)?;
            println!(
                "T_{k}: V={} E={} F={} {}-gons, genus {}",
                report.vertices, report.edges, report.faces, report.face_length, report.genus
            );
            Ok(0)
        }
        Cmd::Platonic { n, format } => {
            if !(2..=512).contains(n) {
                eprintln!("--n must lie in 2..=512, got {n}");
                std::process::exit(2);
            }
            let g = trivex::platonic::build_platonic(*n)?;
            let hash = cache::short_hex(&cache::input_hash(&["platonic", &n.to_string()]));
            let name = format!("platonic_{n}");
            let header = vec![
                format!("trivex {}", trivex::VERSION),
                format!("input {hash}"),
                format!("Pi_{n}: {} vertices, {} edges", g.n(), g.num_edges()),
            ];
            match format {
                GraphFormat::Edgelist => write_out(
                    &out.join(format!("{name}.edges")),
                    &export::to_edge_list(&g, &header),
                )?,
                GraphFormat::Graph6 => {
                    write_out(&out.join(format!("{name}.g6")), &export::to_graph6(&g)?)?;
                    write_out(
                        &out.join(format!("{name}.g6.meta.json")),
                        &json_envelope(
                            &hash,
                            "graph",
                            serde_json::json!({"n": n, "vertices": g.n(), "edges": g.num_edges()}),
                        ),
                    )?;
                }
                GraphFormat::Dot => write_out(
                    &out.join(format!("{name}.dot")),
                    &export::to_dot(&g, &name, &header),
                )?,
            }
            println!(
                "Pi_{n}: {} vertices ({} by the closed form), {}-regular",
                g.n(),
                trivex::platonic::platonic_count(*n)?,
                g.is_regular().map_or(0, |d| d)
            );
            Ok(0)
        }
        Cmd::Render { k, radius } => {
            check_k(*k)?;
            let lvl = pipe.level(*k)?;
            let map = trivex::surface::orient_tk(&lvl.t, lvl.nwhite)?;
            let svg = trivex::surface::render_disk(&map, *radius)?;
            let hash = cache::short_hex(&cache::input_hash(&[
                "render",
                &k.to_string(),
                &radius.to_string(),
            ]));
            let doc = format!(
                "<!-- trivex {} input {hash} k={k} radius={radius} -->\n{svg}",
                trivex::VERSION
            );
            write_out(&out.join(format!("disk_k{k}_r{radius}.svg")), &doc)?;
            Ok(0)
        }
        Cmd::VerifyAll { .. } => {
            let ledger = verify::run(&pipe)?;
            ledger.print_table();
            write_out(&out.join("ledger.json"), &ledger.to_json())?;
            Ok(if ledger.all_pass() { 0 } else { 1 })
        }
    }
}
