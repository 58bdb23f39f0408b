use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use thinspec::fem::{mixed_eigs, neumann_eigs, triangulate};
use thinspec::geometry::{diameter, normalize, slice_profile, width, ConvexPolygon, SliceProfile};
use thinspec::harness::body::SpectrumSummary;
use thinspec::harness::{self, analyze, Body, Config, FamilyKind};
use thinspec::segment::{segment_from_profile, sl_eigs, Weight, WeightedSegment, DEFAULT_NODES};
use thinspec::special::constants;
use thinspec::{Error, Result};

#[derive(Parser)]
#[command(name = "thinspec", version, about = "Neumann spectra of thin convex planar domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Harness configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for reports.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed offset, overriding the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Bessel-derived constants for dimension n.
    Constants {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        kmax: usize,
    },
    /// Diameter, width, standard position and slice profile of a polygon.
    Geom {
        #[arg(long)]
        poly: PathBuf,
        /// Uniform profile samples added to the breakpoints.
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// P1 finite-element eigenvalues of a polygon.
    Eigs2d {
        #[arg(long)]
        poly: PathBuf,
        /// Target element size.
        #[arg(long, default_value_t = 0.03)]
        h: f64,
        /// Number of eigenvalues above the constant mode (Neumann) or in total (mixed).
        #[arg(long, default_value_t = 5)]
        m: usize,
        /// Dirichlet sides: comma-separated side indices (side i joins vertex i to i+1),
        /// or `up` for every side whose outward normal has positive y component.
        #[arg(long)]
        dirichlet: Option<String>,
        /// Move the polygon into standard position first.
        #[arg(long)]
        normalize: bool,
        /// Write the refined mesh in text form.
        #[arg(long)]
        mesh_out: Option<PathBuf>,
    },
    /// Eigenvalues of the weighted Neumann problem on [0,1].
    Eigs1d {
        /// Profile file, one "t h" pair per line.
        #[arg(long, conflicts_with = "analytic", required_unless_present = "analytic")]
        profile: Option<PathBuf>,
        /// Named weight (constant, linear, tent, gaussian, cap, cosine, smooth-tent).
        #[arg(long)]
        analytic: Option<String>,
        #[arg(long, default_value_t = 5)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
    },
    /// Per-body checks on one polygon, or on every body of the corpus.
    Compare {
        #[arg(long)]
        poly: Option<PathBuf>,
    },
    /// Every check of the configuration; writes report.json, rows.csv, metadata.json and plots/.
    Sweep,
    /// Summary of a previous sweep in --out.
    Report,
}

#[derive(Serialize)]
struct Eigs2dOutput {
    eigenvalues: Vec<f64>,
    error_estimates: Vec<f64>,
    clusters: Vec<Vec<usize>>,
    kind: &'static str,
    dirichlet_sides: Vec<usize>,
    width: f64,
    spectrum: SpectrumSummary,
    base_nodes: usize,
    fine_nodes: usize,
    h_mesh: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("thinspec: {e}");
            ExitCode::from(if e.is_solver_failure() { 3 } else { 2 })
        }
    }
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("output serializes"));
}

fn config(g: &Global) -> Result<Config> {
    let mut cfg = match &g.config {
        Some(p) => Config::read(p)?,
        None => Config::default(),
    };
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(g: &Global) -> PathBuf {
    g.out.clone().unwrap_or_else(|| PathBuf::from("thinspec-out"))
}

fn run(cli: Cli) -> Result<u8> {
    let g = &cli.global;
    match cli.command {
        Command::Constants { dim, kmax } => {
            let c = constants(dim, kmax)?;
            print_json(&json!({
                "x_m": c.x_m,
                "C_n": c.c_n,
                "eps_k": c.eps_k,
                "delta_n": c.delta_n,
                "manifold_c": c.manifold_c,
                "kroger": c.kroger,
            }));
            eprintln!("n = {dim}   x_m = {:.12}   C_n = {:.12}", c.x_m, c.c_n.value);
            eprintln!("delta_n = {:.12}   manifold c = {:.12}", c.delta_n.value, c.manifold_c.value);
            eprintln!("{:>3} {:>16} {:>16}", "k", "eps_k", "kroger");
            for k in 0..kmax {
                eprintln!("{:>3} {:>16.12} {:>16.10}", k + 1, c.eps_k[k].value, c.kroger[k].value);
            }
            Ok(0)
        }
        Command::Geom { poly, samples } => {
            let p = ConvexPolygon::read(&poly)?;
            let nb = normalize(&p)?;
            let profile = slice_profile(&nb.polygon, samples)?;
            print_json(&json!({
                "vertices": p.vertices().iter().map(|v| [v.x, v.y]).collect::<Vec<_>>(),
                "area": p.area(),
                "perimeter": p.perimeter(),
                "diameter": diameter(&p),
                "width": width(&p),
                "normalized": nb,
                "profile": profile,
                "profile_concave": profile.is_concave(),
            }));
            Ok(0)
        }
        Command::Eigs2d {
            poly,
            h,
            m,
            dirichlet,
            normalize: norm,
            mesh_out,
        } => {
            let mut p = ConvexPolygon::read(&poly)?;
            if norm {
                p = normalize(&p)?.polygon;
            }
            let mut mesh = triangulate(&p, h)?;
            match dirichlet.as_deref() {
                None => {}
                Some("up") => mesh.set_dirichlet_where(|n| n.y > 1e-12),
                Some(spec) => mesh.set_dirichlet_sides(&parse_sides(spec, p.len())?),
            }
            let sides = mesh.dirichlet_sides();
            let (fs, kind) = if sides.is_empty() {
                (neumann_eigs(&mesh, m)?, "neumann")
            } else {
                (mixed_eigs(&mesh, m)?, "mixed")
            };
            if let Some(path) = mesh_out {
                fs.mesh.write(&path)?;
            }
            let s = &fs.spectrum;
            print_json(&Eigs2dOutput {
                eigenvalues: s.eigenvalues.clone(),
                error_estimates: s.error_estimates.clone(),
                clusters: s.clusters.clone(),
                kind,
                dirichlet_sides: sides,
                width: width(&p).length / diameter(&p).length,
                spectrum: SpectrumSummary::from(s),
                base_nodes: fs.base_nodes,
                fine_nodes: fs.mesh.num_nodes(),
                h_mesh: mesh.h_mesh,
            });
            Ok(0)
        }
        Command::Eigs1d {
            profile,
            analytic,
            m,
            nodes,
        } => {
            let seg = match (&profile, &analytic) {
                (Some(path), _) => segment_from_profile(SliceProfile::read(path)?)?,
                (None, Some(name)) => WeightedSegment::new(Weight::named(name)?)?,
                (None, None) => unreachable!("clap requires one source"),
            };
            let s = sl_eigs(&seg, m, nodes)?;
            print_json(&json!({
                "eigenvalues": s.eigenvalues,
                "error_estimates": s.error_estimates,
                "clusters": s.clusters,
                "nodes": nodes,
                "normalization": seg.normalization,
                "log_concave": seg.log_concave,
            }));
            Ok(0)
        }
        Command::Compare { poly } => {
            let cfg = config(g)?;
            let reports = match poly {
                Some(path) => {
                    let nb = normalize(&ConvexPolygon::read(&path)?)?;
                    let body = Body {
                        name: path.file_stem().map_or("input".into(), |s| s.to_string_lossy().into_owned()),
                        // user polygons carry no C¹ guarantee
                        family: FamilyKind::RandomHull,
                        eps: None,
                        seed: None,
                        width: nb.width,
                        polygon: nb.polygon,
                    };
                    vec![analyze(&body, &cfg)?]
                }
                None => harness::with_jobs(g.jobs, || harness::analyze_corpus(&cfg))??,
            };
            print_json(&reports);
            let failed: usize = reports.iter().map(|r| r.failures()).sum();
            eprintln!("{} bodies, {failed} failed assertions", reports.len());
            Ok(u8::from(failed > 0))
        }
        Command::Sweep => {
            let cfg = config(g)?;
            let dir = out_dir(g);
            let start = Instant::now();
            let report = harness::with_jobs(g.jobs, || harness::run_all(&cfg))??;
            report.write(&dir)?;
            let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
            let meta = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "unix_time": stamp,
                "elapsed_seconds": start.elapsed().as_secs_f64(),
                "jobs": g.jobs.unwrap_or_else(rayon::current_num_threads),
            });
            write_text(&dir.join("metadata.json"), &serde_json::to_string_pretty(&meta).expect("metadata"))?;
            print!("{}", report.table());
            eprintln!("wrote {}", dir.display());
            Ok(report.exit_code() as u8)
        }
        Command::Report => {
            let path = out_dir(g).join("report.json");
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse {
                path: path.clone(),
                message: e.to_string(),
            })?;
            let summary = &v["summary"];
            if !summary.is_object() {
                return Err(Error::Parse {
                    path,
                    message: "missing summary".into(),
                });
            }
            println!("{}", serde_json::to_string_pretty(summary).expect("summary"));
            Ok(u8::from(summary["pass"] != serde_json::Value::Bool(true)))
        }
    }
}

fn parse_sides(spec: &str, n: usize) -> Result<Vec<usize>> {
    spec.split(',')
        .map(|s| {
            let i: usize = s
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("--dirichlet: bad side index {s:?}")))?;
            if i >= n {
                return Err(Error::Invalid(format!("--dirichlet: side {i} out of range (polygon has {n})")));
            }
            Ok(i)
        })
        .collect()
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
