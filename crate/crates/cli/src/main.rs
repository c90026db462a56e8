use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sphtile::catalog::{build, FamilyId};
use sphtile::classifier::{classify_all_with, ClassifyConfig, DEFAULT_NODE_CAP};
use sphtile::embedding::{embed_with, Vec3};
use sphtile::export::{export_csv_cgamma, export_off, export_svg};
use sphtile::geometry::{AngleCase, AngleSet};
use sphtile::io::{read_tiling, write_tiling};
use sphtile::mesh::{realized_avc, verify_with};
use sphtile::tolerance::Tolerances;
use sphtile::vertex::{enumerate_vertices, remainder};
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(
    name = "sphtile",
    version,
    about = "Dihedral square/rhombus tilings of the sphere"
)]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct TolArgs {
    /// Residual accepted for the compatibility equation.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol_eq5: Option<f64>,
    /// Vertex angle-sum remainder, radians.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol_vertex: Option<f64>,
    /// Total area against 4π.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol_area: Option<f64>,
    /// Embedding closure residual.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol_embed: Option<f64>,
    /// Root refinement residual.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol_root: Option<f64>,
}

impl TolArgs {
    fn resolve(&self) -> Result<Tolerances, CliError> {
        let d = Tolerances::default();
        let t = Tolerances {
            eq5: self.tol_eq5.unwrap_or(d.eq5),
            vertex: self.tol_vertex.unwrap_or(d.vertex),
            area: self.tol_area.unwrap_or(d.area),
            embed: self.tol_embed.unwrap_or(d.embed),
            root: self.tol_root.unwrap_or(d.root),
        };
        t.validate()?;
        Ok(t)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the solved angles of a case.
    Angles {
        #[arg(long)]
        case: String,
    },
    /// Write a catalog tiling as JSON.
    Build {
        /// cube, earth-map:<c>, fusion:1, fusion:2, quad-subdivision, sporadic:1 or sporadic:2
        family: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a tiling file against a set of angles.
    Verify {
        file: PathBuf,
        #[arg(long)]
        angles: String,
    },
    /// Enumerate all dihedral tilings with at most `max_f` tiles.
    Classify {
        #[arg(long)]
        max_f: u32,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, env = "SPHTILE_NODE_CAP", default_value_t = DEFAULT_NODE_CAP)]
        node_cap: u64,
        /// Run report destination.
        #[arg(long, default_value = "classify-report.json")]
        report: PathBuf,
        /// Also write every tiling found as JSON into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Embed a tiling and draw it.
    Render {
        file: PathBuf,
        #[arg(long)]
        angles: String,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long)]
        off: Option<PathBuf>,
        /// Projection pole as x,y,z; defaults to the point opposite the
        /// first square.
        #[arg(long, value_parser = parse_vec3)]
        pole: Option<Vec3>,
    },
    /// Tabulate c(γ) for γ/π on an even grid.
    PlotC {
        #[arg(long, default_value_t = 0.005)]
        from: f64,
        #[arg(long, default_value_t = 0.4995)]
        to: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long)]
        csv: PathBuf,
    },
    /// List every vertex type whose angles sum to 2π.
    Avc {
        #[arg(long)]
        case: String,
        #[arg(long)]
        max_degree: Option<u32>,
    },
}

fn parse_vec3(s: &str) -> Result<Vec3, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [x, y, z] => Ok([*x, *y, *z]),
        _ => Err(format!("expected x,y,z, got {s:?}")),
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] sphtile::Error),
    #[error("verification failed: {}", failed.join(", "))]
    Verification { failed: Vec<String> },
    #[error("{path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification { .. } => 2,
            CliError::Core(sphtile::Error::Domain(_) | sphtile::Error::IllConditioned(_)) => 3,
            CliError::Core(sphtile::Error::BudgetExceeded { .. }) => 4,
            _ => 1,
        }
    }

    fn to_json(&self) -> serde_json::Value {
        let kind = match self {
            CliError::Core(e) => e.kind(),
            CliError::Verification { .. } => "verification_failed",
            CliError::Write { .. } => "io",
            CliError::Usage(_) => "usage",
        };
        let mut v = json!({
            "error": kind,
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        match self {
            CliError::Verification { failed } => v["failed_checks"] = json!(failed),
            CliError::Core(sphtile::Error::BudgetExceeded { explored, cap }) => {
                v["explored"] = json!(explored);
                v["cap"] = json!(cap);
            }
            CliError::Core(sphtile::Error::ClosureFailure {
                residual,
                tolerance,
                ..
            }) => {
                v["residual"] = json!(residual);
                v["tolerance"] = json!(tolerance);
            }
            _ => {}
        }
        v
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn header(cmd: &str, tol: &Tolerances) {
    println!(
        "# sphtile {cmd} | tolerances eq5={:e} vertex={:e} area={:e} embed={:e} root={:e}",
        tol.eq5, tol.vertex, tol.area, tol.embed, tol.root
    );
}

fn parse_case(s: &str) -> Result<AngleCase, CliError> {
    Ok(s.parse::<AngleCase>()?)
}

fn case_angles(s: &str, tol: &Tolerances) -> Result<AngleSet, CliError> {
    let a = parse_case(s)?.angles()?;
    a.validate(tol.eq5)?;
    Ok(a)
}

fn print_angles(a: &AngleSet) {
    let [alpha, beta, gamma, x] = a.in_pi();
    println!("alpha = {alpha:.6}π");
    println!("beta  = {beta:.6}π");
    println!("gamma = {gamma:.6}π");
    println!("x     = {x:.6}π");
    println!("eq5 residual = {:.3e}", a.eq5_residual());
}

fn run(cli: Cli) -> Result<(), CliError> {
    let tol = cli.tol.resolve()?;
    match cli.command {
        Command::Angles { case } => {
            let c = parse_case(&case)?;
            let a = case_angles(&case, &tol)?;
            header("angles", &tol);
            let eqs: Vec<String> = c.equations().iter().map(|v| v.to_string()).collect();
            println!("case: {c}");
            println!("equations: {}", eqs.join(", "));
            print_angles(&a);
        }
        Command::Build { family, out } => {
            let id: FamilyId = family.parse()?;
            let t = build(&id)?;
            write_tiling(&out, &t)?;
            header("build", &tol);
            let s = t.stats();
            println!("family: {id}");
            println!(
                "faces: {} ({} squares, {} rhombi)",
                s.f, s.n_square, s.n_rhombus
            );
            println!("vertices: {}", t.vertex_count());
            println!("realized {}", realized_avc(&t));
            println!("wrote {}", out.display());
        }
        Command::Verify { file, angles } => {
            let a = case_angles(&angles, &tol)?;
            header("verify", &tol);
            let t = match read_tiling(&file) {
                Ok(t) => t,
                Err(sphtile::Error::Structural(e)) => {
                    println!("FAIL structure: {e}");
                    return Err(CliError::Verification {
                        failed: vec!["structure".into()],
                    });
                }
                Err(e) => return Err(e.into()),
            };
            let report = verify_with(&t, &a, &tol);
            print!("{report}");
            let failed: Vec<String> = report.failed().map(|c| c.name.to_string()).collect();
            if !failed.is_empty() {
                return Err(CliError::Verification { failed });
            }
        }
        Command::Classify {
            max_f,
            jobs,
            node_cap,
            report,
            out_dir,
        } => {
            if max_f < 6 {
                return Err(CliError::Usage(format!(
                    "--max-f must be at least 6, got {max_f}"
                )));
            }
            if jobs == 0 {
                return Err(CliError::Usage("--jobs must be at least 1".into()));
            }
            let config = ClassifyConfig {
                jobs,
                node_cap,
                tol,
                ..ClassifyConfig::new(max_f)
            };
            let r = classify_all_with(&config)?;
            header("classify", &tol);
            println!("max_f: {max_f}");
            println!("tilings: {}", r.tilings.len());
            for t in &r.tilings {
                let [alpha, beta, gamma, _] = t.angles.in_pi();
                println!(
                    "{}  {:<16} f={:<3} squares={:<2} rhombi={:<3} chiral={:<3} alpha={alpha:.6}π beta={beta:.6}π gamma={gamma:.6}π  {}",
                    t.digest,
                    t.family.as_deref().unwrap_or("-"),
                    t.faces,
                    t.squares,
                    t.rhombi,
                    if t.chiral { "yes" } else { "no" },
                    t.realized_avc
                );
            }
            println!("angle systems searched: {}", r.runs.len());
            println!("nodes explored: {}", r.totals.nodes);
            println!("monohedral tilings discarded: {}", r.totals.monohedral);
            if let Some(dir) = out_dir {
                fs::create_dir_all(&dir).map_err(|source| CliError::Write {
                    path: dir.clone(),
                    source,
                })?;
                for (i, t) in r.tilings.iter().enumerate() {
                    let name = t.family.clone().unwrap_or_else(|| format!("unmatched-{i}"));
                    let path = dir.join(format!("{}.json", name.replace(':', "-")));
                    write_tiling(&path, t.tiling.as_ref().expect("tiling retained"))?;
                }
            }
            let doc = json!({
                "config": config,
                "parallel_build": sphtile::par::parallel_enabled(),
                "report": r,
            });
            write_file(
                &report,
                &serde_json::to_string_pretty(&doc).map_err(sphtile::Error::from)?,
            )?;
            println!("report: {}", report.display());
        }
        Command::Render {
            file,
            angles,
            svg,
            off,
            pole,
        } => {
            let a = case_angles(&angles, &tol)?;
            let t = read_tiling(&file)?;
            let e = embed_with(&t, &a, &tol)?;
            write_file(&svg, &export_svg(&e, &t, pole)?)?;
            if let Some(off) = &off {
                write_file(off, &export_off(&e, &t))?;
            }
            header("render", &tol);
            println!("closure residual: {:.3e}", e.closure_residual);
            println!("wrote {}", svg.display());
            if let Some(off) = off {
                println!("wrote {}", off.display());
            }
        }
        Command::PlotC {
            from,
            to,
            steps,
            csv,
        } => {
            write_file(&csv, &export_csv_cgamma(from, to, steps)?)?;
            header("plot-c", &tol);
            println!("wrote {steps} samples to {}", csv.display());
        }
        Command::Avc { case, max_degree } => {
            let a = case_angles(&case, &tol)?;
            let avc = enumerate_vertices(&a, max_degree, tol.vertex);
            header("avc", &tol);
            print_angles(&a);
            println!("{avc}");
            for v in &avc.entries {
                println!(
                    "  {:<16} remainder {:+.3e}",
                    v.to_string(),
                    remainder(v, &a)
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string().trim_end().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code());
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
