mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use projrig::backend::{self, Options, TraceRequest};
use projrig::catalog::Catalog;
use projrig::config::{ConfigFile, Mode};
use projrig::report;
use projrig::rigidity::DEFAULT_RANK_THRESHOLD;
use projrig::Error;

#[derive(Parser)]
#[command(name = "projrig", version, about = "Projective rigidity of point-line configurations")]
struct Cli {
    /// Arithmetic backend; defaults to the file's mode.
    #[arg(long, global = true)]
    mode: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Incidence tolerance for float realizations.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Relative singular value threshold for float ranks.
    #[arg(long, global = true, default_value_t = DEFAULT_RANK_THRESHOLD)]
    rank_threshold: f64,
    /// Move the configuration by a seeded random projective transform if it
    /// has points at infinity or lines through the origin.
    #[arg(long, global = true)]
    auto_chart: bool,
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, motions, stresses and counts.
    Analyze {
        /// Configuration file, or `catalog:NAME`.
        file: String,
        /// Report the kernel dimension with these four points pinned.
        #[arg(long = "pin")]
        pins: Vec<String>,
    },
    /// Orbit rigidity matrix for a named group.
    Orbit {
        file: String,
        #[arg(long)]
        group: String,
    },
    /// Trace a flex with four pinned points.
    Trace {
        file: String,
        #[arg(long, value_delimiter = ',')]
        pins: Vec<String>,
        /// Index into the pinned kernel basis.
        #[arg(long, default_value_t = 0)]
        motion: usize,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long, default_value_t = 1e-2)]
        dt: f64,
        /// Trace inside the motions symmetric under this group.
        #[arg(long)]
        group: Option<String>,
        /// Write the trace here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory for one SVG frame per sample.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Built-in configurations.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { name: String },
    /// Write the configuration file of an entry.
    Export { name: String, path: Option<PathBuf> },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PointAtInfinity(_) | Error::LineThroughOrigin(_) => 3,
            Error::ZeroMotion => 4,
            Error::UnknownPoint(_)
            | Error::UnknownLine(_)
            | Error::DuplicateId(_)
            | Error::DuplicateIncidence(..)
            | Error::MissingCoordinate(_)
            | Error::ZeroVector(_)
            | Error::InexactInput(_)
            | Error::UnknownEntry(_)
            | Error::Invalid(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    }
}

fn load(file: &str) -> Result<ConfigFile, Failure> {
    if let Some(name) = file.strip_prefix("catalog:") {
        let e = Catalog::standard().build(name)?;
        return Ok(ConfigFile::from_entry(&e));
    }
    let path = Path::new(file);
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    Ok(ConfigFile::from_json(&text)?)
}

fn mode_for(cli: &Cli, file: &ConfigFile) -> Result<Mode, Failure> {
    match &cli.mode {
        Some(m) => Ok(m.parse()?),
        None => Ok(file.default_mode()),
    }
}

fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("json")
    } else {
        serde_json::to_string(v).expect("json")
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let opts = Options {
        rank_threshold: cli.rank_threshold,
        tolerance: cli.tolerance,
        auto_chart: cli.auto_chart,
        seed: cli.seed,
    };
    let out = match &cli.command {
        Command::Analyze { file, pins } => {
            let f = load(file)?;
            backend::backend_for(mode_for(cli, &f)?).analyze(&f, pins, &opts)?
        }
        Command::Orbit { file, group } => {
            let f = load(file)?;
            backend::backend_for(mode_for(cli, &f)?).orbit(&f, group, &opts)?
        }
        Command::Trace {
            file,
            pins,
            motion,
            steps,
            dt,
            group,
            out,
            svg: svg_dir,
        } => {
            let f = load(file)?;
            let req = TraceRequest {
                pins: pins.clone(),
                motion: *motion,
                steps: *steps,
                dt: *dt,
                group: group.clone(),
            };
            let trace = backend::backend_for(mode_for(cli, &f)?).trace(&f, &req, &opts)?;
            if let Some(dir) = svg_dir {
                fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
                for (k, s) in trace.samples.iter().enumerate() {
                    let path = dir.join(format!("frame-{k:04}.svg"));
                    let caption = format!("t = {:.4}", s.t);
                    fs::write(&path, svg::render(&s.realization, &caption)).map_err(|e| io_failure(&path, e))?;
                }
            }
            let v = report::trace(&trace);
            if let Some(path) = out {
                fs::write(path, render(&v, cli.pretty) + "\n").map_err(|e| io_failure(path, e))?;
                return Ok(String::new());
            }
            v
        }
        Command::Catalog { action } => return catalog(action, cli.pretty),
    };
    Ok(render(&out, cli.pretty))
}

fn catalog(action: &CatalogAction, pretty: bool) -> Result<String, Failure> {
    let cat = Catalog::standard();
    match action {
        CatalogAction::List => {
            let mut rows = Vec::new();
            for b in cat.builders() {
                let e = b.build()?;
                rows.push(json!({
                    "name": e.name,
                    "mode": if e.is_exact() { "exact" } else { "float" },
                    "signature": e.geometry().signature().to_string(),
                    "groups": e.group_names(),
                    "provenance": e.provenance,
                }));
            }
            Ok(render(&Value::Array(rows), pretty))
        }
        CatalogAction::Show { name } => {
            let e = cat.build(name)?;
            let file = ConfigFile::from_entry(&e);
            let v = json!({
                "name": e.name,
                "provenance": e.provenance,
                "mode": if e.is_exact() { "exact" } else { "float" },
                "signature": report::signature(e.geometry()),
                "groups": e.group_names(),
                "configuration": serde_json::to_value(&file).expect("json"),
            });
            Ok(render(&v, pretty))
        }
        CatalogAction::Export { name, path } => {
            let e = cat.build(name)?;
            let text = ConfigFile::from_entry(&e).to_json_pretty() + "\n";
            match path {
                Some(p) => {
                    fs::write(p, text).map_err(|e| io_failure(p, e))?;
                    Ok(String::new())
                }
                None => Ok(text.trim_end().to_string()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(s) if s.is_empty() => ExitCode::SUCCESS,
        Ok(s) => {
            // A closed pipe downstream is not an error.
            let _ = writeln!(std::io::stdout().lock(), "{s}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
