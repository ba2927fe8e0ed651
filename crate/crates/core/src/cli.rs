//! Command line front end. Every command reads and writes JSON.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::exactmath::Rational;
use crate::json::{self, FanDoc, InputDoc, MatrixDoc, PuzzleDoc};
use crate::planefan::PlaneFan;
use crate::shephard::{
    coface_indices, is_strongly_polytopal, s_sigma, shephard_diagram, support_function_polytopal,
    SimplicialFan,
};
use crate::wedgepuzzle::{
    assemble_matrix, check_nonsingular, enumerate_puzzles, fan_at, validate_puzzle, CharMatrix,
    WedgeComplex, WedgeSignature,
};

pub const EXIT_PROJECTIVE: u8 = 0;
pub const EXIT_NOT_POLYTOPAL: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_DISAGREEMENT: u8 = 3;

/// Environment variable overriding the worker count.
pub const WORKERS_VAR: &str = "TORICWEDGE_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "toricwedge", version, about = "Toric manifolds over wedged polygons")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify a fan, characteristic matrix or puzzle with both oracles
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate puzzles over P_m(J) and certify every class
    Classify {
        #[arg(long)]
        m: usize,
        /// multiplicities j_1,...,j_m
        #[arg(long, value_delimiter = ',')]
        j: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        base_depth: usize,
        #[arg(long, default_value_t = 3)]
        e_bound: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Blow a plane fan down to CP^2 or a Hirzebruch surface
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a Shephard diagram with its cofaces and S(Σ̂)
    Shephard {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A command's JSON result and exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub document: Value,
    pub code: u8,
}

/// Errors that map to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] json::JsonError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

fn input_error(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Reads the worker count from the environment; `None` when unset.
pub fn workers_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(WORKERS_VAR) {
        Err(_) => Ok(None),
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!(
                "{WORKERS_VAR} must be a positive integer, got {text:?}"
            ))),
        },
    }
}

fn read_input(path: &Path) -> Result<InputDoc, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(InputDoc::parse(&text)?)
}

/// A validated input turned into a simplicial fan.
struct Prepared {
    kind: &'static str,
    fan: SimplicialFan,
}

fn matrix_fan(m: &CharMatrix) -> Result<SimplicialFan, CliError> {
    let sig = m.signature().map_err(input_error)?;
    let k = WedgeComplex::build(&sig);
    if !check_nonsingular(m, &k).map_err(input_error)? {
        return Err(CliError::Input(
            "some facet selects a minor with determinant other than ±1".into(),
        ));
    }
    // a non-singular matrix over P_m(J) is a fan iff every fan_at is one
    for alpha in sig.grid_vertices() {
        fan_at(m, &alpha).map_err(|e| CliError::Input(format!("fan at {alpha:?}: {e}")))?;
    }
    SimplicialFan::from_char_matrix(m, &k).map_err(input_error)
}

fn prepare(doc: &InputDoc) -> Result<Prepared, CliError> {
    let fan = match doc {
        InputDoc::Fan(f) => SimplicialFan::from_plane_fan(&f.to_fan()?),
        InputDoc::Matrix(m) => matrix_fan(&m.to_matrix()?)?,
        InputDoc::Puzzle(p) => {
            let puzzle = p.to_puzzle()?;
            if !validate_puzzle(&puzzle) {
                return Err(CliError::Input("puzzle has a non-realizable square".into()));
            }
            matrix_fan(&assemble_matrix(&puzzle).map_err(input_error)?)?
        }
    };
    Ok(Prepared {
        kind: doc.kind(),
        fan,
    })
}

/// Runs both oracles; returns the certificate document and exit code.
fn certify(fan: &SimplicialFan) -> Result<Outcome, CliError> {
    let (a, shephard) = is_strongly_polytopal(fan).map_err(input_error)?;
    let (b, support) = support_function_polytopal(fan).map_err(input_error)?;
    let (verdict, code) = match (a, b) {
        (true, true) => ("projective", EXIT_PROJECTIVE),
        (false, false) => ("not_strongly_polytopal", EXIT_NOT_POLYTOPAL),
        _ => ("oracle_disagreement", EXIT_DISAGREEMENT),
    };
    Ok(Outcome {
        document: json!({
            "verdict": verdict,
            "oracles_agree": a == b,
            "shephard": json::certificate(&shephard),
            "support_function": json::certificate(&support),
        }),
        code,
    })
}

pub fn cmd_check(doc: &InputDoc) -> Result<Outcome, CliError> {
    let prepared = prepare(doc)?;
    let mut out = certify(&prepared.fan)?;
    out.document["input"] = json!(prepared.kind);
    out.document["dimension"] = json!(prepared.fan.dim());
    out.document["rays"] = json!(prepared.fan.labels().len());
    Ok(out)
}

pub fn cmd_classify(
    m: usize,
    j: &[usize],
    base_depth: usize,
    e_bound: u32,
) -> Result<Outcome, CliError> {
    if m < 3 {
        return Err(CliError::Config(format!("m must be at least 3, got {m}")));
    }
    if j.len() != m {
        return Err(CliError::Config(format!(
            "J has {} entries, expected m = {m}",
            j.len()
        )));
    }
    let sig = WedgeSignature::new(j.to_vec()).map_err(|e| CliError::Config(e.to_string()))?;
    let complex = WedgeComplex::build(&sig);
    let puzzles = enumerate_puzzles(&sig, base_depth, e_bound);
    let records: Vec<(Value, u8)> = puzzles
        .par_iter()
        .map(|p| {
            let matrix = assemble_matrix(p).expect("enumerated puzzles are valid");
            let fan = SimplicialFan::from_char_matrix(&matrix, &complex).expect("labels match");
            let outcome = certify(&fan).expect("assembled matrices are non-singular");
            let record = json!({
                "puzzle": PuzzleDoc::from_puzzle(p),
                "matrix": MatrixDoc::from_matrix(&matrix),
                "verdict": outcome.document["verdict"],
                "certificate": outcome.document,
            });
            (record, outcome.code)
        })
        .collect();
    let classes = records.len();
    let count = |c: u8| records.iter().filter(|r| r.1 == c).count();
    let projective = count(EXIT_PROJECTIVE);
    let disagreements = count(EXIT_DISAGREEMENT);
    let code = if disagreements > 0 {
        EXIT_DISAGREEMENT
    } else if projective < classes {
        EXIT_NOT_POLYTOPAL
    } else {
        EXIT_PROJECTIVE
    };
    let fraction = (classes > 0).then(|| {
        json::rational(&(Rational::from(projective) / Rational::from(classes)))
    });
    let summary = json!({
        "m": m,
        "J": j,
        "base_depth": base_depth,
        "e_bound": e_bound,
        "classes": classes,
        "projective": projective,
        "not_strongly_polytopal": count(EXIT_NOT_POLYTOPAL),
        "disagreements": disagreements,
        "fraction_projective": fraction,
    });
    Ok(Outcome {
        document: json!({
            "summary": summary,
            "classes": records.into_iter().map(|r| r.0).collect::<Vec<_>>(),
        }),
        code,
    })
}

pub fn cmd_reduce(doc: &InputDoc) -> Result<Outcome, CliError> {
    let fan: PlaneFan = match doc {
        InputDoc::Fan(f) => f.to_fan()?,
        InputDoc::Matrix(m) => m.to_matrix()?.to_plane_fan().map_err(input_error)?,
        InputDoc::Puzzle(_) => {
            return Err(CliError::Input("reduce expects a plane fan".into()));
        }
    };
    let reduction = fan.reduce_to_base();
    let mut steps = Vec::with_capacity(reduction.trace.len());
    let mut current = fan.clone();
    for &position in &reduction.trace {
        current = current.blow_down(position).expect("trace positions are valid");
        steps.push(json!({
            "blow_down": position,
            "fan": FanDoc::from_fan(&current),
        }));
    }
    Ok(Outcome {
        document: json!({
            "input": FanDoc::from_fan(&fan),
            "trace": reduction.trace,
            "steps": steps,
            "base": FanDoc::from_fan(&reduction.base),
            "surface": reduction.base.base_surface(),
        }),
        code: EXIT_PROJECTIVE,
    })
}

pub fn cmd_shephard(doc: &InputDoc) -> Result<Outcome, CliError> {
    let prepared = prepare(doc)?;
    let fan = &prepared.fan;
    let diagram = shephard_diagram(fan).map_err(input_error)?;
    let cofaces: Vec<Value> = fan
        .facets()
        .iter()
        .map(|cone| {
            let idx = coface_indices(&diagram, cone).expect("facet labels are known");
            json!({
                "cone": cone.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "coface": idx.iter().map(|&k| diagram.labels[k].to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let cert = s_sigma(&diagram, fan.facets()).map_err(input_error)?;
    Ok(Outcome {
        document: json!({
            "input": prepared.kind,
            "dimension": fan.dim(),
            "diagram": json::diagram(&diagram),
            "cofaces": cofaces,
            "s_sigma": json::certificate(&cert),
        }),
        code: EXIT_PROJECTIVE,
    })
}

fn emit(outcome: &Outcome, out: Option<&Path>) -> Result<(), CliError> {
    let text = json::to_text(&outcome.document);
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(command: &Command) -> Result<u8, CliError> {
    let (outcome, out) = match command {
        Command::Check { input, out } => (cmd_check(&read_input(input)?)?, out),
        Command::Classify {
            m,
            j,
            base_depth,
            e_bound,
            out,
        } => {
            let outcome = cmd_classify(*m, j, *base_depth, *e_bound)?;
            eprintln!("{}", outcome.document["summary"]);
            (outcome, out)
        }
        Command::Reduce { input, out } => (cmd_reduce(&read_input(input)?)?, out),
        Command::Shephard { input, out } => (cmd_shephard(&read_input(input)?)?, out),
    };
    emit(&outcome, out.as_deref())?;
    Ok(outcome.code)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> u8 {
    let result = workers_from_env().and_then(|workers| {
        if let Some(n) = workers {
            // a pool may already exist when called repeatedly in one process
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        execute(&cli.command)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}
