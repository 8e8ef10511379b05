//! Command-line front end. Parsing and dispatch live here so the binary, the
//! integration tests and the C bindings share one entry point.
//!
//! Exit codes: `0` success, `1` malformed input, `2` violated precondition
//! (including a failed self-check in `paper-examples`).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bott::{eagon_northcott_resolution, h1_vanishing_chase, koszul_resolution, Resolution};
use crate::error::{Error, Result};
use crate::monodromy::{ic_stalk_with_sign, perverse_filtration, validate, MonodromyData, PlSign};
use crate::points::{
    conditions_report, grid_nodes, node_count_quadrics, node_span_dim, normal_crossing_check,
    ProjectivePointSet,
};
use crate::reports::{paper_examples, PaperExamplesConfig};

#[derive(Debug, Parser)]
#[command(name = "nodal-ic", version, about = "Exact IC stalks, independent conditions and vanishing chases")]
pub struct CommandRequest {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutputFlags {
    /// Emit JSON instead of a table.
    #[arg(long)]
    pub json: bool,
    /// Write the report to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stalk cohomology of the IC complex from monodromy data.
    IcStalk {
        #[arg(long)]
        input: PathBuf,
        /// Picard-Lefschetz sign, +1 or -1.
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        sign: String,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Conditions imposed by a point set on degree-d forms.
    Points {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        degree: u32,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// h^1 vanishing chase along a resolution read from JSON.
    Chase {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        twist: i64,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Koszul resolution of a complete intersection, optionally chased.
    Koszul {
        #[arg(long)]
        n: u64,
        /// Comma-separated form degrees.
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<u64>,
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i64>,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Eagon-Northcott resolution of the node set of a quadric section.
    EagonNorthcott {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        quadrics: u64,
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<i64>,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// The (k-1)^n grid node set, optionally with its conditions report.
    Grid {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        degree: Option<u32>,
        #[command(flatten)]
        output: OutputFlags,
    },
    /// Reproduce the Koszul and Eagon-Northcott vanishing tables.
    PaperExamples {
        #[arg(long, default_value_t = 6)]
        max_n: u64,
        #[arg(long, default_value_t = 8)]
        max_k: u64,
        #[arg(long, default_value_t = 6)]
        max_h: u64,
        /// Largest grid, in points, checked by exact evaluation rank.
        #[arg(long, default_value_t = 300)]
        grid_cap: u64,
        #[command(flatten)]
        output: OutputFlags,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn err(e: &Error) -> Self {
        Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let req = match CommandRequest::try_parse_from(args) {
        Ok(r) => r,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match execute(&req) {
        Ok(o) => o,
        Err(e) => Outcome::err(&e),
    }
}

fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

/// Renders either JSON or the table, then routes it to stdout or `--out`.
fn emit<T: Serialize>(value: &T, table: String, output: &OutputFlags) -> Result<Outcome> {
    let mut text = if output.json {
        serde_json::to_string_pretty(value)?
    } else {
        table
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &output.out {
        None => Ok(Outcome::ok(text)),
        Some(path) => {
            fs::write(path, &text)
                .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
            Ok(Outcome {
                code: 0,
                stdout: String::new(),
                stderr: format!("wrote {}\n", path.display()),
            })
        }
    }
}

#[derive(Serialize)]
struct ResolutionReport {
    resolution: Resolution,
    #[serde(skip_serializing_if = "Option::is_none")]
    node_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    chase: Option<crate::bott::ChaseVerdict>,
}

fn resolution_table(r: &ResolutionReport) -> String {
    let mut s = format!("resolution: {}\n", r.resolution);
    for (i, t) in r.resolution.terms.iter().enumerate() {
        s.push_str(&format!("  C_{} = {t}\n", i + 1));
    }
    if let Some(n) = r.node_count {
        s.push_str(&format!("nodes: {n}\n"));
    }
    if let Some(c) = &r.chase {
        s.push_str(&c.to_string());
    }
    s
}

#[derive(Serialize)]
struct GridReport {
    #[serde(flatten)]
    points: ProjectivePointSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    conditions: Option<crate::points::ConditionsReport>,
}

fn execute(req: &CommandRequest) -> Result<Outcome> {
    match &req.command {
        Command::IcStalk { input, sign, output } => {
            let sign: PlSign = sign.parse()?;
            let data = MonodromyData::from_json(&read_input(input)?)?;
            let diagnostics = validate(&data);
            let report = ic_stalk_with_sign(&data, sign)?;
            let filtration = perverse_filtration(&report);
            let mut table = report.to_string();
            table.push_str(&format!(
                "{:<20} {} / {} / {} (total {})\n",
                "perverse pieces",
                filtration.below,
                filtration.level0,
                filtration.level1,
                filtration.total
            ));
            for c in &diagnostics.checks {
                table.push_str(&format!("check: {:<28} {}\n", c.name, if c.passed { "ok" } else { "FAILED" }));
            }
            emit(&report, table, output)
        }
        Command::Points { input, degree, output } => {
            let pts = ProjectivePointSet::from_json(&read_input(input)?)?;
            let report = conditions_report(&pts, *degree)?;
            let nc = normal_crossing_check(&pts);
            let mut table = report.to_string();
            table.push_str(&format!("{:<20} {}\n", "span dim", node_span_dim(&pts)));
            table.push_str(&format!(
                "{:<20} {}\n",
                "linearly independent", nc.independent_branches
            ));
            emit(&report, table, output)
        }
        Command::Chase { input, twist, output } => {
            let res = Resolution::from_json(&read_input(input)?)?;
            let verdict = h1_vanishing_chase(&res, *twist)?;
            let table = format!("resolution: {res}\n{verdict}");
            emit(&verdict, table, output)
        }
        Command::Koszul { n, degrees, twist, output } => {
            let resolution = koszul_resolution(*n, degrees)?;
            let chase = twist.map(|t| h1_vanishing_chase(&resolution, t)).transpose()?;
            let report = ResolutionReport {
                resolution,
                node_count: None,
                chase,
            };
            emit(&report, resolution_table(&report), output)
        }
        Command::EagonNorthcott { n, quadrics, twist, output } => {
            let resolution = eagon_northcott_resolution(*n, *quadrics)?;
            let chase = twist.map(|t| h1_vanishing_chase(&resolution, t)).transpose()?;
            let report = ResolutionReport {
                resolution,
                node_count: Some(node_count_quadrics(*n, *quadrics)?),
                chase,
            };
            emit(&report, resolution_table(&report), output)
        }
        Command::Grid { n, k, degree, output } => {
            let points = grid_nodes(*n, *k, None)?;
            let conditions = degree.map(|d| conditions_report(&points, d)).transpose()?;
            let mut table = format!("{} grid points in P^{n}\n", points.len());
            for p in points.points() {
                let coords: Vec<String> = p.iter().map(ToString::to_string).collect();
                table.push_str(&format!("  ({})\n", coords.join(" : ")));
            }
            if let Some(c) = &conditions {
                table.push_str(&c.to_string());
            }
            // without --degree the JSON is a plain point-set document
            let report = GridReport { points, conditions };
            emit(&report, table, output)
        }
        Command::PaperExamples {
            max_n,
            max_k,
            max_h,
            grid_cap,
            output,
        } => {
            let cfg = PaperExamplesConfig {
                max_n: *max_n,
                max_k: *max_k,
                max_h: *max_h,
                grid_cap: *grid_cap,
            };
            let report = paper_examples(cfg)?;
            let mut outcome = emit(&report, report.to_string(), output)?;
            if !report.verified() {
                outcome.code = 2;
                outcome.stderr.push_str(&format!(
                    "error: precondition violated: {} cell(s) deviate from the reference verdicts\n",
                    report.deviations.len()
                ));
            }
            Ok(outcome)
        }
    }
}
