//! Command-line front end: reads curve configuration files, runs one
//! analysis per subcommand and writes a JSON report (or an SVG plot).
//!
//! Exit codes: 0 success, 1 verified negative, 2 input error, 3 budget
//! exceeded, 4 internal invariant violation.

pub mod commands;
pub mod config;
pub mod error;
pub mod fixtures;
pub mod ingest;
pub mod plot;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use hypertan::search3c::{hyp_search, SearchOptions};
use hypertan::Budget;

use commands::{Ctx, Outcome};
use config::{parse_field_flag, CurveConfigFile, Workspace};
use error::{CliError, CliResult};
use report::{Encoder, ReportFile, REPORT_SCHEMA};

#[derive(Parser, Debug)]
#[command(name = "hypertan", version, about = "Exact analysis of plane curve singularities and hyper-bitangent curves")]
pub struct Cli {
    /// Curve configuration file (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Working field: `rational` or `name=minpoly`, e.g. `w=w^2+w+1`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Degree budget for factorisation and field towers.
    #[arg(long = "budget-degree", global = true)]
    pub budget_degree: Option<usize>,
    /// Seed for randomized choices (frame scaling, sampling).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Multiplicity, branches, delta and (m,n)-type at a point.
    AnalyzePoint {
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Intersection points with multiplicities, or the local multiplicity at --point.
    Intersect {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        with: String,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Delta invariant at a point.
    Delta {
        #[arg(long)]
        curve: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Singular points and geometric genus.
    Genus {
        #[arg(long)]
        curve: String,
    },
    /// Flexes via the Hessian.
    Flexes {
        #[arg(long)]
        curve: String,
    },
    /// Checks the singularity predicted at a point where a curve meets the base in one branch.
    MirrorCheck {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        base: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Validates the configuration: integral components meeting in nodes.
    #[command(name = "validate-3c")]
    Validate3c,
    /// Hyper-bitangent lines.
    HypLines,
    /// Hyper-bitangent curves of every degree the theory allows.
    HypSearch {
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Configurations with four or more components.
    MultiCheck {
        #[arg(long)]
        degree: Option<u32>,
    },
    /// The pencil of degree-d curves for a triangle of lines.
    TrianglePencil {
        #[arg(long)]
        degree: u32,
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Re-runs the fixture manifest and compares against the snapshots.
    VerifyFixtures {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
        /// Rewrite the snapshots instead of comparing.
        #[arg(long)]
        bless: bool,
    },
    /// SVG plot of the real affine traces.
    Plot {
        /// `x0,x1,y0,y1` in the chart's affine coordinates.
        #[arg(long, allow_hyphen_values = true)]
        viewport: Option<String>,
        #[arg(long, default_value_t = 400)]
        resolution: usize,
        /// Coordinate set to 1: x, y or z.
        #[arg(long)]
        chart: Option<String>,
        /// Do not overlay search results.
        #[arg(long)]
        no_search: bool,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone)]
pub struct Execution {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<ReportFile>,
}

/// Runs the command line `args` (without the program name). Relative
/// `--config` paths are resolved against `base` when given.
pub fn run_in<S: AsRef<str>>(args: &[S], base: Option<&Path>) -> Execution {
    let args: Vec<String> = args.iter().map(|s| s.as_ref().to_string()).collect();
    let cli = match Cli::try_parse_from(std::iter::once("hypertan".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Execution { exit_code: 0, stdout: text, stderr: String::new(), report: None }
            } else {
                Execution { exit_code: 2, stdout: String::new(), stderr: text, report: None }
            };
        }
    };
    let exec = dispatch(&cli, &args, base);
    if let Some(out) = &cli.out {
        let path = match base {
            Some(b) if out.is_relative() => b.join(out),
            _ => out.clone(),
        };
        if let Err(e) = std::fs::write(&path, &exec.stdout) {
            return Execution {
                exit_code: 2,
                stdout: String::new(),
                stderr: format!("cannot write {}: {e}\n", path.display()),
                report: exec.report,
            };
        }
        return Execution { stdout: String::new(), ..exec };
    }
    exec
}

pub fn run<S: AsRef<str>>(args: &[S]) -> Execution {
    run_in(args, None)
}

fn budget_of(cli: &Cli) -> Budget {
    match cli.budget_degree {
        Some(n) => Budget { factor_degree: n, field_degree: n },
        None => Budget::default(),
    }
}

fn workspace(cli: &Cli, base: Option<&Path>, budget: &Budget) -> CliResult<Workspace> {
    let field = cli.field.as_deref().map(parse_field_flag).transpose()?;
    let file = match &cli.config {
        Some(p) => {
            let path = match base {
                Some(b) if p.is_relative() => b.join(p),
                _ => p.clone(),
            };
            CurveConfigFile::load(&path)?
        }
        None => CurveConfigFile::from_json(r#"{"curves": {}}"#)?,
    };
    file.build(field.as_ref(), budget)
}

fn dispatch(cli: &Cli, args: &[String], base: Option<&Path>) -> Execution {
    match &cli.command {
        Command::VerifyFixtures { dir, bless } => {
            let dir = match base {
                Some(b) if dir.is_relative() => b.join(dir),
                _ => dir.clone(),
            };
            return finish(args, fixtures::verify(&dir, *bless), Encoder::new());
        }
        Command::Plot { viewport, resolution, chart, no_search } => {
            return plot_cmd(cli, base, viewport.as_deref(), *resolution, chart.as_deref(), *no_search);
        }
        _ => {}
    }
    let budget = budget_of(cli);
    let ws = match workspace(cli, base, &budget) {
        Ok(ws) => ws,
        Err(e) => return finish(args, Err(e), Encoder::new()),
    };
    let mut ctx = Ctx { ws, budget, seed: cli.seed, enc: Encoder::new() };
    let out = match &cli.command {
        Command::AnalyzePoint { curve, point } => commands::analyze_point(&mut ctx, curve, point),
        Command::Intersect { curve, with, point } => commands::intersect(&mut ctx, curve, with, point.as_deref()),
        Command::Delta { curve, point } => commands::delta(&mut ctx, curve, point),
        Command::Genus { curve } => commands::genus(&mut ctx, curve),
        Command::Flexes { curve } => commands::flexes_cmd(&mut ctx, curve),
        Command::MirrorCheck { curve, base, point } => commands::mirror(&mut ctx, curve, base, point),
        Command::Validate3c => commands::validate(&mut ctx),
        Command::HypLines => commands::hyp_lines_cmd(&mut ctx),
        Command::HypSearch { degree } => commands::hyp_search_cmd(&mut ctx, *degree),
        Command::MultiCheck { degree } => commands::multi_check(&mut ctx, *degree),
        Command::TrianglePencil { degree, samples } => commands::triangle_cmd(&mut ctx, *degree, *samples),
        Command::VerifyFixtures { .. } | Command::Plot { .. } => unreachable!(),
    };
    finish(args, out, ctx.enc)
}

fn finish(args: &[String], out: CliResult<Outcome>, enc: Encoder) -> Execution {
    let report = match out {
        Ok(o) => {
            let code = if o.negative { 1 } else { 0 };
            ReportFile {
                schema_version: REPORT_SCHEMA,
                command: args.to_vec(),
                status: if o.negative { "negative" } else { "ok" }.into(),
                exit_code: code,
                summary: o.summary,
                fields: enc.field_entries(),
                result: o.result,
            }
        }
        Err(e) => ReportFile::error(args.to_vec(), &e),
    };
    let stderr = if report.exit_code >= 2 { format!("{}\n", report.summary.join("\n")) } else { String::new() };
    Execution { exit_code: report.exit_code, stdout: report.to_json(), stderr, report: Some(report) }
}

fn plot_cmd(
    cli: &Cli,
    base: Option<&Path>,
    viewport: Option<&str>,
    resolution: usize,
    chart: Option<&str>,
    no_search: bool,
) -> Execution {
    let fail = |e: CliError| Execution {
        exit_code: e.exit_code(),
        stdout: String::new(),
        stderr: format!("{e}\n"),
        report: None,
    };
    let budget = budget_of(cli);
    let ws = match workspace(cli, base, &budget) {
        Ok(ws) => ws,
        Err(e) => return fail(e),
    };
    let vp = match viewport {
        Some(s) => plot::Viewport::parse(s),
        None => plot::Viewport::new(ws.plot.as_ref().and_then(|p| p.viewport).unwrap_or(plot::DEFAULT_VIEWPORT)),
    };
    let vp = match vp {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let chart = match chart.or(ws.plot.as_ref().and_then(|p| p.chart.as_deref())).map(plot::Chart::parse) {
        Some(Ok(c)) => c,
        Some(Err(e)) => return fail(e),
        None => plot::Chart::Z,
    };
    let curves = match plot_curves(&ws, &budget, cli.seed, no_search) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match plot::render(&curves, chart, &vp, resolution) {
        Ok((svg, warnings)) => Execution {
            exit_code: 0,
            stdout: svg,
            stderr: warnings.iter().map(|w| format!("warning: {w}\n")).collect(),
            report: None,
        },
        Err(e) => fail(e),
    }
}

fn plot_curves(ws: &Workspace, budget: &Budget, seed: u64, no_search: bool) -> CliResult<Vec<plot::PlotCurve>> {
    let names: Vec<String> = match &ws.components {
        Some(n) => n.clone(),
        None => ws.curves.keys().cloned().collect(),
    };
    let mut out = Vec::new();
    for n in &names {
        let c = ws.curve(n)?;
        out.push(plot::PlotCurve { name: n.clone(), class: "base", form: hypertan::projplane::orbit_form(c).0 });
    }
    if !no_search && ws.components.as_ref().map_or(false, |c| c.len() >= 3) {
        let comps = ws.component_curves()?;
        let res = hyp_search(&comps, &SearchOptions { degree: None, frame_seed: seed, budget: budget.clone() })?;
        for (i, c) in res.certificates().iter().enumerate() {
            out.push(plot::PlotCurve { name: format!("found{}", i + 1), class: "found", form: c.orbit.clone() });
        }
    }
    Ok(out)
}
