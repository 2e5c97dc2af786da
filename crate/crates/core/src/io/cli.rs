//! The `vassck` command line.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::report::{Inputs, Report};
use super::text::{parse_configuration, parse_gup, parse_model, ModelFile};
use crate::analyses::{self, AnalysisError, Answer, Method, Options, Verdict};
use crate::coverability::build_km_vass;
use crate::model::{Configuration, Vass};
use crate::properties::GupProperty;
use crate::reductions::{promptness_reduction, PromptnessInstance, RbProduct};

#[derive(Debug, Parser)]
#[command(name = "vassck", version, about = "Unboundedness-style analyses of vector addition systems with states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide one property of a model.
    Check {
        #[command(subcommand)]
        problem: Problem,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Subcommand)]
enum Problem {
    /// Is the reachability set finite?
    Bounded,
    /// Is component I bounded?
    Place {
        #[arg(long = "i")]
        i: usize,
    },
    /// Are the components X simultaneously unbounded?
    Simul {
        /// Comma-separated 1-based components.
        #[arg(long = "x", value_delimiter = ',', required = true)]
        x: Vec<usize>,
    },
    /// Is every run finite?
    Terminates,
    /// Is component I reversal-bounded?
    Rb {
        #[arg(long = "i")]
        i: usize,
    },
    /// Is component I weakly reversal-bounded?
    WeakRb {
        #[arg(long = "i")]
        i: usize,
    },
    /// Is the system regular (no raising loop followed by a lowering loop)?
    Regular,
    /// Is the system strongly prompt for the `internal` transitions?
    Prompt,
    /// Does some run satisfy the property in FILE?
    Gup {
        #[arg(long)]
        property: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Km,
    Search,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, global = true)]
    model: Option<PathBuf>,
    /// Initial configuration `"q v1 … vn"`; overrides the model file.
    #[arg(long, global = true)]
    init: Option<String>,
    #[arg(long, value_enum, default_value = "km", global = true)]
    method: MethodArg,
    #[arg(long = "depth-cap", default_value_t = 10_000, global = true)]
    depth_cap: usize,
    #[arg(long = "km-cap", default_value_t = 1_000_000, global = true)]
    km_cap: usize,
    #[arg(long = "state-cap", default_value_t = 2_000_000, global = true)]
    state_cap: usize,
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Write the coverability tree used by the analysis as DOT.
    #[arg(long = "emit-km", global = true)]
    emit_km: Option<PathBuf>,
    #[arg(long = "show-bounds", global = true)]
    show_bounds: bool,
    #[arg(long, default_value_t = 2, global = true)]
    c1: u32,
    #[arg(long, default_value_t = 3, global = true)]
    c: u32,
}

/// Exit code for a definite verdict.
pub const EXIT_DEFINITE: i32 = 0;
/// Exit code for a usage or input error.
pub const EXIT_ERROR: i32 = 1;
/// Exit code for an unknown verdict.
pub const EXIT_UNKNOWN: i32 = 2;

/// Runs the command line on `args` (including the program name).
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_DEFINITE };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    let Command::Check { problem, common } = cli.command;
    match check(&problem, &common, err) {
        Ok(report) => {
            let rendered = match common.format {
                Format::Json => report.to_json() + "\n",
                Format::Text => report.to_text(),
            };
            let _ = write!(out, "{rendered}");
            if report.verdict == Answer::Unknown {
                EXIT_UNKNOWN
            } else {
                EXIT_DEFINITE
            }
        }
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn component(i: usize, dim: usize) -> Result<usize, String> {
    if i == 0 || i > dim {
        return Err(format!("component {i} out of range 1..={dim}"));
    }
    Ok(i - 1)
}

fn check(problem: &Problem, common: &Common, err: &mut dyn Write) -> Result<Report, String> {
    let model_path = common
        .model
        .as_ref()
        .ok_or_else(|| "--model is required".to_string())?;
    let file = parse_model(&read(model_path)?).map_err(|e| format!("{}: {e}", model_path.display()))?;
    let v = &file.vass;
    let init = match &common.init {
        Some(text) => parse_configuration(v, text).map_err(|e| format!("--init: {e}"))?,
        None => file
            .init
            .clone()
            .ok_or_else(|| "no initial configuration: add an `init` line or pass --init".to_string())?,
    };
    let opts = Options {
        method: match common.method {
            MethodArg::Km => Method::Km,
            MethodArg::Search => Method::Search,
            MethodArg::Both => Method::Both,
        },
        depth_cap: common.depth_cap,
        km_cap: common.km_cap,
        state_cap: common.state_cap,
        c1: common.c1,
        c: common.c,
        show_bounds: common.show_bounds,
    };
    let mut inputs = Inputs {
        model: model_path.display().to_string(),
        init: format_init(v, &init),
        components: Vec::new(),
        property: None,
    };
    let start = Instant::now();
    let (name, verdict) = match problem {
        Problem::Bounded => ("bounded", analyses::bounded(v, &init, &opts)),
        Problem::Place { i } => {
            inputs.components = vec![*i];
            ("place", analyses::place_bounded(v, &init, component(*i, v.dim())?, &opts))
        }
        Problem::Simul { x } => {
            let set = x
                .iter()
                .map(|&i| component(i, v.dim()))
                .collect::<Result<BTreeSet<_>, _>>()?;
            inputs.components = set.iter().map(|j| j + 1).collect();
            ("simul", analyses::simultaneously_unbounded(v, &init, &set, &opts))
        }
        Problem::Terminates => ("terminates", analyses::terminates(v, &init, &opts)),
        Problem::Rb { i } => {
            inputs.components = vec![*i];
            ("rb", analyses::reversal_bounded(v, &init, component(*i, v.dim())?, &opts))
        }
        Problem::WeakRb { i } => {
            inputs.components = vec![*i];
            (
                "weak-rb",
                analyses::weakly_reversal_bounded(v, &init, component(*i, v.dim())?, &opts),
            )
        }
        Problem::Regular => (
            "regular",
            analyses::nonregular(v, &init, &opts).map(Verdict::negated),
        ),
        Problem::Prompt => {
            let p = prompt_instance(&file)?;
            ("prompt", analyses::strongly_prompt(&p, &init, &opts))
        }
        Problem::Gup { property } => {
            let p: GupProperty = parse_gup(&read(property)?).map_err(|e| format!("{}: {e}", property.display()))?;
            inputs.property = Some(property.display().to_string());
            ("gup", analyses::gup_holds(v, &init, &p, &opts))
        }
    };
    let verdict = verdict.map_err(|e: AnalysisError| e.to_string())?;
    let elapsed = start.elapsed();
    if let Some(path) = &common.emit_km {
        match km_dot(problem, &file, &init, opts.km_cap) {
            Ok(dot) => std::fs::write(path, dot).map_err(|e| format!("{}: {e}", path.display()))?,
            Err(msg) => {
                let _ = writeln!(err, "warning: no tree written: {msg}");
            }
        }
    }
    let mut report = Report::new(name, inputs, &verdict, v, &opts);
    report.wall_time_ms = elapsed.as_secs_f64() * 1000.0;
    Ok(report)
}

fn format_init(v: &Vass, c: &Configuration) -> String {
    let mut s = v.state_name(c.state()).to_string();
    for x in c.values() {
        s.push(' ');
        s.push_str(&x.to_string());
    }
    s
}

fn prompt_instance(file: &ModelFile) -> Result<PromptnessInstance, String> {
    let internal = file.internal.clone().unwrap_or_default();
    PromptnessInstance::new(file.vass.clone(), internal).map_err(|e| e.to_string())
}

/// DOT text of the tree the analysis of `problem` is based on.
fn km_dot(problem: &Problem, file: &ModelFile, init: &Configuration, cap: usize) -> Result<String, String> {
    let v = &file.vass;
    let (model, start) = match problem {
        Problem::Rb { .. } | Problem::WeakRb { .. } => {
            let rb = RbProduct::new(v);
            let lifted = rb.lift(init);
            let (product, q0, _) = rb.materialize_from(init.state());
            let start = Configuration::new(q0, lifted.values).map_err(|e| e.to_string())?;
            (product, start)
        }
        Problem::Prompt => {
            let img = promptness_reduction(&prompt_instance(file)?, init);
            (img.model, img.init)
        }
        _ => (v.clone(), init.clone()),
    };
    let tree = build_km_vass(&model, start.state(), start.values(), cap).map_err(|e| e.to_string())?;
    Ok(tree.to_dot(&model))
}
