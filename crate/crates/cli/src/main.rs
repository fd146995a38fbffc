use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use treecross::generator::gen_raw_instance;
use treecross::io::{
    check, emit_drawing, emit_instance, parse_drawing, parse_instance, prepare, solve, Algorithm, Format, Instance,
    SolveError, SolveOptions,
};
use treecross::GenParams;

/// Crossing minimization for layered drawings of rooted forests with a fixed
/// leaf order.
#[derive(Parser)]
#[command(name = "treecross", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a minimum-crossing drawing.
    Solve {
        #[command(flatten)]
        input: SolveArgs,
        /// auto, dp2, grid3, oracle or embedding.
        #[arg(long, default_value = "auto")]
        algorithm: Algorithm,
        /// Refuse grids with more cells than this.
        #[arg(long, default_value_t = treecross::grid::DEFAULT_MAX_GRID_CELLS)]
        max_grid_cells: u128,
    },
    /// Exhaustive search over every admissible drawing (small inputs only).
    Oracle {
        #[command(flatten)]
        input: SolveArgs,
        /// Refuse inputs with more candidate drawings than this.
        #[arg(long, default_value_t = treecross::oracle::DEFAULT_MAX_DRAWINGS)]
        max_drawings: u128,
    },
    /// Write a random instance.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        trees: usize,
        #[arg(long, default_value_t = 3)]
        layers: usize,
        #[arg(long, default_value_t = 12)]
        vertices: usize,
        /// 0 keeps each tree's leaves together, 1 mixes them uniformly.
        #[arg(long, default_value_t = 0.5)]
        interleave_bias: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a drawing of an instance and count its crossings.
    Check {
        instance: PathBuf,
        drawing: PathBuf,
        #[arg(long, value_delimiter = ',')]
        fixed_root_order: Option<Vec<String>>,
    },
}

#[derive(Args)]
struct SolveArgs {
    /// Instance document; `-` reads standard input.
    #[arg(default_value = "-")]
    instance: PathBuf,
    /// json or svg.
    #[arg(long, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated layer-3 order, overriding the instance's root_order.
    #[arg(long, value_delimiter = ',')]
    fixed_root_order: Option<Vec<String>>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        Self {
            code: e.exit_code() as u8,
            message: e.to_string(),
        }
    }
}

fn invalid(message: String) -> Failure {
    Failure { code: 2, message }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(text)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| invalid(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| invalid(format!("cannot write output: {e}"))),
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    Ok(parse_instance(&read_input(path)?).map_err(SolveError::from)?)
}

fn run_solve(args: &SolveArgs, options: &SolveOptions) -> Result<(), Failure> {
    let instance = load(&args.instance)?;
    let p = prepare(&instance, args.fixed_root_order.as_deref())?;
    let (algorithm, sol) = solve(&p, options)?;
    let text = emit_drawing(&p.forest, &sol.drawing, sol.crossings, algorithm.name(), args.format);
    write_output(args.out.as_deref(), &text)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            input,
            algorithm,
            max_grid_cells,
        } => run_solve(
            &input,
            &SolveOptions {
                algorithm,
                max_grid_cells,
                ..SolveOptions::default()
            },
        ),
        Command::Oracle { input, max_drawings } => run_solve(
            &input,
            &SolveOptions {
                algorithm: Algorithm::Oracle,
                max_oracle_drawings: max_drawings,
                ..SolveOptions::default()
            },
        ),
        Command::Gen {
            seed,
            trees,
            layers,
            vertices,
            interleave_bias,
            out,
        } => {
            let params = GenParams {
                trees,
                layers,
                vertices,
                interleave_bias,
            };
            let raw = gen_raw_instance(seed, &params).map_err(|e| invalid(e.to_string()))?;
            write_output(out.as_deref(), &emit_instance(&Instance::new(raw)))
        }
        Command::Check {
            instance,
            drawing,
            fixed_root_order,
        } => {
            let p = prepare(&load(&instance)?, fixed_root_order.as_deref())?;
            let d = parse_drawing(&read_input(&drawing)?).map_err(SolveError::from)?;
            let (_, crossings) = check(&p, &d)?;
            if let Some(claimed) = d.crossings.filter(|&c| c != crossings) {
                return Err(invalid(format!(
                    "drawing claims {claimed} crossings but has {crossings}"
                )));
            }
            let report = serde_json::json!({ "valid": true, "crossings": crossings });
            write_output(None, &format!("{report}\n"))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
