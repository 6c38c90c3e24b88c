mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use tropfactor::descent::SegmentDecomposer;
use tropfactor::geometry::{minkowski_diff, minkowski_sum, Direction, LatticeBody};
use tropfactor::maxplus::{factorize, factorize_difference, flatten, MaxPlusFactorization};
use tropfactor::partition::unimodular_triangulation;
use tropfactor::pipeline::{decompose_with, DecompositionReport, VerifyMode};
use tropfactor::svg::render_svg;

use input::{parse_point_list, read_batch, read_body, read_expression, read_normal_form, read_source};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input (exit 2).
    Input(String),
    /// The computation ran but a check failed (exit 1).
    Verification(String),
}

impl From<tropfactor::Error> for CliError {
    fn from(e: tropfactor::Error) -> Self {
        match e {
            tropfactor::Error::InvariantViolated(_) => CliError::Verification(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

type CliResult = Result<(), CliError>;

const EXPR_HELP: &str = "\
Expressions: sums and differences of terms, where a term is an optional
positive integer factor times max(e1, e2, ...), a parenthesised expression,
or a linear form such as 2x-y. `2x` means `2*x`. Constants other than 0
(tropical coefficients) are not supported.";

#[derive(Parser)]
#[command(name = "tropfactor", version, about = "Signed Minkowski decomposition of lattice polygons and max-plus factorization")]
#[command(after_help = EXPR_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convex hull of a point set.
    Hull {
        /// Points as "x,y x,y ...", body JSON, a file, or - for stdin.
        #[arg(allow_hyphen_values = true)]
        points: String,
        #[arg(long)]
        json: bool,
    },
    /// Minkowski sum of two bodies.
    Sum {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        json: bool,
    },
    /// Minkowski difference A − B; exits 1 if it does not exist.
    Diff {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        json: bool,
    },
    /// Decompose a body into unit segments and unit triangles.
    Decompose {
        /// Body JSON, inline point list, file, or - for stdin.
        #[arg(required_unless_present = "batch", allow_hyphen_values = true)]
        body: Option<String>,
        #[arg(long)]
        json: bool,
        /// Also write an SVG figure to this path.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[arg(long, value_name = "MODE", default_value = "full")]
        verify: VerifyMode,
        /// Print coefficient statistics.
        #[arg(long)]
        stats: bool,
        /// File with one body per line, decomposed in parallel.
        #[arg(long, value_name = "FILE", conflicts_with_all = ["body", "svg"])]
        batch: Option<String>,
    },
    /// Decompose the segment between two lattice points.
    DecomposeSegment {
        /// "x1,y1 x2,y2"
        #[arg(allow_hyphen_values = true)]
        segment: String,
        /// Also print the human-readable term list.
        #[arg(long)]
        terms: bool,
    },
    /// Unimodular triangulation of a polygon as partition JSON.
    Triangulate {
        #[arg(allow_hyphen_values = true)]
        body: String,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Factorize a max-plus expression into prime atoms.
    #[command(after_help = EXPR_HELP)]
    Factorize {
        #[arg(allow_hyphen_values = true)]
        expression: String,
        #[arg(long)]
        json: bool,
        /// Number of random integer probes used to check the result.
        #[arg(long, default_value_t = 100)]
        probes: usize,
        #[arg(long, env = "TROPFACTOR_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate a max-plus expression at an integer point.
    #[command(after_help = EXPR_HELP)]
    Eval {
        #[arg(allow_hyphen_values = true)]
        expression: String,
        #[arg(long, value_name = "X,Y", allow_hyphen_values = true)]
        at: String,
    },
    /// Check a normal form against a target body.
    Verify {
        #[arg(long)]
        target: String,
        #[arg(long)]
        nf: String,
        #[arg(long, default_value = "full")]
        mode: VerifyMode,
    },
    /// Write the SVG figure of a decomposition.
    Render {
        #[arg(allow_hyphen_values = true)]
        body: String,
        /// Output path; stdout if omitted.
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

fn print_body(body: &LatticeBody, json: bool) {
    if json {
        println!("{}", serde_json::to_string(body).unwrap());
    } else {
        println!("{body}");
    }
}

fn write_file(path: &PathBuf, contents: &str) -> CliResult {
    std::fs::write(path, contents).map_err(|e| CliError::Input(format!("writing {}: {e}", path.display())))
}

fn print_report(report: &DecompositionReport, stats: bool) {
    println!("input: {}", report.input);
    println!("normal form: {}", report.normal_form);
    if report.triangulation.is_some() {
        println!("cells: {}  dividing segments: {}", report.cells, report.dividing);
    }
    println!("verified ({})", serde_json::to_value(report.verify_mode).unwrap().as_str().unwrap());
    if stats {
        println!(
            "max |coefficient|: {}  distinct triangles: {}",
            report.stats.max_abs_coefficient, report.stats.distinct_triangles
        );
    }
}

fn decompose_batch(file: &str, mode: VerifyMode, json: bool, stats: bool) -> CliResult {
    let bodies = read_batch(file)?;
    // each worker keeps its own segment memo; results keep input order
    let results: Vec<_> = bodies
        .par_iter()
        .map_init(SegmentDecomposer::new, |seg, body| decompose_with(body, mode, seg))
        .collect();
    let mut failures = 0;
    if json {
        let docs: Vec<serde_json::Value> = results
            .iter()
            .zip(&bodies)
            .map(|(r, body)| match r {
                Ok(report) => serde_json::to_value(report).unwrap(),
                Err(e) => {
                    failures += 1;
                    serde_json::json!({ "input": body, "verified": false, "error": e.to_string() })
                }
            })
            .collect();
        println!("{}", serde_json::to_string(&docs).unwrap());
    } else {
        for (i, (r, body)) in results.iter().zip(&bodies).enumerate() {
            match r {
                Ok(report) if stats => println!(
                    "{i}: {}  [max |k| {}, {} triangles]",
                    report.normal_form, report.stats.max_abs_coefficient, report.stats.distinct_triangles
                ),
                Ok(report) => println!("{i}: {}", report.normal_form),
                Err(e) => {
                    failures += 1;
                    println!("{i}: {body}: {e}");
                }
            }
        }
    }
    if failures > 0 {
        return Err(CliError::Verification(format!("{failures} of {} bodies failed", bodies.len())));
    }
    Ok(())
}

fn check_factorization(
    fact: &MaxPlusFactorization,
    target: impl Fn(i64, i64) -> i64,
    probes: usize,
    seed: u64,
) -> CliResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..probes {
        let (x, y) = (rng.gen_range(-100..=100), rng.gen_range(-100..=100));
        if fact.evaluate(x, y) != target(x, y) {
            return Err(CliError::Verification(format!("factorization differs from the input at ({x},{y})")));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Hull { points, json } => print_body(&read_body(&points)?, json),
        Command::Sum { a, b, json } => print_body(&minkowski_sum(&read_body(&a)?, &read_body(&b)?), json),
        Command::Diff { a, b, json } => match minkowski_diff(&read_body(&a)?, &read_body(&b)?) {
            Some(c) => print_body(&c, json),
            None => return Err(CliError::Verification("Minkowski difference does not exist".into())),
        },
        Command::Decompose { body, json, svg, verify, stats, batch } => {
            if let Some(file) = batch {
                return decompose_batch(&file, verify, json, stats);
            }
            let body = read_body(body.as_deref().expect("clap requires body without --batch"))?;
            let report = decompose_with(&body, verify, &mut SegmentDecomposer::new())?;
            if let Some(path) = &svg {
                write_file(path, &render_svg(&report))?;
            }
            if json {
                println!("{}", serde_json::to_string(&report).unwrap());
            } else {
                print_report(&report, stats);
            }
        }
        Command::DecomposeSegment { segment, terms } => {
            let pts = parse_point_list(&read_source(&segment)?)?;
            let [a, b] = pts[..] else {
                return Err(CliError::Input(format!("expected two points, got {}", pts.len())));
            };
            let nf = SegmentDecomposer::new().decompose_segment(a, b)?;
            if !nf.verify(&LatticeBody::segment(a, b)) {
                return Err(CliError::Verification("segment decomposition failed the hull oracle".into()));
            }
            println!("{}", serde_json::to_string(&nf).unwrap());
            if terms {
                println!("{nf}");
            }
        }
        Command::Triangulate { body, svg } => {
            let body = read_body(&body)?;
            let part = unimodular_triangulation(&body)?;
            if let Some(path) = &svg {
                let report = decompose_with(&body, VerifyMode::Full, &mut SegmentDecomposer::new())?;
                write_file(path, &render_svg(&report))?;
            }
            println!("{}", serde_json::to_string(&part.to_json()).unwrap());
        }
        Command::Factorize { expression, json, probes, seed } => {
            let expr = read_expression(&expression)?;
            let fact = match expr.as_function() {
                Some(f) => factorize(&f)?,
                None => {
                    let (plus, minus) = flatten(&expr)?;
                    factorize_difference(&plus, &minus)?
                }
            };
            check_factorization(&fact, |x, y| expr.evaluate(x, y), probes, seed)?;
            if json {
                println!("{}", serde_json::to_string(&fact).unwrap());
            } else {
                println!("{fact}");
            }
        }
        Command::Eval { expression, at } => {
            let expr = read_expression(&expression)?;
            let p = input::parse_point(&at)?;
            println!("{}", expr.evaluate(p.x, p.y));
        }
        Command::Verify { target, nf, mode } => {
            let target = read_body(&target)?;
            let nf = read_normal_form(&nf)?;
            let ok = match mode {
                VerifyMode::Full => nf.verify(&target),
                VerifyMode::Support => nf.support_check(&target, &Direction::standard16()),
            };
            if !ok {
                println!("mismatch");
                return Err(CliError::Verification(format!("normal form does not reproduce {target}")));
            }
            println!("ok");
        }
        Command::Render { body, output } => {
            let report = decompose_with(&read_body(&body)?, VerifyMode::Full, &mut SegmentDecomposer::new())?;
            let svg = render_svg(&report);
            match output {
                Some(path) => write_file(&path, &svg)?,
                None => print!("{svg}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
