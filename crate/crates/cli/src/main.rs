//! `braidfold`: command-line front end for braidfold-core.
//!
//! Every command writes one JSON document. Errors are reported as
//! `{"error": "<Kind>", "message": "..."}` on standard output with exit
//! code 2 (invalid input) or 3 (resource limit); failed verifications
//! exit with 1.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use braidfold_core::braid::{ti_apply, ti_inverse_apply};
use braidfold_core::kgroup::{verify_square, KContext, Side};
use braidfold_core::verify::{self, Suite, VerifyInput};
use braidfold_core::{
    unfold, Algebra, CartanDatum, Element, ElementJson, Error, QuiverAut, QuiverJson,
    DEFAULT_MAX_HEIGHT,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "braidfold",
    version,
    about = "Exact computations in Lusztig's algebra f"
)]
struct Cli {
    /// Cartan datum: a JSON file {"A": [[...]], "eps": [...]} or a name such as A2, B2, G2.
    #[arg(long, global = true)]
    datum: Option<String>,
    /// Quiver with automorphism: a JSON file {"vertices", "arrows", "vperm", "aperm"}.
    #[arg(long, global = true)]
    quiver: Option<PathBuf>,
    /// Largest weight height any command may touch.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_HEIGHT)]
    max_height: i64,
    /// Output path; `-` writes to standard output.
    #[arg(long, global = true, default_value = "-")]
    output: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fold a quiver with automorphism into a Cartan datum.
    Fold,
    /// Build a quiver with automorphism whose folding is the datum.
    Unfold,
    /// Dimensions of every weight space up to a height.
    Dims {
        /// Defaults to the height bound.
        #[arg(long)]
        height: Option<i64>,
    },
    /// Evaluate the bilinear form on two elements.
    Pair {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Orthogonal projection onto a left or right subalgebra.
    Project {
        /// Comma-separated indices; the right side takes a single index.
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
        #[arg(long, value_enum, default_value_t = ProjSide::Left)]
        side: ProjSide,
        #[arg(long)]
        element: PathBuf,
    },
    /// Apply the braid symmetry T_i (or its inverse).
    Ti {
        #[arg(long)]
        i: usize,
        #[arg(long)]
        element: PathBuf,
        #[arg(long)]
        inverse: bool,
    },
    /// Check the Grothendieck-group square for one pair of orbits.
    Ksquare {
        /// Give twice: the orbit i, then the orbit j.
        #[arg(long = "orbit", num_args = 1, required = true)]
        orbits: Vec<usize>,
    },
    /// Run the bundled verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProjSide {
    Left,
    Right,
}

enum Failure {
    Core(Error),
    Input { kind: &'static str, message: String },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn input(kind: &'static str, message: impl Into<String>) -> Failure {
    Failure::Input {
        kind,
        message: message.into(),
    }
}

/// The raw datum file; validation goes through `CartanDatum::new` so that
/// errors keep their kind.
#[derive(Deserialize)]
struct DatumFile {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    eps: Option<Vec<i64>>,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input("Io", format!("{}: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| input("InvalidJson", format!("{}: {e}", path.display())))
}

struct Inputs {
    datum: Option<Arc<CartanDatum>>,
    quiver: Option<QuiverAut>,
}

fn load(cli: &Cli) -> Result<Inputs, Failure> {
    if cli.max_height < 1 {
        return Err(input("InvalidInput", "--max-height must be at least 1"));
    }
    match (&cli.datum, &cli.quiver) {
        (Some(_), Some(_)) => Err(input(
            "InvalidInput",
            "give either --datum or --quiver, not both",
        )),
        (Some(d), None) => {
            let path = Path::new(d);
            let datum = if path.exists() {
                let f: DatumFile = parse(path)?;
                match f.eps {
                    Some(eps) => CartanDatum::new(f.a, eps)?,
                    None => CartanDatum::with_minimal_symmetrizers(f.a)?,
                }
            } else {
                CartanDatum::named(d)?
            };
            Ok(Inputs {
                datum: Some(Arc::new(datum)),
                quiver: None,
            })
        }
        (None, Some(q)) => {
            let q: QuiverJson = parse(q)?;
            let aut = q.into_aut()?;
            Ok(Inputs {
                datum: Some(Arc::new(aut.fold().datum)),
                quiver: Some(aut),
            })
        }
        (None, None) => Ok(Inputs {
            datum: None,
            quiver: None,
        }),
    }
}

fn need_datum(inputs: &Inputs) -> Result<Arc<CartanDatum>, Failure> {
    inputs
        .datum
        .clone()
        .ok_or_else(|| input("InvalidInput", "this command needs --datum or --quiver"))
}

fn element(datum: &Arc<CartanDatum>, path: &Path) -> Result<Element, Failure> {
    let j: ElementJson = parse(path)?;
    Ok(Element::from_json(datum, &j)?)
}

/// Runs one command; the boolean is false when a check came out negative.
fn execute(cli: &Cli) -> Result<(Value, bool), Failure> {
    let inputs = load(cli)?;
    let algebra = || -> Result<Algebra, Failure> {
        Ok(Algebra::from_arc(need_datum(&inputs)?).with_max_height(cli.max_height))
    };
    match &cli.command {
        Command::Fold => {
            let q = inputs
                .quiver
                .as_ref()
                .ok_or_else(|| input("InvalidInput", "fold needs --quiver"))?;
            Ok((json!(q.fold()), true))
        }
        Command::Unfold => {
            let d = need_datum(&inputs)?;
            let q = unfold(&d, &BTreeMap::new());
            Ok((json!(QuiverJson::from(&q)), true))
        }
        Command::Dims { height } => {
            let alg = algebra()?;
            let h = height.unwrap_or(cli.max_height);
            if h < 0 {
                return Err(input("InvalidInput", "--height must be nonnegative"));
            }
            Ok((json!(alg.dims_up_to(h)?), true))
        }
        Command::Pair { left, right } => {
            let alg = algebra()?;
            let x = element(alg.datum(), left)?;
            let y = element(alg.datum(), right)?;
            Ok((json!({ "value": alg.pair(&x, &y)? }), true))
        }
        Command::Project {
            indices,
            side,
            element: path,
        } => {
            let alg = algebra()?;
            let x = element(alg.datum(), path)?;
            let p = match side {
                ProjSide::Left => alg.proj_left(indices, &x)?,
                ProjSide::Right => {
                    let [i] = indices.as_slice() else {
                        return Err(input(
                            "InvalidInput",
                            "the right projection takes one index",
                        ));
                    };
                    alg.proj_right(*i, &x)?
                }
            };
            Ok((json!(p.to_json()), true))
        }
        Command::Ti {
            i,
            element: path,
            inverse,
        } => {
            let alg = algebra()?;
            let x = element(alg.datum(), path)?;
            let r = if *inverse {
                ti_inverse_apply(&alg, *i, &x)?
            } else {
                ti_apply(&alg, *i, &x)?
            };
            Ok((
                json!({ "image": r.image.to_json(), "certificate": r.certificate() }),
                true,
            ))
        }
        Command::Ksquare { orbits } => {
            let [i, j] = orbits.as_slice() else {
                return Err(input("InvalidInput", "ksquare takes --orbit exactly twice"));
            };
            let alg = algebra()?;
            let d = alg.datum().clone();
            let quiver = match &inputs.quiver {
                Some(q) => q.clone(),
                None => unfold(&d, &BTreeMap::new()),
            };
            let reflected = if quiver.orbit_is_sink(*i)? {
                false
            } else if quiver.orbit_is_source(*i)? {
                true
            } else {
                return Err(Error::NotSinkOrSource(*i).into());
            };
            let ctx = KContext::new(d, *i, *j, Side::Sink)?;
            let mut squares = BTreeMap::new();
            let mut all = true;
            for m in 0..=ctx.n() {
                let r = verify_square(&alg, &ctx, m)?;
                all &= r.equal;
                squares.insert(m.to_string(), r.to_json());
            }
            let report =
                json!({ "i": i, "j": j, "n": ctx.n(), "reflected": reflected, "squares": squares });
            Ok((report, all))
        }
        Command::Verify { suite } => {
            let suites = Suite::parse_list(suite)?;
            let datum = need_datum(&inputs)?;
            let run_input = VerifyInput {
                datum,
                quiver: inputs.quiver.clone(),
            };
            let mut timer = |name: &str, t: std::time::Duration| {
                eprintln!("{name}: {:.3}s", t.as_secs_f64());
            };
            let report = verify::run(run_input, &suites, cli.max_height, &mut timer)?;
            let pass = report.pass;
            Ok((json!(report), pass))
        }
    }
}

fn emit(target: &str, value: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    if target == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()
    } else {
        fs::write(target, text)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok((value, ok)) => {
            if let Err(e) = emit(&cli.output, &value) {
                eprintln!("cannot write {}: {e}", cli.output);
                return ExitCode::from(2);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            let (kind, message, code) = match f {
                Failure::Core(e) => {
                    let code = if matches!(e, Error::ResourceLimit { .. }) {
                        3
                    } else {
                        2
                    };
                    (e.kind(), e.to_string(), code)
                }
                Failure::Input { kind, message } => (kind, message, 2),
            };
            println!("{}", json!({ "error": kind, "message": message }));
            ExitCode::from(code)
        }
    }
}
