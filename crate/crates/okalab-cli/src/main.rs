//! Command-line surface for the okalab library.
//!
//! Subcommands either ingest a JSON document (arrangements, polynomial
//! pairs, loops) or run built-in presets, and print a report as pretty text
//! or, with `--json`, as deterministic JSON. Exit codes: 0 on success, 1 on
//! domain errors (with a machine-readable code on stderr), 2 on usage
//! errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use okalab::arrangement::{parse_arrangement, Arrangement, ProjectivePoint};
use okalab::graphcomp::{
    decompose_univariate, limit_check, mnu_zero_locus_loop, verify, winding_number, LimitVerdict,
    PolyMap, TwistExponent, WindingNumber,
};
use okalab::linalg::Vector;
use okalab::relations::{
    classify_with_circuits, circuits, diagonal_hyperplanes, entire_curve_obstructions,
    tangent_direction_subspaces,
};
use okalab::{GaussianRational, MatrixQ, UniPolyQ, VectorQ};

#[derive(Parser)]
#[command(
    name = "okalab",
    version,
    about = "Oka/non-Oka certificates for hyperplane-arrangement complements and numeric checks for graph complements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputOpts {
    /// Emit the report as JSON instead of pretty text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an arrangement complement as Oka or not, with certificates.
    Classify {
        /// Arrangement document: {"n": 2, "forms": [["0","1","0"], ...]}.
        input: PathBuf,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// List the minimal linear relations (circuits) of an arrangement.
    Circuits {
        input: PathBuf,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// List each circuit's diagonal hyperplanes.
    Diagonals {
        input: PathBuf,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Entire-curve obstructions and tangent conditions at a point.
    Obstructions {
        input: PathBuf,
        /// Point in homogeneous coordinates, e.g. "1:2:3" (exact scalars).
        #[arg(long)]
        point: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Coordinate-change witness for an Oka arrangement.
    Witness {
        input: PathBuf,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Run the randomized covering-space and spray verification suites.
    GraphVerify {
        /// Samples per suite.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// RNG seed; defaults to OKALAB_SEED or 0.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Search for a polynomial witness of h/k = f + 1/g.
    Decompose {
        /// Document {"h": ["1","0","1"], "k": ["0","1"]}, ascending exact
        /// coefficients.
        input: PathBuf,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Winding number of a loop, or of the built-in m_nu preset.
    Winding {
        /// Preset: sample the numerator of m_nu along a unit loop in the
        /// denominator's zero set.
        #[arg(long, conflicts_with = "loop_file")]
        nu: Option<u32>,
        /// Loop samples per turn.
        #[arg(long, default_value_t = 512)]
        samples: usize,
        /// JSON file with loop samples as [re, im] pairs.
        #[arg(long = "loop")]
        loop_file: Option<PathBuf>,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Check the localisation limit 1/g(x) - 1/g(x + g(x)^e s) -> g'(x0)(s).
    LimitCheck {
        /// Univariate g as a JSON coefficient list, ascending; entries are
        /// numbers or [re, im] pairs.
        #[arg(long, default_value = "[0,1]")]
        g: String,
        /// Base point with g(x0) = 0.
        #[arg(long, default_value = "[0]")]
        x0: String,
        /// Spray direction s.
        #[arg(long, default_value = "[1]")]
        s: String,
        /// Approach direction d.
        #[arg(long, default_value = "[1]")]
        d: String,
        #[arg(long, default_value_t = 20)]
        steps: u32,
        /// Twist exponent: 2 converges, 1 diverges.
        #[arg(long, default_value_t = 2)]
        exponent: u8,
        #[command(flatten)]
        out: OutputOpts,
    },
}

/// Domain-level failure: exit 1 with a machine-readable code.
struct CliError {
    code: String,
    message: String,
}

impl CliError {
    fn new(code: impl Into<String>, message: impl Into<String>) -> Self {
        CliError {
            code: code.into(),
            message: message.into(),
        }
    }
}

macro_rules! from_core_error {
    ($ty:ty) => {
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError::new(e.code(), e.to_string())
            }
        }
    };
}

from_core_error!(okalab::arrangement::ArrangementError);
from_core_error!(okalab::relations::RelationsError);
from_core_error!(okalab::graphcomp::GraphError);
from_core_error!(okalab::ScalarParseError);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "{}",
                json!({"error": {"code": e.code, "message": e.message}})
            );
            ExitCode::FAILURE
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::new("file_not_found", format!("{}: {e}", path.display())))
}

fn load_arrangement(path: &PathBuf) -> Result<Arrangement, CliError> {
    Ok(parse_arrangement(&read_file(path)?)?)
}

fn parse_point(arr: &Arrangement, text: &str) -> Result<ProjectivePoint, CliError> {
    let coords = text
        .split(':')
        .map(|s| s.trim().parse::<GaussianRational>())
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != arr.dimension() + 1 {
        return Err(CliError::new(
            "point_length_mismatch",
            format!(
                "point has {} coordinates, expected {}",
                coords.len(),
                arr.dimension() + 1
            ),
        ));
    }
    Ok(ProjectivePoint::new(Vector(coords))?)
}

/// Coefficient list: JSON array whose entries are numbers or [re, im].
fn parse_cx_list(text: &str) -> Result<Vec<Complex64>, CliError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::new("invalid_document", e.to_string()))?;
    let items = value
        .as_array()
        .ok_or_else(|| CliError::new("invalid_document", "expected a JSON array"))?;
    items
        .iter()
        .map(|item| match item {
            serde_json::Value::Number(n) => Ok(Complex64::new(
                n.as_f64().expect("JSON numbers fit f64"),
                0.0,
            )),
            serde_json::Value::Array(pair) if pair.len() == 2 => {
                let re = pair[0]
                    .as_f64()
                    .ok_or_else(|| CliError::new("invalid_document", "non-numeric pair"))?;
                let im = pair[1]
                    .as_f64()
                    .ok_or_else(|| CliError::new("invalid_document", "non-numeric pair"))?;
                Ok(Complex64::new(re, im))
            }
            _ => Err(CliError::new(
                "invalid_document",
                "entries must be numbers or [re, im] pairs",
            )),
        })
        .collect()
}

fn print_report<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

fn scalar_list(v: &VectorQ) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn print_matrix(m: &MatrixQ) {
    for row in m.rows() {
        println!("  {}", scalar_list(row));
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Classify { input, out } => {
            let arr = load_arrangement(&input)?;
            let report = classify_with_circuits(&arr);
            if out.json {
                print_report(&report);
            } else {
                println!("verdict: {:?}", report.verdict);
                println!("reason: {:?}", report.reason);
                println!("dominable by C^n: {}", report.dominable_by_cn);
                println!("C-connected: {}", report.c_connected);
                if let Some(profile) = &report.product_profile {
                    println!(
                        "complement: product of {} punctured planes and {} planes",
                        profile.cstar_factors, profile.plane_factors
                    );
                }
                if let Some(witness) = &report.oka_witness {
                    println!("coordinate-change witness:");
                    print_matrix(witness);
                }
                if let Some(subset) = &report.failing_subset {
                    println!("smallest dependent subset: {subset:?}");
                }
                if let Some(circuits) = &report.circuits {
                    println!("circuits: {}", circuits.len());
                    for c in circuits {
                        println!(
                            "  #{} {:?} coefficients {}",
                            c.index,
                            c.indices,
                            scalar_list(&Vector(c.coefficients.clone()))
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Circuits { input, out } => {
            let arr = load_arrangement(&input)?;
            let list = circuits(&arr);
            if out.json {
                print_report(&list);
            } else {
                println!("{} circuit(s)", list.len());
                for c in &list {
                    println!(
                        "  #{} {:?} coefficients {}",
                        c.index,
                        c.indices,
                        scalar_list(&Vector(c.coefficients.clone()))
                    );
                }
            }
            Ok(())
        }
        Command::Diagonals { input, out } => {
            let arr = load_arrangement(&input)?;
            let mut entries = Vec::new();
            for circuit in circuits(&arr) {
                let diagonals = diagonal_hyperplanes(&circuit, &arr)
                    .expect("circuit from the same arrangement");
                entries.push((circuit, diagonals));
            }
            if out.json {
                let payload: Vec<_> = entries
                    .iter()
                    .map(|(circuit, diagonals)| {
                        json!({
                            "circuit": circuit,
                            "diagonal_hyperplanes": diagonals,
                        })
                    })
                    .collect();
                print_report(&payload);
            } else {
                if entries.is_empty() {
                    println!("no circuits: the forms are linearly independent");
                }
                for (circuit, diagonals) in &entries {
                    println!(
                        "circuit #{} {:?}: {} diagonal hyperplane(s)",
                        circuit.index,
                        circuit.indices,
                        diagonals.len()
                    );
                    for d in diagonals {
                        println!(
                            "  J={:?}: {}  {}",
                            d.subset,
                            d.form,
                            scalar_list(d.form.coefficients())
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Obstructions { input, point, out } => {
            let arr = load_arrangement(&input)?;
            let p = parse_point(&arr, &point)?;
            let report = entire_curve_obstructions(&arr, &p)?;
            let tangent = tangent_direction_subspaces(&arr, &p)?;
            if out.json {
                print_report(&json!({
                    "obstructions": report,
                    "tangent": tangent,
                }));
            } else {
                println!("point: {}", scalar_list(p.coords()));
                if report.per_circuit.is_empty() {
                    println!("no circuits: the forms are linearly independent");
                }
                for entry in &report.per_circuit {
                    println!(
                        "circuit #{} {:?}:",
                        entry.circuit.index, entry.circuit.indices
                    );
                    if entry.diagonal_hyperplanes.is_empty() {
                        println!("  no diagonal hyperplanes through the point");
                    }
                    for d in &entry.diagonal_hyperplanes {
                        println!("  diagonal hyperplane through point: {}", d.form);
                    }
                    println!(
                        "  associated subspace: span of {} base vector(s) and the point (dimension {})",
                        entry.associated_subspace.base_locus_basis.len(),
                        entry.associated_subspace.dimension()
                    );
                    for cond in entry.associated_subspace.conditions() {
                        println!("    condition: {cond}");
                    }
                }
            }
            Ok(())
        }
        Command::Witness { input, out } => {
            let arr = load_arrangement(&input)?;
            let witness = arr.oka_witness()?;
            if out.json {
                print_report(&witness);
            } else {
                println!("coordinate-change witness:");
                print_matrix(&witness);
            }
            Ok(())
        }
        Command::GraphVerify { samples, seed, out } => {
            let seed = seed
                .or_else(|| {
                    std::env::var("OKALAB_SEED")
                        .ok()
                        .and_then(|s| s.parse().ok())
                })
                .unwrap_or(0);
            let records = verify::run_all(seed, samples);
            let all_passed = records.iter().all(|r| r.all_passed());
            if out.json {
                print_report(&json!({"seed": seed, "suites": records}));
            } else {
                println!("seed: {seed}");
                for r in &records {
                    println!(
                        "{}: {}/{} passed, max error {:.3e}",
                        r.name, r.passed, r.checked, r.max_error
                    );
                }
            }
            if all_passed {
                Ok(())
            } else {
                Err(CliError::new(
                    "verification_failed",
                    "one or more suites had failing samples",
                ))
            }
        }
        Command::Decompose { input, out } => {
            let text = read_file(&input)?;
            let doc: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::new("invalid_document", e.to_string()))?;
            let h = parse_poly_field(&doc, "h")?;
            let k = parse_poly_field(&doc, "k")?;
            match decompose_univariate(&h, &k)? {
                Some(witness) => {
                    if out.json {
                        print_report(&json!({
                            "status": "witness",
                            "f": witness.f,
                            "c": witness.c,
                        }));
                    } else {
                        println!("status: polynomial witness found");
                        println!("f coefficients (ascending): {:?}", poly_strings(&witness.f));
                        println!("c = {}", witness.c);
                        println!("m = f + 1/(k/c): h - k*f = c verified exactly");
                    }
                }
                None => {
                    if out.json {
                        print_report(&json!({"status": "no_polynomial_witness"}));
                    } else {
                        println!("status: no polynomial witness");
                        println!("(an entire-function witness is not ruled out)");
                    }
                }
            }
            Ok(())
        }
        Command::Winding {
            nu,
            samples,
            loop_file,
            out,
        } => {
            let (loop_samples, preset) = match (nu, loop_file) {
                (Some(nu), None) => (mnu_zero_locus_loop(nu, samples), Some(nu)),
                (None, Some(path)) => {
                    let text = read_file(&path)?;
                    (parse_cx_list(&text)?, None)
                }
                (None, None) => {
                    return Err(CliError::new(
                        "missing_input",
                        "provide either --nu or --loop",
                    ));
                }
                (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
            };
            let result: WindingNumber = winding_number(&loop_samples)?;
            let obstructed = result.winding != 0;
            if out.json {
                let mut payload = json!({
                    "winding": result.winding,
                    "residual": result.residual,
                });
                if preset.is_some() {
                    payload["verdict"] = json!(if obstructed {
                        "obstructed"
                    } else {
                        "no_obstruction_found"
                    });
                }
                print_report(&payload);
            } else {
                println!("winding number: {}", result.winding);
                println!("residual: {:.3e}", result.residual);
                if let Some(nu) = preset {
                    if obstructed {
                        println!(
                            "verdict: obstructed — m_{nu} admits no f + 1/g decomposition \
                             (nonzero winding on a loop in the zero set of the denominator)"
                        );
                    } else {
                        println!("verdict: no obstruction found on this loop");
                    }
                }
            }
            Ok(())
        }
        Command::LimitCheck {
            g,
            x0,
            s,
            d,
            steps,
            exponent,
            out,
        } => {
            let g = PolyMap::univariate(&parse_cx_list(&g)?);
            let x0 = parse_cx_list(&x0)?;
            let s = parse_cx_list(&s)?;
            let d = parse_cx_list(&d)?;
            let twist = match exponent {
                1 => TwistExponent::Single,
                2 => TwistExponent::Double,
                other => {
                    return Err(CliError::new(
                        "invalid_exponent",
                        format!("twist exponent must be 1 or 2, got {other}"),
                    ));
                }
            };
            let result = limit_check(&g, &x0, &s, &d, steps, twist)?;
            if out.json {
                print_report(&result);
            } else {
                let last = result.estimates.last().expect("nonempty estimates");
                println!("estimates: {}", result.estimates.len());
                println!("last estimate: {last}");
                println!("analytic limit g'(x0)(s): {}", result.target);
                match result.verdict {
                    LimitVerdict::Converged => println!("verdict: converged"),
                    LimitVerdict::Diverged => println!("verdict: diverged"),
                    LimitVerdict::Inconclusive => println!("verdict: inconclusive"),
                }
            }
            Ok(())
        }
    }
}

fn parse_poly_field(doc: &serde_json::Value, key: &str) -> Result<UniPolyQ, CliError> {
    let list = doc
        .get(key)
        .and_then(|v| v.as_array())
        .ok_or_else(|| CliError::new("invalid_document", format!("missing array field `{key}`")))?;
    let coeffs = list
        .iter()
        .map(|item| {
            item.as_str()
                .ok_or_else(|| {
                    CliError::new(
                        "invalid_document",
                        format!("`{key}` entries must be scalar strings"),
                    )
                })
                .and_then(|s| Ok(s.parse::<GaussianRational>()?))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(UniPolyQ::from_coeffs(coeffs))
}

fn poly_strings(p: &UniPolyQ) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}
