//! `gaugekit`: containment radii of polytopes against gauge bodies.
//!
//! Exit codes: 0 success, 1 input error, 2 computation error, 3 verification
//! hard failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use gaugekit::gauge::{
    circumcenter_set, circumradius, diameter, dist_to_flat, gamma, incenter_set, inradius, width, Method, RadiiResult,
};
use gaugekit::geometry::json::{polytope_from_json, polytope_to_json};
use gaugekit::radii::{full_profile, successive_radius_with, Quantity, SearchConfig};
use gaugekit::render::{scene, to_svg, Figure};
use gaugekit::verify::run_verify_with;
use gaugekit::{AffineFlat, GaugeBody, GeomError, Polytope, Vector};

#[derive(Parser)]
#[command(name = "gaugekit", version, about = "Circumradii, inradii and successive radii with respect to a gauge body")]
struct Cli {
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Pair {
    /// Geometry JSON of the set K.
    #[arg(long)]
    set: PathBuf,
    /// Geometry JSON of the gauge body C (origin in its interior).
    #[arg(long)]
    gauge: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gauge γ_C(x).
    Gamma {
        #[arg(long)]
        gauge: PathBuf,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Gauge distance from a point to the flat x + span(dirs).
    Dist {
        #[arg(long)]
        gauge: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// A point of the flat.
        #[arg(long, allow_hyphen_values = true)]
        through: String,
        /// Direction vectors, separated by `;`.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        dirs: String,
    },
    /// R(K, C) with an optimal center.
    Circumradius(Pair),
    /// r(K, C) with an optimal center.
    Inradius(Pair),
    /// Circumcenter set cc(K, C).
    Cc(Pair),
    /// Incenter set ic(K, C).
    Ic(Pair),
    /// Gauge diameter D(K, C).
    Diameter(Pair),
    /// Gauge width of K.
    Width(Pair),
    /// Ball intersection bi(K, C, λ).
    Bi {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        lambda: f64,
    },
    /// Ball hull bh(K, C, λ).
    Bh {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        lambda: f64,
    },
    /// One successive radius, e.g. `R-pi-sup:1`.
    Radius {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        quantity: String,
    },
    /// All successive radii and their monotonicity chains.
    Profile(Pair),
    /// Identity-check report.
    Verify {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print a text table instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Planar SVG figure of bh, bi or cc.
    Render {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value = "bh")]
        what: String,
    },
}

enum Failure {
    Input(String),
    Compute(String),
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::EmptyInput
            | GeomError::InvalidInput(_)
            | GeomError::InvalidGauge(_)
            | GeomError::DimensionMismatch { .. }
            | GeomError::UnsupportedDimension(_)
            | GeomError::RadiusTooSmall { .. } => Failure::Input(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_set(path: &Path) -> Result<Polytope, Failure> {
    polytope_from_json(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_gauge(path: &Path) -> Result<GaugeBody, Failure> {
    GaugeBody::new(load_set(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_pair(p: &Pair) -> Result<(Polytope, GaugeBody), Failure> {
    Ok((load_set(&p.set)?, load_gauge(&p.gauge)?))
}

fn parse_vector(s: &str, what: &str) -> Result<Vector, Failure> {
    let coords: Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    match coords {
        Ok(c) if !c.is_empty() && c.iter().all(|x| x.is_finite()) => Ok(Vector::from_vec(c)),
        _ => Err(Failure::Input(format!("`--{what}`: expected comma-separated numbers, got `{s}`"))),
    }
}

/// Reals as JSON numbers; infinities as `"inf"`.
fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn vec_json(v: &Vector) -> Value {
    Value::Array(v.iter().map(|x| num(*x)).collect())
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Exact => "exact",
        Method::Searched => "searched",
    }
}

fn record(quantity: &str, value: f64, method: Method, accuracy: f64, witness: Value) -> Value {
    json!({
        "quantity": quantity,
        "value": num(value),
        "method": method_name(method),
        "accuracy": num(accuracy),
        "witness": witness,
    })
}

fn radii_record(quantity: &str, r: &RadiiResult) -> Value {
    let mut w = serde_json::Map::new();
    if let Some(x) = &r.witness_center {
        w.insert("center".into(), vec_json(x));
    }
    if let Some(l) = &r.witness_subspace {
        w.insert("subspace".into(), Value::Array(l.basis.iter().map(vec_json).collect()));
    }
    record(quantity, r.value, r.method, r.accuracy, Value::Object(w))
}

enum Output {
    Json(Value),
    Text(String),
}

fn run(cmd: &Cmd) -> Result<(Output, bool), Failure> {
    let cfg = || SearchConfig::from_env().map_err(|e| Failure::Input(format!("GAUGEKIT_GRID: {e}")));
    let out = match cmd {
        Cmd::Gamma { gauge, point } => {
            let c = load_gauge(gauge)?;
            let x = parse_vector(point, "point")?;
            record("gamma", gamma(&c, &x)?, Method::Exact, 0.0, json!({}))
        }
        Cmd::Dist { gauge, point, through, dirs } => {
            let c = load_gauge(gauge)?;
            let y = parse_vector(point, "point")?;
            let x = parse_vector(through, "through")?;
            let ds = dirs
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| parse_vector(s, "dirs"))
                .collect::<Result<Vec<_>, _>>()?;
            let flat = AffineFlat::new(x, &ds)?;
            let (v, z) = dist_to_flat(&c, &y, &flat)?;
            record("dist", v, Method::Exact, 0.0, json!({ "nearest": vec_json(&z) }))
        }
        Cmd::Circumradius(p) => {
            let (k, c) = load_pair(p)?;
            radii_record("circumradius", &circumradius(&k, &c)?)
        }
        Cmd::Inradius(p) => {
            let (k, c) = load_pair(p)?;
            radii_record("inradius", &inradius(&k, &c)?)
        }
        Cmd::Cc(p) => {
            let (k, c) = load_pair(p)?;
            let r = circumradius(&k, &c)?.value;
            let set = circumcenter_set(&k, &c)?;
            let dim = set.affine_dim()?;
            record("cc", r, Method::Exact, 0.0, json!({ "set": polytope_to_json(&set), "affine_dim": dim }))
        }
        Cmd::Ic(p) => {
            let (k, c) = load_pair(p)?;
            let r = inradius(&k, &c)?.value;
            let set = incenter_set(&k, &c)?;
            let dim = set.affine_dim()?;
            record("ic", r, Method::Exact, 0.0, json!({ "set": polytope_to_json(&set), "affine_dim": dim }))
        }
        Cmd::Diameter(p) => {
            let (k, c) = load_pair(p)?;
            record("diameter", diameter(&k, &c)?, Method::Exact, 0.0, json!({}))
        }
        Cmd::Width(p) => {
            let (k, c) = load_pair(p)?;
            record("width", width(&k, &c)?, Method::Exact, 0.0, json!({}))
        }
        Cmd::Bi { pair, lambda } | Cmd::Bh { pair, lambda } => {
            let (k, c) = load_pair(pair)?;
            let (name, set) = match cmd {
                Cmd::Bi { .. } => ("bi", gaugekit::ball::ball_intersect(&k, &c, *lambda)?),
                _ => ("bh", gaugekit::ball::ball_hull(&k, &c, *lambda)?),
            };
            record(name, *lambda, Method::Exact, 0.0, json!({ "set": polytope_to_json(&set), "empty": set.is_empty() }))
        }
        Cmd::Radius { pair, quantity } => {
            let q: Quantity = quantity.parse().map_err(|e: GeomError| Failure::Input(format!("`--quantity`: {e}")))?;
            let (k, c) = load_pair(pair)?;
            radii_record(&q.to_string(), &successive_radius_with(&k, &c, q, &cfg()?)?)
        }
        Cmd::Profile(p) => {
            let (k, c) = load_pair(p)?;
            let prof = full_profile(&k, &c, &cfg()?)?;
            let entries: Vec<Value> = prof
                .entries
                .iter()
                .map(|e| match &e.result {
                    Ok(r) => radii_record(&e.quantity.to_string(), r),
                    Err(err) => json!({ "quantity": e.quantity.to_string(), "error": err.to_string() }),
                })
                .collect();
            json!({ "dim": prof.dim, "entries": entries, "chains": prof.chains })
        }
        Cmd::Verify { pair, seed, table } => {
            let (k, c) = load_pair(pair)?;
            let report = run_verify_with(&k, &c, *seed, &cfg()?);
            let ok = report.all_passed();
            let out = if *table {
                Output::Text(report.to_table())
            } else {
                Output::Json(report.to_json())
            };
            return Ok((out, ok));
        }
        Cmd::Render { pair, lambda, what } => {
            let (k, c) = load_pair(pair)?;
            let fig: Figure = what.parse()?;
            return Ok((Output::Text(to_svg(&scene(&k, &c, *lambda, fig)?)), true));
        }
    };
    Ok((Output::Json(out), true))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (output, ok) = match run(&cli.cmd) {
        Ok(r) => r,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("computation failed: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut text = match output {
        Output::Json(v) => serde_json::to_string_pretty(&v).expect("JSON serializes"),
        Output::Text(t) => t,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification reported hard failures");
        ExitCode::from(3)
    }
}
