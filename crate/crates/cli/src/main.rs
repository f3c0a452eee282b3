use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use witten::lattice::{Cache, Options, CACHE_ENV, DEFAULT_BUDGET};
use witten::numeric::Precision;
use witten::Error;

mod payload;

#[derive(Parser, Debug)]
#[command(
    name = "witten",
    version,
    about = "Witten zeta functions of root systems: exact values, invariant sets and checks"
)]
struct Cli {
    /// Print one JSON record instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Target decimal digits for high-precision evaluations.
    #[arg(long, global = true, value_name = "DIGITS")]
    prec: Option<u32>,
    /// Directory for cached D/E sets.
    #[arg(long, global = true, value_name = "DIR", env = CACHE_ENV)]
    cache: Option<PathBuf>,
    /// Worker threads for parallel loops.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Root data: positive roots, degrees, highest root, K and the pairing matrix.
    Roots { phi: String },
    /// Levels of invertible square submatrices of the pairing matrix.
    Dset {
        phi: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Exponents of the quotients by spans of positive roots.
    Eset {
        phi: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Coefficients of the highest root.
    Hset {
        phi: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// The rational set p/q with q in H or q = 1.
    Tset {
        phi: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Check that E equals H together with 1.
    VerifyEh {
        phi: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Check that D equals E of the dual root system.
    VerifyDe {
        phi: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Exact value at a positive even integer, as a rational multiple of a power of pi.
    EvenValue {
        phi: String,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Truncated multiple sum with a rigorous tail bound.
    Multisum {
        phi: String,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        cutoff: u64,
    },
    /// Exact check of a rank-2 Bernoulli identity.
    Identity {
        which: Which,
        #[arg(long)]
        n: u32,
    },
    /// Coefficient of 1/(s+m) in the A2 integral.
    PoleCoeffA2 {
        #[arg(long)]
        m: u32,
    },
    /// Compare two evaluations of the second derivative of the A2 function at -m.
    Onodera {
        #[arg(long)]
        m: u32,
    },
    /// Numerical check of the integral representation (A2, B2).
    IntRepCheck {
        phi: String,
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = witten::numeric::DEFAULT_NODES)]
        nodes: usize,
    },
    /// Band triangulation of the integration cube.
    Triangulate {
        phi: String,
        #[arg(long)]
        emit_cells: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Which {
    A2,
    B2,
    G2,
}

pub(crate) struct Outcome {
    pub payload: Value,
    /// Whether the checked statement holds; `None` for plain computations.
    pub holds: Option<bool>,
}

impl Outcome {
    pub fn value(payload: Value) -> Self {
        Self { payload, holds: None }
    }

    pub fn check(payload: Value, holds: bool) -> Self {
        Self { payload, holds: Some(holds) }
    }
}

pub(crate) struct Ctx {
    pub prec: Option<u32>,
    pub cache: Option<Cache>,
}

impl Ctx {
    fn precision(&self, default: u32) -> Precision {
        Precision::new(self.prec.unwrap_or(default))
    }

    fn options(&self, budget: u128) -> Options {
        Options { budget, cache: self.cache.clone(), ..Options::default() }
    }
}

fn name_and_inputs(cmd: &Command) -> (&'static str, BTreeMap<&'static str, Value>) {
    let mut m = BTreeMap::new();
    let name = match cmd {
        Command::Roots { phi } => {
            m.insert("type", json!(phi));
            "roots"
        }
        Command::Dset { phi, budget }
        | Command::Eset { phi, budget }
        | Command::Hset { phi, budget }
        | Command::Tset { phi, budget }
        | Command::VerifyEh { phi, budget }
        | Command::VerifyDe { phi, budget } => {
            m.insert("type", json!(phi));
            m.insert("budget", json!(budget.to_string()));
            match cmd {
                Command::Dset { .. } => "dset",
                Command::Eset { .. } => "eset",
                Command::Hset { .. } => "hset",
                Command::Tset { .. } => "tset",
                Command::VerifyEh { .. } => "verify-eh",
                _ => "verify-de",
            }
        }
        Command::EvenValue { phi, s, budget } => {
            m.insert("type", json!(phi));
            m.insert("s", json!(s));
            m.insert("budget", json!(budget.to_string()));
            "even-value"
        }
        Command::Multisum { phi, s, cutoff } => {
            m.insert("type", json!(phi));
            m.insert("s", json!(s.to_string()));
            m.insert("cutoff", json!(cutoff));
            "multisum"
        }
        Command::Identity { which, n } => {
            m.insert("identity", json!(format!("{which:?}").to_lowercase()));
            m.insert("n", json!(n));
            "identity"
        }
        Command::PoleCoeffA2 { m: mm } => {
            m.insert("m", json!(mm));
            "pole-coeff-a2"
        }
        Command::Onodera { m: mm } => {
            m.insert("m", json!(mm));
            "onodera"
        }
        Command::IntRepCheck { phi, s, nodes } => {
            m.insert("type", json!(phi));
            m.insert("s", json!(s.to_string()));
            m.insert("nodes", json!(nodes));
            "int-rep-check"
        }
        Command::Triangulate { phi, emit_cells } => {
            m.insert("type", json!(phi));
            m.insert("emit_cells", json!(emit_cells));
            "triangulate"
        }
    };
    (name, m)
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<Outcome, Error> {
    match cmd {
        Command::Roots { phi } => payload::roots(phi),
        Command::Dset { phi, budget } => payload::set('D', phi, &ctx.options(*budget)),
        Command::Eset { phi, budget } => payload::set('E', phi, &ctx.options(*budget)),
        Command::Hset { phi, budget } => payload::set('H', phi, &ctx.options(*budget)),
        Command::Tset { phi, budget } => payload::set('T', phi, &ctx.options(*budget)),
        Command::VerifyEh { phi, budget } => payload::verify(false, phi, &ctx.options(*budget)),
        Command::VerifyDe { phi, budget } => payload::verify(true, phi, &ctx.options(*budget)),
        Command::EvenValue { phi, s, budget } => payload::even_value(phi, *s, *budget),
        Command::Multisum { phi, s, cutoff } => payload::multisum(phi, *s, *cutoff),
        Command::Identity { which, n } => payload::identity(
            match which {
                Which::A2 => witten::witten::Quantity::IdentityA2,
                Which::B2 => witten::witten::Quantity::IdentityB2,
                Which::G2 => witten::witten::Quantity::IdentityG2,
            },
            *n,
        ),
        Command::PoleCoeffA2 { m } => payload::pole(*m, ctx.precision(30)),
        Command::Onodera { m } => payload::onodera(*m, ctx.precision(30)),
        Command::IntRepCheck { phi, s, nodes } => payload::int_rep(phi, *s, *nodes, ctx.precision(20)),
        Command::Triangulate { phi, emit_cells } => payload::triangulate(phi, *emit_cells),
    }
}

fn is_usage_error(e: &Error) -> bool {
    matches!(e, Error::InvalidType { .. } | Error::InvalidArgument(_))
}

fn render_text(command: &str, status: &str, payload: &Value) -> String {
    let mut out = format!("{command}: {status}\n");
    if let Value::Object(map) = payload {
        for (k, v) in map {
            let shown = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("  {k}: {shown}\n"));
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        witten::par::set_threads(n.max(1));
    }
    let ctx = Ctx { prec: cli.prec, cache: cli.cache.clone().map(Cache::new) };
    let (command, inputs) = name_and_inputs(&cli.command);
    let start = Instant::now();
    let result = dispatch(&cli.command, &ctx);
    let timing_ms = start.elapsed().as_millis() as u64;

    let (status, payload, code) = match result {
        Ok(o) => {
            let code = match o.holds {
                Some(false) => 1,
                _ => 0,
            };
            ("ok", o.payload, code)
        }
        Err(e) => {
            let code = if is_usage_error(&e) { 2 } else { 1 };
            ("error", json!({ "error": e.to_string() }), code)
        }
    };
    if cli.json {
        let mut rec = Map::new();
        rec.insert("command".into(), json!(command));
        rec.insert("inputs".into(), json!(inputs));
        rec.insert("status".into(), json!(status));
        rec.insert("payload".into(), payload);
        rec.insert("timing_ms".into(), json!(timing_ms));
        println!("{}", Value::Object(rec));
    } else if status == "ok" {
        print!("{}", render_text(command, status, &payload));
    } else {
        eprint!("{}", render_text(command, status, &payload));
    }
    ExitCode::from(code)
}
