//! `gkm`: build moment graphs, compute canonical generators, multiply and
//! verify classes, and run the bundled example suites.
//!
//! Exit status is 0 when every check passes, 1 when a check fails (with a JSON
//! witness on standard error) and 2 on configuration errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gkm_core::coxeter::{CartanMatrix, Parabolic};
use gkm_core::examples::run_suite;
use gkm_core::graph::{ExportFormat, ExportOptions, GkmGraph, Theory};
use gkm_core::poly::{Laurent, Ordinary};
use gkm_core::qcomb::{check_coefficient_symmetry, check_omega_closed};
use gkm_core::ring::{
    canonical_generators_h, expand_in_basis, is_member, lift_generators_to_k, multiply, BasisExpansion, GeneratorSet,
    GkmClass, PointRing, Stability,
};
use gkm_core::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gkm", version, about = "Exact GKM computations for Kac-Moody flag varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Generalized Cartan matrix, rows separated by `;`, e.g. "2,-1;-1,2".
    #[arg(long)]
    cartan: Option<String>,
    /// Explicit graph in the JSON interchange format.
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,
    /// 1-based simple roots generating the parabolic, comma separated.
    #[arg(long)]
    parabolic: Option<String>,
    /// Truncation length; required for infinite Weyl groups.
    #[arg(long)]
    max_length: Option<usize>,
    /// Names of the lattice coordinates, comma separated.
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Build, validate and export a moment graph.
    Graph {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "H")]
        theory: Theory,
        #[arg(long, default_value = "table")]
        emit: ExportFormat,
        /// Swap the drawing axes of dot and svg output.
        #[arg(long)]
        rotate_basis: bool,
    },
    /// Canonical module generators.
    Gens {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "H")]
        theory: Theory,
        /// Only generators of length at most this.
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value = "table")]
        emit: ExportFormat,
    },
    /// Multiply two classes and expand the product in the generators.
    Mul {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "H")]
        theory: Theory,
        /// Generator vertex id or class file.
        lhs: String,
        /// Generator vertex id or class file.
        rhs: String,
        /// Also print the non-equivariant structure constants.
        #[arg(long)]
        specialize: bool,
        /// Recompute at a larger truncation and confirm provisional coefficients.
        #[arg(long)]
        stability_recheck: bool,
        #[arg(long, default_value = "table")]
        emit: ExportFormat,
    },
    /// Check GKM membership of a class file.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "FILE")]
        class: PathBuf,
    },
    /// Run a bundled example suite.
    Examples {
        name: Suite,
        #[arg(long, default_value = "H")]
        theory: Theory,
    },
    /// Symmetry of the q-coefficients and closedness of the grid form.
    Qcheck {
        #[arg(long = "M", default_value_t = 6)]
        m: i64,
        #[arg(long = "L", default_value_t = 4)]
        l: i64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    G2,
    #[value(name = "omega-su2")]
    OmegaSu2,
    #[value(name = "twisted-a1")]
    TwistedA1,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::G2 => "g2",
            Suite::OmegaSu2 => "omega-su2",
            Suite::TwistedA1 => "twisted-a1",
        }
    }
}

enum Failure {
    /// Bad flags or unreadable input.
    Config(String),
    /// A check ran and failed; the witness goes to stderr.
    Check(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Check(json!({ "error": e.to_string() }))
    }
}

fn config<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

fn check(e: impl Into<Error>) -> Failure {
    Failure::from(e.into())
}

impl Input {
    fn load(&self) -> Result<GkmGraph, Failure> {
        let g = match (&self.cartan, &self.graph) {
            (Some(c), None) => {
                let cartan = CartanMatrix::parse(c).map_err(config)?;
                let parabolic = match &self.parabolic {
                    Some(p) => Parabolic::parse_one_based(p).map_err(config)?,
                    None => Parabolic::default(),
                };
                if !cartan.is_finite_type() && self.max_length.is_none() {
                    return Err(Failure::Config("infinite Weyl group: --max-length is required".into()));
                }
                GkmGraph::from_cartan(&cartan, &parabolic, self.max_length).map_err(config)?
            }
            (None, Some(path)) => {
                if self.parabolic.is_some() {
                    return Err(Failure::Config("--parabolic applies only to --cartan input".into()));
                }
                let text = fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))?;
                let g = GkmGraph::from_json(&text).map_err(config)?;
                match self.max_length {
                    Some(l) => g.restrict_to_length(l),
                    None => g,
                }
            }
            _ => return Err(Failure::Config("give exactly one of --cartan and --graph".into())),
        };
        match &self.vars {
            Some(v) => g.with_variables(v.clone()).map_err(config),
            None => Ok(g),
        }
    }
}

/// Generators of either theory: cohomology directly, K-theory by lifting.
trait Theoried: PointRing {
    fn generators(g: &GkmGraph, max: Option<usize>) -> Result<GeneratorSet<Self>, Failure>;
}

impl Theoried for Ordinary {
    fn generators(g: &GkmGraph, max: Option<usize>) -> Result<GeneratorSet<Self>, Failure> {
        canonical_generators_h(g, max).map_err(check)
    }
}

impl Theoried for Laurent {
    fn generators(g: &GkmGraph, max: Option<usize>) -> Result<GeneratorSet<Self>, Failure> {
        let h = canonical_generators_h(g, max).map_err(check)?;
        lift_generators_to_k(g, &h).map_err(check)
    }
}

fn json_value(text: &str) -> Value {
    serde_json::from_str(text).expect("library emits valid json")
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn cmd_graph(input: &Input, theory: Theory, emit: ExportFormat, rotate_basis: bool) -> Result<String, Failure> {
    let g = input.load()?;
    let report = g.validate(theory);
    let out = g.export(emit, &ExportOptions { rotate_basis, overlay: None });
    if !report.passed {
        print!("{out}");
        return Err(Failure::Check(serde_json::to_value(&report).expect("report serializes")));
    }
    Ok(out)
}

fn cmd_gens<K: Theoried>(input: &Input, degree: Option<usize>, emit: ExportFormat) -> Result<String, Failure> {
    let g = input.load()?;
    let gens = K::generators(&g, degree)?;
    let non_integral: Vec<Value> =
        gens.non_integral.iter().map(|n| json!({ "generator": n.generator, "vertex": n.vertex })).collect();
    match emit {
        ExportFormat::Json => {
            let list: Vec<Value> = gens
                .iter()
                .map(|(v, x)| {
                    json!({
                        "generator": g.vertex(v).id,
                        "length": g.length(v),
                        "values": json_value(&x.to_json(&g))["values"].clone(),
                    })
                })
                .collect();
            Ok(pretty(&json!({ "theory": K::THEORY, "generators": list, "non_integral": non_integral })))
        }
        ExportFormat::Table => {
            let mut out = String::new();
            for (v, x) in gens.iter() {
                out.push_str(&format!("[{}] length {}\n", g.vertex(v).id, g.length(v)));
                for (w, value) in x.render(&g).iter().enumerate() {
                    if value != "0" {
                        out.push_str(&format!("  {} : {}\n", g.vertex(w).id, value));
                    }
                }
            }
            for n in &non_integral {
                out.push_str(&format!("non-integral lift: {n}\n"));
            }
            Ok(out)
        }
        other => Err(Failure::Config(format!("gens cannot emit {other:?}; use table or json"))),
    }
}

fn operand<K: Theoried>(g: &GkmGraph, gens: &GeneratorSet<K>, spec: &str) -> Result<GkmClass<K>, Failure> {
    if let Some(x) = gens.by_id(g, spec) {
        return Ok(x.clone());
    }
    let text =
        fs::read_to_string(spec).map_err(|_| config(format!("{spec:?} is neither a vertex id nor a readable file")))?;
    GkmClass::from_json(g, &text).map_err(config)
}

fn expansion_json<K: PointRing>(g: &GkmGraph, e: &BasisExpansion<K>) -> Value {
    let terms: Vec<Value> = e
        .nonzero()
        .map(|t| {
            json!({
                "generator": g.vertex(t.generator).id,
                "coefficient": t.coefficient.render(g.variables()),
                "stability": t.stability,
            })
        })
        .collect();
    json!({ "terms": terms, "remainder": e.remainder })
}

fn cmd_mul<K: Theoried>(
    input: &Input,
    lhs: &str,
    rhs: &str,
    specialize: bool,
    recheck: bool,
    emit: ExportFormat,
) -> Result<String, Failure> {
    let g = input.load()?;
    let gens = K::generators(&g, None)?;
    let (a, b) = (operand(&g, &gens, lhs)?, operand(&g, &gens, rhs)?);
    let product = multiply(&g, &a, &b).map_err(check)?;
    let e = expand_in_basis(&g, &product, &gens).map_err(check)?;
    let specialized = if specialize { Some(e.specialize().map_err(check)?) } else { None };

    let mut changed = Vec::new();
    if recheck {
        let l = g.truncation().ok_or_else(|| Failure::Config("--stability-recheck needs a truncated graph".into()))?;
        let bigger = Input {
            cartan: input.cartan.clone(),
            graph: None,
            parabolic: input.parabolic.clone(),
            max_length: Some(l + 2),
            vars: input.vars.clone(),
        };
        if input.cartan.is_none() {
            return Err(Failure::Config("--stability-recheck needs --cartan input".into()));
        }
        let big = bigger.load()?;
        let big_gens = K::generators(&big, None)?;
        let lift = |spec: &str| -> Result<GkmClass<K>, Failure> {
            match big.vertex_index(spec).and_then(|v| big_gens.for_vertex(v)) {
                Some(x) => Ok(x.clone()),
                None => Err(Failure::Config("--stability-recheck needs generator operands".into())),
            }
        };
        let big_e = expand_in_basis(&big, &multiply(&big, &lift(lhs)?, &lift(rhs)?).map_err(check)?, &big_gens)
            .map_err(check)?;
        for t in e.terms.iter().filter(|t| t.stability == Stability::Provisional) {
            let id = &g.vertex(t.generator).id;
            let again = big.vertex_index(id).and_then(|v| big_e.coefficient(v));
            if again != Some(&t.coefficient) {
                changed.push(id.clone());
            }
        }
    }

    let out = match emit {
        ExportFormat::Json => {
            let mut v = json!({
                "product": json_value(&product.to_json(&g)),
                "expansion": expansion_json(&g, &e),
            });
            if let Some(s) = &specialized {
                let m: serde_json::Map<String, Value> = s
                    .iter()
                    .filter(|(_, c)| !c.is_integer() || c.numer() != &0.into())
                    .map(|(v, c)| (g.vertex(*v).id.clone(), Value::String(c.to_string())))
                    .collect();
                v["specialized"] = Value::Object(m);
            }
            if recheck {
                v["recheck_changed"] = json!(changed);
            }
            pretty(&v)
        }
        ExportFormat::Table => {
            let mut out = e.render(&g);
            if let Some(s) = &specialized {
                let terms: Vec<String> = s
                    .iter()
                    .filter(|(_, c)| c.numer() != &0.into())
                    .map(|(v, c)| format!("{} {}", c, g.vertex(*v).id))
                    .collect();
                out.push_str(&format!(
                    "specialized: {}\n",
                    if terms.is_empty() { "0".into() } else { terms.join(" + ") }
                ));
            }
            if recheck {
                out.push_str(&format!(
                    "recheck at L+2: {}\n",
                    if changed.is_empty() { "confirmed" } else { "changed" }
                ));
            }
            out
        }
        other => return Err(Failure::Config(format!("mul cannot emit {other:?}; use table or json"))),
    };
    if !changed.is_empty() {
        print!("{out}");
        return Err(Failure::Check(json!({ "provisional_changed": changed })));
    }
    Ok(out)
}

fn cmd_verify(input: &Input, path: &PathBuf) -> Result<String, Failure> {
    let g = input.load()?;
    let text = fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))?;
    let theory: Theory = serde_json::from_str::<Value>(&text)
        .ok()
        .and_then(|v| v.get("theory").and_then(|t| serde_json::from_value(t.clone()).ok()))
        .ok_or_else(|| Failure::Config("class file lacks a theory".into()))?;
    let report = match theory {
        Theory::H => is_member(&g, &GkmClass::<Ordinary>::from_json(&g, &text).map_err(config)?),
        Theory::K => is_member(&g, &GkmClass::<Laurent>::from_json(&g, &text).map_err(config)?),
    }
    .map_err(check)?;
    if report.member {
        Ok(format!("member ({} edges)\n", g.edges().len()))
    } else {
        println!("not a member");
        Err(Failure::Check(serde_json::to_value(&report).expect("report serializes")))
    }
}

fn cmd_examples(name: Suite, theory: Theory) -> Result<String, Failure> {
    let (lines, passed) = run_suite(name.name(), theory)?;
    let out = lines.join("\n") + "\n";
    if passed {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Check(json!({ "suite": name.name(), "passed": false })))
    }
}

fn cmd_qcheck(m: i64, l: i64) -> Result<String, Failure> {
    if m < 1 || l < 0 {
        return Err(Failure::Config("need --M >= 1 and --L >= 0".into()));
    }
    let sym = check_coefficient_symmetry(m, l).map_err(check)?;
    let mut out = format!(
        "symmetry: {} pairs, {} asymmetric, {} route mismatches\n",
        sym.pairs_checked,
        sym.failures.len(),
        sym.route_mismatches.len()
    );
    let mut failed = Vec::new();
    if !sym.passed() {
        failed.push(serde_json::to_value(&sym).expect("report serializes"));
    }
    for ell in 0..=l {
        let c = check_omega_closed(m, m, ell).map_err(check)?;
        out.push_str(&format!(
            "closedness l={ell}: {} squares, {} not closed; boundary {} rectangles, {} mismatches\n",
            c.squares_checked,
            c.failures.len(),
            c.rectangles_checked,
            c.stokes_failures.len()
        ));
        if !c.passed() {
            failed.push(serde_json::to_value(&c).expect("report serializes"));
        }
    }
    if failed.is_empty() {
        out.push_str("pass\n");
        Ok(out)
    } else {
        println!("{out}fail");
        Err(Failure::Check(Value::Array(failed)))
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Graph { input, theory, emit, rotate_basis } => cmd_graph(&input, theory, emit, rotate_basis),
        Command::Gens { input, theory: Theory::H, degree, emit } => cmd_gens::<Ordinary>(&input, degree, emit),
        Command::Gens { input, theory: Theory::K, degree, emit } => cmd_gens::<Laurent>(&input, degree, emit),
        Command::Mul { input, theory, lhs, rhs, specialize, stability_recheck, emit } => match theory {
            Theory::H => cmd_mul::<Ordinary>(&input, &lhs, &rhs, specialize, stability_recheck, emit),
            Theory::K => cmd_mul::<Laurent>(&input, &lhs, &rhs, specialize, stability_recheck, emit),
        },
        Command::Verify { input, class } => cmd_verify(&input, &class),
        Command::Examples { name, theory } => cmd_examples(name, theory),
        Command::Qcheck { m, l } => cmd_qcheck(m, l),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(witness)) => {
            eprintln!("{}", serde_json::to_string(&witness).expect("json values serialize"));
            ExitCode::FAILURE
        }
    }
}
