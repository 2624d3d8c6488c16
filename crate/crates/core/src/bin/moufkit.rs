use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use moufkit::abelext::{decompose, decompose_canonical, Decomposition};
use moufkit::commutator::{
    classical_solvable, commutator, congruence_solvable, is_abelian_in, is_central, nilpotent,
    DEFAULT_ORDER_CAP,
};
use moufkit::constructions::{build_q, AbelianGroupSpec, QuadraticFormGF2};
use moufkit::fixtures::fixture;
use moufkit::format::{parse_loop, to_loop_string};
use moufkit::mappings::DEFAULT_INN_CAP;
use moufkit::report::{analyze, to_json, ReportOptions, DEFAULT_NORMAL_LATTICE_CAP};
use moufkit::subloops::{is_normal, normal_closure, Subloop};
use moufkit::{FiniteLoop, LoopError};

#[derive(Parser)]
#[command(name = "moufkit", version, about = "Finite loop analysis over Cayley tables")]
struct Cli {
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Caps {
    /// Largest order for the congruence solvability search
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    max_order: usize,
    /// Largest inner mapping group to enumerate
    #[arg(long, global = true, default_value_t = DEFAULT_INN_CAP)]
    max_inn: usize,
    /// Largest normal subloop lattice to list
    #[arg(long, global = true, default_value_t = DEFAULT_NORMAL_LATTICE_CAP)]
    max_normal_lattice: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a `.loop` file holds a loop with identity 0
    Validate { path: PathBuf },
    /// Full analysis report as JSON
    Analyze {
        path: PathBuf,
        /// Write the report here instead of stdout
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write a `.loop` table
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Print [X, Y] for the normal closures of two element sets
    Commutator {
        path: PathBuf,
        /// Comma-separated indices, or `all`
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Nilpotency and both solvability verdicts
    Solvability {
        path: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decompose over a normal commutative-group subloop
    Decompose {
        path: PathBuf,
        #[arg(long)]
        x: String,
        /// Transversal to use instead of minimal coset representatives
        #[arg(long)]
        transversal: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// The doubled loop on F × W twisted by a quadratic form on W/B
    Example {
        /// Cyclic factor orders of W, e.g. `2,4`
        #[arg(long)]
        factors: String,
        /// Coordinates of the order-2 element f
        #[arg(long)]
        f: String,
        /// Generators of B as `;`-separated coordinate lists; defaults to ⟨f⟩
        #[arg(long)]
        b: Option<String>,
        /// Polynomial in u1..um over GF(2), e.g. `u1u2+u3`
        #[arg(long)]
        form: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A named fixture, e.g. `cyclic 7` or `chein-double dihedral 5`
    Fixture {
        #[arg(required = true, num_args = 1..)]
        name: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// An error tagged with its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

type CmdResult = Result<(), Failure>;

fn domain(err: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 1,
        err: err.into(),
    }
}

fn input(err: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 2,
        err: err.into(),
    }
}

fn classify(e: LoopError) -> Failure {
    match e {
        LoopError::Parse { .. } | LoopError::IdentityNotFirst(_) => input(e),
        other => domain(other),
    }
}

fn load(path: &Path) -> Result<FiniteLoop, Failure> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(input)?;
    parse_loop(&text).map_err(|e| {
        let f = classify(e);
        Failure {
            code: f.code,
            err: f.err.context(path.display().to_string()),
        }
    })
}

fn emit(text: &str, out: Option<&Path>) -> CmdResult {
    match out {
        Some(p) => std::fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(input),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_list(text: &str) -> anyhow::Result<Vec<usize>> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| anyhow!("bad integer {t:?}"))
        })
        .collect()
}

fn parse_elements(q: &FiniteLoop, text: &str) -> Result<Vec<usize>, Failure> {
    if text.trim() == "all" {
        return Ok(q.elements().collect());
    }
    let elems = parse_list(text).map_err(input)?;
    for &e in &elems {
        q.check_element(e).map_err(domain)?;
    }
    Ok(elems)
}

fn normal_from(q: &FiniteLoop, label: &str, text: &str) -> Result<Subloop, Failure> {
    let elems = parse_elements(q, text)?;
    if let Ok(s) = Subloop::new(q, &elems) {
        if is_normal(q, &s) {
            return Ok(s);
        }
    }
    let s = normal_closure(q, &elems);
    eprintln!("note: --{label} replaced by its normal closure {:?}", s.elements());
    Ok(s)
}

fn cmd_validate(path: &Path) -> CmdResult {
    let q = load(path)?;
    println!("order {}", q.order());
    println!("identity 0");
    Ok(())
}

fn cmd_analyze(path: &Path, json: Option<&Path>, opts: &ReportOptions) -> CmdResult {
    let q = load(path)?;
    let report = analyze(&q, &path.display().to_string(), opts);
    emit(&to_json(&report), json)
}

fn cmd_construct(kind: ConstructKind) -> CmdResult {
    let (q, out) = match kind {
        ConstructKind::Example {
            factors,
            f,
            b,
            form,
            out,
        } => {
            let factors = parse_list(&factors).map_err(input)?;
            let f = parse_list(&f).map_err(input)?;
            let b_gens = match b {
                Some(b) => b
                    .split(';')
                    .map(parse_list)
                    .collect::<anyhow::Result<Vec<_>>>()
                    .map_err(input)?,
                None => vec![f.clone()],
            };
            let spec = AbelianGroupSpec::new(&factors, &f, &b_gens).map_err(domain)?;
            let form = QuadraticFormGF2::from_polynomial(spec.rank(), &form).map_err(domain)?;
            (build_q(&spec, &form).map_err(domain)?.q, out)
        }
        ConstructKind::Fixture { name, out } => (fixture(&name.join(":")).map_err(domain)?, out),
    };
    emit(&to_loop_string(&q), out.as_deref())
}

fn cmd_commutator(path: &Path, x: &str, y: &str) -> CmdResult {
    let q = load(path)?;
    let xs = normal_from(&q, "x", x)?;
    let ys = normal_from(&q, "y", y)?;
    let c = commutator(&q, &xs, &ys).map_err(domain)?;
    println!("{:?}", c.elements());
    if xs == ys {
        println!("abelian in Q: {}", is_abelian_in(&q, &xs).map_err(domain)?);
    }
    if ys.is_whole() {
        println!("central: {}", is_central(&q, &xs).map_err(domain)?);
    }
    Ok(())
}

fn cmd_solvability(path: &Path, json: Option<&Path>, max_order: usize) -> CmdResult {
    let q = load(path)?;
    let doc = serde_json::json!({
        "schema": 1,
        "nilpotent": nilpotent(&q),
        "classically_solvable": classical_solvable(&q),
        "congruence_solvable": congruence_solvable(&q, max_order).map_err(domain)?,
    });
    let mut text = serde_json::to_string_pretty(&doc).map_err(domain)?;
    text.push('\n');
    emit(&text, json)
}

fn cmd_decompose(path: &Path, x: &str, u: Option<&str>, json: Option<&Path>) -> CmdResult {
    let q = load(path)?;
    let elems = parse_elements(&q, x)?;
    let xs = Subloop::new(&q, &elems).map_err(domain)?;
    let d = match u {
        Some(u) => decompose(&q, &xs, &parse_elements(&q, u)?),
        None => decompose_canonical(&q, &xs),
    }
    .map_err(domain)?;
    let doc = match &d {
        Decomposition::Extension { data, embedding } => serde_json::json!({
            "schema": 1,
            "extension": data,
            "embedding": embedding,
        }),
        Decomposition::Obstructed(o) => serde_json::json!({
            "schema": 1,
            "obstruction": o,
        }),
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(domain)?;
    text.push('\n');
    emit(&text, json)
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("MOUFKIT_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow!("MOUFKIT_THREADS must be a positive integer, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring thread pool")?;
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    configure_threads().map_err(input)?;
    let opts = ReportOptions {
        max_order: cli.caps.max_order,
        max_inn: cli.caps.max_inn,
        max_normal_lattice: cli.caps.max_normal_lattice,
    };
    match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Analyze { path, json } => cmd_analyze(&path, json.as_deref(), &opts),
        Command::Construct { kind } => cmd_construct(kind),
        Command::Commutator { path, x, y } => cmd_commutator(&path, &x, &y),
        Command::Solvability { path, json } => {
            cmd_solvability(&path, json.as_deref(), opts.max_order)
        }
        Command::Decompose {
            path,
            x,
            transversal,
            json,
        } => cmd_decompose(&path, &x, transversal.as_deref(), json.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
