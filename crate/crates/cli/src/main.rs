use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use multicx::model::Style;
use multicx::spectral::Method;
use multicx::{Bidegree, Bound, Exec, Field, FieldSpec, PrimeField, Rationals};
use multicx_cli::commands::{self, BuildArgs, BuildKind, TruncMode};
use multicx_cli::error::{CliError, Result};
use multicx_cli::format::RawDocument;
use multicx_cli::report::Outcome;

/// Exact computations with multicomplexes.
///
/// FILE arguments name a document (`-` reads stdin); `FILE#NAME` selects a
/// complex other than the first. The coefficient field comes from the
/// document header, or from MULTICX_FIELD (default gf2) when the header has
/// none and for commands without input.
#[derive(Parser, Debug)]
#[command(name = "multicx", version)]
struct Cli {
    /// Output mode; queries default to table, constructions to json.
    #[arg(long, global = true, value_enum)]
    emit: Option<Emit>,
    /// Run per-bidegree work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the defining relations of every complex and morphism.
    Validate { file: String },
    /// Dimensions of the page E_r.
    Page {
        file: String,
        #[arg(short = 'r')]
        r: usize,
        #[arg(long, default_value = "witness")]
        method: Method,
        /// A single bidegree `p,q`.
        #[arg(long, value_parser = parse_bidegree, allow_hyphen_values = true, conflicts_with = "table")]
        at: Option<Bidegree>,
        /// The whole page as a grid (the default).
        #[arg(long)]
        table: bool,
    },
    /// The map E_r(f) induced by a morphism.
    Pagemap {
        file: String,
        #[arg(long)]
        morphism: Option<String>,
        #[arg(short = 'r')]
        r: usize,
        #[arg(long, default_value = "witness")]
        method: Method,
        #[arg(long, value_parser = parse_bidegree, allow_hyphen_values = true)]
        at: Option<Bidegree>,
    },
    /// Whether a morphism is an E_r-quasi-isomorphism (bijective on E_{r+1}).
    Weq {
        file: String,
        #[arg(long)]
        morphism: Option<String>,
        #[arg(short = 'r')]
        r: usize,
    },
    /// Whether a morphism is an r-fibration.
    Fib {
        file: String,
        #[arg(long)]
        morphism: Option<String>,
        #[arg(short = 'r')]
        r: usize,
        #[arg(long, default_value = "page")]
        style: Style,
        /// Also require an E_r-quasi-isomorphism.
        #[arg(long)]
        trivial: bool,
    },
    /// Solve the lifting problem `l i = top`, `p l = bottom`.
    Lift {
        file: String,
        #[arg(long)]
        i: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        top: String,
        #[arg(long)]
        bottom: String,
    },
    /// Construct a standard object.
    Build {
        kind: BuildKind,
        #[arg(long, default_value = "2")]
        n: Bound,
        #[arg(long, default_value_t = 0)]
        r: usize,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        q: i64,
        /// Lowest filtration kept (pmin); required for disk, zw, bw, zwinf.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<i64>,
        /// For `path`: build P_r(A) for the complex in this file instead of Λ_r.
        #[arg(long)]
        input: Option<String>,
        /// For `zwinf`: largest stage tried before giving up.
        #[arg(long, default_value_t = 12)]
        s_max: usize,
    },
    /// Tensor product of two complexes.
    Tensor { left: String, right: String },
    /// Direct sum of two complexes.
    Dsum { left: String, right: String },
    /// Pushout of two morphisms with a common source.
    Pushout {
        file: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Extension of scalars to n-multicomplexes.
    Extend {
        file: String,
        #[arg(long)]
        to: Bound,
    },
    /// Restriction of scalars to l-multicomplexes.
    Restrict {
        file: String,
        #[arg(long)]
        to: Bound,
    },
    /// Left or upper half-plane truncation.
    Truncate {
        file: String,
        #[arg(long, value_enum)]
        mode: TruncMode,
    },
    /// The dg algebra C_n: basis dimensions, and with --check-dg its identities.
    Cn {
        #[arg(long, default_value = "inf")]
        n: Bound,
        #[arg(long)]
        check_dg: bool,
        #[arg(long, default_value_t = 6)]
        max_weight: usize,
    },
}

fn parse_bidegree(s: &str) -> std::result::Result<Bidegree, String> {
    let (p, q) = s.split_once(',').ok_or_else(|| format!("expected p,q, got `{s}`"))?;
    let p = p.trim().parse().map_err(|_| format!("bad p in `{s}`"))?;
    let q = q.trim().parse().map_err(|_| format!("bad q in `{s}`"))?;
    Ok(Bidegree::new(p, q))
}

/// A file argument: the document and the selected complex name, if any.
struct Input {
    raw: RawDocument,
    name: Option<String>,
}

fn load(arg: &str) -> Result<Input> {
    let (path, name) = match arg.rsplit_once('#') {
        Some((p, n)) if !n.is_empty() => (p, Some(n.to_string())),
        _ => (arg, None),
    };
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read `{path}`: {e}")))?
    };
    let label = if path == "-" { "<stdin>" } else { path };
    Ok(Input {
        raw: RawDocument::parse(label, &text)?,
        name,
    })
}

fn env_field() -> Result<FieldSpec> {
    match std::env::var("MULTICX_FIELD") {
        Ok(s) if !s.trim().is_empty() => s.parse().map_err(|e: multicx::Error| CliError::Usage(format!("MULTICX_FIELD: {e}"))),
        _ => Ok(FieldSpec::Prime(2)),
    }
}

fn field_of(inputs: &[&Input]) -> Result<FieldSpec> {
    let default = env_field()?;
    let mut spec = None;
    for i in inputs {
        let s = i.raw.field.unwrap_or(default);
        if spec.is_some_and(|t| t != s) {
            return Err(CliError::Usage(format!("inputs use different fields ({} and {s})", spec.unwrap())));
        }
        spec = Some(s);
    }
    Ok(spec.unwrap_or(default))
}

fn run<F: Field>(field: F, command: &Command, inputs: &[Input], exec: Exec) -> Result<Outcome> {
    let doc = |k: usize| inputs[k].raw.build(&field, true);
    let name = |k: usize| inputs[k].name.as_deref();
    match command {
        Command::Validate { .. } => commands::validate(&inputs[0].raw, &field),
        Command::Page { r, method, at, .. } => commands::page(&doc(0)?, name(0), *r, *method, *at, exec),
        Command::Pagemap { morphism, r, method, at, .. } => commands::pagemap(&doc(0)?, morphism.as_deref(), *r, *method, *at),
        Command::Weq { morphism, r, .. } => commands::weq(&doc(0)?, morphism.as_deref(), *r, exec),
        Command::Fib { morphism, r, style, trivial, .. } => commands::fib(&doc(0)?, morphism.as_deref(), *r, *style, *trivial, exec),
        Command::Lift { i, p, top, bottom, .. } => commands::lift(&doc(0)?, i, p, top, bottom),
        Command::Build { kind, n, r, p, q, window, s_max, .. } => {
            let args = BuildArgs {
                kind: *kind,
                n: *n,
                r: *r,
                at: Bidegree::new(*p, *q),
                window: *window,
                s_max: *s_max,
            };
            let input = if inputs.is_empty() { None } else { Some(doc(0)?) };
            commands::build(&field, &args, input.as_ref())
        }
        Command::Tensor { .. } => commands::tensor(&doc(0)?, name(0), &doc(1)?, name(1)),
        Command::Dsum { .. } => commands::dsum(&doc(0)?, name(0), &doc(1)?, name(1)),
        Command::Pushout { f, g, .. } => commands::pushout(&doc(0)?, f, g),
        Command::Extend { to, .. } => commands::extend(&doc(0)?, name(0), *to),
        Command::Restrict { to, .. } => commands::restrict(&doc(0)?, name(0), *to),
        Command::Truncate { mode, .. } => commands::truncate(&doc(0)?, name(0), *mode),
        Command::Cn { n, check_dg, max_weight } => commands::cn(&field, *n, *max_weight, *check_dg),
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let files: Vec<&str> = match &cli.command {
        Command::Validate { file }
        | Command::Page { file, .. }
        | Command::Pagemap { file, .. }
        | Command::Weq { file, .. }
        | Command::Fib { file, .. }
        | Command::Lift { file, .. }
        | Command::Pushout { file, .. }
        | Command::Extend { file, .. }
        | Command::Restrict { file, .. }
        | Command::Truncate { file, .. } => vec![file],
        Command::Tensor { left, right } | Command::Dsum { left, right } => vec![left, right],
        Command::Build { input, .. } => input.iter().map(String::as_str).collect(),
        Command::Cn { .. } => vec![],
    };
    let inputs: Vec<Input> = files.into_iter().map(load).collect::<Result<_>>()?;
    let spec = field_of(&inputs.iter().collect::<Vec<_>>())?;
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match spec {
        FieldSpec::Prime(p) => run(PrimeField::new(p)?, &cli.command, &inputs, exec),
        FieldSpec::Rational => run(Rationals, &cli.command, &inputs, exec),
    }
}

fn default_emit(c: &Command) -> Emit {
    match c {
        Command::Build { .. }
        | Command::Tensor { .. }
        | Command::Dsum { .. }
        | Command::Pushout { .. }
        | Command::Extend { .. }
        | Command::Restrict { .. }
        | Command::Truncate { .. } => Emit::Json,
        _ => Emit::Table,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let emit = cli.emit.unwrap_or_else(|| default_emit(&cli.command));
    match execute(&cli) {
        Ok(out) => {
            let text = match emit {
                Emit::Json => &out.json,
                Emit::Table => &out.table,
            };
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(text.as_bytes());
            ExitCode::from(u8::from(!out.ok))
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(h) = e.hint() {
                eprintln!("{h}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
