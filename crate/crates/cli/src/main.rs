//! `evoalg`: command-line front end.
//!
//! Exit codes: 0 success or true verdict, 1 false or negative verdict,
//! 2 unknown or extension required, 3 input error.

#![allow(clippy::result_large_err)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use evoalg::algebra::EvolutionAlgebra;
use evoalg::classify::{classify, iso_check, ClassifyError, IsoVerdict};
use evoalg::derivations::{derivation_space, has_nonsingular_derivation, DerivationError};
use evoalg::format::{index_set, parse_algebra, write_algebra, write_matrix_block, write_matrix_file};
use evoalg::invariants::{canonical_presentation, decompose, delta_index, delta_trace, InvariantError};
use evoalg::linalg::Mat;
use evoalg::scalar::FieldSpec;
use evoalg::variety::{
    builtin, check_degeneration, check_identity, find_multilinear_identities, parse_family, IdentitySpec, VarietyError,
};

#[derive(Parser)]
#[command(
    name = "evoalg",
    version,
    about = "Invariants, classification, derivations and degenerations of evolution algebras"
)]
struct Cli {
    /// Arithmetic mode. `approx` retries computations that need a root
    /// outside the field in floating complex arithmetic.
    #[arg(long, value_enum, global = true, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Tolerance for `--mode approx`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Approx,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimension, annihilator, delta index and delta trace.
    Info { path: PathBuf },
    /// Canonical label and witness basis (dimension <= 3, or dim A^2 = 1).
    Classify { path: PathBuf },
    /// Isomorphism test with a witness when positive.
    Iso { a: PathBuf, b: PathBuf },
    /// Dimension of the derivation algebra.
    Derivations {
        path: PathBuf,
        /// Print the basis matrices.
        #[arg(long)]
        basis: bool,
    },
    /// Checks that `source` degenerates to `target` along a family, given
    /// as a family file or `builtin:NAME` (En_to_In, En_to_Nn, Ek_drop:k,
    /// Ik_drop:k).
    Degenerate {
        source: PathBuf,
        target: PathBuf,
        family: String,
    },
    /// Checks a multilinear identity on all basis tuples.
    Identity {
        path: PathBuf,
        /// File holding the identity, e.g. `+1*((x*y)*z)*t -1*((x*y)*t)*z`.
        spec: Option<PathBuf>,
        /// The identity given inline.
        #[arg(long, conflicts_with = "spec")]
        expr: Option<String>,
        /// List a basis of the degree-3 multilinear identities instead.
        #[arg(long, conflicts_with_all = ["spec", "expr"])]
        degree3: bool,
    },
    /// Graphviz export of the associated digraph.
    Graph {
        path: PathBuf,
        #[arg(long)]
        weighted: bool,
    },
    /// Canonical presentation and the basis realizing it.
    Canon {
        path: PathBuf,
        /// Write `<prefix>.alg` and `<prefix>.witness` instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Outcome of a command; the exit code is a function of this alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    Success,
    Negative,
    Undecided,
    InputError,
}

impl Verdict {
    fn code(self) -> u8 {
        match self {
            Verdict::Success => 0,
            Verdict::Negative => 1,
            Verdict::Undecided => 2,
            Verdict::InputError => 3,
        }
    }
}

struct Failure {
    verdict: Verdict,
    message: String,
}

fn input_err(message: impl Into<String>) -> Failure {
    Failure {
        verdict: Verdict::InputError,
        message: message.into(),
    }
}

fn undecided(message: impl Into<String>) -> Failure {
    Failure {
        verdict: Verdict::Undecided,
        message: message.into(),
    }
}

type Outcome = Result<Verdict, Failure>;

struct Ctx {
    mode: Mode,
    tol: f64,
    format: Format,
}

impl Ctx {
    fn load(&self, path: &Path) -> Result<EvolutionAlgebra, Failure> {
        let text = fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
        parse_algebra(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))
    }

    fn approx_field(&self) -> Result<FieldSpec, Failure> {
        FieldSpec::approx(self.tol).map_err(|e| input_err(e.to_string()))
    }

    /// Runs `f` exactly; in approx mode, a missing root triggers a rerun on
    /// the inputs converted to floating complex. The flag reports the rerun.
    fn with_fallback<T, E>(
        &self,
        algs: &[&EvolutionAlgebra],
        needs_root: impl Fn(&E) -> bool,
        f: impl Fn(&[EvolutionAlgebra]) -> Result<T, E>,
    ) -> Result<(Result<T, E>, bool), Failure> {
        let exact: Vec<EvolutionAlgebra> = algs.iter().map(|a| (*a).clone()).collect();
        let r = f(&exact);
        match r {
            Err(ref e) if self.mode == Mode::Approx && needs_root(e) => {
                let field = self.approx_field()?;
                let conv = algs
                    .iter()
                    .map(|a| a.convert(field))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| input_err(e.to_string()))?;
                Ok((f(&conv), true))
            }
            other => Ok((other, false)),
        }
    }

    fn emit(&self, text: String, obj: Value) {
        match self.format {
            Format::JsonLines => println!("{obj}"),
            _ => print!("{text}"),
        }
    }
}

fn classify_failure(e: ClassifyError) -> Failure {
    match e {
        ClassifyError::Mismatch(_) | ClassifyError::InvalidParameter(_) => input_err(e.to_string()),
        _ => undecided(e.to_string()),
    }
}

fn cmd_info(ctx: &Ctx, path: &Path) -> Outcome {
    let a = ctx.load(path)?;
    let ann = a.annihilator();
    let mut text = format!(
        "dim={} field={}\nannihilator={} nondegenerate={}\n",
        a.dim(),
        a.field(),
        index_set(&ann),
        ann.is_empty()
    );
    let mut obj = json!({
        "dim": a.dim(),
        "field": a.field().to_string(),
        "annihilator": ann.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "nondegenerate": ann.is_empty(),
        "dim_square": a.dim_square(),
    });
    match (delta_index(&a), delta_trace(&a), decompose(&a)) {
        (Ok(d), Ok(t), Ok(dec)) => {
            let blocks: Vec<String> = dec.blocks.iter().map(|b| index_set(&b.indices)).collect();
            text += &format!("delta={d} Delta={t}\nblocks={}\n", blocks.join(","));
            obj["delta"] = json!(d.0);
            obj["Delta"] = json!(t.to_string());
            obj["blocks"] = json!(dec
                .blocks
                .iter()
                .map(|b| b.indices.iter().map(|i| i + 1).collect::<Vec<_>>())
                .collect::<Vec<_>>());
        }
        (Err(InvariantError::Degenerate), ..) => {
            text += "delta=none Delta=none (degenerate)\n";
            obj["delta"] = Value::Null;
            obj["Delta"] = Value::Null;
        }
        (Err(e), ..) | (_, Err(e), _) | (.., Err(e)) => return Err(undecided(e.to_string())),
    }
    text += &format!("dim_A2={}\n", a.dim_square());
    ctx.emit(text, obj);
    Ok(Verdict::Success)
}

fn approx_note(approx: bool) -> &'static str {
    if approx {
        " (approximate)"
    } else {
        ""
    }
}

fn cmd_classify(ctx: &Ctx, path: &Path) -> Outcome {
    let a = ctx.load(path)?;
    let (r, approx) = ctx.with_fallback(
        &[&a],
        |e| matches!(e, ClassifyError::ExtensionRequired(_)),
        |v| classify(&v[0]),
    )?;
    let c = r.map_err(classify_failure)?;
    let text = format!(
        "label={}{}\nwitness\n{}",
        c.label,
        approx_note(approx),
        write_matrix_block(&c.witness)
    );
    let obj = json!({
        "label": c.label.to_string(),
        "approximate": approx,
        "witness": matrix_rows(&c.witness),
    });
    ctx.emit(text, obj);
    Ok(Verdict::Success)
}

fn matrix_rows(m: &Mat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m[(r, c)].to_string()).collect())
        .collect()
}

fn cmd_iso(ctx: &Ctx, pa: &Path, pb: &Path) -> Outcome {
    let (a, b) = (ctx.load(pa)?, ctx.load(pb)?);
    let mut r = iso_check(&a, &b);
    let retry = matches!(r, Err(ClassifyError::ExtensionRequired(_)) | Ok(IsoVerdict::Unknown(_)));
    let approx = ctx.mode == Mode::Approx && retry;
    if approx {
        let f = ctx.approx_field()?;
        let conv = |x: &EvolutionAlgebra| x.convert(f).map_err(|e| input_err(e.to_string()));
        r = iso_check(&conv(&a)?, &conv(&b)?);
    }
    let verdict = r.map_err(classify_failure)?;
    let note = approx_note(approx);
    let (text, obj, v) = match verdict {
        IsoVerdict::Isomorphic(c) => (
            format!("isomorphic{note}\nwitness\n{}", write_matrix_block(&c)),
            json!({"verdict": "isomorphic", "approximate": approx, "witness": matrix_rows(&c)}),
            Verdict::Success,
        ),
        IsoVerdict::NotIsomorphic(reason) => (
            format!("not isomorphic{note}: {reason}\n"),
            json!({"verdict": "not_isomorphic", "approximate": approx, "reason": reason}),
            Verdict::Negative,
        ),
        IsoVerdict::Unknown(reason) => (
            format!("unknown{note}: {reason}\n"),
            json!({"verdict": "unknown", "approximate": approx, "reason": reason}),
            Verdict::Undecided,
        ),
    };
    ctx.emit(text, obj);
    Ok(v)
}

fn derivation_failure(e: DerivationError) -> Failure {
    match e {
        DerivationError::UnsupportedField(_) => input_err(e.to_string()),
        _ => undecided(e.to_string()),
    }
}

fn cmd_derivations(ctx: &Ctx, path: &Path, basis: bool) -> Outcome {
    let a = ctx.load(path)?;
    let s = derivation_space(&a).map_err(derivation_failure)?;
    let nonsingular = match has_nonsingular_derivation(&s) {
        Ok(b) => Some(b),
        Err(DerivationError::UnsupportedField(_)) => None,
        Err(e) => return Err(undecided(e.to_string())),
    };
    let mut text = format!("dim={}\n", s.dim());
    if let Some(b) = nonsingular {
        text += &format!("nonsingular={b}\n");
    }
    if basis {
        for (k, d) in s.basis.iter().enumerate() {
            text += &format!("D{}\n{}", k + 1, write_matrix_block(d));
        }
    }
    let obj = json!({
        "dim": s.dim(),
        "nonsingular": nonsingular,
        "basis": if basis { json!(s.basis.iter().map(matrix_rows).collect::<Vec<_>>()) } else { Value::Null },
    });
    ctx.emit(text, obj);
    Ok(Verdict::Success)
}

fn cmd_degenerate(ctx: &Ctx, ps: &Path, pt: &Path, family: &str) -> Outcome {
    let (a, b) = (ctx.load(ps)?, ctx.load(pt)?);
    if a.dim() != b.dim() || a.field() != b.field() {
        return Err(input_err("source and target differ in dimension or field"));
    }
    let n = a.dim();
    let (g, g_inv) = match family.strip_prefix("builtin:") {
        Some(name) => {
            let d = builtin(name, n, a.field()).map_err(|e| input_err(e.to_string()))?;
            (d.g, d.g_inv)
        }
        None => {
            let text = fs::read_to_string(family).map_err(|e| input_err(format!("{family}: {e}")))?;
            parse_family(&text, n, a.field()).map_err(|e| input_err(format!("{family}: {e}")))?
        }
    };
    let (holds, reason) = match check_degeneration(&a, &b, &g, &g_inv) {
        Ok(true) => (true, None),
        Ok(false) => (false, Some("limit differs from the target".to_string())),
        Err(e @ VarietyError::NegativePower(..)) => (false, Some(e.to_string())),
        Err(e) => return Err(input_err(e.to_string())),
    };
    let text = match &reason {
        None => "degenerates=true\n".to_string(),
        Some(r) => format!("degenerates=false: {r}\n"),
    };
    ctx.emit(text, json!({"degenerates": holds, "reason": reason}));
    Ok(if holds { Verdict::Success } else { Verdict::Negative })
}

fn cmd_identity(ctx: &Ctx, path: &Path, spec: Option<&Path>, expr: Option<&str>, degree3: bool) -> Outcome {
    let a = ctx.load(path)?;
    if degree3 {
        let sols = find_multilinear_identities(&a, 3).map_err(|e| input_err(e.to_string()))?;
        let mut text = format!("monomials=(x*y)*z,(y*z)*x,(z*x)*y\nidentities={}\n", sols.len());
        for v in &sols {
            let s: Vec<String> = v.iter().map(ToString::to_string).collect();
            text += &format!("{}\n", s.join(" "));
        }
        let obj = json!({
            "identities": sols.iter().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
        ctx.emit(text, obj);
        return Ok(Verdict::Success);
    }
    let src = match (spec, expr) {
        (Some(p), _) => fs::read_to_string(p).map_err(|e| input_err(format!("{}: {e}", p.display())))?,
        (None, Some(e)) => e.to_owned(),
        (None, None) => return Err(input_err("give an identity file, --expr or --degree3")),
    };
    let spec = IdentitySpec::parse(src.trim(), a.field()).map_err(|e| input_err(e.to_string()))?;
    let holds = check_identity(&a, &spec);
    ctx.emit(format!("holds={holds}\n"), json!({"holds": holds}));
    Ok(if holds { Verdict::Success } else { Verdict::Negative })
}

fn cmd_graph(ctx: &Ctx, path: &Path, weighted: bool) -> Outcome {
    let a = ctx.load(path)?;
    let dot = a.graph_export(weighted);
    ctx.emit(dot.clone(), json!({"dot": dot}));
    Ok(Verdict::Success)
}

fn cmd_canon(ctx: &Ctx, path: &Path, out: Option<&Path>) -> Outcome {
    let a = ctx.load(path)?;
    let (r, approx) = ctx.with_fallback(
        &[&a],
        |e| matches!(e, InvariantError::ExtensionRequired(_)),
        |v| canonical_presentation(&v[0]),
    )?;
    let p = r.map_err(|e| match e {
        InvariantError::Degenerate => input_err(e.to_string()),
        other => undecided(other.to_string()),
    })?;
    let alg = write_algebra(&p.algebra);
    let wit = write_matrix_file(&p.witness);
    if let Some(prefix) = out {
        let with_ext = |ext: &str| {
            let mut s = prefix.as_os_str().to_owned();
            s.push(ext);
            PathBuf::from(s)
        };
        for (file, body) in [(with_ext(".alg"), &alg), (with_ext(".witness"), &wit)] {
            fs::write(&file, body).map_err(|e| input_err(format!("{}: {e}", file.display())))?;
        }
    }
    let text = format!("# canonical{}\n{alg}# witness\n{wit}", approx_note(approx));
    let obj = json!({
        "approximate": approx,
        "algebra": matrix_rows(p.algebra.matrix()),
        "witness": matrix_rows(&p.witness),
    });
    ctx.emit(text, obj);
    Ok(Verdict::Success)
}

fn run(cli: &Cli) -> Outcome {
    if cli.tol.is_some() && cli.mode != Mode::Approx {
        return Err(input_err("--tol requires --mode approx"));
    }
    if cli.format == Format::Dot && !matches!(cli.cmd, Cmd::Graph { .. }) {
        return Err(input_err("--format dot applies to `graph` only"));
    }
    let ctx = Ctx {
        mode: cli.mode,
        tol: cli.tol.unwrap_or(1e-9),
        format: cli.format,
    };
    match &cli.cmd {
        Cmd::Info { path } => cmd_info(&ctx, path),
        Cmd::Classify { path } => cmd_classify(&ctx, path),
        Cmd::Iso { a, b } => cmd_iso(&ctx, a, b),
        Cmd::Derivations { path, basis } => cmd_derivations(&ctx, path, *basis),
        Cmd::Degenerate { source, target, family } => cmd_degenerate(&ctx, source, target, family),
        Cmd::Identity {
            path,
            spec,
            expr,
            degree3,
        } => cmd_identity(&ctx, path, spec.as_deref(), expr.as_deref(), *degree3),
        Cmd::Graph { path, weighted } => cmd_graph(&ctx, path, *weighted),
        Cmd::Canon { path, out } => cmd_canon(&ctx, path, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Verdict::InputError.code() } else { 0 });
        }
    };
    let v = match run(&cli) {
        Ok(v) => v,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.verdict
        }
    };
    ExitCode::from(v.code())
}
