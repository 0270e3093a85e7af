mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use grasstrans::param::{format_q, parse_q, Param, Q};
use grasstrans::rootsystem::{Field, Weight};
use grasstrans::spectra::{
    branching_list, default_order, quadrature_symbols, relative_error, stein_positivity_scan, symbol_kernel,
    SymbolRequest, TransformKind,
};
use grasstrans::verify::{verification_suite, verification_suites, VerifyConfig, VerifyReport};
use serde::Serialize;
use serde_json::json;

use output::{emit, fmt_f64, fmt_opt, fmt_opt_f64, Format, Row};

/// Quadrature agreement required by `spectrum --verify quad`.
const QUAD_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(name = "grasstrans", version, about = "Spectra of Radon, cosine and sine transforms on Grassmannians")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One row per even weight up to the degree bound.
    Spectrum(SpectrumArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
    /// Positivity of the Knapp–Stein symbols over a grid of t in (0, 1).
    Stein(SteinArgs),
    /// Weights in the image of the restriction to the real or quaternionic form.
    Branching(BranchingArgs),
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, value_parser = parse_field)]
    field: Field,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long, value_parser = parse_param)]
    nu: Param,
    /// cosine, sine, knapp-stein, knapp-stein-printed, composite-cosine, composite-sine
    #[arg(long, default_value = "cosine")]
    kind: String,
    #[arg(long, default_value_t = 8)]
    deg: u32,
    /// Second rank for composite kinds.
    #[arg(long)]
    r_prime: Option<usize>,
    /// Radon eigenvalue for composite kinds.
    #[arg(long)]
    radon: Option<f64>,
    #[arg(long, default_value = "geometric")]
    convention: String,
    /// `quad` adds quadrature columns and fails on disagreement.
    #[arg(long)]
    verify: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// bs-cos, bs-sin, factors, eigen, mc, ks-kernel
    suite: String,
    #[arg(long, value_parser = parse_field, default_value = "R")]
    field: Field,
    /// Defaults to 2r.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Explicit multiplicities; all three of a, b2, iota are required together.
    #[arg(long, value_parser = parse_rational)]
    a: Option<Q>,
    #[arg(long, value_parser = parse_rational)]
    b2: Option<Q>,
    #[arg(long, value_parser = parse_rational)]
    iota: Option<Q>,
    #[arg(long, default_value = "geometric")]
    convention: String,
    #[arg(long, default_value_t = 2.0)]
    delta: f64,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 4)]
    deg: u32,
    #[arg(long, value_parser = parse_param, default_value = "1")]
    nu: Param,
    #[arg(long, value_parser = parse_param, default_value = "1/4")]
    t: Param,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SteinArgs {
    /// All fields when omitted.
    #[arg(long, value_parser = parse_field)]
    field: Option<Field>,
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, default_value_t = 12)]
    deg: u32,
    /// Interior grid points; t runs over k/(grid+1).
    #[arg(long, default_value_t = 19)]
    grid: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BranchingArgs {
    #[arg(long, value_parser = parse_field)]
    field: Field,
    #[arg(long)]
    alpha: u32,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 12)]
    deg: u32,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse().map_err(|e: grasstrans::Error| e.to_string())
}

fn parse_param(s: &str) -> Result<Param, String> {
    s.parse().map_err(|e: grasstrans::Error| e.to_string())
}

fn parse_rational(s: &str) -> Result<Q, String> {
    parse_q(s).ok_or_else(|| format!("`{s}` is not a rational number"))
}

enum Failure {
    /// Invalid input or a library error.
    Error(String),
    /// The command ran but some check failed.
    Checks(serde_json::Value),
}

impl From<grasstrans::Error> for Failure {
    fn from(e: grasstrans::Error) -> Self {
        Failure::Error(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(e.to_string())
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    m: String,
    kind: String,
    nu: String,
    value: f64,
    ratio: Option<String>,
    exact_zero: bool,
    zero_order: u32,
    pole: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    quadrature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rel_err: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
}

impl Row for SpectrumRow {
    fn headers() -> Vec<&'static str> {
        vec!["m", "kind", "nu", "value", "ratio", "exact_zero", "zero_order", "pole", "quadrature", "rel_err", "agree"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.m.clone(),
            self.kind.clone(),
            self.nu.clone(),
            fmt_f64(self.value),
            fmt_opt(&self.ratio),
            self.exact_zero.to_string(),
            self.zero_order.to_string(),
            self.pole.to_string(),
            fmt_opt_f64(self.quadrature),
            fmt_opt_f64(self.rel_err),
            fmt_opt(&self.agree),
        ]
    }
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<(), Failure> {
    let kernel = symbol_kernel(&args.kind)?;
    let quad = match args.verify.as_deref() {
        None => false,
        Some("quad") => true,
        Some(other) => return Err(Failure::Error(format!("unknown --verify mode `{other}`; expected `quad`"))),
    };
    if quad && !matches!(kernel.kind(), TransformKind::Cosine | TransformKind::Sine) {
        return Err(Failure::Error(format!("--verify quad covers cosine and sine, not {}", args.kind)));
    }
    let base = SymbolRequest {
        r_prime: args.r_prime,
        radon: args.radon,
        convention: args.convention.clone(),
        ..SymbolRequest::new(args.field, args.n, args.r, args.nu.clone(), Weight::zero(args.r))
    };
    let rs = base.root_system()?;
    let weights = Weight::even_dominant(args.r, args.deg);
    let quads = if quad {
        let order = args.order.unwrap_or_else(|| default_order(args.r));
        Some(quadrature_symbols(&rs, &args.nu, kernel.kind(), &weights, order)?)
    } else {
        None
    };
    let mut rows = Vec::with_capacity(weights.len());
    let mut failures = Vec::new();
    for (i, m) in weights.iter().enumerate() {
        let s = kernel.evaluate(&SymbolRequest { m: m.clone(), ..base.clone() })?;
        let (quadrature, rel_err, agree) = match &quads {
            Some(qs) => {
                let e = relative_error(&s, &qs[i]);
                let ok = e <= QUAD_TOL && qs[i].converged;
                if !ok {
                    failures.push(json!({ "m": m.to_string(), "rel_err": e, "converged": qs[i].converged }));
                }
                (Some(qs[i].value), Some(e), Some(ok))
            }
            None => (None, None, None),
        };
        rows.push(SpectrumRow {
            m: m.to_string(),
            kind: kernel.name().into(),
            nu: args.nu.to_string(),
            value: s.value,
            ratio: s.ratio().map(|q| format_q(&q)),
            exact_zero: s.is_exact_zero,
            zero_order: s.zero_order,
            pole: s.pole,
            quadrature,
            rel_err,
            agree,
        });
    }
    emit(&rows, args.output.format, args.output.out.as_deref())?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(json!({ "command": "spectrum", "tolerance": QUAD_TOL, "failures": failures })))
    }
}

impl Row for VerifyReport {
    fn headers() -> Vec<&'static str> {
        vec!["suite", "pass", "checks", "max_residual", "tolerance", "failures"]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.suite.clone(),
            self.pass.to_string(),
            self.checks.to_string(),
            fmt_f64(self.max_residual),
            fmt_opt_f64(self.tolerance),
            self.failures.len().to_string(),
        ]
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let suite = verification_suite(&args.suite).map_err(|e| {
        let names: Vec<_> = verification_suites().iter().map(|s| s.name()).collect();
        Failure::Error(format!("{e}; available: {}", names.join(", ")))
    })?;
    let multiplicities = match (args.a, args.b2, args.iota) {
        (None, None, None) => None,
        (Some(a), Some(b2), Some(iota)) => Some((a, b2, iota)),
        _ => return Err(Failure::Error("--a, --b2 and --iota must be given together".into())),
    };
    let n = args.n.unwrap_or(2 * args.r);
    let cfg = VerifyConfig {
        field: args.field,
        n,
        r: args.r,
        multiplicities,
        convention: args.convention,
        delta: args.delta,
        trials: args.trials,
        degree_bound: args.deg,
        nu: args.nu,
        t: args.t,
        samples: args.samples,
        seed: args.seed,
    };
    let report = suite.run(&cfg)?;
    eprintln!(
        "{} {}: {} checks, max residual {}",
        if report.pass { "PASS" } else { "FAIL" },
        report.suite,
        report.checks,
        fmt_f64(report.max_residual)
    );
    emit(std::slice::from_ref(&report), args.output.format, args.output.out.as_deref())?;
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Checks(json!({
            "command": "verify",
            "suite": report.suite,
            "max_residual": report.max_residual,
            "tolerance": report.tolerance,
            "failures": report.failures,
        })))
    }
}

#[derive(Serialize)]
struct SteinRow {
    field: String,
    r: usize,
    t: String,
    nu: String,
    weights: usize,
    min_normalized: f64,
    min_weight: String,
    witness: Option<String>,
    witness_value: Option<f64>,
    norm_pole: bool,
    verdict: &'static str,
}

impl Row for SteinRow {
    fn headers() -> Vec<&'static str> {
        vec![
            "field", "r", "t", "nu", "weights", "min_normalized", "min_weight", "witness", "witness_value", "norm_pole",
            "verdict",
        ]
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.field.clone(),
            self.r.to_string(),
            self.t.clone(),
            self.nu.clone(),
            self.weights.to_string(),
            fmt_f64(self.min_normalized),
            self.min_weight.clone(),
            fmt_opt(&self.witness),
            fmt_opt_f64(self.witness_value),
            self.norm_pole.to_string(),
            self.verdict.into(),
        ]
    }
}

fn cmd_stein(args: SteinArgs) -> Result<(), Failure> {
    if args.r == 0 {
        return Err(Failure::Error("--r must be at least 1".into()));
    }
    let fields = match args.field {
        Some(f) => vec![f],
        None => Field::ALL.to_vec(),
    };
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for field in fields {
        for k in 1..=args.grid {
            let t = Param::Exact(Q::new(k.into(), (args.grid + 1).into()));
            let s = stein_positivity_scan(field, args.r, &t, args.deg)?;
            let verdict = match s.pass {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "REPORT",
            };
            if s.pass == Some(false) {
                failures.push(json!({ "field": field.to_string(), "t": t.to_string(), "witness": fmt_opt(&s.witness) }));
            }
            rows.push(SteinRow {
                field: field.to_string(),
                r: args.r,
                t: t.to_string(),
                nu: s.nu.to_string(),
                weights: s.weights,
                min_normalized: s.min_normalized,
                min_weight: s.min_weight.to_string(),
                witness: s.witness.as_ref().map(|w| w.to_string()),
                witness_value: s.witness_value,
                norm_pole: s.norm_pole,
                verdict,
            });
        }
    }
    emit(&rows, args.output.format, args.output.out.as_deref())?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(json!({ "command": "stein", "failures": failures })))
    }
}

#[derive(Serialize)]
struct BranchingRow {
    m: String,
    size: u32,
}

impl Row for BranchingRow {
    fn headers() -> Vec<&'static str> {
        vec!["m", "size"]
    }

    fn cells(&self) -> Vec<String> {
        vec![self.m.clone(), self.size.to_string()]
    }
}

fn cmd_branching(args: BranchingArgs) -> Result<(), Failure> {
    let rows: Vec<_> = branching_list(args.field, args.alpha, args.r, args.deg)?
        .into_iter()
        .map(|m| BranchingRow {
            size: m.size(),
            m: m.to_string(),
        })
        .collect();
    emit(&rows, args.output.format, args.output.out.as_deref())?;
    Ok(())
}

fn init_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("GRASSTRANS_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Error(format!("GRASSTRANS_THREADS = `{v}` is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Error(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| match cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Stein(a) => cmd_stein(a),
        Command::Branching(a) => cmd_branching(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(v)) => {
            eprintln!("{}", json!({ "status": "fail", "report": v }));
            ExitCode::from(1)
        }
        Err(Failure::Error(msg)) => {
            eprintln!("{}", json!({ "status": "error", "error": msg }));
            ExitCode::from(2)
        }
    }
}
