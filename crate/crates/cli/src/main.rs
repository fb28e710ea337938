//! `qortho`: evaluate q-functions, check identities, run seeded sweeps and tabulate coefficients.
//!
//! Exit codes: 0 success or check passed, 1 check failed or computation broke down,
//! 2 invalid input.

mod output;
mod params;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qortho::hyper::{phi_series_detail, PhiSpec};
use qortho::qcore::qpoch_infinite_detail;
use qortho::qfun::{
    big_c_eval, binomial_series_coeffs, connection_coeffs, cq_ultraspherical,
    cq_ultraspherical_coefficients, h_norm, phi_eval, weight_omega, EvaluationPoint, ParamSet4,
    ReducedParams,
};
use qortho::verify::{
    default_thetas, run_sweep, Case, IdentityId, Inputs, SweepSpec, VerificationReport,
};
use qortho::{qpoch_finite, Complex64, QError};
use serde::Serialize;

use output::{sink, write_json, write_reports_csv, write_table, CoefficientRow, Format};
use params::{NumericArgs, ParamArgs};

#[derive(Parser, Debug)]
#[command(
    name = "qortho",
    version,
    about = "Numerical checks of four-parameter q-orthogonality identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a single function
    Eval(EvalArgs),
    /// Check one identity at explicit parameters
    Verify(VerifyArgs),
    /// Check one identity over seeded random parameters
    Sweep(SweepArgs),
    /// Tabulate expansion or connection coefficients
    Table(TableArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Function {
    #[value(name = "big_c")]
    BigC,
    Phi,
    Ultra,
    Weight,
    H,
    Qpoch,
    #[value(name = "phi_series")]
    PhiSeries,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(value_enum)]
    function: Function,
    #[command(flatten)]
    params: ParamArgs,
    /// Infinite order for qpoch
    #[arg(long)]
    inf: bool,
    /// Numerator parameter of phi_series, as `re` or `re,im` (repeatable)
    #[arg(long = "num", allow_hyphen_values = true)]
    numerators: Vec<String>,
    /// Denominator parameter of phi_series, as `re` or `re,im` (repeatable)
    #[arg(long = "den", allow_hyphen_values = true)]
    denominators: Vec<String>,
    #[command(flatten)]
    numeric: NumericArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Identity to check, e.g. THM_1_1
    #[arg(long)]
    identity: IdentityId,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    numeric: NumericArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Identity to check, e.g. THM_1_1
    #[arg(long)]
    identity: IdentityId,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    draws: usize,
    /// Cap on the first degree
    #[arg(long)]
    m_max: Option<usize>,
    /// Cap on the second degree
    #[arg(long)]
    n_max: Option<usize>,
    #[command(flatten)]
    numeric: NumericArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    #[value(name = "big_c")]
    BigC,
    Connection,
    Ultra,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(value_enum)]
    kind: TableKind,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    output: OutputArgs,
}

enum Failure {
    Invalid(String),
    Failed(String),
}

impl From<QError> for Failure {
    fn from(e: QError) -> Self {
        match e {
            QError::Domain(msg) => Failure::Invalid(format!("invalid input: {msg}")),
            other => Failure::Failed(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(format!("cannot write output: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Invalid(format!("cannot write output: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    let result = match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Table(a) => cmd_table(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

#[derive(Serialize)]
struct EvalRecord {
    function: String,
    inputs: Inputs,
    value_re: f64,
    value_im: f64,
    rel_tol: f64,
    max_terms: usize,
    /// Factors or terms actually used, where the evaluation truncates.
    terms: Option<usize>,
    near_singular: bool,
}

fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    let bad = || Failure::Invalid(format!("cannot parse '{s}' as `re` or `re,im`"));
    let mut parts = s.split(',');
    let re = parts
        .next()
        .ok_or_else(bad)?
        .trim()
        .parse::<f64>()
        .map_err(|_| bad())?;
    let im = match parts.next() {
        Some(p) => p.trim().parse::<f64>().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn four_params(p: &ParamArgs, gamma: f64, delta: f64) -> Result<ParamSet4, QError> {
    ParamSet4::new(
        p.complex("alpha", 0.2),
        p.complex("beta", 0.1),
        p.complex("gamma", gamma),
        p.complex("delta", delta),
    )
}

fn four_inputs(ps: &ParamSet4, q: Complex64) -> Inputs {
    Inputs::new()
        .complex("alpha", ps.alpha)
        .complex("beta", ps.beta)
        .complex("gamma", ps.gamma)
        .complex("delta", ps.delta)
        .complex("q", q)
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode, Failure> {
    let p = &args.params;
    let policy = args.numeric.policy()?;
    let q = p.base(0.5)?;
    let mut terms = None;
    let mut near_singular = false;
    let (inputs, value) = match args.function {
        Function::BigC => {
            let ps = four_params(p, 0.8, 0.9)?;
            let (n, pt) = (p.n_or(0), EvaluationPoint::new(p.theta_or(0.0)));
            let inputs = four_inputs(&ps, q.get())
                .real("n", n as f64)
                .real("theta", pt.theta());
            (inputs, big_c_eval(n, pt, &ps, q))
        }
        Function::Phi => {
            let ps = four_params(p, 0.8, 0.9)?;
            let (n, x, y) = (p.n_or(0), p.complex("x", 1.0), p.complex("y", 1.0));
            let inputs = four_inputs(&ps, q.get())
                .real("n", n as f64)
                .complex("x", x)
                .complex("y", y);
            (inputs, phi_eval(n, x, y, &ps, q))
        }
        Function::Ultra => {
            let (n, theta, beta) = (p.n_or(0), p.theta_or(0.0), p.complex("beta", 0.3));
            let inputs = Inputs::new()
                .complex("beta", beta)
                .complex("q", q.get())
                .real("n", n as f64)
                .real("theta", theta);
            (inputs, cq_ultraspherical(n, theta, beta, q))
        }
        Function::Weight => {
            let ps = four_params(p, 0.8, 0.9)?;
            let pt = EvaluationPoint::new(p.theta_or(0.0));
            let inputs = four_inputs(&ps, q.get()).real("theta", pt.theta());
            (inputs, weight_omega(pt, &ps, q, &policy)?)
        }
        Function::H => {
            let (n, a) = (p.n_or(0), p.complex("a", 0.3));
            let inputs = Inputs::new()
                .complex("a", a)
                .complex("q", q.get())
                .real("n", n as f64);
            (inputs, h_norm(n, a, q, &policy)?)
        }
        Function::Qpoch => {
            let a = p.complex("a", 0.5);
            let inputs = Inputs::new().complex("a", a).complex("q", q.get());
            match p.n {
                Some(n) if !args.inf => (inputs.real("n", n as f64), qpoch_finite(a, q, n)),
                _ => {
                    let d = qpoch_infinite_detail(a, q, &policy)?;
                    terms = Some(d.terms);
                    near_singular = d.near_singular;
                    (inputs, d.value)
                }
            }
        }
        Function::PhiSeries => {
            let nums = args
                .numerators
                .iter()
                .map(|s| parse_complex(s))
                .collect::<Result<Vec<_>, _>>()?;
            let dens = args
                .denominators
                .iter()
                .map(|s| parse_complex(s))
                .collect::<Result<Vec<_>, _>>()?;
            let z = p.complex("z", 0.0);
            let mut inputs = Inputs::new().complex("q", q.get()).complex("z", z);
            for (i, v) in nums.iter().enumerate() {
                inputs = inputs.complex(&format!("num{i}"), *v);
            }
            for (i, v) in dens.iter().enumerate() {
                inputs = inputs.complex(&format!("den{i}"), *v);
            }
            let sum = phi_series_detail(&PhiSpec::new(nums, dens, q, z)?, &policy)?;
            terms = Some(sum.terms);
            (inputs, sum.value)
        }
    };
    let function = args
        .function
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    let record = EvalRecord {
        function,
        inputs,
        value_re: value.re,
        value_im: value.im,
        rel_tol: policy.rel_tol,
        max_terms: policy.max_terms,
        terms,
        near_singular,
    };
    let w = sink(args.output.out.as_deref())?;
    match args.output.format {
        Format::Json => write_json(w, &record)?,
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record([
                "function",
                "inputs",
                "value_re",
                "value_im",
                "rel_tol",
                "max_terms",
                "terms",
                "near_singular",
            ])?;
            csv.write_record([
                record.function.clone(),
                serde_json::to_string(&record.inputs).expect("inputs serialize"),
                record.value_re.to_string(),
                record.value_im.to_string(),
                record.rel_tol.to_string(),
                record.max_terms.to_string(),
                record.terms.map(|t| t.to_string()).unwrap_or_default(),
                record.near_singular.to_string(),
            ])?;
            csv.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Checker inputs for `id`, with the documented defaults filling unspecified parameters.
fn build_case(id: IdentityId, p: &ParamArgs) -> Result<Case, QError> {
    let q = p.base(0.5)?;
    let reduced = || -> Result<(ReducedParams, Complex64, Complex64), QError> {
        let r = ReducedParams::new(p.complex("a", 0.3), p.complex("b", 0.5))?;
        Ok((r, p.complex("gamma", 0.9), p.complex("delta", 1.1)))
    };
    Ok(match id {
        IdentityId::Thm11 => Case::Thm11 {
            p: four_params(p, 0.8, 0.9)?,
            q,
            m: p.m_or(0),
            n: p.n_or(1),
        },
        IdentityId::Thm12 => Case::Thm12 {
            p: four_params(p, 0.8, 0.9)?,
            s: p.complex("s", 0.4),
            t: p.complex("t", 0.5),
            q,
        },
        IdentityId::Thm13 => {
            let (r, gamma, delta) = reduced()?;
            Case::Thm13 {
                r,
                gamma,
                delta,
                q,
                m: p.m_or(2),
                n: p.n_or(0),
            }
        }
        IdentityId::Prop212 => Case::Prop212 {
            n: p.n_or(3),
            theta: p.theta_or(0.7),
            p: four_params(p, 0.8, 0.9)?,
            q,
        },
        IdentityId::Prop213 => Case::Prop213 {
            n: p.n_or(200),
            p: four_params(p, 0.8, 0.9)?,
            q,
        },
        IdentityId::Prop22 => Case::Prop22 {
            k: p.m_or(2),
            p: four_params(p, 0.8, 0.9)?,
            q,
        },
        IdentityId::Prop24 => Case::Prop24 {
            n: p.n_or(4),
            x: p.complex("x", 1.0),
            y: p.complex("y", 0.6),
            p: four_params(p, 0.8, 0.9)?,
            q,
        },
        IdentityId::Prop31 => {
            let (r, gamma, delta) = reduced()?;
            Case::Prop31 {
                r,
                gamma,
                delta,
                q,
                m: p.m_or(3),
                thetas: p.theta.map_or_else(default_thetas, |t| vec![t]),
            }
        }
        IdentityId::Rogers6W5 => Case::Rogers6W5 {
            a: p.complex("a", 0.2),
            b: p.complex("b", 0.5),
            c: p.complex("c", 0.6),
            d: p.complex("d", 0.7),
            q,
        },
        IdentityId::QBinomial => Case::QBinomial {
            a: p.complex("a", 0.3),
            z: p.complex("z", 0.4),
            q,
        },
        IdentityId::UltraOrtho => Case::UltraOrtho {
            beta: p.complex("beta", 0.3),
            q,
            m: p.m_or(2),
            n: p.n_or(2),
        },
    })
}

fn write_reports(
    out: &OutputArgs,
    reports: &[VerificationReport],
    envelope: impl FnOnce(&[VerificationReport]) -> serde_json::Value,
) -> Result<(), Failure> {
    let w = sink(out.out.as_deref())?;
    match out.format {
        Format::Json => write_json(w, &envelope(reports))?,
        Format::Csv => write_reports_csv(w, reports)?,
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Failure> {
    let cfg = args.numeric.config()?;
    let report = build_case(args.identity, &args.params)?.run(&cfg)?;
    let passed = report.passed();
    write_reports(&args.output, std::slice::from_ref(&report), |r| {
        serde_json::to_value(&r[0]).expect("report serializes")
    })?;
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct SweepEnvelope<'a> {
    identity: IdentityId,
    seed: u64,
    draws: usize,
    m_max: usize,
    n_max: usize,
    /// Seconds since the Unix epoch; not covered by the determinism guarantee.
    generated_at: u64,
    passed: usize,
    failed: usize,
    reports: &'a [VerificationReport],
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, Failure> {
    let cfg = args.numeric.config()?;
    let mut spec = SweepSpec::new(args.identity, args.seed, args.draws);
    if let Some(m) = args.m_max {
        spec.m_max = m;
    }
    if let Some(n) = args.n_max {
        spec.n_max = n;
    }
    let reports = run_sweep(args.identity, &spec, &cfg)?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let generated_at = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    write_reports(&args.output, &reports, |r| {
        serde_json::to_value(SweepEnvelope {
            identity: args.identity,
            seed: spec.seed,
            draws: spec.draws,
            m_max: spec.m_max,
            n_max: spec.n_max,
            generated_at,
            passed: r.len() - failed,
            failed,
            reports: r,
        })
        .expect("envelope serializes")
    })?;
    if let Some((i, r)) = reports.iter().enumerate().find(|(_, r)| !r.passed()) {
        let inputs = serde_json::to_string(r.inputs()).expect("inputs serialize");
        let _ = writeln!(
            io::stderr(),
            "draw {i} failed: rel_residual {:e} > tolerance {:e}, flags {:?}, inputs {inputs}",
            r.rel_residual(),
            r.tolerance(),
            r.flags()
        );
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn rows_of(n: usize, coeffs: &[Complex64]) -> impl Iterator<Item = CoefficientRow> + '_ {
    coeffs.iter().enumerate().map(move |(k, c)| CoefficientRow {
        n,
        k,
        coefficient_re: c.re,
        coefficient_im: c.im,
    })
}

fn cmd_table(args: TableArgs) -> Result<ExitCode, Failure> {
    let p = &args.params;
    let q = p.base(0.5)?;
    let mut rows = Vec::new();
    match args.kind {
        TableKind::BigC => {
            // coefficient of e^{i(2k-n)θ} in C_n; only γ, δ ≠ 0 is needed for the expansion
            let (alpha, beta) = (p.complex("alpha", 0.2), p.complex("beta", 0.1));
            let (gamma, delta) = (p.complex("gamma", 0.8), p.complex("delta", 0.9));
            if gamma.norm() == 0.0 || delta.norm() == 0.0 {
                return Err(Failure::Invalid(
                    "invalid input: γ and δ must be nonzero".into(),
                ));
            }
            let cap = p.n_or(4);
            let left = binomial_series_coeffs(alpha / gamma, gamma, q, cap);
            let right = binomial_series_coeffs(beta / delta, delta, q, cap);
            for n in 0..=cap {
                let coeffs: Vec<Complex64> = (0..=n).map(|k| left[k] * right[n - k]).collect();
                rows.extend(rows_of(n, &coeffs));
            }
        }
        TableKind::Connection => {
            let r = ReducedParams::new(p.complex("a", 0.3), p.complex("b", 0.5))?;
            let gd = p.complex("gamma", 0.9) * p.complex("delta", 1.1);
            let m = p.m_or(p.n_or(2));
            rows.extend(rows_of(m, &connection_coeffs(m, &r, gd, q)?));
        }
        TableKind::Ultra => {
            let beta = p.complex("beta", 0.3);
            for n in 0..=p.n_or(4) {
                rows.extend(rows_of(n, &cq_ultraspherical_coefficients(n, beta, q)));
            }
        }
    }
    write_table(sink(args.output.out.as_deref())?, &rows, args.output.format)?;
    Ok(ExitCode::SUCCESS)
}
