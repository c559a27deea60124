//! Argument parsing, dispatch and rendering for the `fracalc` binary.
//!
//! Text output rounds every number to 12 significant digits. JSON output
//! carries exact values, so the `expr` field of any command re-parses to the
//! identical power sum.

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fracalc_core::fracops::{
    abel_solve, apply_derivative, classify, kernel_basis, projector_closed_form, projector_direct,
    DerivativeSpec, ProjectorResult,
};
use fracalc_core::laplace::{
    boundary_terms, operational_formula_check, rl_integral_transform_check, LaplacePoint,
};
use fracalc_core::numgrid::{convergence_csv, convergence_study, GridOperator};
use fracalc_core::poweralg::{format_significant, parse, rl_integral};
use fracalc_core::verify::{run_suites, Suite, VerificationReport, DEFAULT_SEED};
use fracalc_core::{Error, PowerSum, Result};

#[derive(Debug, Parser)]
#[command(
    name = "fracalc",
    version,
    about = "Riemann-Liouville integrals and n-th level fractional derivatives on power sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SpecArgs {
    /// Order alpha of the derivative
    #[arg(long, allow_negative_numbers = true)]
    alpha: f64,
    /// Type vector gamma_1,...,gamma_n
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 1,
        required = true,
        allow_negative_numbers = true
    )]
    gamma: Vec<f64>,
}

#[derive(Debug, Args)]
struct ExprArg {
    /// Power sum such as "3 + 2*x^0.5 - x^-0.25"
    #[arg(long, allow_hyphen_values = true)]
    expr: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Operator {
    /// Product-trapezoidal Riemann-Liouville integral
    RlIntegral,
    /// Grünwald-Letnikov derivative
    Gl,
    /// Composed n-th level derivative chain
    NthLevel,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply D^{alpha,(gamma)} to a power sum
    Apply {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        expr: ExprArg,
        #[arg(long)]
        json: bool,
    },
    /// Riemann-Liouville integral I^alpha of a power sum
    Integrate {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[command(flatten)]
        expr: ExprArg,
        #[arg(long)]
        json: bool,
    },
    /// Kernel basis, dimension and truly-level classification
    Kernel {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        json: bool,
    },
    /// Projector Id - I^alpha D, directly and in closed form
    Projector {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        expr: ExprArg,
        #[arg(long)]
        json: bool,
    },
    /// Solve the Abel equation I^alpha phi = f
    AbelSolve {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[command(flatten)]
        expr: ExprArg,
        #[arg(long)]
        json: bool,
    },
    /// Check a Laplace-transform identity over a grid of s values
    ///
    /// With --gamma the operational formula of the derivative is checked,
    /// otherwise the transform of the integral I^alpha.
    LaplaceCheck {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(
            long,
            value_delimiter = ',',
            num_args = 1,
            allow_negative_numbers = true
        )]
        gamma: Option<Vec<f64>>,
        #[command(flatten)]
        expr: ExprArg,
        /// Transform variables, all > 0
        #[arg(
            long = "s",
            value_delimiter = ',',
            num_args = 1,
            default_value = "1,2,5,10",
            allow_negative_numbers = true
        )]
        s: Vec<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Run the verification suites
    Verify {
        /// "all" or one suite name
        #[arg(long, default_value = "all", value_parser = suite_names())]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
    /// Grid-refinement study of a numerical operator against its symbolic result
    Convergence {
        #[arg(long, value_enum)]
        operator: Operator,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Type vector, required for nth-level
        #[arg(
            long,
            value_delimiter = ',',
            num_args = 1,
            allow_negative_numbers = true
        )]
        gamma: Option<Vec<f64>>,
        #[command(flatten)]
        expr: ExprArg,
        /// Grid sizes N
        #[arg(
            long,
            value_delimiter = ',',
            num_args = 1,
            default_value = "64,128,256,512,1024"
        )]
        n: Vec<usize>,
        #[arg(long)]
        json: bool,
        /// CSV output (the default)
        #[arg(long, conflicts_with = "json")]
        csv: bool,
    },
}

fn suite_names() -> clap::builder::PossibleValuesParser {
    let mut names = vec!["all"];
    names.extend(Suite::ALL.iter().map(|s| s.name()));
    clap::builder::PossibleValuesParser::new(names)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Rendered command result.
struct Output {
    text: String,
    json: Value,
    csv: Option<String>,
    exit: i32,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            csv: None,
            exit: 0,
        }
    }
}

fn sum_json(f: &PowerSum) -> Value {
    json!({
        "expr": f.to_exact_string(),
        "terms": f
            .terms()
            .iter()
            .map(|t| json!({"coeff": t.coeff, "exp": t.exp}))
            .collect::<Vec<_>>(),
    })
}

fn result_json(f: &PowerSum, meta: Value) -> Value {
    let mut v = sum_json(f);
    v["meta"] = meta;
    v
}

fn spec_json(spec: &DerivativeSpec) -> Value {
    json!({"alpha": spec.alpha(), "gamma": spec.gamma()})
}

fn sig(v: f64) -> String {
    format_significant(v)
}

fn sig_e(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.11e}")
    }
}

fn apply(spec: SpecArgs, expr: &str) -> Result<Output> {
    let spec = DerivativeSpec::new(spec.alpha, spec.gamma)?;
    let f = parse(expr)?;
    let d = apply_derivative(&spec, &f)?;
    let meta =
        json!({"operation": "apply", "spec": spec_json(&spec), "input": f.to_exact_string()});
    Ok(Output::new(d.to_string(), result_json(&d, meta)))
}

fn integrate(alpha: f64, expr: &str) -> Result<Output> {
    let f = parse(expr)?;
    let g = rl_integral(alpha, &f)?;
    let meta = json!({"operation": "integrate", "alpha": alpha, "input": f.to_exact_string()});
    Ok(Output::new(g.to_string(), result_json(&g, meta)))
}

fn kernel(spec: SpecArgs) -> Result<Output> {
    let spec = DerivativeSpec::new(spec.alpha, spec.gamma)?;
    let class = classify(&spec);
    let basis = kernel_basis(&spec);
    let elements = basis.basis();
    let listed: Vec<String> = elements.iter().map(|b| b.to_string()).collect();
    let mut text = format!(
        "{}\ndimension {}\ntruly level {}",
        listed.join(", "),
        basis.dimension(),
        class.truly_level
    );
    if class.is_degenerate() {
        text.push_str(&format!("\nreduced form {}", class.reduced));
    }
    let generic = basis.combination(&vec![1.0; basis.dimension()]);
    let meta = json!({
        "operation": "kernel",
        "spec": spec_json(&spec),
        "dimension": basis.dimension(),
        "truly_level": class.truly_level,
        "basis": elements.iter().map(|b| b.to_exact_string()).collect::<Vec<_>>(),
        "reduced": spec_json(&class.reduced),
        "reductions": serde_json::to_value(&class.reductions).expect("serializable"),
    });
    Ok(Output::new(text, result_json(&generic, meta)))
}

fn components_json(p: &ProjectorResult) -> Value {
    serde_json::to_value(&p.components).expect("serializable")
}

fn projector(spec: SpecArgs, expr: &str) -> Result<Output> {
    let spec = DerivativeSpec::new(spec.alpha, spec.gamma)?;
    let f = parse(expr)?;
    let direct = projector_direct(&spec, &f)?;
    let direct_sum = direct.to_power_sum();
    let mut text = format!("direct: {direct_sum}");
    let (closed_json, difference) = match projector_closed_form(&spec, &f) {
        Ok(closed) => {
            let diff = closed.max_abs_difference(&direct);
            text.push_str(&format!("\nclosed form: {}", closed.to_power_sum()));
            text.push_str(&format!("\ndifference: {}", sig_e(diff)));
            let mut v = sum_json(&closed.to_power_sum());
            v["components"] = components_json(&closed);
            (v, Some(diff))
        }
        Err(Error::Unsupported(msg)) => {
            text.push_str(&format!("\nclosed form: unavailable ({msg})"));
            (Value::Null, None)
        }
        Err(e) => return Err(e),
    };
    let meta = json!({
        "operation": "projector",
        "spec": spec_json(&spec),
        "input": f.to_exact_string(),
        "components": components_json(&direct),
        "off_kernel": direct.off_kernel,
        "closed_form": closed_json,
        "difference": difference,
    });
    Ok(Output::new(text, result_json(&direct_sum, meta)))
}

fn abel(alpha: f64, expr: &str) -> Result<Output> {
    let f = parse(expr)?;
    let phi = abel_solve(alpha, &f)?;
    let meta = json!({"operation": "abel-solve", "alpha": alpha, "input": f.to_exact_string()});
    Ok(Output::new(phi.to_string(), result_json(&phi, meta)))
}

fn laplace_check(alpha: f64, gamma: Option<Vec<f64>>, expr: &str, s: &[f64]) -> Result<Output> {
    let f = parse(expr)?;
    let grid = s
        .iter()
        .map(|&v| LaplacePoint::new(v))
        .collect::<Result<Vec<_>>>()?;
    let (transformed, error, mut text, mut meta) = match gamma {
        Some(gamma) => {
            let spec = DerivativeSpec::new(alpha, gamma)?;
            let bt = boundary_terms(&spec, &f)?;
            let error = operational_formula_check(&spec, &f, &grid)?;
            let text = format!("a1 = {}\na2 = {}\n", sig(bt.a1), sig(bt.a2));
            let meta = json!({"operation": "laplace-check", "identity": "derivative", "spec": spec_json(&spec), "a1": bt.a1, "a2": bt.a2});
            (apply_derivative(&spec, &f)?, error, text, meta)
        }
        None => {
            let error = rl_integral_transform_check(alpha, &f, &grid)?;
            let meta =
                json!({"operation": "laplace-check", "identity": "integral", "alpha": alpha});
            (rl_integral(alpha, &f)?, error, String::new(), meta)
        }
    };
    text.push_str(&format!("max relative error {}", sig_e(error)));
    meta["input"] = json!(f.to_exact_string());
    meta["s"] = json!(s);
    meta["max_relative_error"] = json!(error);
    Ok(Output::new(text, result_json(&transformed, meta)))
}

fn verify(suite: &str, seed: u64) -> Result<Output> {
    let selection = if suite == "all" {
        Vec::new()
    } else {
        vec![suite.parse::<Suite>()?]
    };
    let reports: Vec<VerificationReport> = run_suites(&selection, seed);
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let mut text: Vec<String> = reports.iter().map(|r| r.to_string()).collect();
    text.push(if failed == 0 {
        format!("all {} suites passed (seed {seed})", reports.len())
    } else {
        format!("{failed} of {} suites failed (seed {seed})", reports.len())
    });
    let mut csv = String::from("suite,cases,failures,wall_time_secs\n");
    for r in &reports {
        csv.push_str(&format!(
            "{},{},{},{:.6}\n",
            r.suite,
            r.cases,
            r.failures.len(),
            r.wall_time_secs
        ));
    }
    let json = json!({
        "seed": seed,
        "passed": failed == 0,
        "reports": serde_json::to_value(&reports).expect("serializable"),
    });
    Ok(Output {
        text: text.join("\n"),
        json,
        csv: Some(csv),
        exit: if failed == 0 { 0 } else { 1 },
    })
}

fn convergence(
    operator: Operator,
    alpha: f64,
    gamma: Option<Vec<f64>>,
    expr: &str,
    ns: &[usize],
) -> Result<Output> {
    let f = parse(expr)?;
    let op = match (operator, gamma) {
        (Operator::RlIntegral, _) => GridOperator::RlIntegral { alpha },
        (Operator::Gl, _) => GridOperator::GlDerivative { alpha },
        (Operator::NthLevel, Some(gamma)) => {
            GridOperator::NthLevel(DerivativeSpec::new(alpha, gamma)?)
        }
        (Operator::NthLevel, None) => {
            return Err(Error::Spec(
                "the nth-level operator needs --gamma".to_string(),
            ))
        }
    };
    let rows = convergence_study(&op, &f, ns)?;
    let csv = convergence_csv(&rows);
    let json = json!({
        "input": f.to_exact_string(),
        "rows": serde_json::to_value(&rows).expect("serializable"),
    });
    Ok(Output {
        text: csv.trim_end().to_string(),
        json,
        csv: Some(csv),
        exit: 0,
    })
}

fn dispatch(command: Command) -> (Result<Output>, Format) {
    let pick = |json: bool| if json { Format::Json } else { Format::Text };
    match command {
        Command::Apply { spec, expr, json } => (apply(spec, &expr.expr), pick(json)),
        Command::Integrate { alpha, expr, json } => (integrate(alpha, &expr.expr), pick(json)),
        Command::Kernel { spec, json } => (kernel(spec), pick(json)),
        Command::Projector { spec, expr, json } => (projector(spec, &expr.expr), pick(json)),
        Command::AbelSolve { alpha, expr, json } => (abel(alpha, &expr.expr), pick(json)),
        Command::LaplaceCheck {
            alpha,
            gamma,
            expr,
            s,
            json,
        } => (laplace_check(alpha, gamma, &expr.expr, &s), pick(json)),
        Command::Verify {
            suite,
            seed,
            json,
            csv,
        } => {
            let format = if csv { Format::Csv } else { pick(json) };
            (verify(&suite, seed), format)
        }
        Command::Convergence {
            operator,
            alpha,
            gamma,
            expr,
            n,
            json,
            ..
        } => {
            let format = if json { Format::Json } else { Format::Csv };
            (convergence(operator, alpha, gamma, &expr.expr, &n), format)
        }
    }
}

/// Parses `args` (program name first), runs the command and writes its
/// output. Returns the process exit code: 0 on success, 1 on domain errors
/// or failed verification, 2 on usage errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    let (result, format) = dispatch(cli.command);
    let code = match result {
        Ok(output) => {
            let body = match format {
                Format::Text => output.text,
                Format::Json => serde_json::to_string_pretty(&output.json).expect("serializable"),
                Format::Csv => output.csv.unwrap_or(output.text).trim_end().to_string(),
            };
            let _ = writeln!(out, "{body}");
            output.exit
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}: {}", e.kind(), e.detail());
            1
        }
    };
    let _ = out.flush();
    code
}
