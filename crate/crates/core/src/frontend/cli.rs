use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::opspec::{parse_idop, parse_operator, parse_operator_ast, Operator};
use super::parse::{parse_ast, parse_form, parse_value, Parsed};
use super::report::*;
use crate::applications::{
    build_complex, check_complex_linearity, phi_omega, t_coefficients, IntegrableOneForm,
};
use crate::deformation::{
    act, classify, teo1_coefficients, verify_associativity, verify_linearity, ActionCoefficients,
    AssociativityCheck, AssociativityCounterexample, CheckBounds, LinearityCheck,
    LinearityCounterexample, TruncationMode, Verdict,
};
use crate::error::{Error, Result};
use crate::exterior::{FormBasis, HomogeneousForm};
use crate::modtools::{
    generation_check, generator_degrees, kernel_dims, reduce_degree, DegreewiseSubspace, FullSpace,
    GenerationCheck, ImageOf, KernelOf,
};
use crate::operators::{
    agree_on, bracket_order_test, decompose, BlackBoxOperator, OrderTest, ProbeBounds,
};
use crate::scalar_poly::{parse_scalar, HomogeneousPolynomial, MultiIndex, Scalar};
use crate::vvforms::GradedEndomorphism;

/// Exact computations with polynomial differential forms.
#[derive(Parser, Debug)]
#[command(name = "formlin", version)]
pub struct Cli {
    /// Number of variables; inferred from the largest index in the inputs when omitted.
    #[arg(long, global = true)]
    pub n: Option<usize>,

    #[arg(
        long,
        global = true,
        env = "FORMLIN_FORMAT",
        value_enum,
        default_value = "json"
    )]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Preset {
    /// Usual multiplication.
    Trivial,
    /// Coefficients linearizing `d`.
    Dd,
    /// Coefficients linearizing `ω△` for `--omega`.
    Dt,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Truncation {
    Minimal,
    Generation,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Space {
    Kernel,
    Image,
    Full,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CoefficientArgs {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,

    /// Closed-form coefficients `q=..,a=..,t=..`.
    #[arg(long, conflicts_with = "preset")]
    pub teo1: Option<String>,

    /// Integrable 1-form for the `dt` preset; defaults to `x1 dx2 - x2 dx1`.
    #[arg(long)]
    pub omega: Option<String>,

    #[arg(long, value_enum)]
    pub truncation: Option<Truncation>,
}

#[derive(Args, Debug, Clone)]
pub struct SampleArgs {
    /// Extra random (f, τ) probes with dense coefficients.
    #[arg(long, default_value_t = 0)]
    pub samples: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a form, vector field or vector-valued form and print it canonically.
    Parse { expr: String },
    /// Apply an operator to a form.
    Apply {
        #[arg(long)]
        op: String,
        form: String,
    },
    /// Recover `L_K + i_L + λ_μ` from an operator used as a black box.
    Decompose {
        #[arg(long)]
        op: String,
        #[arg(long, default_value_t = 3)]
        max_r: i64,
        #[arg(long, default_value_t = 3)]
        max_b: i64,
    },
    /// Decide whether an operator of the `Id` family admits linearizing coefficients.
    Linearize {
        /// `q=..,a=..,w1=..,w2=..,mu=..`
        #[arg(long, conflicts_with = "op", required_unless_present = "op")]
        idop: Option<String>,
        #[arg(long)]
        op: Option<String>,
        #[arg(long, default_value_t = 2)]
        max_c: i64,
        #[arg(long)]
        max_r: Option<i64>,
        #[arg(long, default_value_t = 5)]
        max_b: i64,
    },
    /// Check `D(f·τ) = f·D(τ)` exhaustively within bounds.
    CheckLinearity {
        /// Defaults to `d` for `dd` and `tri(omega)` for `dt`.
        #[arg(long)]
        op: Option<String>,
        #[command(flatten)]
        coefficients: CoefficientArgs,
        #[arg(long, default_value_t = 3)]
        max_c: i64,
        #[arg(long)]
        max_r: Option<i64>,
        #[arg(long, default_value_t = 6)]
        max_b: i64,
        #[command(flatten)]
        sampling: SampleArgs,
    },
    /// Check `1·τ = τ` and `(gf)·τ = g·(f·τ)` exhaustively within bounds.
    CheckAssociativity {
        #[command(flatten)]
        coefficients: CoefficientArgs,
        #[arg(long, default_value_t = 3)]
        max_c: i64,
        #[arg(long)]
        max_r: Option<i64>,
        #[arg(long, default_value_t = 6)]
        max_b: i64,
        #[command(flatten)]
        sampling: SampleArgs,
    },
    /// Degreewise rank and kernel dimension of an operator, with generator counts when coefficients are given.
    Hilbert {
        #[arg(long)]
        op: String,
        #[arg(long)]
        r: i64,
        /// `a..b` or a single weight.
        #[arg(long)]
        weights: String,
        #[command(flatten)]
        coefficients: CoefficientArgs,
    },
    /// Generators per weight of a kernel, image or full space under an action.
    Generators {
        #[arg(long)]
        op: Option<String>,
        #[arg(long, value_enum, default_value = "kernel")]
        space: Space,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        weights: String,
        #[command(flatten)]
        coefficients: CoefficientArgs,
    },
    /// Degree-reduction certificates and finite-generation checks.
    Reduce {
        #[command(flatten)]
        coefficients: CoefficientArgs,
        /// A single-term form to express through lower weights.
        #[arg(long)]
        target: Option<String>,
        /// Run the generation check on this form degree.
        #[arg(long)]
        r: Option<i64>,
        #[arg(long, default_value_t = 3)]
        depth: i64,
    },
    /// The complex `T → Ω¹ → Ω³ → …` of `ω△`.
    Complex {
        #[arg(long)]
        omega: Option<String>,
        #[arg(long)]
        weights: String,
        #[arg(long, default_value_t = 2)]
        max_c: i64,
    },
    /// `φ_ω(w) = dim ker(ω△ on Ω¹(w))` and the homology at `Ω¹`.
    Phi {
        #[arg(long)]
        omega: Option<String>,
        #[arg(long)]
        weights: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Parse { .. } => "parse",
            Command::Apply { .. } => "apply",
            Command::Decompose { .. } => "decompose",
            Command::Linearize { .. } => "linearize",
            Command::CheckLinearity { .. } => "check-linearity",
            Command::CheckAssociativity { .. } => "check-associativity",
            Command::Hilbert { .. } => "hilbert",
            Command::Generators { .. } => "generators",
            Command::Reduce { .. } => "reduce",
            Command::Complex { .. } => "complex",
            Command::Phi { .. } => "phi",
        }
    }
}

/// Exit status for a report whose check failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status for invalid input or a library error.
pub const EXIT_ERROR: i32 = 2;

/// Runs the command line `argv` (including the program name) and returns the exit status and output.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            let format = std::env::var("FORMLIN_FORMAT")
                .ok()
                .and_then(|v| Format::from_str(&v, true).ok())
                .unwrap_or(Format::Json);
            let err = ErrorReport {
                kind: "usage".to_string(),
                message: e.to_string().trim_end().to_string(),
            };
            return (
                EXIT_ERROR,
                render(&Envelope::failure("formlin", err), format),
            );
        }
    };
    let name = cli.command.name();
    match execute(&cli) {
        Ok((n, report, ok)) => (
            if ok { 0 } else { EXIT_CHECK_FAILED },
            render(&Envelope::success(name, Some(n), report), cli.format),
        ),
        Err(e) => (
            EXIT_ERROR,
            render(&Envelope::failure(name, ErrorReport::from(&e)), cli.format),
        ),
    }
}

fn expr_vars(text: &str) -> Result<usize> {
    Ok(parse_ast(text)?.max_variable())
}

fn op_vars(text: &str) -> Result<usize> {
    Ok(parse_operator_ast(text)?.max_variable())
}

fn idop_vars(text: &str) -> Result<usize> {
    op_vars(&format!("idop({text})"))
}

/// `--n` when given, else the largest variable index among the inputs.
fn resolve_n(given: Option<usize>, found: &[usize]) -> Result<usize> {
    if let Some(n) = given {
        if n == 0 {
            return Err(Error::Config("--n must be positive".to_string()));
        }
        return Ok(n);
    }
    match found.iter().copied().max() {
        Some(n) if n > 0 => Ok(n),
        _ => Err(Error::Config(
            "cannot infer the variable count; pass --n".to_string(),
        )),
    }
}

fn parse_weights(text: &str) -> Result<RangeInclusive<i64>> {
    let bad = || Error::Config(format!("bad weight range {text:?}; expected a..b"));
    let text = text.trim();
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (text, text),
    };
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo < 0 || hi < lo {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn parse_teo1(text: &str, n: usize, mode: TruncationMode) -> Result<ActionCoefficients> {
    let (mut q, mut a, mut t) = (None, None, None);
    for part in text.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value in --teo1, got {part:?}")))?;
        let int = |v: &str| {
            v.trim()
                .parse::<i64>()
                .map_err(|_| Error::Config(format!("bad integer {v:?} in --teo1")))
        };
        match key.trim() {
            "q" => q = Some(int(value)?),
            "a" => a = Some(int(value)?),
            "t" => t = Some(parse_scalar(value.trim())?),
            other => return Err(Error::Config(format!("unknown --teo1 key {other:?}"))),
        }
    }
    let missing = |k: &str| Error::Config(format!("--teo1 needs {k}"));
    teo1_coefficients(
        q.ok_or_else(|| missing("q"))?,
        a.ok_or_else(|| missing("a"))?,
        t.unwrap_or_default(),
        n,
        mode,
    )
}

fn integrable(omega: Option<&str>, n: usize) -> Result<IntegrableOneForm> {
    match omega {
        Some(text) => IntegrableOneForm::new(parse_form(text, Some(n))?),
        None => IntegrableOneForm::rotation(n),
    }
}

struct Resolved {
    coeffs: ActionCoefficients,
    preset: Option<Preset>,
    omega: Option<IntegrableOneForm>,
}

fn resolve_coefficients(
    args: &CoefficientArgs,
    n: usize,
    default_mode: TruncationMode,
) -> Result<Option<Resolved>> {
    let mode = match args.truncation {
        Some(Truncation::Minimal) => TruncationMode::Minimal,
        Some(Truncation::Generation) => TruncationMode::Generation,
        None => default_mode,
    };
    if args.omega.is_some() && args.preset != Some(Preset::Dt) {
        return Err(Error::Config(
            "--omega only applies to --preset dt".to_string(),
        ));
    }
    if let Some(text) = &args.teo1 {
        return Ok(Some(Resolved {
            coeffs: parse_teo1(text, n, mode)?,
            preset: None,
            omega: None,
        }));
    }
    let Some(preset) = args.preset else {
        return Ok(None);
    };
    let (coeffs, omega) = match preset {
        Preset::Trivial => (ActionCoefficients::trivial(n), None),
        Preset::Dd => (teo1_coefficients(1, 0, Scalar::default(), n, mode)?, None),
        Preset::Dt => {
            let omega = integrable(args.omega.as_deref(), n)?;
            let coeffs = match mode {
                TruncationMode::Minimal => t_coefficients(n, omega.weight()),
                TruncationMode::Generation => {
                    teo1_coefficients(2, omega.weight(), Scalar::new(1.into(), 2.into()), n, mode)?
                }
            };
            (coeffs, Some(omega))
        }
    };
    Ok(Some(Resolved {
        coeffs,
        preset: Some(preset),
        omega,
    }))
}

fn required(resolved: Option<Resolved>) -> Result<Resolved> {
    resolved.ok_or_else(|| Error::Config("choose coefficients with --preset or --teo1".to_string()))
}

fn coeff_vars(args: &CoefficientArgs) -> Result<usize> {
    match &args.omega {
        Some(text) => expr_vars(text),
        None => Ok(0),
    }
}

type Outcome = (usize, Report, bool);

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Parse { expr } => {
            let n = resolve_n(cli.n, &[expr_vars(expr)?.max(1)])?;
            let parsed = parse_value(expr, Some(n))?;
            let (degree, weight, terms) = match &parsed {
                Parsed::Form(f) => (Some(f.degree()), f.weight(), f.terms().len()),
                Parsed::Field(x) => (None, x.weight(), x.terms().len()),
                Parsed::VectorForm(k) => (
                    Some(k.degree()),
                    k.weight(),
                    k.components().values().map(|c| c.terms().len()).sum(),
                ),
            };
            let report = ParseReport {
                kind: parsed.kind().to_string(),
                canonical: parsed.render(),
                degree,
                weight,
                terms,
            };
            Ok((n, Report::Parse(report), true))
        }
        Command::Apply { op, form } => {
            let n = resolve_n(cli.n, &[op_vars(op)?, expr_vars(form)?])?;
            let operator = parse_operator(op, Some(n))?;
            let tau = parse_form(form, Some(n))?;
            let out = operator.apply(&tau)?;
            let (q, a) = operator.bidegree();
            let report = ApplyReport {
                operator: operator.render(),
                bidegree: [q, a],
                input: tau.render(),
                output: out.render(),
                output_bidegree: [out.degree(), out.weight()],
            };
            Ok((n, Report::Apply(report), true))
        }
        Command::Decompose { op, max_r, max_b } => {
            let n = resolve_n(cli.n, &[op_vars(op)?])?;
            let operator = parse_operator(op, Some(n))?;
            decompose_report(
                operator,
                ProbeBounds {
                    r_max: *max_r,
                    b_max: *max_b,
                },
            )
            .map(|(report, ok)| (n, Report::Decompose(report), ok))
        }
        Command::Linearize {
            idop,
            op,
            max_c,
            max_r,
            max_b,
        } => {
            let found = match (idop, op) {
                (Some(body), _) => idop_vars(body)?,
                (None, Some(text)) => op_vars(text)?,
                (None, None) => 0,
            };
            let n = resolve_n(cli.n, &[found])?;
            let family = match (idop, op) {
                (Some(body), _) => parse_idop(body, Some(n))?,
                (None, Some(text)) => {
                    parse_operator(text, Some(n))?.as_family()?.ok_or_else(|| {
                        Error::Config("linearize expects d, idop(...) or tri(...)".to_string())
                    })?
                }
                (None, None) => unreachable!("clap requires --idop or --op"),
            };
            let search = CheckBounds {
                c_max: *max_c,
                r_max: max_r.unwrap_or(n as i64),
                b_max: *max_b,
            };
            let result = classify(&family, search)?;
            let mut report = LinearizeReport {
                operator: family.render(),
                q: result.q,
                a: result.a,
                linearizable: result.is_linearizable(),
                coefficients: CoefficientReport::from(&ActionCoefficients::trivial(n)),
                normal_form: None,
                obstruction: None,
                counterexample: None,
                search: None,
            };
            match &result.verdict {
                Verdict::Linearizable {
                    normal_form,
                    coefficients,
                } => {
                    report.coefficients = coefficients.into();
                    report.normal_form = normal_form.as_ref().map(Into::into);
                }
                Verdict::NotLinearizable {
                    obstruction,
                    candidate,
                    counterexample,
                } => {
                    report.coefficients = candidate.into();
                    report.obstruction = Some(obstruction.into());
                    report.counterexample = counterexample.as_ref().map(Into::into);
                    report.search = Some(search.into());
                }
            }
            Ok((n, Report::Linearize(report), true))
        }
        Command::CheckLinearity {
            op,
            coefficients,
            max_c,
            max_r,
            max_b,
            sampling,
        } => {
            let found = [
                op.as_deref().map(op_vars).transpose()?.unwrap_or(0),
                coeff_vars(coefficients)?,
            ];
            let n = resolve_n(cli.n, &found)?;
            let resolved = required(resolve_coefficients(
                coefficients,
                n,
                TruncationMode::Minimal,
            )?)?;
            let operator = match (op, resolved.preset) {
                (Some(text), _) => parse_operator(text, Some(n))?,
                (None, Some(Preset::Dd)) => parse_operator("d", Some(n))?,
                (None, Some(Preset::Dt)) => {
                    Operator::Triangle(resolved.omega.clone().expect("dt resolves an omega"))
                }
                (None, _) => {
                    return Err(Error::Config(
                        "--op is required for these coefficients".to_string(),
                    ))
                }
            };
            let bounds = CheckBounds {
                c_max: *max_c,
                r_max: max_r.unwrap_or(n as i64),
                b_max: *max_b,
            };
            let coeffs = &resolved.coeffs;
            let (mut checked, mut counterexample) =
                match verify_linearity(&operator, coeffs, bounds)? {
                    LinearityCheck::Pass { checked } => (checked, None),
                    LinearityCheck::Counterexample(c) => (0, Some(c)),
                };
            let samples = (sampling.samples > 0).then_some(SampleReport {
                seed: sampling.seed,
                count: sampling.samples,
            });
            if counterexample.is_none() && sampling.samples > 0 {
                counterexample = sample_linearity(&operator, coeffs, bounds, sampling)?;
                checked += sampling.samples;
            }
            let passed = counterexample.is_none();
            let report = LinearityReport {
                operator: operator.render(),
                coefficients: coeffs.into(),
                bounds: bounds.into(),
                passed,
                checked,
                samples,
                counterexample: counterexample.as_ref().map(Into::into),
            };
            Ok((n, Report::CheckLinearity(report), passed))
        }
        Command::CheckAssociativity {
            coefficients,
            max_c,
            max_r,
            max_b,
            sampling,
        } => {
            let n = resolve_n(cli.n, &[coeff_vars(coefficients)?])?;
            let resolved = required(resolve_coefficients(
                coefficients,
                n,
                TruncationMode::Minimal,
            )?)?;
            let bounds = CheckBounds {
                c_max: *max_c,
                r_max: max_r.unwrap_or(n as i64),
                b_max: *max_b,
            };
            let coeffs = &resolved.coeffs;
            let (mut checked, mut counterexample) = match verify_associativity(coeffs, bounds)? {
                AssociativityCheck::Pass { checked } => (checked, None),
                AssociativityCheck::Counterexample(c) => (0, Some(c)),
            };
            if counterexample.is_none() && sampling.samples > 0 {
                counterexample = sample_associativity(coeffs, bounds, sampling)?;
                checked += sampling.samples;
            }
            let passed = counterexample.is_none();
            let report = AssociativityReport {
                coefficients: coeffs.into(),
                bounds: bounds.into(),
                passed,
                checked,
                samples: (sampling.samples > 0).then_some(SampleReport {
                    seed: sampling.seed,
                    count: sampling.samples,
                }),
                counterexample: counterexample.as_ref().map(Into::into),
            };
            Ok((n, Report::CheckAssociativity(report), passed))
        }
        Command::Hilbert {
            op,
            r,
            weights,
            coefficients,
        } => {
            let n = resolve_n(cli.n, &[op_vars(op)?, coeff_vars(coefficients)?])?;
            let operator = parse_operator(op, Some(n))?;
            let weights = parse_weights(weights)?;
            let resolved = resolve_coefficients(coefficients, n, TruncationMode::Minimal)?;
            let algebra = resolved.as_ref().map(|c| c.coeffs.algebra().clone());
            let mut table = kernel_dims(&operator, *r, weights.clone(), algebra.as_ref())?;
            if let Some(res) = &resolved {
                let space = KernelOf {
                    op: &operator,
                    r: *r,
                };
                let gens = generator_degrees(&space, &res.coeffs, weights)?;
                for (row, g) in table.rows.iter_mut().zip(&gens.rows) {
                    row.generators = g.generators;
                }
            }
            let report = TableReport {
                operator: Some(operator.render()),
                space: "kernel".to_string(),
                r: *r,
                coefficients: resolved.as_ref().map(|c| (&c.coeffs).into()),
                rows: table.rows.iter().map(Into::into).collect(),
            };
            Ok((n, Report::Hilbert(report), true))
        }
        Command::Generators {
            op,
            space,
            r,
            weights,
            coefficients,
        } => {
            let found = [
                op.as_deref().map(op_vars).transpose()?.unwrap_or(0),
                coeff_vars(coefficients)?,
            ];
            let n = resolve_n(cli.n, &found)?;
            let resolved = required(resolve_coefficients(
                coefficients,
                n,
                TruncationMode::Minimal,
            )?)?;
            let weights = parse_weights(weights)?;
            let operator = op
                .as_deref()
                .map(|t| parse_operator(t, Some(n)))
                .transpose()?;
            let need_op = || {
                operator.as_ref().ok_or_else(|| {
                    Error::Config("--op is required for kernel and image".to_string())
                })
            };
            let table = match space {
                Space::Full => {
                    generator_degrees(&FullSpace { n, r: *r }, &resolved.coeffs, weights)?
                }
                Space::Kernel => {
                    let sub = KernelOf {
                        op: need_op()?,
                        r: *r,
                    };
                    generator_degrees(&sub, &resolved.coeffs, weights)?
                }
                Space::Image => {
                    let op = need_op()?;
                    let sub = ImageOf {
                        op,
                        source: *r - op.bidegree().0,
                    };
                    debug_assert_eq!(sub.form_degree(), *r);
                    generator_degrees(&sub, &resolved.coeffs, weights)?
                }
            };
            let report = TableReport {
                operator: operator.as_ref().map(Operator::render),
                space: format!("{space:?}").to_lowercase(),
                r: *r,
                coefficients: Some((&resolved.coeffs).into()),
                rows: table.rows.iter().map(Into::into).collect(),
            };
            Ok((n, Report::Generators(report), true))
        }
        Command::Reduce {
            coefficients,
            target,
            r,
            depth,
        } => {
            let found = [
                target.as_deref().map(expr_vars).transpose()?.unwrap_or(0),
                coeff_vars(coefficients)?,
            ];
            let n = resolve_n(cli.n, &found)?;
            let resolved = required(resolve_coefficients(
                coefficients,
                n,
                TruncationMode::Generation,
            )?)?;
            let coeffs = &resolved.coeffs;
            let certificate = match target {
                Some(text) => {
                    let form = parse_form(text, Some(n))?;
                    let cert = reduce_degree(&form, coeffs)?;
                    let replay = cert.replay(coeffs)?;
                    Some(CertificateReport::new(&cert, form.sub(&replay)?.render()))
                }
                None => None,
            };
            let generation = match (r, target) {
                (Some(r), _) => Some(generation_report(*r, coeffs, *depth)?),
                (None, None) => None,
                (None, Some(_)) => None,
            };
            let generation = if target.is_none() && r.is_none() {
                let mut all = Vec::new();
                for r in 0..=n as i64 {
                    all.push(generation_report(r, coeffs, *depth)?);
                }
                let failed = all.iter().find(|g| !g.passed).cloned();
                failed.or_else(|| {
                    Some(GenerationReport {
                        r: -1,
                        depth: *depth,
                        passed: true,
                        targets: Some(all.iter().filter_map(|g| g.targets).sum()),
                        failed_target: None,
                        reason: None,
                    })
                })
            } else {
                generation
            };
            let ok = certificate.as_ref().is_none_or(|c| c.residual == "0")
                && generation.as_ref().is_none_or(|g| g.passed);
            let report = ReduceReport {
                coefficients: coeffs.into(),
                certificate,
                generation,
            };
            Ok((n, Report::Reduce(report), ok))
        }
        Command::Complex {
            omega,
            weights,
            max_c,
        } => {
            let found = omega.as_deref().map(expr_vars).transpose()?.unwrap_or(0);
            let n = resolve_n(cli.n, &[found])?;
            let omega = integrable(omega.as_deref(), n)?;
            let weights = parse_weights(weights)?;
            let complex = build_complex(&omega, weights.clone())?;
            let slices: Vec<SliceReport> = complex
                .slices
                .iter()
                .map(|s| SliceReport {
                    weight: s.weight,
                    dims: s.dims.clone(),
                    ranks: s.differentials.iter().map(|m| m.rank()).collect(),
                    squares_zero: s
                        .differentials
                        .windows(2)
                        .all(|p| p[1].mul(&p[0]).is_zero()),
                })
                .collect();
            let failure = check_complex_linearity(&omega, weights, *max_c)?;
            let report = ComplexReport {
                omega: omega.form().render(),
                e: omega.weight(),
                coefficients: (&t_coefficients(n, omega.weight())).into(),
                squares_zero: slices.iter().all(|s| s.squares_zero),
                linear: failure.is_none(),
                max_c: *max_c,
                failure: failure.map(|f| LinearityWitness {
                    f: f.f.render(),
                    tau: f.input,
                    residual: f.residual.render(),
                }),
                slices,
            };
            let ok = report.squares_zero && report.linear;
            Ok((n, Report::Complex(report), ok))
        }
        Command::Phi { omega, weights } => {
            let found = omega.as_deref().map(expr_vars).transpose()?.unwrap_or(0);
            let n = resolve_n(cli.n, &[found])?;
            let omega = integrable(omega.as_deref(), n)?;
            let rows = phi_omega(&omega, parse_weights(weights)?)?;
            let report = PhiReport {
                omega: omega.form().render(),
                e: omega.weight(),
                rows: rows
                    .iter()
                    .map(|r| PhiRowReport {
                        weight: r.weight,
                        dimension: r.dimension,
                        phi: r.phi,
                        incoming_rank: r.incoming_rank,
                        homology: r.homology,
                        regular: r.regular(),
                    })
                    .collect(),
            };
            Ok((n, Report::Phi(report), true))
        }
    }
}

fn decompose_report(operator: Operator, probe: ProbeBounds) -> Result<(DecomposeReport, bool)> {
    let (q, a) = operator.bidegree();
    let mut report = DecomposeReport {
        operator: operator.render(),
        bidegree: [q, a],
        probe: [probe.r_max, probe.b_max],
        order_one: false,
        pairs_checked: None,
        witness: None,
        k: None,
        l: None,
        mu: None,
        reconstruction_agrees: None,
    };
    let black_box = BlackBoxOperator::from_operator(operator, probe);
    match bracket_order_test(&black_box, probe)? {
        OrderTest::Counterexample { mu, tau, residual } => {
            report.witness = Some(BracketWitness {
                mu: mu.render(),
                tau: tau.render(),
                residual: residual.render(),
            });
            Ok((report, false))
        }
        OrderTest::Pass { pairs_checked } => {
            let recovered = decompose(&black_box)?;
            let agrees = agree_on(&recovered, &black_box, probe)?;
            report.order_one = true;
            report.pairs_checked = Some(pairs_checked);
            report.k = Some(recovered.k().render());
            report.l = Some(recovered.l().render());
            report.mu = Some(recovered.mu().render());
            report.reconstruction_agrees = Some(agrees);
            Ok((report, agrees))
        }
    }
}

fn generation_report(r: i64, coeffs: &ActionCoefficients, depth: i64) -> Result<GenerationReport> {
    Ok(match generation_check(r, coeffs, depth)? {
        GenerationCheck::Pass { targets } => GenerationReport {
            r,
            depth,
            passed: true,
            targets: Some(targets),
            failed_target: None,
            reason: None,
        },
        GenerationCheck::Failure { target, reason } => GenerationReport {
            r,
            depth,
            passed: false,
            targets: None,
            failed_target: Some(target.render()),
            reason: Some(reason),
        },
    })
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::new(
        rng.gen_range(-4i64..=4).into(),
        rng.gen_range(1i64..=3).into(),
    )
}

fn random_polynomial(rng: &mut ChaCha8Rng, n: usize, c: u32) -> Result<HomogeneousPolynomial> {
    HomogeneousPolynomial::from_terms(
        n,
        c,
        MultiIndex::all_of_degree(n, c)
            .into_iter()
            .map(|g| (g, random_scalar(rng)))
            .collect::<Vec<_>>(),
    )
}

fn random_form(rng: &mut ChaCha8Rng, n: usize, r: i64, b: i64) -> HomogeneousForm {
    let basis = FormBasis::new(n, r, b);
    let coords: Vec<Scalar> = (0..basis.len()).map(|_| random_scalar(rng)).collect();
    basis.form(&coords)
}

/// A random `(r, b)` inside the truncation and the bounds, if any exists.
fn random_bidegree(
    rng: &mut ChaCha8Rng,
    coeffs: &ActionCoefficients,
    bounds: CheckBounds,
) -> Option<(i64, i64)> {
    let n = coeffs.n() as i64;
    let slots: Vec<(i64, i64)> = (0..=bounds.r_max.min(n))
        .flat_map(|r| (coeffs.algebra().threshold(r).max(r)..=bounds.b_max).map(move |b| (r, b)))
        .collect();
    (!slots.is_empty()).then(|| slots[rng.gen_range(0..slots.len())])
}

fn sample_linearity(
    op: &Operator,
    coeffs: &ActionCoefficients,
    bounds: CheckBounds,
    sampling: &SampleArgs,
) -> Result<Option<LinearityCounterexample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let n = coeffs.n();
    for _ in 0..sampling.samples {
        let Some((r, b)) = random_bidegree(&mut rng, coeffs, bounds) else {
            break;
        };
        let c = rng.gen_range(0..=bounds.c_max.max(0)) as u32;
        let tau = random_form(&mut rng, n, r, b);
        let f = random_polynomial(&mut rng, n, c)?;
        let d_tau = op.apply(&tau)?;
        let lhs = op.apply(&act(&f, &tau, coeffs)?)?;
        let rhs = if d_tau.is_zero() {
            HomogeneousForm::zero(n, lhs.degree(), lhs.weight())
        } else {
            act(&f, &d_tau, coeffs)?
        };
        let residual = lhs.sub(&rhs)?;
        if !residual.is_zero() {
            return Ok(Some(LinearityCounterexample { f, tau, residual }));
        }
    }
    Ok(None)
}

fn sample_associativity(
    coeffs: &ActionCoefficients,
    bounds: CheckBounds,
    sampling: &SampleArgs,
) -> Result<Option<AssociativityCounterexample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let n = coeffs.n();
    for _ in 0..sampling.samples {
        let Some((r, b)) = random_bidegree(&mut rng, coeffs, bounds) else {
            break;
        };
        let c = rng.gen_range(0..=bounds.c_max.max(0)) as u32;
        let e = rng.gen_range(0..=bounds.c_max.max(0)) as u32;
        let tau = random_form(&mut rng, n, r, b);
        let f = random_polynomial(&mut rng, n, c)?;
        let g = random_polynomial(&mut rng, n, e)?;
        let lhs = act(&g.mul(&f)?, &tau, coeffs)?;
        let residual = lhs.sub(&act(&g, &act(&f, &tau, coeffs)?, coeffs)?)?;
        if !residual.is_zero() {
            return Ok(Some(AssociativityCounterexample {
                g,
                f,
                tau,
                residual,
            }));
        }
    }
    Ok(None)
}
