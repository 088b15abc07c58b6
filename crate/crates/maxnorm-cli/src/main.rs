//! Command line front end. Every subcommand parses its inputs, calls the
//! library, and emits one deterministic report: JSON for verdicts, CSV for
//! grid dumps. Exit codes: 0 success, 2 bad input, 3 numeric failure, 64
//! usage error.

mod output;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use maxnorm::membership::{self, TailScanSpec};
use maxnorm::positivity::{self, ScanSpec};
use maxnorm::profile::Profile;
use maxnorm::quadrature::QuadOpts;
use maxnorm::report::{Classification, Verdict};
use maxnorm::splines::{self, SplineSpec};
use maxnorm::summability::{self, Generator};
use maxnorm::transform::{self, PlaneMethod};
use maxnorm::{acceptance, dimwalk};

use output::{Ctx, Failure};

#[derive(Parser)]
#[command(name = "maxnorm", version, about = "Max-norm radial function toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Output destination: a path, or `-` for standard output.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Absolute quadrature tolerance override.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Escalate inconclusive or unconverged results to exit code 3.
    #[arg(long, global = true)]
    strict: bool,
    /// Attach wall-clock milliseconds to the report (breaks byte-for-byte
    /// reproducibility, off by default).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate the plane transform against the brute-force oracle.
    Transform {
        /// Profile as inline JSON or `@file`.
        #[arg(long)]
        profile: String,
        /// Frequency grid `start:stop:count`, applied to both axes.
        #[arg(long, default_value = "0.5:4:4")]
        grid: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Decide positive definiteness of the planar function.
    CheckPd {
        #[arg(long)]
        profile: String,
        #[arg(long, value_enum, default_value_t = PdMethodArg::Both)]
        method: PdMethodArg,
    },
    /// Evaluate an absolute-convergence criterion.
    CheckWiener {
        #[arg(long)]
        profile: String,
        #[arg(long, value_enum)]
        criterion: CriterionArg,
    },
    /// Compactly supported spline profiles.
    Spline {
        #[command(subcommand)]
        cmd: SplineCmd,
    },
    /// Move a radial profile between space dimensions.
    Dimwalk {
        /// Profile to walk, inline JSON or `@file`.
        #[arg(long)]
        f1: String,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum)]
        direction: DirectionArg,
        /// Evaluation grid `start:stop:count`.
        #[arg(long, default_value = "0:1:11")]
        grid: String,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
    /// Periodic summability kernels from a lattice multiplier.
    Summability {
        /// Generator as inline JSON or `@file`.
        #[arg(long)]
        generator: String,
        /// Override for the generator's scale (eps, step, or order).
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long, value_enum)]
        measure: MeasureArg,
        /// Lattice truncation; defaults to the generator's suggestion.
        #[arg(long)]
        truncation: Option<u32>,
        /// Grid resolution for the chosen measure.
        #[arg(long)]
        points: Option<usize>,
    },
    /// Run the built-in acceptance suite and print a PASS/FAIL table.
    Selftest,
}

#[derive(Subcommand)]
enum SplineCmd {
    /// Solve for the compensated spline with exact rational coefficients.
    Construct {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d: u32,
        /// Attach the full property report (parity, boundary order, scans).
        #[arg(long)]
        verify: bool,
    },
    /// Tabulate the two-parameter h kernel on a grid.
    EvalH {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        nu: f64,
        #[arg(long, default_value = "0.05:0.95:19")]
        grid: String,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    F0hat,
    Derivative,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum PdMethodArg {
    F1,
    Direct,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    T3,
    T4,
    R3,
    Astar,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Down,
    Up,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Norm,
    Positivity,
    Periodization,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(n) = cli.common.threads {
        // Ignore a second initialization; the pool is process-global.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let ctx = Ctx::new(&cli.common);
    match dispatch(cli.cmd, &ctx) {
        Ok(()) => {}
        Err(f) => {
            eprintln!("maxnorm: {}", f.message());
            std::process::exit(f.exit_code());
        }
    }
}

fn dispatch(cmd: Cmd, ctx: &Ctx) -> Result<(), Failure> {
    match cmd {
        Cmd::Transform {
            profile,
            grid,
            method,
            format,
        } => run_transform(ctx, &profile, &grid, method, format),
        Cmd::CheckPd { profile, method } => run_check_pd(ctx, &profile, method),
        Cmd::CheckWiener { profile, criterion } => run_check_wiener(ctx, &profile, criterion),
        Cmd::Spline { cmd } => match cmd {
            SplineCmd::Construct { r, d, verify } => run_spline_construct(ctx, r, d, verify),
            SplineCmd::EvalH {
                mu,
                nu,
                grid,
                format,
            } => run_eval_h(ctx, mu, nu, &grid, format),
        },
        Cmd::Dimwalk {
            f1,
            d,
            direction,
            grid,
            format,
        } => run_dimwalk(ctx, &f1, d, direction, &grid, format),
        Cmd::Summability {
            generator,
            scale,
            measure,
            truncation,
            points,
        } => run_summability(ctx, &generator, scale, measure, truncation, points),
        Cmd::Selftest => run_selftest(ctx),
    }
}

// ---------------------------------------------------------------------------
// Input parsing
// ---------------------------------------------------------------------------

/// Inline JSON, or the contents of a file when the argument starts with `@`.
fn read_arg_text(arg: &str) -> Result<String, Failure> {
    if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Domain(format!("cannot read {path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_profile(arg: &str) -> Result<Profile, Failure> {
    let text = read_arg_text(arg)?;
    let p: Profile = serde_json::from_str(&text)
        .map_err(|e| Failure::Domain(format!("bad profile: {e}")))?;
    p.validate()
        .map_err(|e| Failure::Domain(format!("bad profile: {e}")))?;
    Ok(p)
}

fn parse_generator(arg: &str) -> Result<Generator, Failure> {
    let text = read_arg_text(arg)?;
    let g: Generator = serde_json::from_str(&text)
        .map_err(|e| Failure::Domain(format!("bad generator: {e}")))?;
    g.validate()
        .map_err(|e| Failure::Domain(format!("bad generator: {e}")))?;
    Ok(g)
}

/// `start:stop:count` with `count` evenly spaced points, endpoints included.
fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::Domain(format!("bad grid spec {spec:?}, expected start:stop:count"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

fn quad_opts(ctx: &Ctx) -> QuadOpts {
    match ctx.tol {
        Some(t) => QuadOpts::default().with_abs_tol(t),
        None => QuadOpts::default(),
    }
}

// ---------------------------------------------------------------------------
// transform
// ---------------------------------------------------------------------------

#[derive(serde::Serialize)]
struct TransformRow {
    y1: f64,
    y2: f64,
    fhat: f64,
    oracle: f64,
    abs_diff: f64,
}

#[derive(serde::Serialize)]
struct TransformResults {
    method: &'static str,
    grid: Vec<f64>,
    rows: Vec<TransformRow>,
    max_abs_diff: f64,
    /// Largest gap between the two reduction routes, when both ran.
    #[serde(skip_serializing_if = "Option::is_none")]
    max_method_discrepancy: Option<f64>,
    oracle_converged: bool,
}

fn run_transform(
    ctx: &Ctx,
    profile: &str,
    grid: &str,
    method: MethodArg,
    format: FormatArg,
) -> Result<(), Failure> {
    let p = parse_profile(profile)?;
    let ys = parse_grid(grid)?;
    let opts = quad_opts(ctx);
    let mut rows = Vec::with_capacity(ys.len() * ys.len());
    let mut max_abs_diff = 0.0f64;
    let mut method_gap = 0.0f64;
    let mut oracle_converged = true;
    for &y1 in &ys {
        for &y2 in &ys {
            let fhat = match method {
                MethodArg::F0hat | MethodArg::Both => {
                    transform::plane_transform(&p, y1, y2, PlaneMethod::ViaF0Hat, &opts)?
                }
                MethodArg::Derivative => {
                    transform::plane_transform(&p, y1, y2, PlaneMethod::ViaDerivative, &opts)?
                }
            };
            if matches!(method, MethodArg::Both) {
                let alt = transform::plane_transform(&p, y1, y2, PlaneMethod::ViaDerivative, &opts)?;
                method_gap = method_gap.max((fhat - alt).abs());
            }
            let oracle = transform::plane_transform_oracle(&p, y1, y2, ctx.tol)?;
            oracle_converged &= oracle.converged;
            let abs_diff = (fhat - oracle.value).abs();
            max_abs_diff = max_abs_diff.max(abs_diff);
            rows.push(TransformRow {
                y1,
                y2,
                fhat,
                oracle: oracle.value,
                abs_diff,
            });
        }
    }
    if ctx.strict && !oracle_converged {
        return Err(Failure::Numeric("oracle cubature did not converge".into()));
    }
    match format {
        FormatArg::Csv => {
            let mut text = String::from("y1,y2,fhat,oracle,abs_diff\n");
            for r in &rows {
                text.push_str(&output::csv_line(&[r.y1, r.y2, r.fhat, r.oracle, r.abs_diff]));
            }
            ctx.write_text(&text)
        }
        FormatArg::Json => {
            let results = TransformResults {
                method: match method {
                    MethodArg::F0hat => "f0hat",
                    MethodArg::Derivative => "derivative",
                    MethodArg::Both => "both",
                },
                grid: ys,
                rows,
                max_abs_diff,
                max_method_discrepancy: matches!(method, MethodArg::Both).then_some(method_gap),
                oracle_converged,
            };
            ctx.emit_report(Some(&p), &results)
        }
    }
}

// ---------------------------------------------------------------------------
// check-pd
// ---------------------------------------------------------------------------

#[derive(serde::Serialize)]
struct PdResults {
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    via_f1: Option<positivity::F1Scan>,
    #[serde(skip_serializing_if = "Option::is_none")]
    direct: Option<maxnorm::report::PdVerdict>,
}

fn run_check_pd(ctx: &Ctx, profile: &str, method: PdMethodArg) -> Result<(), Failure> {
    let p = parse_profile(profile)?;
    let opts = quad_opts(ctx);
    let via_f1 = match method {
        PdMethodArg::F1 | PdMethodArg::Both => {
            Some(positivity::check_pd_via_f1(&p, &ScanSpec::default(), &opts)?)
        }
        PdMethodArg::Direct => None,
    };
    let direct = match method {
        PdMethodArg::Direct | PdMethodArg::Both => {
            Some(positivity::check_pd_direct(&p, &ScanSpec::default_2d(), &opts)?)
        }
        PdMethodArg::F1 => None,
    };
    let inconclusive = via_f1
        .iter()
        .map(|s| s.verdict.verdict)
        .chain(direct.iter().map(|v| v.verdict))
        .any(|v| v == Verdict::Inconclusive);
    let results = PdResults {
        method: match method {
            PdMethodArg::F1 => "f1",
            PdMethodArg::Direct => "direct",
            PdMethodArg::Both => "both",
        },
        via_f1,
        direct,
    };
    ctx.emit_report(Some(&p), &results)?;
    if ctx.strict && inconclusive {
        return Err(Failure::Numeric("scan returned an inconclusive verdict".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// check-wiener
// ---------------------------------------------------------------------------

fn run_check_wiener(ctx: &Ctx, profile: &str, criterion: CriterionArg) -> Result<(), Failure> {
    let p = parse_profile(profile)?;
    let opts = quad_opts(ctx);
    let (name, report, classification) = match criterion {
        CriterionArg::T3 => {
            let r = membership::sufficient_smoothness_criterion(&p, &opts)?;
            ("t3", serde_json::to_value(&r).expect("serializable"), None)
        }
        CriterionArg::T4 => {
            let r = membership::boundary_log_criterion(&p, &opts)?;
            let c = r.classification;
            ("t4", serde_json::to_value(&r).expect("serializable"), Some(c))
        }
        CriterionArg::R3 => {
            let r = membership::boundary_radial_criterion(&p, &opts)?;
            let c = r.classification;
            ("r3", serde_json::to_value(&r).expect("serializable"), Some(c))
        }
        CriterionArg::Astar => {
            let r = membership::sup_tail_profile(&p, &TailScanSpec::default())?;
            let c = r.report.classification;
            ("astar", serde_json::to_value(&r).expect("serializable"), Some(c))
        }
    };
    #[derive(serde::Serialize)]
    struct WienerResults {
        criterion: &'static str,
        report: serde_json::Value,
    }
    ctx.emit_report(Some(&p), &WienerResults { criterion: name, report })?;
    if ctx.strict && classification == Some(Classification::Inconclusive) {
        return Err(Failure::Numeric("ladder classification is inconclusive".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// spline
// ---------------------------------------------------------------------------

fn run_spline_construct(ctx: &Ctx, r: u32, d: u32, verify: bool) -> Result<(), Failure> {
    let spec = SplineSpec::new(r, d)?;
    let a = splines::compensated_spline(&spec)?;
    #[derive(serde::Serialize)]
    struct ConstructResults {
        r: u32,
        d: u32,
        exponent: String,
        coefficients: Vec<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        report: Option<splines::SplineReport>,
    }
    let report = if verify {
        Some(splines::verify_properties(&a, &spec)?)
    } else {
        None
    };
    let results = ConstructResults {
        r,
        d,
        exponent: a.m.to_string(),
        coefficients: a.coeffs.iter().map(|c| c.to_string()).collect(),
        report,
    };
    ctx.emit_report(None, &results)
}

fn run_eval_h(ctx: &Ctx, mu: f64, nu: f64, grid: &str, format: FormatArg) -> Result<(), Failure> {
    let xs = parse_grid(grid)?;
    let opts = quad_opts(ctx);
    let mut rows = Vec::with_capacity(xs.len());
    for &x in &xs {
        rows.push((x, splines::eval_h(mu, nu, x, &opts)?));
    }
    match format {
        FormatArg::Csv => {
            let mut text = String::from("x,h\n");
            for &(x, h) in &rows {
                text.push_str(&output::csv_line(&[x, h]));
            }
            ctx.write_text(&text)
        }
        FormatArg::Json => {
            #[derive(serde::Serialize)]
            struct HRow {
                x: f64,
                h: f64,
            }
            #[derive(serde::Serialize)]
            struct HResults {
                mu: f64,
                nu: f64,
                rows: Vec<HRow>,
            }
            let results = HResults {
                mu,
                nu,
                rows: rows.into_iter().map(|(x, h)| HRow { x, h }).collect(),
            };
            ctx.emit_report(None, &results)
        }
    }
}

// ---------------------------------------------------------------------------
// dimwalk
// ---------------------------------------------------------------------------

fn run_dimwalk(
    ctx: &Ctx,
    f1: &str,
    d: u32,
    direction: DirectionArg,
    grid: &str,
    format: FormatArg,
) -> Result<(), Failure> {
    let p = parse_profile(f1)?;
    let ts = parse_grid(grid)?;
    let opts = quad_opts(ctx);
    let mut rows = Vec::with_capacity(ts.len());
    for &t in &ts {
        let v = match direction {
            DirectionArg::Down => dimwalk::descend(&p, d, t, &opts)?,
            DirectionArg::Up => dimwalk::ascend_odd(&p, d, t)?,
        };
        rows.push((t, v));
    }
    match format {
        FormatArg::Csv => {
            let mut text = String::from("t,value\n");
            for &(t, v) in &rows {
                text.push_str(&output::csv_line(&[t, v]));
            }
            ctx.write_text(&text)
        }
        FormatArg::Json => {
            #[derive(serde::Serialize)]
            struct WalkRow {
                t: f64,
                value: f64,
            }
            #[derive(serde::Serialize)]
            struct WalkResults {
                d: u32,
                direction: &'static str,
                rows: Vec<WalkRow>,
            }
            let results = WalkResults {
                d,
                direction: match direction {
                    DirectionArg::Down => "down",
                    DirectionArg::Up => "up",
                },
                rows: rows.into_iter().map(|(t, value)| WalkRow { t, value }).collect(),
            };
            ctx.emit_report(Some(&p), &results)
        }
    }
}

// ---------------------------------------------------------------------------
// summability
// ---------------------------------------------------------------------------

fn apply_scale(generator: &mut Generator, scale: f64) -> Result<(), Failure> {
    match generator {
        Generator::Abel { eps } => *eps = scale,
        Generator::Profile { step, .. } => *step = scale,
        Generator::Riesz { n, .. } | Generator::SharpCut { n } => {
            if scale < 1.0 || scale.fract() != 0.0 || scale > u32::MAX as f64 {
                return Err(Failure::Domain(format!(
                    "scale for an order-based generator must be a positive integer, got {scale}"
                )));
            }
            *n = scale as u32;
        }
    }
    generator
        .validate()
        .map_err(|e| Failure::Domain(format!("bad scale: {e}")))
}

fn run_summability(
    ctx: &Ctx,
    generator: &str,
    scale: Option<f64>,
    measure: MeasureArg,
    truncation: Option<u32>,
    points: Option<usize>,
) -> Result<(), Failure> {
    let mut gen = parse_generator(generator)?;
    if let Some(s) = scale {
        apply_scale(&mut gen, s)?;
    }
    let truncation = truncation.unwrap_or_else(|| gen.suggested_truncation());
    match measure {
        MeasureArg::Positivity => {
            let field = summability::sample_multiplier(&gen, truncation)?;
            let scan = summability::kernel_positivity(&field, points.unwrap_or(256));
            #[derive(serde::Serialize)]
            struct PositivityResults {
                generator: Generator,
                truncation: u32,
                truncated: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                tail_bound: Option<f64>,
                scan: summability::PositivityScan,
            }
            ctx.emit_report(
                None,
                &PositivityResults {
                    generator: gen,
                    truncation: field.truncation,
                    truncated: field.truncated,
                    tail_bound: field.tail_bound,
                    scan,
                },
            )
        }
        MeasureArg::Norm => {
            let field = summability::sample_multiplier(&gen, truncation)?;
            let estimate =
                summability::kernel_l1_norm(&field, points.unwrap_or(summability::DEFAULT_NORM_DENSITY))?;
            #[derive(serde::Serialize)]
            struct NormResults {
                generator: Generator,
                truncation: u32,
                truncated: bool,
                estimate: summability::NormEstimate,
            }
            ctx.emit_report(
                None,
                &NormResults {
                    generator: gen,
                    truncation: field.truncation,
                    truncated: field.truncated,
                    estimate,
                },
            )
        }
        MeasureArg::Periodization => {
            let (profile, step) = match &gen {
                Generator::Profile { profile, step } => (profile.clone(), *step),
                _ => {
                    return Err(Failure::Domain(
                        "periodization needs a profile generator with a step".into(),
                    ))
                }
            };
            let report = summability::periodization_check(&profile, step, truncation, points)?;
            #[derive(serde::Serialize)]
            struct PeriodizationResults {
                generator: Generator,
                report: summability::PeriodizationReport,
            }
            ctx.emit_report(
                None,
                &PeriodizationResults {
                    generator: gen,
                    report,
                },
            )
        }
    }
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

fn run_selftest(ctx: &Ctx) -> Result<(), Failure> {
    let summary = acceptance::run_all();
    let mut table = String::new();
    table.push_str(&format!(
        "{:>2}  {:<6}  {:<42}  {}\n",
        "id", "status", "criterion", "detail"
    ));
    for r in &summary.results {
        table.push_str(&format!(
            "{:>2}  {:<6}  {:<42}  {}\n",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        ));
    }
    // The table goes wherever the JSON is not: both on stdout would break
    // the byte-level reproducibility of the report stream.
    if ctx.wants_stdout_report() {
        eprint!("{table}");
        ctx.emit_report(None, &summary)?;
    } else {
        print!("{table}");
        if ctx.has_out_file() {
            ctx.emit_report(None, &summary)?;
        }
    }
    if summary.all_passed {
        Ok(())
    } else {
        Err(Failure::Numeric("acceptance criteria failed".into()))
    }
}
