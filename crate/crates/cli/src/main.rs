//! `eszeta` — every library operation as a subcommand with machine-readable
//! reports.
//!
//! Output goes to standard output (or `--output FILE`); progress and errors
//! go to standard error only, so reports are pipeline-safe. Exit codes:
//! `0` success, `2` usage error (bad flags or config), `3` domain error (an
//! operation precondition was violated, e.g. `PoleAtOne`), `4` range
//! verification finished with unsolved entries (the report is still written).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use eszeta_cli::wire::{
    DensityParams, Envelope, FZerosParams, FZerosResult, GkParams, GkSumParams, RangeParams,
    RangeResult, ResidualResult, ResidueParams, ResidueResult, ScanParams, SolveParams,
    SolveResult, ValueResult, ZetaParams,
};
use eszeta_core::{
    f_zero_locus, functional_eq_residual, gk_continued, gk_partial_sum, residue_probe,
    scan_critical_line, solve_first, verify_f_zero, verify_range, zero_density, zeta,
    AnalyticError, ComplexValue, ExplorerError, ParamError, PrecisionConfig, Scheme,
    SearchBounds,
};

// --- command grammar ---------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "eszeta",
    version,
    about = "Unit-fraction decompositions of k/n via the quadratic form t²(kx−n)² − 2nxt, \
             and its analytic continuation to k·ζ(s)",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Worker threads for the parallel subcommands
    /// (default: $ESZETA_THREADS, then the config file, then all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// key=value preset file (em_terms, em_bernoulli, tol, x_max, t_span,
    /// threads, alpha); explicit flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Euler–Maclaurin cutoff for the zeta kernel (≥ 10).
    #[arg(long, global = true, value_name = "N")]
    em_terms: Option<u32>,

    /// Bernoulli correction terms for the zeta kernel (2..=30).
    #[arg(long, global = true, value_name = "N")]
    em_bernoulli: Option<u32>,

    /// Target tolerance recorded in the precision settings (> 0).
    #[arg(long, global = true, value_name = "T")]
    tol: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand)]
enum Command {
    /// First decomposition k/n = 1/x + 1/y + 1/z found by the bounded (x, t) search.
    Solve(SolveArgs),
    /// Search every n in [n_start, n_end] and report solved/unsolved counts.
    VerifyRange(VerifyRangeArgs),
    /// Fraction of n ≤ N admitting an exact F = 0 (y = z) decomposition.
    Density(DensityArgs),
    /// Riemann zeta at a complex point.
    Zeta(PointArgs),
    /// G_k(s) = k·ζ(s) by analytic continuation.
    GkEval(GkPointArgs),
    /// Partial sum of Σ (1/x_s + 1/y_s + 1/z_s) with tail estimate, against k·ζ(s).
    GkSum(GkSumArgs),
    /// |Λ_k(s) − Λ_k(1−s)| for the completed function Λ_k = π^(−s/2)Γ(s/2)G_k(s).
    FuncEq(GkPointArgs),
    /// eps·G_k(1+eps): simple-pole residue probe at s = 1.
    Residue(ResidueArgs),
    /// Sign-change scan of the rotated G_k on the critical line, with refinement.
    ScanZeros(ScanArgs),
    /// Exact zero locus of F(n^s) in the s-plane for fixed (k, x, t).
    FZeros(FZerosArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Numerator k ≥ 2 of k/n.
    #[arg(long)]
    k: u64,
    /// Denominator n ≥ 2.
    #[arg(long)]
    n: u64,
    /// Largest x tried (default 4n).
    #[arg(long)]
    x_max: Option<u64>,
    /// t values tried per x above the admissibility bound (default 10000).
    #[arg(long)]
    t_span: Option<u64>,
}

#[derive(Args)]
struct VerifyRangeArgs {
    /// Numerator k ≥ 2.
    #[arg(long)]
    k: u64,
    /// First denominator (≥ 2).
    #[arg(long)]
    n_start: u64,
    /// Last denominator (inclusive).
    #[arg(long)]
    n_end: u64,
    /// Largest x tried for every n (default 4·n_end).
    #[arg(long)]
    x_max: Option<u64>,
    /// t values tried per x (default 10000).
    #[arg(long)]
    t_span: Option<u64>,
}

#[derive(Args)]
struct DensityArgs {
    /// Numerator k ≥ 2.
    #[arg(long)]
    k: u64,
    /// Scan denominators 2..=N.
    #[arg(long = "N")]
    n_max: u64,
    /// Largest x tried (default N).
    #[arg(long)]
    x_max: Option<u64>,
}

#[derive(Args)]
struct PointArgs {
    /// Complex point as RE or RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    s: ComplexValue,
}

#[derive(Args)]
struct GkPointArgs {
    /// Numerator k ≥ 1.
    #[arg(long)]
    k: u32,
    /// Complex point as RE or RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    s: ComplexValue,
}

#[derive(Args)]
struct GkSumArgs {
    /// Numerator k ≥ 1.
    #[arg(long)]
    k: u32,
    /// Complex point as RE or RE,IM; needs Re(s) > 1.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    s: ComplexValue,
    /// Number of terms.
    #[arg(long = "N")]
    n_terms: u64,
    /// Proportionality constant of the double-root scheme (default 2/k).
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct ResidueArgs {
    /// Numerator k ≥ 1.
    #[arg(long)]
    k: u32,
    /// Offset from the pole (0 < eps ≤ 0.01).
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
}

#[derive(Args)]
struct ScanArgs {
    /// Numerator k ≥ 1 (the zero set is k-independent; k only scales G_k).
    #[arg(long)]
    k: u32,
    /// Window start (> 0).
    #[arg(long)]
    t_min: f64,
    /// Window end (> t_min).
    #[arg(long)]
    t_max: f64,
    /// Grid step (> 0).
    #[arg(long)]
    step: f64,
}

#[derive(Args)]
struct FZerosArgs {
    /// Numerator k ≥ 1.
    #[arg(long)]
    k: u32,
    /// First denominator parameter (> 0).
    #[arg(long)]
    x: f64,
    /// Step parameter (> 0).
    #[arg(long)]
    t: f64,
    /// Base of n^s (≥ 2).
    #[arg(long)]
    n: u64,
    /// Branch points sampled per root when verifying the locus.
    #[arg(long, default_value_t = 5)]
    samples: u32,
}

fn parse_complex(text: &str) -> Result<ComplexValue, String> {
    let (re_text, im_text) = match text.split_once(',') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (text.trim(), None),
    };
    let re: f64 = re_text
        .parse()
        .map_err(|_| format!("invalid real part `{re_text}` (expected RE or RE,IM)"))?;
    let im: f64 = match im_text {
        Some(t) => t
            .parse()
            .map_err(|_| format!("invalid imaginary part `{t}` (expected RE or RE,IM)"))?,
        None => 0.0,
    };
    Ok(ComplexValue::new(re, im))
}

// --- failure plumbing ----------------------------------------------------------

enum Failure {
    /// Bad flags or config; exit 2.
    Usage(String),
    /// The operation's own precondition was violated; exit 3.
    Domain { code: &'static str, message: String },
}

impl Failure {
    fn domain(code: &'static str, message: impl Into<String>) -> Self {
        Failure::Domain {
            code,
            message: message.into(),
        }
    }
}

fn analytic_failure(e: AnalyticError) -> Failure {
    let code = match &e {
        AnalyticError::PoleAtOne { .. } => "PoleAtOne",
        AnalyticError::PoleAtNonPositiveInteger { .. } => "PoleAtNonPositiveInteger",
        AnalyticError::PoleEncountered { .. } => "PoleEncountered",
        AnalyticError::OutsideSupportedRegion { .. } => "OutsideSupportedRegion",
        AnalyticError::InvalidConfig { .. } => "InvalidConfig",
    };
    Failure::domain(code, e.to_string())
}

fn param_failure(e: ParamError) -> Failure {
    match e {
        ParamError::Analytic(inner) => analytic_failure(inner),
        ParamError::SchemeDomainViolation { .. } => {
            Failure::domain("SchemeDomainViolation", e.to_string())
        }
        ParamError::DegenerateRoot { .. } => Failure::domain("DegenerateRoot", e.to_string()),
        ParamError::PoleAtOne { .. } => Failure::domain("PoleAtOne", e.to_string()),
        ParamError::DivergentRegion { .. } => Failure::domain("DivergentRegion", e.to_string()),
    }
}

fn explorer_failure(e: ExplorerError) -> Failure {
    match e {
        ExplorerError::Analytic(inner) => analytic_failure(inner),
        ExplorerError::DegenerateQuadratic => {
            Failure::domain("DegenerateQuadratic", e.to_string())
        }
        // argument problems are caught before dispatch; reaching here is a
        // usage error all the same
        ExplorerError::InvalidArgument { .. } => Failure::Usage(e.to_string()),
    }
}

// --- config file ---------------------------------------------------------------

#[derive(Default)]
struct FileConfig {
    em_terms: Option<u32>,
    em_bernoulli: Option<u32>,
    tol: Option<f64>,
    x_max: Option<u64>,
    t_span: Option<u64>,
    threads: Option<usize>,
    alpha: Option<f64>,
}

fn load_config(path: &PathBuf) -> Result<FileConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut cfg = FileConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Failure::Usage(format!(
                "config line {} is not key=value: `{raw}`",
                idx + 1
            )));
        };
        let (key, value) = (key.trim(), value.trim());
        let bad = |e: String| Failure::Usage(format!("config key {key}: {e}"));
        match key {
            "em_terms" => cfg.em_terms = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
            "em_bernoulli" => {
                cfg.em_bernoulli = Some(value.parse().map_err(|e| bad(format!("{e}")))?)
            }
            "tol" => cfg.tol = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
            "x_max" => cfg.x_max = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
            "t_span" => cfg.t_span = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
            "threads" => cfg.threads = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
            "alpha" => cfg.alpha = Some(value.parse().map_err(|e| bad(format!("{e}")))?),
            other => {
                return Err(Failure::Usage(format!(
                    "unknown config key `{other}` (known: em_terms, em_bernoulli, tol, x_max, t_span, threads, alpha)"
                )))
            }
        }
    }
    Ok(cfg)
}

/// Everything resolved before dispatch: precision, preset bounds, scheme
/// constant. Flags override the config file; command-specific defaults fill
/// whatever is left.
struct Resolved {
    precision: PrecisionConfig,
    x_max: Option<u64>,
    t_span: Option<u64>,
    alpha: Option<f64>,
}

fn resolve(cli: &Cli) -> Result<Resolved, Failure> {
    let file = match &cli.config {
        Some(path) => load_config(path)?,
        None => FileConfig::default(),
    };
    let em_terms = cli.em_terms.or(file.em_terms).unwrap_or(64);
    let em_bernoulli = cli.em_bernoulli.or(file.em_bernoulli).unwrap_or(14);
    let tol = cli.tol.or(file.tol).unwrap_or(1e-12);
    let precision = PrecisionConfig::new(em_terms, em_bernoulli, tol)
        .map_err(|e| Failure::Usage(e.to_string()))?;

    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("ESZETA_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .or(file.threads);
    if let Some(threads) = threads {
        if threads == 0 {
            return Err(Failure::Usage("thread count must be at least 1".into()));
        }
        // Already-initialized pools (same-process reuse) keep their size.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }

    Ok(Resolved {
        precision,
        x_max: file.x_max,
        t_span: file.t_span,
        alpha: file.alpha,
    })
}

// --- report envelope -------------------------------------------------------------

/// Report body in the selected format, plus the process exit code.
struct Rendered {
    body: String,
    exit: u8,
}

impl Rendered {
    fn ok(body: String) -> Self {
        Rendered { body, exit: 0 }
    }
}

fn to_json<P: Serialize, R: Serialize>(env: &Envelope<P, R>) -> String {
    let mut body = serde_json::to_string(env).expect("reports always serialize");
    body.push('\n');
    body
}

fn csv_from_rows(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("csv header");
    for row in rows {
        w.write_record(row).expect("csv row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv utf8")
}

fn fmt_c(v: ComplexValue) -> String {
    if v.im >= 0.0 {
        format!("{} + {}i", v.re, v.im)
    } else {
        format!("{} - {}i", v.re, -v.im)
    }
}

fn big(v: &BigUint) -> String {
    v.to_string()
}

// --- per-command handlers -----------------------------------------------------------

fn run_solve(a: &SolveArgs, r: &Resolved, format: Format) -> Result<Rendered, Failure> {
    if a.k < 2 || a.n < 2 {
        return Err(Failure::Usage("solve requires k ≥ 2 and n ≥ 2".into()));
    }
    let x_max = a.x_max.or(r.x_max).unwrap_or(4 * a.n);
    let t_span = a.t_span.or(r.t_span).unwrap_or(10_000);
    let bounds = SearchBounds::new(x_max, t_span).map_err(|e| Failure::Usage(e.to_string()))?;
    let started = Instant::now();
    let dec = solve_first(a.k, a.n, &bounds).ok_or_else(|| {
        Failure::domain(
            "SearchExhausted",
            format!(
                "no witness for {}/{} within x ≤ {x_max}, t window {t_span}",
                a.k, a.n
            ),
        )
    })?;
    let params = SolveParams {
        k: a.k,
        n: a.n,
        x_max,
        t_span,
    };
    let result = SolveResult {
        x: dec.params.x,
        y: dec.y.clone(),
        z: dec.z.clone(),
        t: dec.params.t,
        m: dec.m.clone(),
    };
    let env = Envelope {
        command: "solve".into(),
        params,
        result,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Rendered::ok(match format {
        Format::Json => to_json(&env),
        Format::Csv => csv_from_rows(
            &["k", "n", "x", "y", "z", "t", "m"],
            &[vec![
                a.k.to_string(),
                a.n.to_string(),
                dec.params.x.to_string(),
                big(&dec.y),
                big(&dec.z),
                dec.params.t.to_string(),
                big(&dec.m),
            ]],
        ),
        Format::Human => format!(
            "{}/{} = 1/{} + 1/{} + 1/{}   (x={}, t={}, m={})\n",
            a.k,
            a.n,
            dec.params.x,
            dec.y,
            dec.z,
            dec.params.x,
            dec.params.t,
            dec.m
        ),
    }))
}

fn run_verify_range(a: &VerifyRangeArgs, r: &Resolved, format: Format) -> Result<Rendered, Failure> {
    if a.k < 2 {
        return Err(Failure::Usage("verify-range requires k ≥ 2".into()));
    }
    if a.n_start < 2 || a.n_start > a.n_end {
        return Err(Failure::Usage(
            "verify-range requires 2 ≤ n_start ≤ n_end".into(),
        ));
    }
    let x_max = a.x_max.or(r.x_max).unwrap_or(4 * a.n_end);
    let t_span = a.t_span.or(r.t_span).unwrap_or(10_000);
    let bounds = SearchBounds::new(x_max, t_span).map_err(|e| Failure::Usage(e.to_string()))?;
    eprintln!(
        "verify-range: k={} n=[{}, {}] x_max={} t_span={} ...",
        a.k, a.n_start, a.n_end, x_max, t_span
    );
    let started = Instant::now();
    let report =
        verify_range(a.k, a.n_start, a.n_end, &bounds).map_err(|e| Failure::Usage(e.to_string()))?;
    eprintln!(
        "verify-range: {} solved, {} unsolved in {:.2?}",
        report.solved_count,
        report.unsolved.len(),
        report.elapsed
    );
    let exit = if report.unsolved.is_empty() { 0 } else { 4 };
    let params = RangeParams {
        k: a.k,
        n_start: a.n_start,
        n_end: a.n_end,
        x_max,
        t_span,
    };
    let result = RangeResult::from(report);
    let env = Envelope {
        command: "verify-range".into(),
        params,
        result,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    let body = match format {
        Format::Json => to_json(&env),
        Format::Csv => {
            let mut rows = Vec::with_capacity(env.result.witnesses.len());
            for w in &env.result.witnesses {
                rows.push(vec![
                    w.params.n.to_string(),
                    "true".into(),
                    w.params.x.to_string(),
                    big(&w.y),
                    big(&w.z),
                    w.params.t.to_string(),
                    big(&w.m),
                ]);
            }
            for n in &env.result.unsolved {
                rows.push(vec![
                    n.to_string(),
                    "false".into(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
            }
            rows.sort_by_key(|row| row[0].parse::<u64>().unwrap_or(u64::MAX));
            csv_from_rows(&["n", "solved", "x", "y", "z", "t", "m"], &rows)
        }
        Format::Human => {
            let mut text = format!(
                "k={} over [{}, {}]: {} solved, {} unsolved\n",
                env.result.k,
                env.result.n_start,
                env.result.n_end,
                env.result.solved_count,
                env.result.unsolved.len()
            );
            if !env.result.unsolved.is_empty() {
                let _ = writeln!(text, "unsolved: {:?}", env.result.unsolved);
            }
            text
        }
    };
    Ok(Rendered { body, exit })
}

fn run_density(a: &DensityArgs, r: &Resolved, format: Format) -> Result<Rendered, Failure> {
    if a.k < 2 || a.n_max < 2 {
        return Err(Failure::Usage("density requires k ≥ 2 and N ≥ 2".into()));
    }
    let x_max = a.x_max.or(r.x_max).unwrap_or(a.n_max);
    let started = Instant::now();
    let report = zero_density(a.k, a.n_max, x_max);
    let env = Envelope {
        command: "density".into(),
        params: DensityParams {
            k: a.k,
            n_max: a.n_max,
            x_max,
        },
        result: report,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Rendered::ok(match format {
        Format::Json => to_json(&env),
        Format::Csv => csv_from_rows(
            &["k", "N", "zero_count", "fraction"],
            &[vec![
                env.result.k.to_string(),
                env.result.n_max.to_string(),
                env.result.zero_count.to_string(),
                env.result.fraction.to_string(),
            ]],
        ),
        Format::Human => format!(
            "k={}: {} of {} denominators ≤ {} admit y = z   (fraction {:.6})\n",
            env.result.k,
            env.result.zero_count,
            env.result.n_max - 1,
            env.result.n_max,
            env.result.fraction
        ),
    }))
}

fn point_csv(s: ComplexValue, v: ComplexValue) -> String {
    csv_from_rows(
        &["s_re", "s_im", "value_re", "value_im"],
        &[vec![
            s.re.to_string(),
            s.im.to_string(),
            v.re.to_string(),
            v.im.to_string(),
        ]],
    )
}

fn run_zeta(a: &PointArgs, r: &Resolved, format: Format) -> Result<Rendered, Failure> {
    let started = Instant::now();
    let value = zeta(a.s, &r.precision).map_err(analytic_failure)?;
    let env = Envelope {
        command: "zeta".into(),
        params: ZetaParams {
            s: a.s,
            em_terms: r.precision.em_terms,
            em_bernoulli: r.precision.em_bernoulli,
            tol: r.precision.tol,
        },
        result: ValueResult { value },
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Rendered::ok(match format {
        Format::Json => to_json(&env),
        Format::Csv => point_csv(a.s, value),
        Format::Human => format!("zeta({}) = {}\n", fmt_c(a.s), fmt_c(value)),
    }))
}

fn run_gk_eval(a: &GkPointArgs, r: &Resolved, format: Format) -> Result<Rendered, Failure> {
    if a.k < 1 {
        return Err(Failure::Usage("gk-eval requires k ≥ 1".into()));
    }
    let started = Instant::now();
    let value = gk_continued(a.k, a.s, &r.precision).map_err(analytic_failure)?;
    let env = Envelope {
        command: "gk-eval".into(),
        params: GkParams { k: a.k, s: a.s },
        result: ValueResult { value },
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Rendered::ok(match format {
        Format::Json => to_json(&env),
        Format::Csv => point_csv(a.s, value),
        Format::Human => format!("G_{}({}) = {}\n", a.k, fmt_c(a.s), fmt_c(value)),
    }))
}

fn run_gk_sum(a: &GkSumArgs, r: &Resolved, format: Format) -> Result<Rendered, Failure> {
    if a.k < 1 {
        return Err(Failure::Usage("gk-sum requires k ≥ 1".into()));
    }
    if a.n_terms < 1 {
        return Err(Failure::Usage("gk-sum requires N ≥ 1".into()));
    }
    let alpha = a.alpha.or(r.alpha).unwrap_or(2.0 / a.k as f64);
    let scheme = Scheme::ProportionalDoubleRoot { alpha };
    let started = Instant::now();
    let report = gk_partial_sum(scheme, a.k, a.s, a.n_terms, &r.precision).map_err(param_failure)?;
    let env = Envelope {
        command: "gk-sum".into(),
        params: GkSumParams {
            k: a.k,
            s: a.s,
            n_terms: a.n_terms,
            alpha,
        },
        result: report,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Rendered::ok(match format {
        Format::Json => to_json(&env),
        Format::Csv => csv_from_rows(
            &[
                "k",
                "s_re",
                "s_im",
                "N",
                "partial_re",
                "partial_im",
                "tail_re",
                "tail_im",
                "reference_re",
                "reference_im",
                "abs_error",
            ],
            &[vec![
                env.result.k.to_string(),
                env.result.s.re.to_string(),
                env.result.s.im.to_string(),
                env.result.n_terms.to_string(),
                env.result.partial.re.to_string(),
                env.result.partial.im.to_string(),
                env.result.tail_estimate.re.to_string(),
                env.result.tail_estimate.im.to_string(),
                env.result.reference.re.to_string(),
                env.result.reference.im.to_string(),
                env.result.abs_error.to_string(),
            ]],
        ),
        Format::Human => format!(
            "G_{}({}) partial sum over N={}: {}  (+ tail {})\n  reference k·zeta(s) = {}\n  |partial + tail − reference| = {:e}\n",
            env.result.k,
            fmt_c(env.result.s),
            env.result.n_terms,
            fmt_c(env.result.partial),
            fmt_c(env.result.tail_estimate),
            fmt_c(env.result.reference),
            env.result.abs_error
        ),
    }))
}

fn run_func_eq(a: &GkPointArgs, r: &Resolved, format: Format) -> Result<Rendered, Failure> {
    if a.k < 1 {
        return Err(Failure::Usage("func-eq requires k ≥ 1".into()));
    }
    let started = Instant::now();
    let residual = functional_eq_residual(a.k, a.s, &r.precision).map_err(analytic_failure)?;
    let env = Envelope {
        command: "func-eq".into(),
        params: GkParams { k: a.k, s: a.s },
        result: ResidualResult { residual },
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Rendered::ok(match format {
        Format::Json => to_json(&env),
        Format::Csv => csv_from_rows(
            &["k", "s_re", "s_im", "residual"],
            &[vec![
                a.k.to_string(),
                a.s.re.to_string(),
                a.s.im.to_string(),
                residual.to_string(),
            ]],
        ),
        Format::Human => format!(
            "|Lambda_{k}({s}) − Lambda_{k}(1−{s})| = {residual:e}\n",
            k = a.k,
            s = fmt_c(a.s),
            residual = residual
        ),
    }))
}

fn run_residue(a: &ResidueArgs, r: &Resolved, format: Format) -> Result<Rendered, Failure> {
    if a.k < 1 {
        return Err(Failure::Usage("residue requires k ≥ 1".into()));
    }
    if !(a.eps > 0.0 && a.eps <= 1e-2) {
        return Err(Failure::Usage("residue requires 0 < eps ≤ 0.01".into()));
    }
    let started = Instant::now();
    let estimate = residue_probe(a.k, a.eps, &r.precision).map_err(analytic_failure)?;
    let expected = a.k as f64;
    let result = ResidueResult {
        estimate,
        expected,
        abs_error: (estimate - expected).abs(),
    };
    let env = Envelope {
        command: "residue".into(),
        params: ResidueParams { k: a.k, eps: a.eps },
        result,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Rendered::ok(match format {
        Format::Json => to_json(&env),
        Format::Csv => csv_from_rows(
            &["k", "eps", "estimate", "expected", "abs_error"],
            &[vec![
                a.k.to_string(),
                a.eps.to_string(),
                env.result.estimate.to_string(),
                env.result.expected.to_string(),
                env.result.abs_error.to_string(),
            ]],
        ),
        Format::Human => format!(
            "eps·G_{}(1+eps) at eps={}: {}   (expected {}, off by {:e})\n",
            a.k, a.eps, env.result.estimate, env.result.expected, env.result.abs_error
        ),
    }))
}

fn run_scan(a: &ScanArgs, r: &Resolved, format: Format) -> Result<Rendered, Failure> {
    if a.k < 1 {
        return Err(Failure::Usage("scan-zeros requires k ≥ 1".into()));
    }
    if !(a.t_min.is_finite() && a.t_max.is_finite() && 0.0 < a.t_min && a.t_min < a.t_max) {
        return Err(Failure::Usage(
            "scan-zeros requires 0 < t_min < t_max (finite)".into(),
        ));
    }
    if !(a.step.is_finite() && a.step > 0.0) {
        return Err(Failure::Usage("scan-zeros requires step > 0".into()));
    }
    eprintln!(
        "scan-zeros: k={} window [{}, {}] step {} ...",
        a.k, a.t_min, a.t_max, a.step
    );
    let started = Instant::now();
    let report =
        scan_critical_line(a.k, a.t_min, a.t_max, a.step, &r.precision).map_err(explorer_failure)?;
    eprintln!(
        "scan-zeros: {} zero(s), {} warning(s)",
        report.brackets.len(),
        report.warnings.len()
    );
    let env = Envelope {
        command: "scan-zeros".into(),
        params: ScanParams {
            k: a.k,
            t_min: a.t_min,
            t_max: a.t_max,
            step: a.step,
        },
        result: report,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Rendered::ok(match format {
        Format::Json => to_json(&env),
        Format::Csv => {
            // warnings are not tabular; they stay on standard error
            for w in &env.result.warnings {
                eprintln!("warning: {w}");
            }
            let rows: Vec<Vec<String>> = env
                .result
                .brackets
                .iter()
                .map(|b| {
                    vec![
                        env.result.k.to_string(),
                        b.t_lo.to_string(),
                        b.t_hi.to_string(),
                        b.refined_t.to_string(),
                        b.min_abs.to_string(),
                    ]
                })
                .collect();
            csv_from_rows(&["k", "t_lo", "t_hi", "refined_t", "min_abs"], &rows)
        }
        Format::Human => {
            let mut text = format!(
                "{} zero(s) of G_{} on the critical line in [{}, {}]:\n",
                env.result.brackets.len(),
                env.result.k,
                env.result.t_min,
                env.result.t_max
            );
            for b in &env.result.brackets {
                let _ = writeln!(text, "  t = {:.12}   |G| = {:e}", b.refined_t, b.min_abs);
            }
            for w in &env.result.warnings {
                let _ = writeln!(text, "  warning: {w}");
            }
            text
        }
    }))
}

fn run_f_zeros(a: &FZerosArgs, format: Format) -> Result<Rendered, Failure> {
    if a.k < 1 {
        return Err(Failure::Usage("f-zeros requires k ≥ 1".into()));
    }
    if !(a.x.is_finite() && a.x > 0.0) {
        return Err(Failure::Usage("f-zeros requires x > 0 (finite)".into()));
    }
    if !a.t.is_finite() {
        return Err(Failure::Usage("f-zeros requires finite t".into()));
    }
    if a.n < 2 {
        return Err(Failure::Usage("f-zeros requires n ≥ 2".into()));
    }
    if a.samples < 1 {
        return Err(Failure::Usage("f-zeros requires samples ≥ 1".into()));
    }
    let started = Instant::now();
    let family = f_zero_locus(a.k, a.x, a.t, a.n).map_err(explorer_failure)?;
    let max_residual = verify_f_zero(&family, a.samples);
    let env = Envelope {
        command: "f-zeros".into(),
        params: FZerosParams {
            k: a.k,
            x: a.x,
            t: a.t,
            n: a.n,
            samples: a.samples,
        },
        result: FZerosResult {
            family,
            max_residual,
        },
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Rendered::ok(match format {
        Format::Json => to_json(&env),
        Format::Csv => {
            let f = &env.result.family;
            csv_from_rows(
                &[
                    "k",
                    "x",
                    "t",
                    "n",
                    "u1_re",
                    "u1_im",
                    "u2_re",
                    "u2_im",
                    "s1_re",
                    "s1_im",
                    "s2_re",
                    "s2_im",
                    "branch_period",
                    "max_residual",
                ],
                &[vec![
                    f.k.to_string(),
                    f.x.to_string(),
                    f.t.to_string(),
                    f.n.to_string(),
                    f.u_roots.0.re.to_string(),
                    f.u_roots.0.im.to_string(),
                    f.u_roots.1.re.to_string(),
                    f.u_roots.1.im.to_string(),
                    f.principal_s.0.re.to_string(),
                    f.principal_s.0.im.to_string(),
                    f.principal_s.1.re.to_string(),
                    f.principal_s.1.im.to_string(),
                    f.branch_period.to_string(),
                    env.result.max_residual.to_string(),
                ]],
            )
        }
        Format::Human => {
            let f = &env.result.family;
            format!(
                "F(n^s) zero locus for k={}, x={}, t={}, n={}:\n  u roots: {} and {}\n  principal s: {} and {}\n  branch period: {} (imaginary)\n  max |F| over {} sampled branch points: {:e}\n",
                f.k,
                f.x,
                f.t,
                f.n,
                fmt_c(f.u_roots.0),
                fmt_c(f.u_roots.1),
                fmt_c(f.principal_s.0),
                fmt_c(f.principal_s.1),
                f.branch_period,
                a.samples,
                env.result.max_residual
            )
        }
    }))
}

// --- entry point --------------------------------------------------------------------

fn dispatch(cli: &Cli) -> Result<Rendered, Failure> {
    let resolved = resolve(cli)?;
    match &cli.command {
        Command::Solve(a) => run_solve(a, &resolved, cli.format),
        Command::VerifyRange(a) => run_verify_range(a, &resolved, cli.format),
        Command::Density(a) => run_density(a, &resolved, cli.format),
        Command::Zeta(a) => run_zeta(a, &resolved, cli.format),
        Command::GkEval(a) => run_gk_eval(a, &resolved, cli.format),
        Command::GkSum(a) => run_gk_sum(a, &resolved, cli.format),
        Command::FuncEq(a) => run_func_eq(a, &resolved, cli.format),
        Command::Residue(a) => run_residue(a, &resolved, cli.format),
        Command::ScanZeros(a) => run_scan(a, &resolved, cli.format),
        Command::FZeros(a) => run_f_zeros(a, cli.format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(rendered) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, rendered.body.as_bytes()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", rendered.body);
            }
            ExitCode::from(rendered.exit)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Domain { code, message }) => {
            eprintln!("error[{code}]: {message}");
            ExitCode::from(3)
        }
    }
}
