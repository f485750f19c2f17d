//! Command-line front end.
//!
//! Every command resolves a [`RunConfig`] from defaults, an optional
//! `--config` file and the flags (flags win), writes one CSV or JSON
//! document with the configuration embedded, and exits with
//!
//! * 0 when every asserted property holds,
//! * 1 when an assertion fails,
//! * 2 on invalid configuration,
//! * 3 when a term-count limit stopped the computation (partial output is written).

// `!(x >= lo)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hilbert_poincare::classical::{
    classical_poincare_coefficient_by_quadrature, delta_coefficients, nonvanishing_range_scan, petersson_coefficient,
    ClassicalRow, RangeScan, CSV_HEADER as CLASSICAL_HEADER,
};
use hilbert_poincare::config::{OutputFormat, RunConfig};
use hilbert_poincare::error::Error;
use hilbert_poincare::experiments::{
    certify_nonvanishing, sweep_level, sweep_weight, Certificate, SweepReport, TrendAssessment, Verdict,
};
use hilbert_poincare::hpoincare::Weight;
use hilbert_poincare::output::{render, write_atomic, Document};
use hilbert_poincare::qfield::{DualIndex, OmegaKind, RealQuadraticField};
use hilbert_poincare::selftest::{run_selftest, Check, CSV_HEADER as SELFTEST_HEADER};

#[derive(Parser)]
#[command(name = "hpoincare", version, about = "Hilbert Poincare series over real quadratic fields")]
struct Cli {
    /// Configuration file: key=value lines, or any earlier output of this tool.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Write the result here (atomically) instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(flatten)]
    keys: ConfigFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integral basis, unit, codifferent and totally positive dual indices.
    FieldInfo {
        /// Shorthand for --format json.
        #[arg(long)]
        json: bool,
        /// List dual indices of trace up to this value.
        #[arg(long, default_value_t = 1)]
        max_trace: i64,
    },
    /// p(nu) and p(mu) over the parallel weights `ks`.
    SweepWeight,
    /// p(nu) and p(mu) over the levels `levels` at weight `weight`.
    SweepLevel,
    /// Non-vanishing certificate for P at `nu` (or every nu of trace `nu_trace`).
    Certify,
    /// Classical Poincare series for Gamma_0(q).
    #[command(subcommand)]
    Classical(ClassicalCommand),
    /// Built-in examples with known answers.
    Selftest,
}

#[derive(Subcommand)]
enum ClassicalCommand {
    /// p_{m,k,q}(n) from the Kloosterman-Bessel series.
    Petersson,
    /// p_{m,k,q}(n) from the coset sum and quadrature.
    Quadrature,
    /// Both methods; fails unless they agree within their error bounds.
    Compare,
    /// Ramanujan tau(1..n_max).
    Tau,
    /// Certified non-vanishing of p_{m,k,1}(m) for m <= m_max.
    Scan,
}

/// One flag per configuration key; values use the configuration file syntax.
#[derive(Args, Default)]
struct ConfigFlags {
    #[arg(long, global = true, allow_hyphen_values = true)]
    d: Option<String>,
    /// Comma-separated parallel weights.
    #[arg(long, global = true)]
    ks: Option<String>,
    /// `k1,k2`.
    #[arg(long, global = true)]
    weight: Option<String>,
    #[arg(long, global = true)]
    k: Option<String>,
    /// `n` for (n), or `m00:m01:m11`.
    #[arg(long, global = true)]
    level: Option<String>,
    #[arg(long, global = true)]
    levels: Option<String>,
    /// Numerator `a,b` of nu = (a + b omega)/sqrt D.
    #[arg(long, global = true, allow_hyphen_values = true)]
    nu: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, global = true)]
    nu_trace: Option<String>,
    #[arg(long, global = true)]
    grid_n: Option<String>,
    /// `y1,y2` with y1 y2 > 1.
    #[arg(long, global = true)]
    y: Option<String>,
    #[arg(long, global = true)]
    term_cutoff: Option<String>,
    #[arg(long, global = true)]
    gamma_height_max: Option<String>,
    #[arg(long, global = true)]
    max_terms: Option<String>,
    /// `unit_extended` or `translations_only[:cap]`.
    #[arg(long, global = true)]
    convention: Option<String>,
    #[arg(long, global = true)]
    aliasing_threshold: Option<String>,
    #[arg(long, global = true)]
    safety_factor: Option<String>,
    #[arg(long, global = true)]
    trend_threshold: Option<String>,
    #[arg(long, global = true)]
    max_error: Option<String>,
    #[arg(long, global = true)]
    m: Option<String>,
    #[arg(long, global = true)]
    n: Option<String>,
    #[arg(long, global = true)]
    q: Option<String>,
    #[arg(long, global = true)]
    cmax: Option<String>,
    #[arg(long, global = true)]
    m_max: Option<String>,
    #[arg(long, global = true)]
    n_max: Option<String>,
    #[arg(long, global = true)]
    classical_grid_n: Option<String>,
    #[arg(long, global = true)]
    classical_y: Option<String>,
    #[arg(long, global = true)]
    classical_cutoff: Option<String>,
    /// `csv` or `json`.
    #[arg(long, global = true)]
    format: Option<String>,
}

impl ConfigFlags {
    fn pairs(&self) -> Vec<(&'static str, &str)> {
        let all = [
            ("d", &self.d),
            ("ks", &self.ks),
            ("weight", &self.weight),
            ("k", &self.k),
            ("level", &self.level),
            ("levels", &self.levels),
            ("nu", &self.nu),
            ("mu", &self.mu),
            ("nu_trace", &self.nu_trace),
            ("grid_n", &self.grid_n),
            ("y", &self.y),
            ("term_cutoff", &self.term_cutoff),
            ("gamma_height_max", &self.gamma_height_max),
            ("max_terms", &self.max_terms),
            ("convention", &self.convention),
            ("aliasing_threshold", &self.aliasing_threshold),
            ("safety_factor", &self.safety_factor),
            ("trend_threshold", &self.trend_threshold),
            ("max_error", &self.max_error),
            ("m", &self.m),
            ("n", &self.n),
            ("q", &self.q),
            ("cmax", &self.cmax),
            ("m_max", &self.m_max),
            ("n_max", &self.n_max),
            ("classical_grid_n", &self.classical_grid_n),
            ("classical_y", &self.classical_y),
            ("classical_cutoff", &self.classical_cutoff),
            ("format", &self.format),
        ];
        all.into_iter().filter_map(|(k, v)| v.as_deref().map(|v| (k, v))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok = 0,
    AssertionFailed = 1,
    InvalidConfig = 2,
    Truncated = 3,
}

/// A finished command: its document and exit status.
struct Outcome {
    doc: Document,
    status: Status,
    message: Option<String>,
}

fn status_of(e: &Error) -> Status {
    match e {
        Error::TruncationFailure { .. } => Status::Truncated,
        _ => Status::InvalidConfig,
    }
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            RunConfig::from_text(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => RunConfig::default(),
    };
    cfg.apply_map(cli.keys.pairs()).map_err(|e| e.to_string())?;
    if let Command::FieldInfo { json: true, .. } = cli.command {
        cfg.format = OutputFormat::Json;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve_config(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(Status::InvalidConfig as u8);
        }
    };
    let result = match &cli.command {
        Command::FieldInfo { max_trace, .. } => field_info(&cfg, *max_trace),
        Command::SweepWeight => sweep(&cfg, "sweep-weight"),
        Command::SweepLevel => sweep(&cfg, "sweep-level"),
        Command::Certify => certify(&cfg),
        Command::Classical(c) => classical(&cfg, c),
        Command::Selftest => selftest(&cfg),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(status_of(&e) as u8);
        }
    };
    let written = match &cli.out {
        Some(path) => write_atomic(path, &outcome.doc.text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{}", outcome.doc.text);
            Ok(())
        }
    };
    if let Some(msg) = &outcome.message {
        eprintln!("{msg}");
    }
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(Status::InvalidConfig as u8);
    }
    ExitCode::from(outcome.status as u8)
}

#[derive(Serialize)]
struct DualRow {
    trace: i64,
    numerator: (i64, i64),
    embeddings: [f64; 2],
}

#[derive(Serialize)]
struct FieldInfo {
    d: i64,
    disc: i64,
    omega: String,
    euclidean: bool,
    fundamental_unit: (i64, i64),
    unit_norm: i64,
    codifferent_generator: String,
    totally_positive_dual_indices: Vec<DualRow>,
}

fn field_info(cfg: &RunConfig, max_trace: i64) -> Result<Outcome, Error> {
    let f = RealQuadraticField::new(cfg.d)?;
    if max_trace < 1 {
        return Err(Error::InvalidParameters(format!("max_trace = {max_trace} must be positive")));
    }
    let eps = f.fundamental_unit()?;
    let omega = match f.omega_kind() {
        OmegaKind::HalfInteger => format!("(1+sqrt{})/2", f.d()),
        OmegaKind::Sqrt => format!("sqrt{}", f.d()),
    };
    let duals: Vec<DualRow> = f
        .totally_positive_up_to_trace(max_trace)
        .iter()
        .map(|m: &DualIndex| DualRow {
            trace: m.trace(),
            numerator: (m.numerator.a, m.numerator.b),
            embeddings: m.embed::<f64>(&f),
        })
        .collect();
    let info = FieldInfo {
        d: f.d(),
        disc: f.disc(),
        omega,
        euclidean: f.is_euclidean(),
        fundamental_unit: (eps.a, eps.b),
        unit_norm: f.norm(eps),
        codifferent_generator: "1/sqrtD".into(),
        totally_positive_dual_indices: duals,
    };
    let mut body = format!(
        "# d={} disc={} omega={} euclidean={} unit={}+{}*omega norm={} codifferent=1/sqrtD\n",
        info.d, info.disc, info.omega, info.euclidean, eps.a, eps.b, info.unit_norm
    );
    body.push_str("trace,a,b,nu_1,nu_2\n");
    for r in &info.totally_positive_dual_indices {
        body.push_str(&format!(
            "{},{},{},{:.17e},{:.17e}\n",
            r.trace, r.numerator.0, r.numerator.1, r.embeddings[0], r.embeddings[1]
        ));
    }
    Ok(Outcome {
        doc: render(cfg, "field-info", &body, &info)?,
        status: Status::Ok,
        message: None,
    })
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    sweep: &'a SweepReport,
    assessment: TrendAssessment,
}

fn sweep(cfg: &RunConfig, command: &str) -> Result<Outcome, Error> {
    let field = cfg.field()?;
    let nu = cfg.nu_index(&field)?;
    let mu = cfg.mu_index(&field)?;
    let domain = cfg.domain()?;
    let policy = cfg.experiment_policy()?;
    let report = if command == "sweep-weight" {
        sweep_weight(&field, nu, mu, cfg.level.ideal(&field)?, &cfg.ks, &domain, &policy)?
    } else {
        let levels = cfg.levels.iter().map(|l| l.ideal(&field)).collect::<Result<Vec<_>, _>>()?;
        sweep_level(&field, nu, mu, Weight::new(cfg.weight.0, cfg.weight.1)?, &levels, &domain, &policy)?
    };
    let assessment = report.assess(&cfg.trend_criteria());
    let status = if report.any_truncated() {
        Status::Truncated
    } else if assessment.passed() {
        Status::Ok
    } else {
        Status::AssertionFailed
    };
    let out = SweepOutput {
        sweep: &report,
        assessment,
    };
    Ok(Outcome {
        doc: render(cfg, command, &report.to_csv(), &out)?,
        status,
        message: Some(format!(
            "rows ok: {}, endpoint improves: {}, last below threshold: {}, last errors ok: {}, strictly monotone: {}",
            assessment.all_rows_ok,
            assessment.endpoint_improves,
            assessment.last_below_threshold,
            assessment.last_error_ok,
            assessment.strictly_monotone
        )),
    })
}

const CERTIFY_HEADER: &str = "nu_a,nu_b,k1,k2,level_norm,re,im,quad_error,trunc_error,total_error,verdict";

fn certify(cfg: &RunConfig) -> Result<Outcome, Error> {
    let specs = cfg.certify_specs()?;
    let domain = cfg.domain()?;
    let policy = cfg.experiment_policy()?;
    let safety = cfg.safety()?;
    let mut certs: Vec<Certificate> = Vec::new();
    let mut status = Status::Ok;
    let mut message = None;
    for spec in &specs {
        match certify_nonvanishing(spec, &domain, &policy, safety) {
            Ok(c) => {
                if c.verdict != Verdict::NonzeroCertified {
                    status = status.max(Status::AssertionFailed);
                }
                certs.push(c);
            }
            Err(e @ Error::TruncationFailure { .. }) => {
                status = Status::Truncated;
                message = Some(format!("nu = {}: {e}", spec.nu));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let mut body = format!("{CERTIFY_HEADER}\n");
    for c in &certs {
        let w = c.spec.weight.as_array();
        let v = match c.verdict {
            Verdict::NonzeroCertified => "nonzero_certified",
            Verdict::Inconclusive => "inconclusive",
        };
        body.push_str(&format!(
            "{},{},{},{},{},{:.17e},{:.17e},{:.3e},{:.3e},{:.3e},{v}\n",
            c.spec.nu.numerator.a,
            c.spec.nu.numerator.b,
            w[0],
            w[1],
            c.spec.level.norm,
            c.coefficient.re,
            c.coefficient.im,
            c.coefficient.quad_error,
            c.coefficient.trunc_error,
            c.total_error
        ));
    }
    Ok(Outcome {
        doc: render(cfg, "certify", &body, &certs)?,
        status,
        message,
    })
}

fn classical_rows_csv(rows: &[ClassicalRow]) -> String {
    let mut body = format!("{CLASSICAL_HEADER}\n");
    for r in rows {
        body.push_str(&r.csv());
        body.push('\n');
    }
    body
}

fn classical(cfg: &RunConfig, command: &ClassicalCommand) -> Result<Outcome, Error> {
    let name = match command {
        ClassicalCommand::Petersson => "classical-petersson",
        ClassicalCommand::Quadrature => "classical-quadrature",
        ClassicalCommand::Compare => "classical-compare",
        ClassicalCommand::Tau => "classical-tau",
        ClassicalCommand::Scan => "classical-scan",
    };
    let mut status = Status::Ok;
    let mut message = None;
    let doc = match command {
        ClassicalCommand::Petersson | ClassicalCommand::Quadrature | ClassicalCommand::Compare => {
            let params = cfg.classical_params()?;
            let mut rows = Vec::new();
            if !matches!(command, ClassicalCommand::Quadrature) {
                let p = petersson_coefficient::<f64>(&params, cfg.cmax)?;
                rows.push(ClassicalRow::from_petersson(params, &p));
            }
            if !matches!(command, ClassicalCommand::Petersson) {
                let q = classical_poincare_coefficient_by_quadrature::<f64>(&params, &cfg.classical_policy()?)?;
                rows.push(ClassicalRow::from_quadrature(params, &q));
            }
            if let [a, b] = &rows[..] {
                let diff = (a.value - b.value).abs();
                let bound = a.tail_bound + b.tail_bound;
                message = Some(format!("difference {diff:.3e}, combined bound {bound:.3e}"));
                if !(diff <= bound) {
                    status = Status::AssertionFailed;
                }
            }
            render(cfg, name, &classical_rows_csv(&rows), &rows)?
        }
        ClassicalCommand::Tau => {
            let tau = delta_coefficients(cfg.n_max)?;
            let mut body = String::from("n,tau\n");
            for (i, t) in tau.iter().enumerate() {
                body.push_str(&format!("{},{t}\n", i + 1));
            }
            let json: Vec<String> = tau.iter().map(i128::to_string).collect();
            render(cfg, name, &body, &json)?
        }
        ClassicalCommand::Scan => {
            let k = cfg.k.unwrap_or(12);
            let scan: RangeScan = nonvanishing_range_scan(k, cfg.m_max, cfg.cmax)?;
            let mut body = String::from("m,k,value,tail_bound,certified\n");
            for e in &scan.entries {
                body.push_str(&format!("{},{k},{:.17e},{:.3e},{}\n", e.m, e.value, e.tail_bound, e.certified));
            }
            message = Some(format!("largest certified m: {:?}", scan.largest_certified()));
            render(cfg, name, &body, &scan)?
        }
    };
    Ok(Outcome { doc, status, message })
}

fn selftest(cfg: &RunConfig) -> Result<Outcome, Error> {
    let checks: Vec<Check> = run_selftest();
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut body = format!("{SELFTEST_HEADER}\n");
    for c in &checks {
        body.push_str(&c.csv());
        body.push('\n');
    }
    Ok(Outcome {
        doc: render(cfg, "selftest", &body, &checks)?,
        status: if failed == 0 { Status::Ok } else { Status::AssertionFailed },
        message: Some(format!("{} checks, {failed} failed", checks.len())),
    })
}
