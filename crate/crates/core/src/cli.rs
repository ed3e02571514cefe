//! Command-line front end: argument parsing, pipeline configuration, report
//! documents and exit codes. The binary only forwards to [`main_with_args`].

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::barycenter::{TableRegistry, TopologyError};
use crate::boundary::{self, topology_report, unreduced_c_array, BoundaryBarycenterInput, OrderReport};
use crate::bubble::{self, Bubble, ConvergenceReport, Cutoff};
use crate::certify::{self, c_array_len, CertifyError, CertifyReport, CritSummary};
use crate::critical::{summarize, SearchConfig, SearchOutcome};
use crate::functional::LAPLACIAN_STEP;
use crate::graded::euler_characteristic;
use crate::model::{ModelError, ModelSpec};

/// Exit code for successful runs, whatever the verdict.
pub const EXIT_OK: i32 = 0;
/// Exit code for unreadable, missing or invalid input.
pub const EXIT_INPUT: i32 = 2;
/// Exit code for failures writing the report.
pub const EXIT_OUTPUT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Bubble(#[from] bubble::BubbleError),
    #[error("reading {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("parsing {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("writing report: {0}")]
    Write(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Write(_) => EXIT_OUTPUT,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "qmorse", version, about = "Barycenter topology, critical points at infinity and existence certificates")]
pub struct Cli {
    /// Pipeline configuration (JSON). Command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for the multi-start search.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Barycenter table files; may be repeated.
    #[arg(long = "barycenter-tables", global = true)]
    pub barycenter_tables: Vec<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Betti tables and Euler checks of the boundary barycenter spaces.
    Topology(TopologyArgs),
    /// Critical points of the reduced functionals at level k.
    Critpoints(CritpointsArgs),
    /// Morse-system and Euler-sum certification of a critical-point summary.
    Certify(CertifyArgs),
    /// critpoints, then topology, then certify.
    Pipeline(PipelineArgs),
    /// Finite-difference check of the bubble equation.
    BubbleCheck(BubbleArgs),
}

#[derive(Debug, Clone, Args, Default)]
pub struct SpaceArgs {
    /// Preset manifold: disk or annulus.
    #[arg(long)]
    pub space: Option<String>,
    /// Boundary space name (with --quotient, --chi-m, --dim).
    #[arg(long)]
    pub boundary: Option<String>,
    /// Name of the space obtained by collapsing the boundary.
    #[arg(long)]
    pub quotient: Option<String>,
    #[arg(long = "chi-m", allow_hyphen_values = true)]
    pub chi_m: Option<i64>,
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct TopologyArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Highest order l.
    #[arg(long)]
    pub order: Option<usize>,
    /// Euler-only mode: closed-form values for a manifold with this χ.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["space", "boundary", "quotient"])]
    pub chi: Option<i64>,
}

#[derive(Debug, Clone, Args)]
pub struct CritArgs {
    /// Model file.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub kbar: Option<usize>,
    #[arg(long)]
    pub starts: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct CritpointsArgs {
    #[command(flatten)]
    pub crit: CritArgs,
    /// Euler characteristic of M; taken from the configured space if omitted.
    #[arg(long = "chi-m", allow_hyphen_values = true)]
    pub chi_m: Option<i64>,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    /// Critical-point summary or critpoints report.
    #[arg(long)]
    pub summary: PathBuf,
    #[command(flatten)]
    pub space: SpaceArgs,
    /// Unreduced Betti numbers c_0, c_1, ... (comma separated) instead of --space.
    #[arg(long, value_delimiter = ',')]
    pub c: Option<Vec<u64>>,
    /// Target of the Euler-sum criterion; defaults to 1 − χ(B_{k−1}^∂).
    #[arg(long = "hopf-target", allow_hyphen_values = true)]
    pub hopf_target: Option<i64>,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub crit: CritArgs,
    #[command(flatten)]
    pub space: SpaceArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BubbleArgs {
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.04)]
    pub h: f64,
    #[arg(long, default_value_t = 0.1)]
    pub rho: f64,
}

/// How the manifold is described in a configuration file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceConfig {
    Preset(String),
    Custom {
        boundary: String,
        quotient: String,
        #[serde(rename = "chi_M")]
        chi_m: i64,
        dim: usize,
    },
}

/// Contents of a `--config` file. Relative paths resolve against its directory.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub k: Option<usize>,
    pub kbar: Option<usize>,
    pub space: Option<SpaceConfig>,
    pub tables: Vec<PathBuf>,
    pub model: Option<PathBuf>,
    pub search: Option<SearchConfig>,
    pub order: Option<usize>,
    pub out: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let mut cfg: PipelineConfig = read_json(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.tables = cfg.tables.iter().map(|p| base.join(p)).collect();
        cfg.model = cfg.model.map(|p| base.join(p));
        cfg.out = cfg.out.map(|p| base.join(p));
        if cfg.k == Some(0) {
            return Err(CliError::Usage("config: k must be ≥ 1".into()));
        }
        Ok(cfg)
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(path)?).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Serializes a report as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// Settings shared by every subcommand after merging flags and config.
struct Context {
    config: PipelineConfig,
    registry: TableRegistry,
    seed: Option<u64>,
}

impl Context {
    fn new(cli: &Cli) -> Result<Self, CliError> {
        let config = match &cli.config {
            Some(p) => PipelineConfig::load(p)?,
            None => PipelineConfig::default(),
        };
        let mut registry = TableRegistry::new();
        for path in config.tables.iter().chain(&cli.barycenter_tables) {
            registry.load(path)?;
        }
        Ok(Context {
            config,
            registry,
            seed: cli.seed,
        })
    }

    fn space(&self, args: &SpaceArgs) -> Result<ResolvedSpace, CliError> {
        let from_config = self.config.space.clone();
        let spec = match (&args.space, &args.boundary) {
            (Some(name), _) => SpaceConfig::Preset(name.clone()),
            (None, Some(b)) => SpaceConfig::Custom {
                boundary: b.clone(),
                quotient: args
                    .quotient
                    .clone()
                    .ok_or_else(|| CliError::Usage("--boundary needs --quotient".into()))?,
                chi_m: args
                    .chi_m
                    .ok_or_else(|| CliError::Usage("--boundary needs --chi-m".into()))?,
                dim: args.dim.unwrap_or(2),
            },
            (None, None) => from_config.ok_or_else(|| CliError::Usage("no manifold given; use --space or --boundary".into()))?,
        };
        let (label, boundary, quotient, chi_m, dim) = match &spec {
            SpaceConfig::Preset(name) => match name.as_str() {
                "disk" => ("disk".to_string(), "S1".to_string(), "S2".to_string(), 1, 2),
                "annulus" => ("annulus".to_string(), "S1+S1".to_string(), "S2vS1".to_string(), 0, 2),
                other => return Err(CliError::Usage(format!("unknown preset {other:?}; expected disk or annulus"))),
            },
            SpaceConfig::Custom {
                boundary,
                quotient,
                chi_m,
                dim,
            } => (format!("{boundary} / {quotient}"), boundary.clone(), quotient.clone(), *chi_m, *dim),
        };
        let input = BoundaryBarycenterInput::new(
            self.registry.resolve(&boundary)?,
            self.registry.resolve(&quotient)?,
            chi_m,
            dim,
        )?;
        Ok(ResolvedSpace {
            label,
            boundary,
            quotient,
            input,
        })
    }

    fn search(&self, starts: Option<usize>) -> SearchConfig {
        let mut cfg = self.config.search.clone().unwrap_or_default();
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(n) = starts {
            cfg.starts = n;
        }
        cfg
    }
}

struct ResolvedSpace {
    label: String,
    boundary: String,
    quotient: String,
    input: BoundaryBarycenterInput,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerOnlyRow {
    pub order: usize,
    pub euler: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyDoc {
    pub space: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<String>,
    #[serde(rename = "chi_M")]
    pub chi_m: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub orders: Vec<OrderReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub euler_only: Vec<EulerOnlyRow>,
    pub tolerance: String,
    pub all_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub grad_tol: f64,
    pub hessian_step: f64,
    pub nd_floor_hessian: f64,
    pub nd_floor_lk: f64,
    pub dedup_radius: f64,
    pub laplacian_step: f64,
    pub model_gradient_tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CritpointsDoc {
    pub model: String,
    pub search: SearchConfig,
    pub tolerances: Tolerances,
    pub summary: CritSummary,
    pub strata: Vec<SearchOutcome>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    pub c_source: String,
    pub tolerance: String,
    pub report: CertifyReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineDoc {
    pub critpoints: CritpointsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topology: Option<TopologyDoc>,
    pub certify: CertifyDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BubbleCheckDoc {
    pub convergence: ConvergenceReport,
    pub residual_at_0_02: Option<f64>,
    pub order_ok: bool,
    pub covariance_defect: f64,
    pub cutoff_rho: f64,
    pub cutoff_jump: f64,
    pub tolerances: BTreeMap<String, f64>,
    pub elapsed_ms: u128,
}

/// A finished command: the report and its text rendering.
#[derive(Clone, Debug)]
pub struct Output {
    pub json: String,
    pub text: String,
}

impl Output {
    fn new<T: Serialize>(doc: &T, text: String) -> Self {
        Output {
            json: to_json(doc),
            text,
        }
    }
}

pub fn run_topology(ctx_tables: &TableRegistry, cfg: &PipelineConfig, args: &TopologyArgs) -> Result<TopologyDoc, CliError> {
    let order = args
        .order
        .or(cfg.order)
        .ok_or_else(|| CliError::Usage("--order is required".into()))?;
    if order == 0 {
        return Err(CliError::Usage("--order must be ≥ 1".into()));
    }
    if let Some(chi) = args.chi {
        let euler_only = (1..=order)
            .map(|l| Ok(EulerOnlyRow {
                order: l,
                euler: boundary::euler_boundary(chi, l, true)?,
            }))
            .collect::<Result<Vec<_>, TopologyError>>()?;
        return Ok(TopologyDoc {
            space: format!("chi = {chi}"),
            boundary: None,
            quotient: None,
            chi_m: chi,
            dim: None,
            orders: Vec::new(),
            euler_only,
            tolerance: "exact".into(),
            all_consistent: true,
        });
    }
    let ctx = Context {
        config: cfg.clone(),
        registry: ctx_tables.clone(),
        seed: None,
    };
    let space = ctx.space(&args.space)?;
    topology_doc(&space, order)
}

fn topology_doc(space: &ResolvedSpace, order: usize) -> Result<TopologyDoc, CliError> {
    let orders = topology_report(&space.input, order)?;
    let all_consistent = orders
        .iter()
        .all(|o| o.consistency != boundary::Consistency::Fail && o.degree_bound_ok);
    Ok(TopologyDoc {
        space: space.label.clone(),
        boundary: Some(space.boundary.clone()),
        quotient: Some(space.quotient.clone()),
        chi_m: space.input.chi_m(),
        dim: Some(space.input.dim_m()),
        orders,
        euler_only: Vec::new(),
        tolerance: "exact".into(),
        all_consistent,
    })
}

fn run_critpoints(ctx: &Context, args: &CritArgs, chi_m: Option<i64>) -> Result<CritpointsDoc, CliError> {
    let model_path = args
        .model
        .clone()
        .or_else(|| ctx.config.model.clone())
        .ok_or_else(|| CliError::Usage("--model is required".into()))?;
    let k = args
        .k
        .or(ctx.config.k)
        .ok_or_else(|| CliError::Usage("--k is required".into()))?;
    if k == 0 {
        return Err(CliError::Usage("k must be ≥ 1".into()));
    }
    let kbar = args.kbar.or(ctx.config.kbar).unwrap_or(0);
    let chi_m = chi_m.ok_or_else(|| CliError::Usage("--chi-m is required without a manifold".into()))?;
    let spec = ModelSpec::load(&model_path)?;
    let model = spec.build(model_path.parent().unwrap_or(Path::new(".")))?;
    let search = ctx.search(args.starts);
    let (summary, strata) = summarize(model.as_ref(), k, kbar, chi_m, &search);
    let mut warnings = Vec::new();
    for o in &strata {
        if !o.degenerate.is_empty() {
            warnings.push(format!(
                "(p, q) = ({}, {}): {} degenerate critical point(s) dropped",
                o.p,
                o.q,
                o.degenerate.len()
            ));
        }
        if o.converged_starts == 0 {
            warnings.push(format!("(p, q) = ({}, {}): no start converged", o.p, o.q));
        }
    }
    Ok(CritpointsDoc {
        model: model.name().to_string(),
        tolerances: Tolerances {
            grad_tol: search.grad_tol,
            hessian_step: search.hessian_step,
            nd_floor_hessian: search.nd_floor_hessian,
            nd_floor_lk: search.nd_floor_lk,
            dedup_radius: search.dedup_radius,
            laplacian_step: LAPLACIAN_STEP,
            model_gradient_tolerance: model.gradient_tolerance(),
        },
        search,
        summary,
        strata,
        warnings,
    })
}

/// Reads a bare summary or the `summary` field of a critpoints report.
pub fn load_summary(path: &Path) -> Result<CritSummary, CliError> {
    let value: serde_json::Value = read_json(path)?;
    let inner = match value.get("summary") {
        Some(s) => s.clone(),
        None => value,
    };
    serde_json::from_value(inner).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn certify_with(
    summary: &CritSummary,
    space: Option<&ResolvedSpace>,
    c: Option<&[u64]>,
    hopf_target: Option<i64>,
) -> Result<CertifyDoc, CliError> {
    summary.validate()?;
    let k = summary.k;
    let need = c_array_len(k) + summary.kbar;
    let (c_array, c_source, default_target) = if k == 1 {
        (Vec::new(), "not used at k = 1".to_string(), 1)
    } else if let Some(c) = c {
        let mut v = c.to_vec();
        if v.len() < need {
            v.resize(need, 0);
        }
        let chi: i64 = v.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        (v, "command line".to_string(), 1 - chi)
    } else if let Some(space) = space {
        let table = boundary::boundary_betti(&space.input, k - 1)?;
        let v = unreduced_c_array(&space.input, k - 1, need)?;
        (v, format!("B_{}^∂ of {}", k - 1, space.label), 1 - euler_characteristic(&table))
    } else {
        return Err(CliError::Usage("k ≥ 2 needs --space, --boundary or --c".into()));
    };
    let report = certify::certify(summary, &c_array, hopf_target.unwrap_or(default_target))?;
    Ok(CertifyDoc {
        space: space.map(|s| s.label.clone()),
        c_source,
        tolerance: "exact".into(),
        report,
    })
}

fn run_bubble(args: &BubbleArgs) -> Result<BubbleCheckDoc, CliError> {
    let start = Instant::now();
    let b = Bubble::new([0.0; 4], args.lambda)?;
    let convergence = bubble::pde_convergence(&b, args.h)?;
    let residual_at_0_02 = bubble::bubble_pde_residual(&b, 0.02).ok();
    let unit = Bubble::unit();
    let probe = [0.1, -0.05, 0.2, 0.0];
    let scaled = probe.map(|c| c * args.lambda);
    let h = 0.02 / args.lambda;
    let lhs = bubble::pde_residual_at(&b, h, &probe);
    let rhs = args.lambda.powi(4) * bubble::pde_residual_at(&unit, 0.02, &scaled);
    let cutoff = Cutoff::new(args.rho)?;
    let a = [0.0, 0.0, 0.0, 1.0];
    let cutoff_jump = [args.rho, 2.0 * args.rho]
        .iter()
        .map(|&r| {
            let lo = [r * (1.0 - 1e-14), 0.0, 0.0, 1.0];
            let hi = [r * (1.0 + 1e-14), 0.0, 0.0, 1.0];
            (bubble::truncated_bubble(&cutoff, &a, args.lambda, &lo) - bubble::truncated_bubble(&cutoff, &a, args.lambda, &hi)).abs()
        })
        .fold(0.0, f64::max);
    let tolerances = BTreeMap::from([
        ("order_min".to_string(), 1.9),
        ("residual_max_at_0_02".to_string(), 0.5),
        ("cutoff_continuity".to_string(), 1e-12),
    ]);
    Ok(BubbleCheckDoc {
        order_ok: convergence.order >= 1.9,
        convergence,
        residual_at_0_02,
        covariance_defect: (lhs - rhs).abs() / args.lambda.powi(4),
        cutoff_rho: args.rho,
        cutoff_jump,
        tolerances,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn topology_text(doc: &TopologyDoc) -> String {
    let mut s = format!("space: {} (chi_M = {})\n", doc.space, doc.chi_m);
    for o in &doc.orders {
        s.push_str(&format!(
            "  l = {}: reduced {}  euler {}  closed form {}  {:?}\n",
            o.order,
            o.betti,
            o.euler,
            o.euler_closed_form.map_or("-".to_string(), |v| v.to_string()),
            o.consistency
        ));
    }
    for r in &doc.euler_only {
        s.push_str(&format!("  l = {}: euler {}\n", r.order, r.euler));
    }
    s
}

fn crit_text(doc: &CritpointsDoc) -> String {
    let mut s = format!(
        "model: {}  k = {}  seed = {}  starts = {}\n",
        doc.model, doc.summary.k, doc.search.seed, doc.search.starts
    );
    for o in &doc.strata {
        s.push_str(&format!("  (p, q) = ({}, {}): {} point(s)\n", o.p, o.q, o.points.len()));
        for pt in &o.points {
            s.push_str(&format!(
                "    F = {:.9}  morse {}  i_inf {}  lk {:+.6e}  energy {:.6}\n",
                pt.f_value, pt.morse_index, pt.i_inf, pt.lk_value, pt.energy
            ));
        }
    }
    for w in &doc.warnings {
        s.push_str(&format!("warning: {w}\n"));
    }
    s
}

fn certify_text(doc: &CertifyDoc) -> String {
    let r = &doc.report;
    let mut s = format!(
        "k = {}  counts {:?}  c {:?}\n  system feasible: {}\n  Euler sum {} vs {}\n",
        r.k, r.counts, r.c_array, r.system_verdict.feasible, r.hopf.sum, r.hopf.target
    );
    for j in r.jump.iter().filter(|j| j.certified) {
        s.push_str(&format!("  jump criterion fires at l = {}\n", j.l));
    }
    for d in r.warnings.iter().chain(&r.diagnostics) {
        s.push_str(&format!("  note: {d}\n"));
    }
    s.push_str(&format!("verdict: {}\n", r.verdict));
    s
}

fn bubble_text(doc: &BubbleCheckDoc) -> String {
    format!(
        "lambda = {}  h = {}: residual {:.3e} -> {:.3e}, order {:.3}\ncovariance defect {:.3e}  cutoff jump {:.3e}\n",
        doc.convergence.lambda,
        doc.convergence.h,
        doc.convergence.residual_h,
        doc.convergence.residual_half,
        doc.convergence.order,
        doc.covariance_defect,
        doc.cutoff_jump
    )
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let ctx = Context::new(cli)?;
    Ok(match &cli.command {
        Command::Topology(args) => {
            let doc = run_topology(&ctx.registry, &ctx.config, args)?;
            Output::new(&doc, topology_text(&doc))
        }
        Command::Critpoints(args) => {
            let chi = match (args.chi_m, &ctx.config.space) {
                (Some(chi), _) => Some(chi),
                (None, Some(_)) => Some(ctx.space(&SpaceArgs::default())?.input.chi_m()),
                (None, None) => None,
            };
            let doc = run_critpoints(&ctx, &args.crit, chi)?;
            Output::new(&doc, crit_text(&doc))
        }
        Command::Certify(args) => {
            let summary = load_summary(&args.summary)?;
            let space = if summary.k >= 2 && args.c.is_none() {
                Some(ctx.space(&args.space)?)
            } else {
                None
            };
            let doc = certify_with(&summary, space.as_ref(), args.c.as_deref(), args.hopf_target)?;
            Output::new(&doc, certify_text(&doc))
        }
        Command::Pipeline(args) => {
            let space = ctx.space(&args.space)?;
            let crit = run_critpoints(&ctx, &args.crit, Some(space.input.chi_m()))?;
            let k = crit.summary.k;
            let topology = if k >= 2 { Some(topology_doc(&space, k - 1)?) } else { None };
            let cert = certify_with(&crit.summary, Some(&space), None, None)?;
            let text = format!(
                "{}{}{}",
                crit_text(&crit),
                topology.as_ref().map(topology_text).unwrap_or_default(),
                certify_text(&cert)
            );
            let doc = PipelineDoc {
                critpoints: crit,
                topology,
                certify: cert,
            };
            Output::new(&doc, text)
        }
        Command::BubbleCheck(args) => {
            let doc = run_bubble(args)?;
            Output::new(&doc, bubble_text(&doc))
        }
    })
}

/// Parses `args`, runs the command, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli).and_then(|out| emit(&cli, &out, stdout)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, out: &Output, stdout: &mut dyn Write) -> Result<(), CliError> {
    let body = match cli.format {
        Format::Json => &out.json,
        Format::Text => &out.text,
    };
    let target = cli.out.clone().or_else(|| {
        cli.config
            .as_ref()
            .and_then(|p| PipelineConfig::load(p).ok())
            .and_then(|c| c.out)
    });
    match target {
        Some(path) => std::fs::write(&path, body).map_err(CliError::Write),
        None => stdout.write_all(body.as_bytes()).map_err(CliError::Write),
    }
}
