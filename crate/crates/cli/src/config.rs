//! Experiment configuration: a raw, all-optional form merged from a TOML
//! file and command-line flags, and the validated form the runners consume.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ctqw_qaoa::bounds::optimal_order;
use ctqw_qaoa::depthsearch::{ADMISSIBLE_ORDERS, DEFAULT_REFINEMENT_ITERATIONS};
use ctqw_qaoa::MAX_QUBITS;
use serde::{Deserialize, Serialize};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "CTQW_QAOA_OUT_DIR";

pub const DEFAULT_TRACE_SAMPLES: usize = 64;
pub const DEFAULT_BOUND_CHECK_SAMPLES: usize = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    OverlapTrace,
    DepthSearch,
    AnalyticDepth,
    RatioSweep,
    GroverCurve,
    BoundCheck,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::OverlapTrace => "overlap-trace",
            ExperimentKind::DepthSearch => "depth-search",
            ExperimentKind::AnalyticDepth => "analytic-depth",
            ExperimentKind::RatioSweep => "ratio-sweep",
            ExperimentKind::GroverCurve => "grover-curve",
            ExperimentKind::BoundCheck => "bound-check",
        }
    }

    fn needs_epsilon(self) -> bool {
        !matches!(self, ExperimentKind::GroverCurve | ExperimentKind::BoundCheck)
    }

    fn single_cell(self) -> bool {
        matches!(self, ExperimentKind::OverlapTrace)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `auto` or an explicit even order, as written by the user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderSpec {
    Fixed(u32),
    Text(String),
}

/// Inclusive `start..end` or `start..end:step` qubit range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NRange {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl NRange {
    pub fn values(self) -> Vec<usize> {
        (self.start..=self.end).step_by(self.step).collect()
    }
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("n-range '{s}' is not of the form START..END or START..END:STEP");
        let (span, step) = match s.split_once(':') {
            Some((span, step)) => (span, step.trim().parse::<usize>().map_err(|_| bad())?),
            None => (s, 1),
        };
        let (start, end) = span.split_once("..").ok_or_else(bad)?;
        let end = end.strip_prefix('=').unwrap_or(end);
        let start = start.trim().parse().map_err(|_| bad())?;
        let end = end.trim().parse().map_err(|_| bad())?;
        if step == 0 {
            return Err(format!("n-range '{s}' has a zero step"));
        }
        if end < start {
            return Err(format!("n-range '{s}' is empty"));
        }
        Ok(Self { start, end, step })
    }
}

/// Everything the user may specify; every field optional. Field names
/// match the command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RawConfig {
    pub experiment: Option<ExperimentKind>,
    pub n: Option<usize>,
    pub n_range: Option<String>,
    pub epsilon: Option<f64>,
    pub epsilon_list: Option<Vec<f64>>,
    pub order: Option<OrderSpec>,
    pub samples: Option<usize>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub target: Option<String>,
    pub iterations: Option<u32>,
    pub k_max: Option<u64>,
}

impl RawConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    /// Fields set in `overrides` replace those in `self`.
    pub fn overridden_by(self, overrides: RawConfig) -> RawConfig {
        RawConfig {
            experiment: overrides.experiment.or(self.experiment),
            n: overrides.n.or(self.n),
            n_range: overrides.n_range.or(self.n_range),
            epsilon: overrides.epsilon.or(self.epsilon),
            epsilon_list: overrides.epsilon_list.or(self.epsilon_list),
            order: overrides.order.or(self.order),
            samples: overrides.samples.or(self.samples),
            out: overrides.out.or(self.out),
            workers: overrides.workers.or(self.workers),
            target: overrides.target.or(self.target),
            iterations: overrides.iterations.or(self.iterations),
            k_max: overrides.k_max.or(self.k_max),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderChoice {
    Auto,
    Fixed(u32),
}

/// The order used for one `(n, epsilon)` cell after resolving `auto`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellOrders {
    pub n: usize,
    pub epsilon: Option<f64>,
    pub orders: Vec<u32>,
    /// Stationary point of the analytic depth, when `auto` used it.
    pub q_real: Option<f64>,
}

/// Target bit string and the qubits flipped to map it onto `0...0`.
///
/// `X` on any qubit commutes with the mixer and fixes `|+>`, so relabelling
/// leaves every reported overlap unchanged.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetRelabel {
    pub bits: String,
    pub flipped_qubits: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub experiment: ExperimentKind,
    pub ns: Vec<usize>,
    pub epsilons: Vec<f64>,
    pub order: OrderChoice,
    pub cells: Vec<CellOrders>,
    pub samples: usize,
    pub out: PathBuf,
    pub workers: usize,
    pub target: Option<TargetRelabel>,
    pub iterations: u32,
    pub k_max: Option<u64>,
}

impl ResolvedConfig {
    pub fn sidecar_path(&self) -> PathBuf {
        self.out.with_extension("json")
    }
}

/// Checks `raw` for `experiment` and resolves defaults and `auto` orders.
/// Every violation is reported, not just the first.
pub fn validate(experiment: ExperimentKind, raw: &RawConfig, default_dir: Option<&Path>) -> Result<ResolvedConfig, Vec<String>> {
    let mut errors = Vec::new();

    if let Some(file_kind) = raw.experiment {
        if file_kind != experiment {
            errors.push(format!("config declares experiment '{file_kind}' but '{experiment}' was requested"));
        }
    }

    let ns = match (raw.n, &raw.n_range) {
        (Some(_), Some(_)) => {
            errors.push("give either n or n-range, not both".into());
            Vec::new()
        }
        (Some(n), None) => vec![n],
        (None, Some(range)) => match range.parse::<NRange>() {
            Ok(r) => r.values(),
            Err(e) => {
                errors.push(e);
                Vec::new()
            }
        },
        (None, None) => {
            errors.push("n or n-range is required".into());
            Vec::new()
        }
    };
    for &n in &ns {
        if n == 0 || n > MAX_QUBITS {
            errors.push(format!("n={n} is outside the supported range [1, {MAX_QUBITS}]"));
        }
    }

    let epsilons = match (raw.epsilon, &raw.epsilon_list) {
        (Some(_), Some(_)) => {
            errors.push("give either epsilon or epsilon-list, not both".into());
            Vec::new()
        }
        (Some(e), None) => vec![e],
        (None, Some(list)) => {
            if list.is_empty() {
                errors.push("epsilon-list is empty".into());
            }
            list.clone()
        }
        (None, None) => Vec::new(),
    };
    for &e in &epsilons {
        if !(e > 0.0 && e < 1.0) {
            errors.push(format!("epsilon={e} must lie in (0, 1)"));
        }
    }
    if experiment.needs_epsilon() && epsilons.is_empty() && raw.epsilon.is_none() && raw.epsilon_list.is_none() {
        errors.push(format!("{experiment} requires epsilon or epsilon-list"));
    }
    if experiment.single_cell() && (ns.len() > 1 || epsilons.len() > 1) {
        errors.push(format!("{experiment} takes a single n and a single epsilon"));
    }

    let order = match &raw.order {
        None => OrderChoice::Auto,
        Some(OrderSpec::Text(s)) if s == "auto" => OrderChoice::Auto,
        Some(OrderSpec::Text(s)) => match s.parse::<u32>() {
            Ok(q) => OrderChoice::Fixed(q),
            Err(_) => {
                errors.push(format!("order '{s}' is neither 'auto' nor an even integer"));
                OrderChoice::Auto
            }
        },
        Some(OrderSpec::Fixed(q)) => OrderChoice::Fixed(*q),
    };
    if let OrderChoice::Fixed(q) = order {
        if q < 2 || q % 2 != 0 {
            errors.push(format!("order {q} must be an even integer >= 2"));
        }
    }

    let target = match &raw.target {
        None => None,
        Some(bits) => {
            if bits.is_empty() || !bits.chars().all(|c| c == '0' || c == '1') {
                errors.push(format!("target '{bits}' must be a non-empty string of 0s and 1s"));
            }
            if ns.len() != 1 || ns[0] != bits.len() {
                errors.push(format!(
                    "target '{bits}' has length {} but n is {}",
                    bits.len(),
                    ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",")
                ));
            }
            Some(TargetRelabel {
                bits: bits.clone(),
                flipped_qubits: bits.char_indices().filter(|(_, c)| *c == '1').map(|(i, _)| i).collect(),
            })
        }
    };

    let samples = raw.samples.unwrap_or(match experiment {
        ExperimentKind::BoundCheck => DEFAULT_BOUND_CHECK_SAMPLES,
        _ => DEFAULT_TRACE_SAMPLES,
    });
    match experiment {
        ExperimentKind::OverlapTrace if samples < 2 => errors.push("samples must be at least 2".into()),
        ExperimentKind::BoundCheck if !(1..=40).contains(&samples) => {
            errors.push("bound-check samples (number of doublings of r) must lie in [1, 40]".into())
        }
        _ => {}
    }

    let workers = match raw.workers {
        Some(0) => {
            errors.push("workers must be at least 1".into());
            1
        }
        Some(w) => w,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };

    let iterations = raw.iterations.unwrap_or(DEFAULT_REFINEMENT_ITERATIONS);
    if iterations == 0 {
        errors.push("iterations must be at least 1".into());
    }
    if raw.k_max == Some(0) {
        errors.push("k-max must be at least 1".into());
    }

    if !errors.is_empty() {
        return Err(errors);
    }

    let cells = resolve_orders(experiment, &ns, &epsilons, order).map_err(|e| vec![e])?;
    let out = raw.out.clone().unwrap_or_else(|| {
        default_dir
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."))
            .join(format!("{experiment}.csv"))
    });

    Ok(ResolvedConfig {
        experiment,
        ns,
        epsilons,
        order,
        cells,
        samples,
        out,
        workers,
        target,
        iterations,
        k_max: raw.k_max,
    })
}

fn resolve_orders(experiment: ExperimentKind, ns: &[usize], epsilons: &[f64], order: OrderChoice) -> Result<Vec<CellOrders>, String> {
    let mut cells = Vec::new();
    match experiment {
        ExperimentKind::GroverCurve => {}
        ExperimentKind::BoundCheck => {
            let orders = match order {
                OrderChoice::Auto => vec![2, 4],
                OrderChoice::Fixed(q) => vec![q],
            };
            for &n in ns {
                cells.push(CellOrders { n, epsilon: None, orders: orders.clone(), q_real: None });
            }
        }
        ExperimentKind::RatioSweep => {
            let orders = match order {
                OrderChoice::Auto => ADMISSIBLE_ORDERS.to_vec(),
                OrderChoice::Fixed(q) => vec![q],
            };
            for &n in ns {
                for &e in epsilons {
                    cells.push(CellOrders { n, epsilon: Some(e), orders: orders.clone(), q_real: None });
                }
            }
        }
        ExperimentKind::OverlapTrace | ExperimentKind::DepthSearch | ExperimentKind::AnalyticDepth => {
            for &n in ns {
                for &e in epsilons {
                    let cell = match order {
                        OrderChoice::Fixed(q) => CellOrders { n, epsilon: Some(e), orders: vec![q], q_real: None },
                        OrderChoice::Auto => {
                            let o = optimal_order(n, e).map_err(|err| err.to_string())?;
                            CellOrders { n, epsilon: Some(e), orders: vec![o.q_even], q_real: Some(o.q_real) }
                        }
                    };
                    cells.push(cell);
                }
            }
        }
    }
    Ok(cells)
}
