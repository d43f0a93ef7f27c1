//! One runner per experiment kind. Each produces a table of rows plus the
//! cells that failed; cells are evaluated on the current rayon pool and
//! assembled in configuration order.

use ctqw_qaoa::bounds::{
    analytic_depth, analytic_depth_closed, delta_bound, delta_exact, optimal_order, required_steps, spectral_error,
    trotter_error_bound, EpsilonKind, DELTA_EXACT_MAX_ORDER,
};
use ctqw_qaoa::ctqw::{t_star, Walk};
use ctqw_qaoa::depthsearch::{grover_closed_form, grover_curve, numeric_optimal_depth, ratio_sweep, reference_overlap};
use ctqw_qaoa::trotter::{overlap_trace, stage_count};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{CellOrders, ExperimentKind, ResolvedConfig};

/// Largest Grover curve written row by row.
pub const GROVER_MAX_ITERATIONS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(u64),
    Float(f64),
    Text(String),
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(v as u64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellFailure {
    pub cell: String,
    pub error: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    /// `key=value` pairs for the CSV metadata line.
    pub metadata: Vec<(String, String)>,
    pub failures: Vec<CellFailure>,
    /// Orders that failed inside a cell whose result came from another order.
    pub skipped: Vec<CellFailure>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), ..Default::default() }
    }

    fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_owned(), value.to_string()));
    }

    fn absorb<E: ToString>(&mut self, cell: String, result: Result<Vec<Vec<Value>>, E>) {
        match result {
            Ok(rows) => self.rows.extend(rows),
            Err(e) => self.failures.push(CellFailure { cell, error: e.to_string() }),
        }
    }
}

type Rows = Result<Vec<Vec<Value>>, ctqw_qaoa::Error>;

pub fn run_experiment(cfg: &ResolvedConfig) -> Table {
    let mut table = match cfg.experiment {
        ExperimentKind::OverlapTrace => overlap_trace_table(cfg),
        ExperimentKind::DepthSearch => depth_search_table(cfg),
        ExperimentKind::AnalyticDepth => analytic_depth_table(cfg),
        ExperimentKind::RatioSweep => ratio_sweep_table(cfg),
        ExperimentKind::GroverCurve => grover_curve_table(cfg),
        ExperimentKind::BoundCheck => bound_check_table(cfg),
    };
    if let Some(target) = &cfg.target {
        table.meta("target", &target.bits);
        table.meta("relabelled-target", "0".repeat(target.bits.len()));
    }
    table
}

fn cell_label(cell: &CellOrders, q: Option<u32>) -> String {
    let mut s = format!("n={}", cell.n);
    if let Some(e) = cell.epsilon {
        s.push_str(&format!(" epsilon={e}"));
    }
    if let Some(q) = q {
        s.push_str(&format!(" q={q}"));
    }
    s
}

fn overlap_trace_table(cfg: &ResolvedConfig) -> Table {
    let mut table = Table::new(&[
        "steps_applied",
        "layer_count",
        "overlap_qaoa",
        "overlap_grover",
        "overlap_ctqw_reference",
    ]);
    let cell = &cfg.cells[0];
    let (n, q) = (cell.n, cell.orders[0]);
    let epsilon = cell.epsilon.expect("validated");
    table.meta("n", n);
    table.meta("epsilon", epsilon);
    table.meta("epsilon-kind", EpsilonKind::SpectralNorm.label());
    table.meta("q", q);
    let rows = (|| -> Rows {
        let t = t_star(n)?;
        let r = required_steps(n, q, epsilon)?.r;
        table.meta("r", r);
        let stages = stage_count(q)?;
        let walk = Walk::at_optimum(n)?;
        let theta = 2f64.powf(-(n as f64) / 2.0).asin();
        let trace = overlap_trace(n, q, t, r, cfg.samples)?;
        Ok(trace
            .into_iter()
            .map(|p| {
                let layers = p.steps_applied * stages;
                vec![
                    p.steps_applied.into(),
                    layers.into(),
                    p.overlap.into(),
                    grover_closed_form(theta, layers).into(),
                    walk.overlap(t * p.steps_applied as f64 / r as f64).into(),
                ]
            })
            .collect())
    })();
    table.absorb(cell_label(cell, Some(q)), rows);
    table
}

fn depth_search_table(cfg: &ResolvedConfig) -> Table {
    let mut table = Table::new(&[
        "n",
        "epsilon",
        "q",
        "r",
        "p",
        "overlap",
        "threshold",
        "reference_overlap",
        "level",
        "multiplier",
    ]);
    table.meta("epsilon-kind", EpsilonKind::OverlapDeficit.label());
    table.meta("iterations", cfg.iterations);
    let results: Vec<Rows> = cfg
        .cells
        .par_iter()
        .map(|cell| {
            let q = cell.orders[0];
            let d = numeric_optimal_depth(cell.n, q, cell.epsilon.expect("validated"), cfg.iterations)?;
            Ok(vec![vec![
                d.n.into(),
                d.epsilon.into(),
                d.q.into(),
                d.r.into(),
                d.p.into(),
                d.overlap.into(),
                d.threshold.into(),
                reference_overlap(d.n)?.into(),
                d.state.l.into(),
                d.state.d.into(),
            ]])
        })
        .collect();
    for (cell, rows) in cfg.cells.iter().zip(results) {
        table.absorb(cell_label(cell, Some(cell.orders[0])), rows);
    }
    table
}

fn analytic_depth_table(cfg: &ResolvedConfig) -> Table {
    let mut table = Table::new(&[
        "n",
        "epsilon",
        "q_real",
        "q_even",
        "q",
        "delta_bound",
        "p0",
        "p_analytic",
        "log2_p",
        "p_closed",
        "log2_p_closed",
    ]);
    table.meta("epsilon-kind", EpsilonKind::SpectralNorm.label());
    for cell in &cfg.cells {
        let q = cell.orders[0];
        let rows = (|| -> Rows {
            let epsilon = cell.epsilon.expect("validated");
            let opt = optimal_order(cell.n, epsilon)?;
            let est = analytic_depth(cell.n, q, epsilon)?;
            let closed = analytic_depth_closed(cell.n, epsilon)?;
            Ok(vec![vec![
                cell.n.into(),
                epsilon.into(),
                opt.q_real.into(),
                opt.q_even.into(),
                q.into(),
                est.delta_bound.into(),
                est.p0.into(),
                est.p_analytic.into(),
                est.log2_p.into(),
                closed.p.into(),
                closed.log2_p.into(),
            ]])
        })();
        table.absorb(cell_label(cell, Some(q)), rows);
    }
    table
}

fn ratio_sweep_table(cfg: &ResolvedConfig) -> Table {
    let mut table = Table::new(&["n", "epsilon", "q_best", "p_numerical", "p_analytical", "ratio"]);
    table.meta("numeric-epsilon-kind", EpsilonKind::OverlapDeficit.label());
    table.meta("analytic-epsilon-kind", EpsilonKind::SpectralNorm.label());
    table.meta("iterations", cfg.iterations);
    let orders = &cfg.cells[0].orders;
    table.meta("orders", orders.iter().map(u32::to_string).collect::<Vec<_>>().join("/"));
    match ratio_sweep(&cfg.ns, &cfg.epsilons, orders, cfg.iterations) {
        Err(e) => table.failures.push(CellFailure { cell: "sweep".into(), error: e.to_string() }),
        Ok(cells) => {
            for cell in cells {
                let label = format!("n={} epsilon={}", cell.n, cell.epsilon);
                for (q, err) in &cell.order_failures {
                    table.skipped.push(CellFailure { cell: format!("{label} q={q}"), error: err.to_string() });
                }
                let rows = cell.result.map(|rec| {
                    vec![vec![
                        rec.n.into(),
                        rec.epsilon.into(),
                        rec.q.into(),
                        rec.p_numerical.into(),
                        rec.p_analytical.into(),
                        rec.ratio.into(),
                    ]]
                });
                table.absorb(label, rows);
            }
        }
    }
    table
}

fn default_grover_iterations(n: usize) -> u64 {
    let theta = 2f64.powf(-(n as f64) / 2.0).asin();
    let k_star = (std::f64::consts::PI / (4.0 * theta) - 0.5).round() as u64;
    (2 * k_star).max(1)
}

fn grover_curve_table(cfg: &ResolvedConfig) -> Table {
    let mut table = Table::new(&["n", "iterations", "overlap", "closed_form"]);
    let results: Vec<Rows> = cfg
        .ns
        .par_iter()
        .map(|&n| {
            let k_max = cfg.k_max.unwrap_or_else(|| default_grover_iterations(n));
            if k_max > GROVER_MAX_ITERATIONS {
                return Err(ctqw_qaoa::Error::InvalidArgument(format!(
                    "k-max {k_max} exceeds the row limit {GROVER_MAX_ITERATIONS}; pass a smaller --k-max"
                )));
            }
            Ok(grover_curve(n, k_max)?
                .into_iter()
                .map(|p| vec![n.into(), p.iterations.into(), p.overlap.into(), p.closed_form.into()])
                .collect())
        })
        .collect();
    for (&n, rows) in cfg.ns.iter().zip(results) {
        table.absorb(format!("n={n}"), rows);
    }
    table
}

fn bound_check_table(cfg: &ResolvedConfig) -> Table {
    let mut table = Table::new(&[
        "n",
        "q",
        "r",
        "spectral_error",
        "error_bound",
        "delta_bound",
        "delta_exact",
        "holds",
    ]);
    table.meta("epsilon-kind", EpsilonKind::SpectralNorm.label());
    table.meta("t", "t_star(n)");
    let jobs: Vec<(&CellOrders, u32)> = cfg
        .cells
        .iter()
        .flat_map(|c| c.orders.iter().map(move |&q| (c, q)))
        .collect();
    let samples = cfg.samples as u32;
    let results: Vec<Rows> = jobs
        .par_iter()
        .map(|&(cell, q)| {
            let n = cell.n;
            let t = t_star(n)?;
            let delta = delta_bound(n, q)?;
            let exact = if q <= DELTA_EXACT_MAX_ORDER { Some(delta_exact(n, q)?) } else { None };
            let stages = stage_count(q)?;
            (2..2 + samples)
                .map(|k| {
                    let r = 1u64 << k;
                    let err = spectral_error(n, q, t, r)?;
                    let bound = trotter_error_bound(q, delta, t, r, stages)?;
                    Ok(vec![
                        n.into(),
                        q.into(),
                        r.into(),
                        err.into(),
                        bound.into(),
                        delta.into(),
                        exact.map_or(Value::Text(String::new()), Value::Float),
                        u64::from(err <= bound).into(),
                    ])
                })
                .collect()
        })
        .collect();
    for (&(cell, q), rows) in jobs.iter().zip(results) {
        table.absorb(cell_label(cell, Some(q)), rows);
    }
    let violations = table.rows.iter().filter(|row| row[7] == Value::Int(0)).count();
    table.meta("violations", violations);
    table
}
