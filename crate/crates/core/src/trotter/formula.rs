use serde::Serialize;

use crate::{Error, Result};

/// Which of the two generators an exponent factor belongs to.
///
/// `Cost` is `H1 = -i H_0` (phase on the marked state) and `Mixer` is
/// `H2 = -i alpha H_x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    Cost,
    Mixer,
}

/// One exponential `e^{coefficient * H}` in a product formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Factor {
    pub generator: Generator,
    pub coefficient: f64,
}

impl Factor {
    pub fn cost(coefficient: f64) -> Self {
        Self {
            generator: Generator::Cost,
            coefficient,
        }
    }

    pub fn mixer(coefficient: f64) -> Self {
        Self {
            generator: Generator::Mixer,
            coefficient,
        }
    }
}

pub(crate) fn check_order(q: u32) -> Result<()> {
    if q < 2 || !q.is_multiple_of(2) {
        Err(Error::InvalidOrder(q))
    } else {
        Ok(())
    }
}

/// `u_k = 1 / (4 - 4^{1/(2k-1)})`.
pub fn suzuki_weight(k: u32) -> f64 {
    1.0 / (4.0 - 4f64.powf(1.0 / (2 * k - 1) as f64))
}

/// Number of cost layers per step, `5^{q/2 - 1}`.
pub fn stage_count(q: u32) -> Result<u64> {
    check_order(q)?;
    Ok(5u64.pow(q / 2 - 1))
}

/// Flattened factors of `S_q(t)` from the Suzuki recursion, in application
/// order, without merging neighbours.
pub fn suzuki_coefficients(q: u32, t: f64) -> Result<Vec<Factor>> {
    check_order(q)?;
    let mut out = Vec::new();
    push_suzuki(q, t, &mut out);
    Ok(out)
}

fn push_suzuki(q: u32, t: f64, out: &mut Vec<Factor>) {
    if q == 2 {
        out.push(Factor::mixer(t / 2.0));
        out.push(Factor::cost(t));
        out.push(Factor::mixer(t / 2.0));
        return;
    }
    let u = suzuki_weight(q / 2);
    let outer = u * t;
    push_suzuki(q - 2, outer, out);
    push_suzuki(q - 2, outer, out);
    push_suzuki(q - 2, (1.0 - 4.0 * u) * t, out);
    push_suzuki(q - 2, outer, out);
    push_suzuki(q - 2, outer, out);
}

/// Durations `t_k` of the second-order blocks with `S_q(t) = prod_k S_2(t_k)`.
pub fn block_times(q: u32, t: f64) -> Result<Vec<f64>> {
    check_order(q)?;
    fn go(q: u32, t: f64, out: &mut Vec<f64>) {
        if q == 2 {
            out.push(t);
            return;
        }
        let u = suzuki_weight(q / 2);
        for scale in [u, u, 1.0 - 4.0 * u, u, u] {
            go(q - 2, scale * t, out);
        }
    }
    let mut out = Vec::with_capacity(5usize.pow(q / 2 - 1));
    go(q, t, &mut out);
    Ok(out)
}

/// An ordered exponent-factor sequence approximating `e^{t (H1 + H2)}` with
/// `r` steps of an order-`q` formula. Factors are stored in application
/// order (first element acts first).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductFormula {
    q: u32,
    r: u64,
    t: f64,
    factors: Vec<Factor>,
}

impl ProductFormula {
    /// Wraps an arbitrary factor list; no structural checks are made.
    pub fn from_factors(q: u32, r: u64, t: f64, factors: Vec<Factor>) -> Self {
        Self { q, r, t, factors }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// `Upsilon_q = 5^{q/2 - 1}`.
    pub fn stages(&self) -> u64 {
        5u64.pow(self.q / 2 - 1)
    }

    /// Number of cost factors, i.e. the QAOA depth once grouped.
    pub fn layer_count(&self) -> usize {
        self.factors
            .iter()
            .filter(|f| f.generator == Generator::Cost)
            .count()
    }

    pub fn coefficient_sum(&self, generator: Generator) -> f64 {
        self.factors
            .iter()
            .filter(|f| f.generator == generator)
            .map(|f| f.coefficient)
            .sum()
    }

    /// True when no two neighbouring factors share a generator.
    pub fn is_alternating(&self) -> bool {
        self.factors
            .windows(2)
            .all(|w| w[0].generator != w[1].generator)
    }
}

/// `r` copies of `S_q(t / r)` with neighbouring same-generator factors merged.
pub fn group_sequence(q: u32, r: u64, t: f64) -> Result<ProductFormula> {
    check_order(q)?;
    if r == 0 {
        return Err(Error::InvalidArgument("step count must be at least 1".into()));
    }
    let step = suzuki_coefficients(q, t / r as f64)?;
    let mut merged: Vec<Factor> = Vec::with_capacity(step.len() * r as usize);
    for _ in 0..r {
        for f in &step {
            match merged.last_mut() {
                Some(last) if last.generator == f.generator => last.coefficient += f.coefficient,
                _ => merged.push(*f),
            }
        }
    }
    Ok(ProductFormula::from_factors(q, r, t, merged))
}
