//! Generalized-mean welfare.
//!
//! `M_p(x) = (Σ w_i x_i^p)^{1/p}` with normalized weights `w_i = η_i / Σ η`
//! (uniform `1/n` by default). `p = 0` is the weighted geometric mean (Nash
//! social welfare), `p = -∞` the minimum (egalitarian welfare), `p = 1` the
//! arithmetic mean.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Exponent `p ∈ [-∞, 1]` plus optional per-agent weights `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct WelfareParam {
    p: f64,
    weights: Option<Vec<f64>>,
}

impl WelfareParam {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p > 1.0 {
            return Err(Error::InvalidInput(alloc::format!(
                "welfare exponent must lie in [-inf, 1], got {p}"
            )));
        }
        Ok(WelfareParam { p, weights: None })
    }

    /// Asymmetric welfare with agent weights `η_i >= 0`, `Σ η_i > 0`.
    pub fn with_weights(p: f64, weights: Vec<f64>) -> Result<Self> {
        let mut param = Self::new(p)?;
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::invalid("agent weights must be finite and nonnegative"));
        }
        if weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::invalid("agent weights must have a positive sum"));
        }
        param.weights = Some(weights);
        Ok(param)
    }

    pub fn nash() -> Self {
        WelfareParam { p: 0.0, weights: None }
    }

    pub fn egalitarian() -> Self {
        WelfareParam {
            p: f64::NEG_INFINITY,
            weights: None,
        }
    }

    pub fn utilitarian() -> Self {
        WelfareParam { p: 1.0, weights: None }
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// `η_i`, 1 when unweighted.
    #[inline]
    pub fn weight(&self, agent: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[agent])
    }

    /// Same weights, different exponent.
    pub fn with_p(&self, p: f64) -> Result<Self> {
        let mut out = Self::new(p)?;
        out.weights = self.weights.clone();
        Ok(out)
    }

    pub(crate) fn check_agents(&self, n: usize) -> Result<()> {
        match &self.weights {
            Some(w) if w.len() != n => Err(Error::InvalidInput(alloc::format!(
                "{} agent weights supplied for {n} agents",
                w.len()
            ))),
            _ => Ok(()),
        }
    }
}

/// `log Σ exp(t_i)` over a nonempty slice.
fn log_sum_exp(terms: &[f64]) -> f64 {
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + libm::log(terms.iter().map(|t| libm::exp(t - top)).sum::<f64>())
}

/// The weighted generalized mean of nonnegative `values`.
///
/// For `p <= 0` a zero value (with positive weight) makes the result 0.
/// Finite `p ∉ {0, 1}` is evaluated as `exp(LSE(p·ln x_i + ln w_i) / p)`,
/// which stays finite for very negative `p`.
pub fn p_mean(values: &[f64], param: &WelfareParam) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::invalid("p-mean of an empty list"));
    }
    if let Some(i) = values.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::InvalidInput(alloc::format!(
            "p-mean value {i} is {} (must be finite and nonnegative)",
            values[i]
        )));
    }
    param.check_agents(values.len())?;

    let total: f64 = match param.weights() {
        Some(w) => w.iter().sum(),
        None => values.len() as f64,
    };
    // (normalized weight, value) for agents that carry weight
    let active: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .map(|(i, &x)| (param.weight(i) / total, x))
        .filter(|(w, _)| *w > 0.0)
        .collect();

    let p = param.p();
    if p == f64::NEG_INFINITY {
        return Ok(active.iter().map(|&(_, x)| x).fold(f64::INFINITY, f64::min));
    }
    // a mean of a constant is that constant, exactly
    if !active.is_empty() && active.iter().all(|&(_, x)| x == active[0].1) {
        return Ok(active[0].1);
    }
    if p == 1.0 {
        return Ok(active.iter().map(|&(w, x)| w * x).sum());
    }
    if p <= 0.0 && active.iter().any(|&(_, x)| x == 0.0) {
        return Ok(0.0);
    }
    if p == 0.0 {
        let log_mean: f64 = active.iter().map(|&(w, x)| w * libm::log(x)).sum();
        return Ok(libm::exp(log_mean));
    }
    // 0 < p < 1: zero values contribute nothing to the sum
    let terms: Vec<f64> = active
        .iter()
        .filter(|&&(_, x)| x > 0.0)
        .map(|&(w, x)| p * libm::log(x) + libm::log(w))
        .collect();
    if terms.is_empty() {
        return Ok(0.0);
    }
    Ok(libm::exp(log_sum_exp(&terms) / p))
}

/// Nash social welfare: the geometric mean, 0 if any value is 0.
pub fn nsw(values: &[f64]) -> Result<f64> {
    p_mean(values, &WelfareParam::nash())
}

/// Routes very negative exponents to the egalitarian objective.
///
/// For `n >= 2`, every `p <= -n·log₂ n` becomes `-∞`; the `p`-mean then lies
/// between the minimum and `n^{-1/p} <= 2^{1/n}` times the minimum. (With a
/// natural-log threshold the factor would only be bounded by `e^{1/n}`.)
pub fn effective_p(p: f64, n: usize) -> f64 {
    if p == f64::NEG_INFINITY {
        return p;
    }
    if n >= 2 {
        let nf = n as f64;
        if p <= -nf * libm::log2(nf) {
            return f64::NEG_INFINITY;
        }
    }
    p
}
