//! Power-law fits for measured convergence rates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `y ~ exp(log_prefactor) * x^exponent`, fitted by least squares in log-log
/// space. `residual` is the RMS of the log residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub log_prefactor: f64,
    pub residual: f64,
}

pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerFit> {
    if xs.len() != ys.len() {
        return Err(Error::invalid(format!("{} abscissae for {} values", xs.len(), ys.len())));
    }
    if xs.len() < 2 {
        return Err(Error::InsufficientData("a power-law fit needs at least two points".into()));
    }
    for (&x, &y) in xs.iter().zip(ys) {
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(Error::Domain(format!("log-log fit needs positive finite data, got ({x}, {y})")));
        }
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("all abscissae are equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let log_prefactor = my - exponent * mx;
    let ss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - log_prefactor - exponent * x).powi(2)).sum();
    Ok(PowerFit { exponent, log_prefactor, residual: (ss / n).sqrt() })
}

/// Observed order between consecutive refinements,
/// `ln(e_i / e_{i+1}) / ln(h_i / h_{i+1})`.
pub fn pairwise_orders(hs: &[f64], errs: &[f64]) -> Vec<f64> {
    hs.windows(2)
        .zip(errs.windows(2))
        .map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect()
}
