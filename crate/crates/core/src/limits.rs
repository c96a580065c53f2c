//! The nonrelativistic limit as a convergence study in `1/c`.
//!
//! The relativistic plane wave with its rest-energy phase removed is
//! compared with the Schrodinger evolution of the same initial data. Both
//! the exact frequency gap and the gap between the evolved fields should
//! shrink like `c^-2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::convergence::{fit_power_law, PowerFit};
use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField};
use crate::kinematics::{kinetic_frequency, PhysicalConstants};
use crate::report::csv_table;
use crate::solvers::{factored_stability_limit, solve_relativistic_factored, solve_schrodinger, Scheme, SolverConfig};

/// `psi * exp(i m0 c^2 t / hbar)`.
pub fn factor_rest_energy(psi: &ScalarField, consts: &PhysicalConstants, t: f64) -> ScalarField {
    let phase = Complex64::new(0.0, consts.rest_frequency() * t).exp();
    psi.map(|v| v * phase)
}

/// Inverse of [`factor_rest_energy`].
pub fn restore_rest_energy(psi0: &ScalarField, consts: &PhysicalConstants, t: f64) -> ScalarField {
    let phase = Complex64::new(0.0, consts.rest_frequency() * t).exp().conj();
    psi0.map(|v| v * phase)
}

/// Frequency of a plane wave under the free Schrodinger equation, `hbar k^2 / 2 m0`.
pub fn schrodinger_frequency(k: f64, consts: &PhysicalConstants) -> f64 {
    consts.hbar * k * k / (2.0 * consts.m0)
}

/// `|omega(k) - m0 c^2/hbar - hbar k^2 / 2 m0|`, evaluated without
/// cancellation as `mu x^4 / (2 (1 + sqrt(1 + x^2))^2)` with
/// `x = hbar k / m0 c` and `mu = m0 c^2 / hbar`.
pub fn frequency_gap(k: f64, consts: &PhysicalConstants) -> f64 {
    let x = expansion_parameter(k, consts);
    let s = 1.0 + x.hypot(1.0);
    consts.rest_frequency() * x.powi(4) / (2.0 * s * s)
}

/// `hbar k / (m0 c)`.
pub fn expansion_parameter(k: f64, consts: &PhysicalConstants) -> f64 {
    consts.hbar * k / (consts.m0 * consts.c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitStudyConfig {
    pub k: f64,
    pub c_values: Vec<f64>,
    pub m0: f64,
    pub hbar: f64,
    /// Evolution time of the field comparison.
    pub time: f64,
    /// Grid points; the periodic box holds one wavelength.
    pub resolution: usize,
    /// Phase advance of the Schrodinger wave per time step.
    pub phase_per_step: f64,
}

impl Default for LimitStudyConfig {
    fn default() -> Self {
        Self {
            k: 1.0,
            c_values: vec![4.0, 8.0, 16.0, 32.0, 64.0, 128.0],
            m0: 1.0,
            hbar: 1.0,
            time: 1.0,
            resolution: 32,
            phase_per_step: 5e-4,
        }
    }
}

impl LimitStudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.c_values.len() < 4 {
            return Err(Error::InsufficientData(format!(
                "a limit study needs at least 4 speeds, got {}",
                self.c_values.len()
            )));
        }
        if self.c_values.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(Error::invalid("speeds must be finite and > 0"));
        }
        if self.c_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("speeds must be strictly ascending"));
        }
        let (lo, hi) = (self.c_values[0], self.c_values[self.c_values.len() - 1]);
        if hi / lo < 10.0 {
            return Err(Error::invalid(format!("speeds must span at least a decade, got {lo}..{hi}")));
        }
        if !(self.k.is_finite() && self.k >= 0.0) {
            return Err(Error::invalid(format!("k must be finite and >= 0, got {}", self.k)));
        }
        for (name, v) in [("m0", self.m0), ("hbar", self.hbar), ("time", self.time), ("phase_per_step", self.phase_per_step)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if self.resolution < crate::grid::MIN_POINTS {
            return Err(Error::InsufficientResolution {
                points: self.resolution,
                required: crate::grid::MIN_POINTS,
            });
        }
        let x = self.hbar * self.k / (self.m0 * lo);
        if x >= 1.0 {
            return Err(Error::invalid(format!(
                "expansion parameter hbar k / (m0 c) = {x} at the smallest c must be < 1"
            )));
        }
        Ok(())
    }

    fn consts(&self, c: f64) -> Result<PhysicalConstants> {
        PhysicalConstants::new(self.hbar, c, self.m0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub c: f64,
    /// `omega_rel - m0 c^2 / hbar`.
    pub kinetic_frequency: f64,
    pub schrodinger_frequency: f64,
    pub freq_gap: f64,
    pub field_gap: f64,
    pub x_param: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitStudyReport {
    pub rows: Vec<LimitRow>,
    /// Fits of gap ~ c^-order; `None` when the gaps vanish.
    pub frequency_fit: Option<PowerFit>,
    pub field_fit: Option<PowerFit>,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
struct Summary<'a> {
    frequency_order: Option<f64>,
    frequency_fit_residual: Option<f64>,
    field_order: Option<f64>,
    field_fit_residual: Option<f64>,
    warnings: &'a [String],
}

impl LimitStudyReport {
    pub fn frequency_order(&self) -> Option<f64> {
        self.frequency_fit.map(|f| -f.exponent)
    }

    pub fn field_order(&self) -> Option<f64> {
        self.field_fit.map(|f| -f.exponent)
    }

    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<f64>> = self.rows.iter().map(|r| vec![r.c, r.freq_gap, r.field_gap, r.x_param]).collect();
        csv_table(&["c", "freq_gap", "field_gap", "x_param"], &rows)
    }

    pub fn summary_json(&self) -> String {
        let s = Summary {
            frequency_order: self.frequency_order(),
            frequency_fit_residual: self.frequency_fit.map(|f| f.residual),
            field_order: self.field_order(),
            field_fit_residual: self.field_fit.map(|f| f.residual),
            warnings: &self.warnings,
        };
        serde_json::to_string_pretty(&s).expect("summary serializes")
    }
}

/// Frequency of the discrete mode `exp(ikx)` under the factored equation with
/// the second-order Laplacian: `c^2 k_h^2 / (mu + sqrt(mu^2 + c^2 k_h^2))`.
fn semi_discrete_kinetic_frequency(grid: &Grid, k: f64, consts: &PhysicalConstants) -> f64 {
    let h = grid.spacing();
    let kh2 = 4.0 * (0.5 * k * h).sin().powi(2) / (h * h);
    let mu = consts.rest_frequency();
    let ck2 = consts.c * consts.c * kh2;
    ck2 / (mu + (mu * mu + ck2).sqrt())
}

/// `max |psi0_rel(T) - psi_schr(T)|` for the plane wave `exp(ikx)`.
fn field_gap(cfg: &LimitStudyConfig, consts: &PhysicalConstants) -> Result<f64> {
    let length = if cfg.k > 0.0 { 2.0 * PI / cfg.k } else { 2.0 * PI };
    let grid = Grid::new(1, cfg.resolution, length)?;
    let k = cfg.k;
    let psi = ScalarField::from_fn(grid, 0.0, |r| Complex64::new(0.0, k * r[0]).exp());

    let nu = schrodinger_frequency(k, consts);
    let stable = 0.5 * factored_stability_limit(&grid, consts.c, consts.rest_frequency());
    let steps = ((cfg.time * nu / cfg.phase_per_step).ceil() as usize).max((cfg.time / stable).ceil() as usize);
    let dt = cfg.time / steps as f64;

    let schr = solve_schrodinger(&psi, consts, &SolverConfig::new(dt, steps, Scheme::CrankNicolson)?)?;
    let nu_h = semi_discrete_kinetic_frequency(&grid, k, consts);
    let rate = psi.map(|v| Complex64::new(0.0, -nu_h) * v);
    let rel = solve_relativistic_factored(&psi, &rate, consts, &SolverConfig::new(dt, steps, Scheme::Leapfrog)?)?;
    rel.final_field.max_abs_diff(&schr.final_field)
}

fn fit_gaps(cs: &[f64], gaps: &[f64], what: &str, warnings: &mut Vec<String>) -> Option<PowerFit> {
    if gaps.iter().all(|&g| g == 0.0) {
        return None;
    }
    if gaps.windows(2).any(|w| w[1] >= w[0]) {
        warnings.push(format!("{what} gap is not strictly decreasing in c"));
    }
    match fit_power_law(cs, gaps) {
        Ok(f) => Some(f),
        Err(e) => {
            warnings.push(format!("{what} gap fit failed: {e}"));
            None
        }
    }
}

pub fn run_limit_study(cfg: &LimitStudyConfig) -> Result<LimitStudyReport> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.c_values.len());
    for &c in &cfg.c_values {
        let consts = cfg.consts(c)?;
        rows.push(LimitRow {
            c,
            kinetic_frequency: kinetic_frequency(cfg.k, &consts),
            schrodinger_frequency: schrodinger_frequency(cfg.k, &consts),
            freq_gap: frequency_gap(cfg.k, &consts),
            field_gap: field_gap(cfg, &consts)?,
            x_param: expansion_parameter(cfg.k, &consts),
        });
    }
    let cs: Vec<f64> = rows.iter().map(|r| r.c).collect();
    let freq: Vec<f64> = rows.iter().map(|r| r.freq_gap).collect();
    let field: Vec<f64> = rows.iter().map(|r| r.field_gap).collect();
    let mut warnings = Vec::new();
    let frequency_fit = fit_gaps(&cs, &freq, "frequency", &mut warnings);
    let field_fit = fit_gaps(&cs, &field, "field", &mut warnings);
    Ok(LimitStudyReport { rows, frequency_fit, field_fit, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::dispersion_omega;

    #[test]
    fn factoring_round_trip() {
        let consts = PhysicalConstants::new(1.0, 30.0, 2.0).unwrap();
        let g = Grid::new(1, 16, 2.0 * PI).unwrap();
        let psi = ScalarField::from_fn(g, 0.0, |r| Complex64::new(r[0].cos(), 0.3 * r[0]).exp());
        assert_eq!(factor_rest_energy(&psi, &consts, 0.0), psi);
        for t in [0.1, 1.7, 12.3] {
            let back = restore_rest_energy(&factor_rest_energy(&psi, &consts, t), &consts, t);
            for (a, b) in back.values().iter().zip(psi.values()) {
                assert!((a - b).norm() <= 1e-15 * b.norm());
            }
        }
    }

    #[test]
    fn factored_plane_wave_rotates_at_kinetic_frequency() {
        let consts = PhysicalConstants::new(1.0, 3.0, 1.0).unwrap();
        let g = Grid::new(1, 16, 2.0 * PI).unwrap();
        let k = 2.0;
        let omega = dispersion_omega(k, &consts);
        let t = 0.8;
        let psi = ScalarField::from_fn(g, t, |r| Complex64::new(0.0, k * r[0] - omega * t).exp());
        let psi0 = factor_rest_energy(&psi, &consts, t);
        let nu = kinetic_frequency(k, &consts);
        for (i, v) in psi0.values().iter().enumerate() {
            let want = Complex64::new(0.0, k * g.coords(i)[0] - nu * t).exp();
            assert!((v - want).norm() < 1e-13);
        }
    }

    #[test]
    fn frequency_gap_matches_expansion() {
        for c in [4.0, 8.0, 16.0, 32.0, 64.0, 128.0] {
            let consts = PhysicalConstants::new(1.0, c, 1.0).unwrap();
            let x = expansion_parameter(1.0, &consts);
            let mu = consts.rest_frequency();
            let direct = mu * ((1.0 + x * x).sqrt() - 1.0 - 0.5 * x * x);
            let gap = frequency_gap(1.0, &consts);
            // the direct form cancels, so it is only good to a few ulps of mu
            assert!((gap + direct).abs() <= 1e-14 * mu, "c {c}");
            let leading = 1.0 / (8.0 * c * c);
            assert!((gap - leading).abs() / leading < x * x);
            let gap2 = (schrodinger_frequency(1.0, &consts) - kinetic_frequency(1.0, &consts)).abs();
            assert!((gap - gap2).abs() < 1e-14);
        }
    }

    #[test]
    fn config_validation() {
        let ok = LimitStudyConfig::default();
        assert!(ok.validate().is_ok());
        let few = LimitStudyConfig { c_values: vec![4.0, 40.0, 400.0], ..ok.clone() };
        assert!(matches!(few.validate(), Err(Error::InsufficientData(_))));
        let narrow = LimitStudyConfig { c_values: vec![4.0, 8.0, 16.0, 32.0, 39.0], ..ok.clone() };
        assert!(narrow.validate().is_err());
        let unsorted = LimitStudyConfig { c_values: vec![8.0, 4.0, 16.0, 800.0], ..ok.clone() };
        assert!(unsorted.validate().is_err());
        let fast = LimitStudyConfig { k: 5.0, ..ok.clone() };
        assert!(fast.validate().is_err());
        let coarse = LimitStudyConfig { resolution: 4, ..ok };
        assert!(matches!(coarse.validate(), Err(Error::InsufficientResolution { .. })));
    }

    #[test]
    fn rest_mode_has_no_gap() {
        let cfg = LimitStudyConfig { k: 0.0, ..LimitStudyConfig::default() };
        let rep = run_limit_study(&cfg).unwrap();
        assert!(rep.rows.iter().all(|r| r.freq_gap == 0.0 && r.field_gap == 0.0));
        assert!(rep.frequency_fit.is_none() && rep.field_fit.is_none());
        assert!(rep.warnings.is_empty());
    }

    #[test]
    fn nonmonotone_gaps_are_flagged() {
        let mut w = Vec::new();
        let f = fit_gaps(&[1.0, 2.0, 4.0, 8.0], &[1.0, 0.5, 0.6, 0.1], "field", &mut w);
        assert!(f.is_some());
        assert_eq!(w.len(), 1);
    }

    #[test]
    fn csv_and_summary_shape() {
        let rep = LimitStudyReport {
            rows: vec![LimitRow {
                c: 4.0,
                kinetic_frequency: 0.5,
                schrodinger_frequency: 0.5,
                freq_gap: 1e-3,
                field_gap: 2e-3,
                x_param: 0.25,
            }],
            frequency_fit: None,
            field_fit: None,
            warnings: vec![],
        };
        let csv = rep.to_csv();
        assert!(csv.starts_with("c,freq_gap,field_gap,x_param\n"));
        let v: serde_json::Value = serde_json::from_str(&rep.summary_json()).unwrap();
        assert!(v["frequency_order"].is_null());
    }
}
