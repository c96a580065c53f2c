//! Finite-difference time stepping on periodic grids, and grid checks of
//! the first-order relations a plane wave satisfies.

mod checks;
mod fft;
mod leapfrog;
mod schrodinger;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField};
use crate::report::fmt_float;

pub use checks::{
    eigen_checks, hje_residual, hje_residual_analytic, hje_residual_jet, log_curvature_check, EigenDefects,
    LogCurvatureDefects,
};
pub(crate) use checks::hje_residual_with_potential;
pub use leapfrog::{
    factored_stability_limit, leapfrog_stability_limit, solve_relativistic, solve_relativistic_factored,
    solve_wave,
};
pub use schrodinger::solve_schrodinger;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Leapfrog,
    CrankNicolson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dt: f64,
    pub steps: usize,
    pub scheme: Scheme,
    pub stability_check: bool,
}

impl SolverConfig {
    pub fn new(dt: f64, steps: usize, scheme: Scheme) -> Result<Self> {
        let cfg = Self { dt, steps, scheme, stability_check: true };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn without_stability_check(mut self) -> Self {
        self.stability_check = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid(format!("dt must be > 0, got {}", self.dt)));
        }
        if self.steps == 0 {
            return Err(Error::invalid("steps must be >= 1"));
        }
        Ok(())
    }

    fn expect(&self, scheme: Scheme, what: &str) -> Result<()> {
        self.validate()?;
        if self.scheme != scheme {
            return Err(Error::Unsupported(format!("{what} requires the {scheme:?} scheme")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepDiagnostic {
    pub step: usize,
    pub time: f64,
    pub norm: f64,
    /// Conserved discrete energy; for two-level schemes it belongs to the
    /// half step ending at `time`.
    pub energy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub final_field: ScalarField,
    pub diagnostics: Vec<StepDiagnostic>,
    pub measured_order: Option<f64>,
}

impl SolveReport {
    /// Largest |E_n - E_1| / |E_1| over the run, if energies were recorded.
    pub fn energy_drift(&self) -> Option<f64> {
        let e0 = self.diagnostics.first()?.energy?;
        let mut worst: f64 = 0.0;
        for d in &self.diagnostics {
            worst = worst.max((d.energy? - e0).abs());
        }
        Some(if e0 == 0.0 { worst } else { worst / e0.abs() })
    }

    /// Largest relative change of the L2 norm between consecutive steps,
    /// counting the initial field as step 0.
    pub fn max_step_norm_drift(&self, initial_norm: f64) -> f64 {
        let mut prev = initial_norm;
        let mut worst: f64 = 0.0;
        for d in &self.diagnostics {
            if prev > 0.0 {
                worst = worst.max((d.norm - prev).abs() / prev);
            }
            prev = d.norm;
        }
        worst
    }

    pub fn diagnostics_csv(&self) -> String {
        diagnostics_csv(&self.diagnostics)
    }
}

pub fn diagnostics_csv(rows: &[StepDiagnostic]) -> String {
    let mut out = String::from("step,time,norm,energy\n");
    for d in rows {
        let energy = d.energy.map(fmt_float).unwrap_or_default();
        out.push_str(&format!("{},{},{},{}\n", d.step, fmt_float(d.time), fmt_float(d.norm), energy));
    }
    out
}

/// Periodic second-order Laplacian of `src` written into `dst`.
pub(crate) fn laplacian(grid: &Grid, src: &[Complex64], dst: &mut [Complex64]) {
    let inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    let n = grid.points();
    if grid.dims() == 1 {
        for i in 0..n {
            let l = src[(i + n - 1) % n];
            let r = src[(i + 1) % n];
            dst[i] = (l - 2.0 * src[i] + r) * inv_h2;
        }
        return;
    }
    for (i, out) in dst.iter_mut().enumerate() {
        let mut acc = -6.0 * src[i];
        for axis in 0..3 {
            acc += src[grid.shifted(i, axis, 1)] + src[grid.shifted(i, axis, -1)];
        }
        *out = acc * inv_h2;
    }
}

/// Re <u, v> h^dims.
pub(crate) fn inner_re(grid: &Grid, u: &[Complex64], v: &[Complex64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a.conj() * b).re).sum::<f64>() * grid.cell_volume()
}

fn check_finite(values: &[Complex64], step: usize) -> Result<()> {
    if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::Numerical { step, detail: format!("non-finite value at index {i}") });
    }
    Ok(())
}
