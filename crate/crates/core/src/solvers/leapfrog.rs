//! Explicit centred stepping for second-order-in-time equations
//!
//! ```text
//! psi_tt = 2 i nu psi_t + c^2 lap psi - mu^2 psi
//! ```
//!
//! `nu = 0` is the wave / relativistic equation; `nu = mu_rest, mu = 0` is
//! the same equation with the rest-energy phase factored out.

use num_complex::Complex64;

use super::{check_finite, inner_re, laplacian, Scheme, SolveReport, SolverConfig, StepDiagnostic};
use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField};
use crate::kinematics::PhysicalConstants;

#[derive(Debug, Clone, Copy)]
struct Dynamics {
    c2: f64,
    mu2: f64,
    drift: f64,
}

/// Largest stable dt of the plain leapfrog step: `dt * Omega_max <= 2` with
/// `Omega_max^2 = 4 d c^2 / h^2 + mu^2`. In 1D this is
/// `h/c * (1 + (mu h / c)^2 / 4)^(-1/2)`.
pub fn leapfrog_stability_limit(grid: &Grid, c: f64, mu: f64) -> f64 {
    let h = grid.spacing();
    let spatial = 4.0 * grid.dims() as f64 * c * c / (h * h);
    2.0 / (spatial + mu * mu).sqrt()
}

/// Largest stable dt of the factored step, from
/// `4 d c^2 dt^2 / h^2 <= 2 + 2 sqrt(1 + mu^2 dt^2)`.
pub fn factored_stability_limit(grid: &Grid, c: f64, mu: f64) -> f64 {
    let h = grid.spacing();
    let a = 4.0 * grid.dims() as f64 * c * c / (h * h);
    2.0 * (a + mu * mu).sqrt() / a
}

fn check_stability(cfg: &SolverConfig, limit: f64) -> Result<()> {
    if cfg.stability_check && cfg.dt > limit * (1.0 + 1e-12) {
        return Err(Error::Stability(format!(
            "dt = {} exceeds the stable limit {limit}",
            cfg.dt
        )));
    }
    Ok(())
}

/// Evolves `psi_tt = c^2 lap psi` (mass ignored).
pub fn solve_wave(
    initial: &ScalarField,
    initial_rate: &ScalarField,
    consts: &PhysicalConstants,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    cfg.expect(Scheme::Leapfrog, "the wave equation")?;
    check_stability(cfg, leapfrog_stability_limit(initial.grid(), consts.c, 0.0))?;
    let dynamics = Dynamics { c2: consts.c * consts.c, mu2: 0.0, drift: 0.0 };
    run(initial, initial_rate, dynamics, cfg)
}

/// Evolves `psi_tt = c^2 lap psi - (m0 c^2 / hbar)^2 psi`.
pub fn solve_relativistic(
    initial: &ScalarField,
    initial_rate: &ScalarField,
    consts: &PhysicalConstants,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    cfg.expect(Scheme::Leapfrog, "the relativistic equation")?;
    let mu = consts.rest_frequency();
    check_stability(cfg, leapfrog_stability_limit(initial.grid(), consts.c, mu))?;
    let dynamics = Dynamics { c2: consts.c * consts.c, mu2: mu * mu, drift: 0.0 };
    run(initial, initial_rate, dynamics, cfg)
}

/// Evolves the slowly varying envelope `psi0 = psi exp(i m0 c^2 t / hbar)`,
/// which obeys `psi0_tt = 2 i mu psi0_t + c^2 lap psi0`.
pub fn solve_relativistic_factored(
    initial: &ScalarField,
    initial_rate: &ScalarField,
    consts: &PhysicalConstants,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    cfg.expect(Scheme::Leapfrog, "the factored relativistic equation")?;
    let mu = consts.rest_frequency();
    check_stability(cfg, factored_stability_limit(initial.grid(), consts.c, mu))?;
    let dynamics = Dynamics { c2: consts.c * consts.c, mu2: 0.0, drift: mu };
    run(initial, initial_rate, dynamics, cfg)
}

/// `c^2 lap psi - mu^2 psi`.
fn apply_operator(grid: &Grid, dynamics: Dynamics, psi: &[Complex64], out: &mut [Complex64]) {
    laplacian(grid, psi, out);
    for (o, p) in out.iter_mut().zip(psi) {
        *o = dynamics.c2 * *o - dynamics.mu2 * p;
    }
}

/// `|u - v|^2 / dt^2 - Re <u, L v>`, constant along exact leapfrog orbits.
fn staggered_energy(grid: &Grid, u: &[Complex64], v: &[Complex64], lv: &[Complex64], dt: f64) -> f64 {
    let kinetic: f64 = u.iter().zip(v).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() * grid.cell_volume();
    kinetic / (dt * dt) - inner_re(grid, u, lv)
}

fn run(
    initial: &ScalarField,
    initial_rate: &ScalarField,
    dynamics: Dynamics,
    cfg: &SolverConfig,
) -> Result<SolveReport> {
    initial.check_same_grid(initial_rate)?;
    check_finite(initial.values(), 0)?;
    check_finite(initial_rate.values(), 0)?;
    let grid = *initial.grid();
    let dt = cfg.dt;
    let t0 = initial.time();
    let n = grid.len();
    let drift = Complex64::new(0.0, dynamics.drift * dt);
    let (ahead, behind) = (1.0 - drift, 1.0 + drift);

    let mut prev = initial.values().to_vec();
    let mut op_prev = vec![Complex64::new(0.0, 0.0); n];
    apply_operator(&grid, dynamics, &prev, &mut op_prev);

    // Taylor start
    let rate = initial_rate.values();
    let two_i_nu = Complex64::new(0.0, 2.0 * dynamics.drift);
    let mut cur: Vec<Complex64> = (0..n)
        .map(|i| {
            let accel = if dynamics.drift == 0.0 { op_prev[i] } else { op_prev[i] + two_i_nu * rate[i] };
            prev[i] + dt * rate[i] + 0.5 * dt * dt * accel
        })
        .collect();
    check_finite(&cur, 1)?;

    let mut diagnostics = Vec::with_capacity(cfg.steps);
    let norm = |v: &[Complex64]| (v.iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.cell_volume()).sqrt();
    diagnostics.push(StepDiagnostic {
        step: 1,
        time: t0 + dt,
        norm: norm(&cur),
        energy: Some(staggered_energy(&grid, &cur, &prev, &op_prev, dt)),
    });

    let mut op_cur = vec![Complex64::new(0.0, 0.0); n];
    for step in 2..=cfg.steps {
        apply_operator(&grid, dynamics, &cur, &mut op_cur);
        let dt2 = dt * dt;
        if dynamics.drift == 0.0 {
            for i in 0..n {
                prev[i] = 2.0 * cur[i] - prev[i] + dt2 * op_cur[i];
            }
        } else {
            for i in 0..n {
                prev[i] = (2.0 * cur[i] - behind * prev[i] + dt2 * op_cur[i]) / ahead;
            }
        }
        // prev now holds the new level
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut op_prev, &mut op_cur);
        check_finite(&cur, step)?;
        diagnostics.push(StepDiagnostic {
            step,
            time: t0 + step as f64 * dt,
            norm: norm(&cur),
            energy: Some(staggered_energy(&grid, &cur, &prev, &op_prev, dt)),
        });
    }

    let final_field = ScalarField::new(grid, cur, t0 + cfg.steps as f64 * dt)?;
    Ok(SolveReport { final_field, diagnostics, measured_order: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::dispersion_omega;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plane(grid: Grid, k: f64, amp: Complex64) -> ScalarField {
        ScalarField::from_fn(grid, 0.0, |r| amp * c(0.0, k * r[0]).exp())
    }

    /// Max error of a plane wave run to time `t_end` at CFL number `cfl`.
    fn relativistic_error(points: usize, consts: &PhysicalConstants, k: f64, t_end: f64) -> f64 {
        let g = Grid::new(1, points, 2.0 * PI).unwrap();
        let omega = dispersion_omega(k, consts);
        let steps = ((t_end / (0.5 * g.spacing() / consts.c)).ceil()) as usize;
        let dt = t_end / steps as f64;
        let psi = plane(g, k, c(1.0, 0.0));
        let rate = psi.map(|v| c(0.0, -omega) * v);
        let cfg = SolverConfig::new(dt, steps, Scheme::Leapfrog).unwrap();
        let rep = solve_relativistic(&psi, &rate, consts, &cfg).unwrap();
        let exact = ScalarField::from_fn(g, t_end, |r| c(0.0, k * r[0] - omega * t_end).exp());
        rep.final_field.max_abs_diff(&exact).unwrap()
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = Grid::new(1, 16, 1.0).unwrap();
        let z = ScalarField::zeros(g, 0.0);
        let consts = PhysicalConstants::natural();
        let cfg = SolverConfig::new(0.01, 20, Scheme::Leapfrog).unwrap();
        let rep = solve_wave(&z, &z, &consts, &cfg).unwrap();
        assert_eq!(rep.diagnostics.len(), 20);
        assert!(rep.final_field.values().iter().all(|v| *v == c(0.0, 0.0)));
        assert!(rep.diagnostics.iter().all(|d| d.norm == 0.0 && d.energy == Some(0.0)));
    }

    #[test]
    fn standing_wave_returns_after_one_period() {
        let consts = PhysicalConstants::massless(1.0, 1.0);
        let k = 2.0;
        let mut errs = Vec::new();
        for n in [64usize, 128] {
            let g = Grid::new(1, n, 2.0 * PI).unwrap();
            let period = 2.0 * PI / (consts.c * k);
            let steps = (period / (0.5 * g.spacing())).ceil() as usize;
            let cfg = SolverConfig::new(period / steps as f64, steps, Scheme::Leapfrog).unwrap();
            let psi = ScalarField::from_fn(g, 0.0, |r| c((k * r[0]).sin(), 0.0));
            let rate = ScalarField::zeros(g, 0.0);
            let rep = solve_wave(&psi, &rate, &consts, &cfg).unwrap();
            errs.push(rep.final_field.max_abs_diff(&psi).unwrap());
        }
        // at least second order; the full period cancels part of the phase error
        for (e, n) in errs.iter().zip([64.0, 128.0]) {
            let h = 2.0 * PI / n;
            assert!(*e < h * h, "{errs:?}");
        }
    }

    #[test]
    fn traveling_wave_converges_at_second_order() {
        let consts = PhysicalConstants::massless(1.0, 1.0);
        let k = 3.0;
        let t_end = 1.0;
        let mut errs = Vec::new();
        for n in [64usize, 128, 256] {
            let g = Grid::new(1, n, 2.0 * PI).unwrap();
            let steps = (t_end / (0.5 * g.spacing())).ceil() as usize;
            let cfg = SolverConfig::new(t_end / steps as f64, steps, Scheme::Leapfrog).unwrap();
            let psi = plane(g, k, c(1.0, 0.0));
            let rate = psi.map(|v| c(0.0, -k) * v);
            let rep = solve_wave(&psi, &rate, &consts, &cfg).unwrap();
            let exact = ScalarField::from_fn(g, t_end, |r| c(0.0, k * (r[0] - t_end)).exp());
            errs.push(rep.final_field.max_abs_diff(&exact).unwrap());
        }
        for p in errs.windows(2) {
            assert!(((p[0] / p[1]).log2() - 2.0).abs() < 0.1, "{errs:?}");
        }
    }

    #[test]
    fn relativistic_plane_wave_converges_at_second_order() {
        let consts = PhysicalConstants::natural();
        let errs: Vec<f64> = [64, 128, 256].iter().map(|&n| relativistic_error(n, &consts, 2.0, 1.0)).collect();
        for p in errs.windows(2) {
            assert!(((p[0] / p[1]).log2() - 2.0).abs() < 0.1, "{errs:?}");
        }
    }

    #[test]
    fn massless_relativistic_matches_wave_bit_for_bit() {
        let consts = PhysicalConstants::massless(1.0, 1.3);
        let g = Grid::new(1, 32, 2.0 * PI).unwrap();
        let psi = ScalarField::from_fn(g, 0.2, |r| c(r[0].sin(), (2.0 * r[0]).cos()));
        let rate = ScalarField::from_fn(g, 0.2, |r| c(0.1 * r[0], -0.3));
        let cfg = SolverConfig::new(0.05, 50, Scheme::Leapfrog).unwrap();
        let a = solve_wave(&psi, &rate, &consts, &cfg).unwrap();
        let b = solve_relativistic(&psi, &rate, &consts, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rest_mode_rotates_at_rest_frequency() {
        let consts = PhysicalConstants::new(1.0, 1.0, 2.0).unwrap();
        let mu = consts.rest_frequency();
        let g = Grid::new(1, 16, 2.0 * PI).unwrap();
        let one = ScalarField::from_fn(g, 0.0, |_| c(1.0, 0.0));
        let rate = one.map(|v| c(0.0, -mu) * v);
        let mut errs = Vec::new();
        for steps in [200usize, 400] {
            let dt = 1.0 / steps as f64;
            let cfg = SolverConfig::new(dt, steps, Scheme::Leapfrog).unwrap();
            let rep = solve_relativistic(&one, &rate, &consts, &cfg).unwrap();
            let want = c(0.0, -mu).exp();
            let v = rep.final_field.values();
            assert!(v.iter().all(|z| (z - v[0]).norm() < 1e-13));
            errs.push((v[0] - want).norm());
        }
        assert!(errs[0] < 1e-3);
        assert!(((errs[0] / errs[1]).log2() - 2.0).abs() < 0.1);
    }

    #[test]
    fn energy_is_conserved_over_long_runs() {
        let consts = PhysicalConstants::natural();
        let g = Grid::new(1, 64, 2.0 * PI).unwrap();
        let limit = leapfrog_stability_limit(&g, consts.c, consts.rest_frequency());
        let psi = ScalarField::from_fn(g, 0.0, |r| c((r[0]).cos(), 0.5 * (3.0 * r[0]).sin()));
        let rate = ScalarField::from_fn(g, 0.0, |r| c(0.0, (2.0 * r[0]).cos()));
        let cfg = SolverConfig::new(0.5 * limit, 10_000, Scheme::Leapfrog).unwrap();
        let rep = solve_relativistic(&psi, &rate, &consts, &cfg).unwrap();
        assert!(rep.energy_drift().unwrap() < 1e-6);
    }

    #[test]
    fn cfl_violation_is_reported_before_stepping() {
        let consts = PhysicalConstants::massless(1.0, 1.0);
        let g = Grid::new(1, 32, 2.0 * PI).unwrap();
        let z = ScalarField::zeros(g, 0.0);
        let cfg = SolverConfig::new(1.01 * g.spacing(), 5, Scheme::Leapfrog).unwrap();
        assert!(matches!(solve_wave(&z, &z, &consts, &cfg), Err(Error::Stability(_))));
        let at_limit = SolverConfig::new(g.spacing(), 5, Scheme::Leapfrog).unwrap();
        assert!(solve_wave(&z, &z, &consts, &at_limit).is_ok());
        let massive = PhysicalConstants::natural();
        assert!(matches!(solve_relativistic(&z, &z, &massive, &at_limit), Err(Error::Stability(_))));
        let cn = SolverConfig::new(0.1, 5, Scheme::CrankNicolson).unwrap();
        assert!(matches!(solve_wave(&z, &z, &consts, &cn), Err(Error::Unsupported(_))));
    }

    #[test]
    fn stability_limit_matches_closed_form_in_one_dimension() {
        let g = Grid::new(1, 32, 3.0).unwrap();
        let (cc, mu) = (2.0, 5.0);
        let h = g.spacing();
        let want = h / cc / (1.0 + (mu * h / cc).powi(2) / 4.0).sqrt();
        assert!((leapfrog_stability_limit(&g, cc, mu) - want).abs() < 1e-15);
        assert!((factored_stability_limit(&g, cc, 0.0) - h / cc).abs() < 1e-15);
    }

    #[test]
    fn unstable_run_blows_up_without_the_check() {
        let consts = PhysicalConstants::massless(1.0, 1.0);
        let g = Grid::new(1, 32, 2.0 * PI).unwrap();
        let psi = ScalarField::from_fn(g, 0.0, |r| c(r[0].sin() + 1e-3 * (16.0 * r[0]).cos(), 0.0));
        let z = ScalarField::zeros(g, 0.0);
        let cfg = SolverConfig::new(1.5 * g.spacing(), 2000, Scheme::Leapfrog)
            .unwrap()
            .without_stability_check();
        match solve_wave(&psi, &z, &consts, &cfg) {
            Err(Error::Numerical { .. }) => {}
            Ok(rep) => assert!(rep.final_field.max_abs() > 1e6),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn factored_plane_wave_tracks_kinetic_phase() {
        let consts = PhysicalConstants::new(1.0, 4.0, 1.0).unwrap();
        let mu = consts.rest_frequency();
        let k = 1.0;
        let nu = dispersion_omega(k, &consts) - mu;
        let t_end = 1.0;
        let mut errs = Vec::new();
        for n in [32usize, 64, 128] {
            let g = Grid::new(1, n, 2.0 * PI).unwrap();
            let limit = factored_stability_limit(&g, consts.c, mu);
            let steps = (t_end / (0.5 * limit)).ceil() as usize;
            let cfg = SolverConfig::new(t_end / steps as f64, steps, Scheme::Leapfrog).unwrap();
            let psi = plane(g, k, c(1.0, 0.0));
            let rate = psi.map(|v| c(0.0, -nu) * v);
            let rep = solve_relativistic_factored(&psi, &rate, &consts, &cfg).unwrap();
            let exact = ScalarField::from_fn(g, t_end, |r| c(0.0, k * r[0] - nu * t_end).exp());
            errs.push(rep.final_field.max_abs_diff(&exact).unwrap());
            assert!(rep.energy_drift().unwrap() < 1e-9);
        }
        for p in errs.windows(2) {
            assert!(((p[0] / p[1]).log2() - 2.0).abs() < 0.15, "{errs:?}");
        }
    }

    #[test]
    fn factored_and_full_equation_agree() {
        let consts = PhysicalConstants::new(1.0, 2.0, 1.0).unwrap();
        let mu = consts.rest_frequency();
        let g = Grid::new(1, 64, 2.0 * PI).unwrap();
        let k = 1.0;
        let omega = dispersion_omega(k, &consts);
        let psi = plane(g, k, c(1.0, 0.0));
        let t_end = 0.5;
        let steps = 2000;
        let cfg = SolverConfig::new(t_end / steps as f64, steps, Scheme::Leapfrog).unwrap();
        let full = solve_relativistic(&psi, &psi.map(|v| c(0.0, -omega) * v), &consts, &cfg).unwrap();
        let env = solve_relativistic_factored(&psi, &psi.map(|v| c(0.0, mu - omega) * v), &consts, &cfg).unwrap();
        let restored = env.final_field.map(|v| v * c(0.0, -mu * t_end).exp());
        assert!(restored.max_abs_diff(&full.final_field).unwrap() < 1e-4);
    }
}
