use std::f64::consts::PI;

use hjwave::kinematics::PlaneWave;
use hjwave::limits::{run_limit_study, LimitStudyConfig};
use hjwave::pde::{linearize, residual_linear_field, sample_stack, ExpField, PdeSpec};
use hjwave::solvers::{solve_relativistic, Scheme, SolverConfig};
use hjwave::{Grid, PhysicalConstants, ScalarField};
use num_complex::Complex64;

fn consts() -> PhysicalConstants {
    PhysicalConstants::new(1.5, 2.0, 0.75).unwrap()
}

fn linear_residual(n: usize) -> f64 {
    let c = consts();
    let json = PdeSpec::hamilton_jacobi(1, &c).unwrap().to_json();
    let spec = PdeSpec::from_json(&json).unwrap();
    let lin = linearize(&spec, Complex64::new(0.0, -c.hbar)).unwrap();
    let wave = PlaneWave::on_shell(Complex64::new(1.0, 0.0), [3.0, 0.0, 0.0], &c);
    let grid = Grid::new(1, n, 2.0 * PI).unwrap();
    let stack = sample_stack(&ExpField::plane_wave(&wave, 1), grid, 0.0, 0.5 * grid.spacing(), 3).unwrap();
    let r = residual_linear_field(&lin, &stack).unwrap();
    r.values().iter().map(|v| v.norm()).fold(0.0, f64::max)
}

#[test]
fn linearized_equation_annihilates_on_shell_waves_at_second_order() {
    let coarse = linear_residual(64);
    let fine = linear_residual(128);
    assert!(coarse > 0.0);
    assert!(((coarse / fine).log2() - 2.0).abs() < 0.05, "{coarse} {fine}");
}

#[test]
fn leapfrog_tracks_analytic_plane_wave() {
    let c = consts();
    let grid = Grid::new(1, 128, 2.0 * PI).unwrap();
    let wave = PlaneWave::on_shell(Complex64::new(1.0, 0.0), [2.0, 0.0, 0.0], &c);
    let at = |t: f64| ScalarField::from_fn(grid, t, |r| wave.eval(r, t));
    let psi0 = at(0.0);
    let rate = psi0.map(|v| Complex64::new(0.0, -wave.omega) * v);
    let dt = 0.002;
    let steps = 500;
    let out = solve_relativistic(&psi0, &rate, &c, &SolverConfig::new(dt, steps, Scheme::Leapfrog).unwrap()).unwrap();
    let exact = at(dt * steps as f64);
    let err = out.final_field.max_abs_diff(&exact).unwrap();
    assert!(err < 0.05, "{err}");
    assert!(out.energy_drift().unwrap() < 1e-9);
}

#[test]
fn default_limit_study_is_reproducible() {
    let cfg = LimitStudyConfig::default();
    let a = run_limit_study(&cfg).unwrap();
    let b = run_limit_study(&cfg).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_eq!(a.summary_json(), b.summary_json());
    assert!(a.to_csv().starts_with("c,freq_gap,field_gap,x_param\n"));
    assert_eq!(a.rows.len(), cfg.c_values.len());
}
