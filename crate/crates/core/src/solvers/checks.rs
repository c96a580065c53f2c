//! Grid checks: Hamilton-Jacobi residuals, momentum and energy eigenvalue
//! relations, and curvature of `ln psi`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, Region, ScalarField};
use crate::kinematics::PhysicalConstants;
use crate::pde::jet::{AnalyticField, FieldStack, Jet, NEAR_ZERO_REL};
use crate::vec3::Vec3;

/// `(S_t + phi)^2 - c^2 |grad S|^2 - m0^2 c^4` from a jet with time last.
fn hje_from_jet(jet: &Jet, phi: f64, consts: &PhysicalConstants, massless: bool) -> Complex64 {
    let t = jet.n_vars() - 1;
    let st = jet.grad[t] + phi;
    let grad2: Complex64 = jet.grad[..t].iter().map(|g| g * g).sum();
    let rest = if massless { 0.0 } else { consts.rest_energy().powi(2) };
    st * st - consts.c * consts.c * grad2 - rest
}

/// Residual at a single point; the jet's last variable is time.
pub fn hje_residual_jet(jet: &Jet, consts: &PhysicalConstants, massless: bool) -> Complex64 {
    hje_from_jet(jet, 0.0, consts, massless)
}

/// Residual of a closed-form action over a grid at time `t`, with exact
/// derivatives.
pub fn hje_residual_analytic(
    action: &dyn AnalyticField,
    grid: Grid,
    t: f64,
    consts: &PhysicalConstants,
    massless: bool,
) -> Result<ScalarField> {
    let d = grid.dims();
    if action.n_vars() != d + 1 {
        return Err(Error::invalid(format!(
            "action has {} variables, a {d}D grid needs {}",
            action.n_vars(),
            d + 1
        )));
    }
    let mut x = vec![0.0; d + 1];
    x[d] = t;
    Ok(ScalarField::from_fn(grid, t, |r| {
        x[..d].copy_from_slice(&r[..d]);
        hje_residual_jet(&action.jet(&x), consts, massless)
    }))
}

/// Pointwise residual of the free Hamilton-Jacobi equation from sampled
/// time levels. With two levels the result sits at the half step.
pub fn hje_residual(stack: &FieldStack, consts: &PhysicalConstants, massless: bool) -> Result<ScalarField> {
    hje_residual_with_potential(stack, consts, massless, |_| 0.0)
}

pub(crate) fn hje_residual_with_potential(
    stack: &FieldStack,
    consts: &PhysicalConstants,
    massless: bool,
    potential: impl Fn(Vec3) -> f64,
) -> Result<ScalarField> {
    let grid = *stack.grid();
    let n = grid.dims() + 1;
    let values = (0..grid.len())
        .map(|i| Ok(hje_from_jet(&stack.jet(i, n)?, potential(grid.coords(i)), consts, massless)))
        .collect::<Result<Vec<_>>>()?;
    ScalarField::new(grid, values, stack.centre_time())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenDefects {
    /// max |(hbar/i) grad psi - p psi| / max |psi|
    pub momentum: f64,
    /// max |i hbar psi_t - E psi| / max |psi|
    pub energy: f64,
}

fn near_zero(stack: &FieldStack, i: usize, value: Complex64) -> Result<()> {
    let magnitude = value.norm();
    let threshold = NEAR_ZERO_REL * stack.scale();
    if magnitude == 0.0 || magnitude < threshold {
        return Err(Error::NearZeroField { index: i, magnitude, threshold });
    }
    Ok(())
}

/// Momentum and energy eigenvalue defects from two or three time levels.
pub fn eigen_checks(
    stack: &FieldStack,
    momentum: Vec3,
    energy: f64,
    consts: &PhysicalConstants,
) -> Result<EigenDefects> {
    let grid = *stack.grid();
    let d = grid.dims();
    let hbar = consts.hbar;
    let minus_i_hbar = Complex64::new(0.0, -hbar);
    let i_hbar = Complex64::new(0.0, hbar);
    let mut out = EigenDefects { momentum: 0.0, energy: 0.0 };
    for i in 0..grid.len() {
        let jet = stack.jet(i, d + 1)?;
        near_zero(stack, i, jet.value)?;
        let mut sq = 0.0;
        for (a, &p) in momentum.iter().enumerate() {
            let derivative = if a < d { minus_i_hbar * jet.grad[a] } else { Complex64::new(0.0, 0.0) };
            sq += (derivative - p * jet.value).norm_sqr();
        }
        out.momentum = out.momentum.max(sq.sqrt());
        out.energy = out.energy.max((i_hbar * jet.grad[d] - energy * jet.value).norm());
    }
    let scale = stack.scale();
    out.momentum /= scale;
    out.energy /= scale;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogCurvatureDefects {
    /// Largest |d^2 ln psi / dx_a^2| over spatial axes and points.
    pub space: f64,
    /// Largest |d^2 ln psi / dt^2|.
    pub time: f64,
}

/// Second derivatives of `ln psi` as `(psi psi'' - psi'^2) / psi^2` with
/// central differences, on the middle of three time levels.
pub fn log_curvature_check(stack: &FieldStack, region: Region) -> Result<LogCurvatureDefects> {
    if stack.levels().len() != 3 {
        return Err(Error::InsufficientData(format!(
            "log curvature needs three time levels, got {}",
            stack.levels().len()
        )));
    }
    let grid = *stack.grid();
    let d = grid.dims();
    let mut out = LogCurvatureDefects { space: 0.0, time: 0.0 };
    for i in (0..grid.len()).filter(|&i| region.contains(&grid, i)) {
        let jet = stack.jet(i, d + 1)?;
        near_zero(stack, i, jet.value)?;
        let hess = jet.hessian()?;
        let v2 = jet.value * jet.value;
        let curvature = |a: usize| ((jet.value * hess[a][a] - jet.grad[a] * jet.grad[a]) / v2).norm();
        for a in 0..d {
            out.space = out.space.max(curvature(a));
        }
        out.time = out.time.max(curvature(d));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{dispersion_omega, PlaneWave};
    use crate::pde::jet::{sample_stack, AffineField, ExpField};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn particle_and_wave_solutions_of_the_massless_equation() {
        let consts = PhysicalConstants::massless(1.0, 2.0);
        let g = Grid::new(1, 16, 2.0 * PI).unwrap();
        let (p, e) = (1.5, 1.5 * consts.c);
        let particle = AffineField::particle_action(e, [p, 0.0, 0.0], 1);
        let r = hje_residual_analytic(&particle, g, 0.7, &consts, true).unwrap();
        assert!(r.max_abs() <= 1e-12 * e * e);
        let k = 2.0;
        let wave = ExpField::plane_wave(&PlaneWave::new(c(0.8, 0.3), [k, 0.0, 0.0], consts.c * k), 1);
        let r = hje_residual_analytic(&wave, g, 0.7, &consts, true).unwrap();
        assert!(r.max_abs() <= 1e-12 * (consts.c * k).powi(2));
    }

    #[test]
    fn off_shell_witness_gives_minus_one() {
        let consts = PhysicalConstants::natural();
        let g = Grid::new(1, 8, 1.0).unwrap();
        let s = AffineField::particle_action(1.0, [1.0, 0.0, 0.0], 1);
        let r = hje_residual_analytic(&s, g, 0.3, &consts, false).unwrap();
        assert!(r.values().iter().all(|v| *v == c(-1.0, 0.0)));
        let st = sample_stack(&s, g, 0.0, 0.1, 2).unwrap();
        let r = hje_residual(&st, &consts, false).unwrap();
        // S is not periodic, so the wrapped stencils at the ends are skipped
        for (i, v) in r.values().iter().enumerate().filter(|(i, _)| g.is_interior(*i, 1)) {
            assert!((v - c(-1.0, 0.0)).norm() < 1e-12, "{i}: {v}");
        }
    }

    #[test]
    fn sampled_action_needs_a_time_companion() {
        let consts = PhysicalConstants::natural();
        let g = Grid::new(1, 8, 1.0).unwrap();
        let s = AffineField::particle_action(1.0, [1.0, 0.0, 0.0], 1);
        let st = sample_stack(&s, g, 0.0, 0.1, 1).unwrap();
        assert!(matches!(hje_residual(&st, &consts, false), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn eigen_defects_converge_and_detect_wrong_momentum() {
        let consts = PhysicalConstants::natural();
        let k = 2.0;
        let w = PlaneWave::on_shell(c(1.0, 0.0), [k, 0.0, 0.0], &consts);
        let f = ExpField::plane_wave(&w, 1);
        let (p, e) = ([consts.hbar * k, 0.0, 0.0], consts.hbar * w.omega);
        let mut prev: Option<EigenDefects> = None;
        for n in [64usize, 128, 256] {
            let g = Grid::new(1, n, 2.0 * PI).unwrap();
            let st = sample_stack(&f, g, 0.1, 0.5 * g.spacing(), 2).unwrap();
            let d = eigen_checks(&st, p, e, &consts).unwrap();
            if let Some(q) = prev {
                assert!(((q.momentum / d.momentum).log2() - 2.0).abs() < 0.1);
                assert!(((q.energy / d.energy).log2() - 2.0).abs() < 0.1);
            }
            prev = Some(d);
            let wrong = eigen_checks(&st, [p[0] + 0.25, 0.0, 0.0], e, &consts).unwrap();
            assert!((wrong.momentum - 0.25).abs() < d.momentum + 1e-12);
        }
    }

    #[test]
    fn constant_field_has_no_defects() {
        let consts = PhysicalConstants::natural();
        let g = Grid::new(3, 8, 1.0).unwrap();
        let one = ExpField::new(c(1.0, 0.0), vec![c(0.0, 0.0); 4]);
        let st = sample_stack(&one, g, 0.0, 0.1, 3).unwrap();
        let d = eigen_checks(&st, [0.0; 3], 0.0, &consts).unwrap();
        assert_eq!((d.momentum, d.energy), (0.0, 0.0));
        let l = log_curvature_check(&st, Region::Full).unwrap();
        assert_eq!((l.space, l.time), (0.0, 0.0));
    }

    #[test]
    fn log_curvature_of_plane_wave_is_second_order_small() {
        let consts = PhysicalConstants::natural();
        let k = 3.0;
        let w = PlaneWave::new(c(1.0, 0.0), [k, 0.0, 0.0], dispersion_omega(k, &consts));
        let f = ExpField::plane_wave(&w, 1);
        let mut errs = Vec::new();
        for n in [64usize, 128, 256] {
            let g = Grid::new(1, n, 2.0 * PI).unwrap();
            let st = sample_stack(&f, g, 0.0, 0.5 * g.spacing(), 3).unwrap();
            errs.push(log_curvature_check(&st, Region::Full).unwrap());
        }
        for p in errs.windows(2) {
            assert!(((p[0].space / p[1].space).log2() - 2.0).abs() < 0.1);
            assert!(((p[0].time / p[1].time).log2() - 2.0).abs() < 0.1);
        }
    }

    #[test]
    fn gaussian_growth_has_curvature_two() {
        let g = Grid::new(1, 64, 2.0).unwrap();
        let levels = (0..3)
            .map(|l| ScalarField::from_fn(g, l as f64 * 0.1, |r| c((r[0] - 1.0).powi(2), 0.0).exp()))
            .collect();
        let st = FieldStack::new(levels, 0.1).unwrap();
        let l = log_curvature_check(&st, Region::Interior).unwrap();
        assert!((l.space - 2.0).abs() < 1e-2, "{}", l.space);
        assert_eq!(l.time, 0.0);
    }

    #[test]
    fn zero_crossing_is_an_error() {
        let g = Grid::new(1, 16, 2.0 * PI).unwrap();
        let levels = (0..3).map(|l| ScalarField::from_fn(g, l as f64, |r| c(r[0].sin(), 0.0))).collect();
        let st = FieldStack::new(levels, 1.0).unwrap();
        assert!(matches!(log_curvature_check(&st, Region::Full), Err(Error::NearZeroField { .. })));
        let consts = PhysicalConstants::natural();
        assert!(matches!(eigen_checks(&st, [0.0; 3], 0.0, &consts), Err(Error::NearZeroField { .. })));
    }
}
