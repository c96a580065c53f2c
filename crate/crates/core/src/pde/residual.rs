//! Residuals of the nonlinear, homogeneous and linear forms, and the
//! decomposition certificate tying the quadratic homogeneous equation to its
//! linear counterpart:
//!
//! ```text
//! A^2 a_jk psi_j psi_k + b psi^2
//!     = psi (A^2 a_jk psi_jk + b psi) - A^2 psi^2 a_jk d_j d_k ln psi
//! ```

use num_complex::Complex64;

use super::jet::{FieldStack, Jet};
use super::spec::{Form, LinearPdeSpec, PdeSpec};
use super::transform::quadratic_matrix;
use crate::error::{Error, Result};
use crate::grid::ScalarField;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn check_vars(n: usize, jet: &Jet) -> Result<()> {
    if jet.n_vars() != n {
        return Err(Error::invalid(format!(
            "jet has {} variables, equation has {n}",
            jet.n_vars()
        )));
    }
    Ok(())
}

/// Left-hand side of the equation at the jet's point. In original form the
/// jet is of `y`; in homogeneous form it is of `psi`.
pub fn residual_nonlinear(spec: &PdeSpec, jet: &Jet) -> Result<Complex64> {
    check_vars(spec.n(), jet)?;
    let m = spec.m();
    let psi = jet.value;
    let mut total = ZERO;
    for t in spec.terms() {
        let prod = t.indices().iter().fold(t.coeff(), |acc, &i| acc * jet.grad[i]);
        total += match spec.form() {
            Form::Original => prod,
            Form::Homogeneous { .. } => prod * psi.powu((m - t.degree()) as u32),
        };
    }
    total += match spec.form() {
        Form::Original => spec.b(),
        Form::Homogeneous { .. } => spec.b() * psi.powu(m as u32),
    };
    Ok(total)
}

pub fn residual_linear(lspec: &LinearPdeSpec, jet: &Jet) -> Result<Complex64> {
    check_vars(lspec.n(), jet)?;
    let hess = jet.hessian()?;
    let mut total = lspec.zeroth() * jet.value;
    for (j, row) in lspec.second_order().iter().enumerate() {
        for (k, &c) in row.iter().enumerate() {
            if c != ZERO {
                total += c * hess[j][k];
            }
        }
    }
    Ok(total)
}

/// Both sides of the decomposition and their relative mismatch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionCheck {
    /// `A^2 a_jk psi_j psi_k + b psi^2`.
    pub lhs: Complex64,
    /// `psi * linear_residual - log_term`.
    pub rhs: Complex64,
    pub linear_residual: Complex64,
    /// `A^2 psi^2 a_jk d_j d_k ln psi`.
    pub log_term: Complex64,
    /// `|lhs - rhs|` over the summed magnitudes of the individual terms.
    pub mismatch: f64,
}

pub fn decomposition_check(spec: &PdeSpec, a: Complex64, jet: &Jet) -> Result<DecompositionCheck> {
    check_vars(spec.n(), jet)?;
    jet.check_nonzero(0)?;
    let mat = quadratic_matrix(spec, a)?;
    let b = spec.b();
    let psi = jet.value;
    let hess = jet.hessian()?;
    let lh = jet.log_hessian()?;
    let psi2 = psi * psi;

    let mut quad = ZERO;
    let mut second = ZERO;
    let mut log_sum = ZERO;
    let mut scale = b.norm() * psi2.norm();
    for (j, row) in mat.iter().enumerate() {
        for (k, &c) in row.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            let gg = jet.grad[j] * jet.grad[k];
            quad += c * gg;
            second += c * hess[j][k];
            log_sum += c * lh[j][k];
            scale += c.norm() * (gg.norm() + (psi * hess[j][k]).norm());
        }
    }
    let lhs = quad + b * psi2;
    let linear_residual = second + b * psi;
    let log_term = psi2 * log_sum;
    let rhs = psi * linear_residual - log_term;
    let mismatch = if scale == 0.0 { 0.0 } else { (lhs - rhs).norm() / scale };
    Ok(DecompositionCheck { lhs, rhs, linear_residual, log_term, mismatch })
}

fn map_grid(
    stack: &FieldStack,
    f: impl Fn(usize) -> Result<Complex64>,
) -> Result<ScalarField> {
    let grid = *stack.grid();
    let values = (0..grid.len()).map(f).collect::<Result<Vec<_>>>()?;
    ScalarField::new(grid, values, stack.centre_time())
}

/// Pointwise nonlinear residual over a sampled field stack.
pub fn residual_nonlinear_field(spec: &PdeSpec, stack: &FieldStack) -> Result<ScalarField> {
    map_grid(stack, |i| residual_nonlinear(spec, &stack.jet(i, spec.n())?))
}

pub fn residual_linear_field(lspec: &LinearPdeSpec, stack: &FieldStack) -> Result<ScalarField> {
    map_grid(stack, |i| residual_linear(lspec, &stack.jet(i, lspec.n())?))
}

/// Largest relative mismatch of the decomposition over the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionSummary {
    pub max_mismatch: f64,
    pub worst_index: usize,
    pub max_abs_lhs: f64,
    pub max_abs_log_term: f64,
}

pub fn decomposition_field(spec: &PdeSpec, a: Complex64, stack: &FieldStack) -> Result<DecompositionSummary> {
    let mut out = DecompositionSummary { max_mismatch: 0.0, worst_index: 0, max_abs_lhs: 0.0, max_abs_log_term: 0.0 };
    for i in 0..stack.grid().len() {
        let jet = stack.jet_with_log_curvature(i, spec.n())?;
        let chk = decomposition_check(spec, a, &jet).map_err(|e| match e {
            Error::NearZeroField { magnitude, threshold, .. } => {
                Error::NearZeroField { index: i, magnitude, threshold }
            }
            other => other,
        })?;
        if chk.mismatch > out.max_mismatch {
            out.max_mismatch = chk.mismatch;
            out.worst_index = i;
        }
        out.max_abs_lhs = out.max_abs_lhs.max(chk.lhs.norm());
        out.max_abs_log_term = out.max_abs_log_term.max(chk.log_term.norm());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::kinematics::{dispersion_omega, PhysicalConstants, PlaneWave};
    use crate::pde::jet::{sample_stack, AnalyticField, ExpField};
    use crate::pde::spec::PdeTerm;
    use crate::pde::transform::{linearize, log_transform};
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn massive_homogeneous(consts: &PhysicalConstants) -> PdeSpec {
        log_transform(&PdeSpec::hamilton_jacobi(3, consts).unwrap(), consts.transform_constant()).unwrap()
    }

    #[test]
    fn on_shell_plane_wave_has_zero_residuals() {
        let consts = PhysicalConstants::new(1.0, 1.5, 0.8).unwrap();
        let spec = massive_homogeneous(&consts);
        let lin = linearize(&spec, consts.transform_constant()).unwrap();
        let k = [0.4, -1.0, 2.0];
        let w = PlaneWave::on_shell(c(1.0), k, &consts);
        let f = ExpField::plane_wave(&w, 3);
        let jet = f.jet(&[0.3, 1.1, -0.2, 0.7]);
        let scale = (consts.rest_energy().powi(2)) * jet.value.norm_sqr();
        assert!(residual_nonlinear(&spec, &jet).unwrap().norm() <= 1e-12 * scale);
        assert!(residual_linear(&lin, &jet).unwrap().norm() <= 1e-12 * scale);
    }

    #[test]
    fn off_shell_residual_is_the_quadratic_form() {
        // homogeneous residual of exp(i alpha.x) equals (A^2 a_jk (i alpha_j)(i alpha_k) + b) psi^2
        let consts = PhysicalConstants::natural();
        let a = consts.transform_constant();
        let spec = massive_homogeneous(&consts);
        let k = [1.0, 0.5, 0.0];
        let w = dispersion_omega(crate::vec3::norm(k), &consts);
        let alpha = [k[0], k[1], k[2], -(w + 0.1)];
        let f = ExpField::oscillatory(c(1.0), &alpha);
        let jet = f.jet(&[0.2, 0.4, 0.6, 0.8]);
        let res = residual_nonlinear(&spec, &jet).unwrap();
        let a2 = a * a;
        let diag = [-1.0, -1.0, -1.0, 1.0];
        let mut form = c(-1.0);
        for l in 0..4 {
            let ia = Complex64::new(0.0, alpha[l]);
            form += a2 * diag[l] * ia * ia;
        }
        let want = form * jet.value * jet.value;
        assert!((res - want).norm() <= 1e-10 * want.norm());
        assert!(res.norm() > 0.1);
    }

    #[test]
    fn constant_field_without_free_term() {
        let spec = PdeSpec::new(1, 2, vec![PdeTerm::new(vec![0, 0], c(3.0)).unwrap()], c(0.0)).unwrap();
        let h = log_transform(&spec, c(2.0)).unwrap();
        let jet = ExpField::new(c(1.0), vec![c(0.0)]).jet(&[0.7]);
        assert_eq!(residual_nonlinear(&h, &jet).unwrap(), c(0.0));
        assert_eq!(residual_linear(&linearize(&h, c(2.0)).unwrap(), &jet).unwrap(), c(0.0));
    }

    #[test]
    fn decomposition_exponential_hand_case() {
        // psi = e^x, a11 = 1, b = 0, A = 1
        let spec = PdeSpec::new(1, 2, vec![PdeTerm::new(vec![0, 0], c(1.0)).unwrap()], c(0.0)).unwrap();
        let x = 0.75;
        let jet = ExpField::new(c(1.0), vec![c(1.0)]).jet(&[x]);
        let chk = decomposition_check(&spec, c(1.0), &jet).unwrap();
        assert!((chk.lhs.re - (2.0 * x).exp()).abs() < 1e-14);
        assert!((chk.linear_residual.re - x.exp()).abs() < 1e-14);
        assert_eq!(chk.log_term, c(0.0));
        assert!(chk.mismatch < 1e-15);
    }

    #[test]
    fn decomposition_on_shell_plane_wave() {
        let consts = PhysicalConstants::natural();
        let spec = massive_homogeneous(&consts);
        let w = PlaneWave::on_shell(c(1.0), [1.0, 2.0, 2.0], &consts);
        let jet = ExpField::plane_wave(&w, 3).jet(&[0.1, 0.2, 0.3, 0.4]);
        let chk = decomposition_check(&spec, consts.transform_constant(), &jet).unwrap();
        assert!(chk.lhs.norm() < 1e-12 * 10.0);
        assert!(chk.rhs.norm() < 1e-12 * 10.0);
        assert_eq!(chk.log_term, c(0.0));
    }

    #[test]
    fn decomposition_rejects_zero_field() {
        let spec = PdeSpec::new(1, 2, vec![PdeTerm::new(vec![0, 0], c(1.0)).unwrap()], c(0.0)).unwrap();
        let jet = ExpField::new(c(0.0), vec![c(1.0)]).jet(&[0.0]);
        assert!(matches!(
            decomposition_check(&spec, c(1.0), &jet),
            Err(Error::NearZeroField { .. })
        ));
    }

    #[test]
    fn linear_residual_converges_at_second_order_on_grid() {
        let consts = PhysicalConstants::natural();
        let spec = PdeSpec::hamilton_jacobi(1, &consts).unwrap();
        let lin = linearize(&spec, consts.transform_constant()).unwrap();
        let w = PlaneWave::on_shell(c(1.0), [2.0, 0.0, 0.0], &consts);
        let f = ExpField::plane_wave(&w, 1);
        let mut errs = Vec::new();
        for n in [32usize, 64, 128, 256] {
            let g = Grid::new(1, n, 2.0 * PI).unwrap();
            let st = sample_stack(&f, g, 0.0, 0.5 * g.spacing(), 3).unwrap();
            let r = residual_linear_field(&lin, &st).unwrap();
            errs.push(r.max_abs());
        }
        for p in errs.windows(2) {
            let order = (p[0] / p[1]).log2();
            assert!((order - 2.0).abs() < 0.1, "order {order} from {errs:?}");
        }
    }

    #[test]
    fn residual_rejects_mismatched_variables() {
        let spec = PdeSpec::hamilton_jacobi(3, &PhysicalConstants::natural()).unwrap();
        let jet = ExpField::new(c(1.0), vec![c(0.0); 2]).jet(&[0.0, 0.0]);
        assert!(matches!(residual_nonlinear(&spec, &jet), Err(Error::InvalidArgument(_))));
    }
}
