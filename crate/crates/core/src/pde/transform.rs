//! The logarithmic substitution `y = A ln psi`, the quadratic dispersion
//! equation for plane waves, and the equivalent linear second-order PDE.

use num_complex::Complex64;

use super::spec::{Form, LinearPdeSpec, PdeSpec, PdeTerm};
use crate::error::{Error, Result};
use crate::vec3::Vec3;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Substitutes `y = A ln psi` into an equation in original form.
///
/// A degree-`j` term picks up `A^j` and becomes `A^j a psi^(m-j) prod psi_x`;
/// the free term `b` becomes the coefficient of `psi^m`.
pub fn log_transform(spec: &PdeSpec, a: Complex64) -> Result<PdeSpec> {
    if a == ZERO || !(a.re.is_finite() && a.im.is_finite()) {
        return Err(Error::invalid("transform constant A must be finite and nonzero"));
    }
    if spec.is_homogeneous() {
        return Err(Error::invalid("spec is already in homogeneous (transformed) form"));
    }
    let terms = spec
        .terms()
        .iter()
        .map(|t| PdeTerm::new(t.indices().to_vec(), t.coeff() * a.powu(t.degree() as u32)))
        .collect::<Result<Vec<_>>>()?;
    PdeSpec::with_form(
        spec.n(),
        spec.m(),
        terms,
        spec.b(),
        Form::Homogeneous { transform_constant: a },
    )
}

/// Dense matrix `A^2 a_jk` for a purely quadratic spec. Homogeneous specs
/// already carry the `A^2` factor; their constant must match `a`.
pub fn quadratic_matrix(spec: &PdeSpec, a: Complex64) -> Result<Vec<Vec<Complex64>>> {
    if spec.m() != 2 {
        return Err(Error::Unsupported(format!(
            "linearization and dispersion extraction need m = 2, got m = {}",
            spec.m()
        )));
    }
    if let Some(t) = spec.terms().iter().find(|t| t.degree() != 2) {
        return Err(Error::Unsupported(format!(
            "only degree-2 terms are supported here, found degree {}",
            t.degree()
        )));
    }
    let factor = match spec.form() {
        Form::Original => {
            if a == ZERO {
                return Err(Error::invalid("transform constant A must be nonzero"));
            }
            a * a
        }
        Form::Homogeneous { transform_constant } => {
            if transform_constant != a {
                return Err(Error::invalid(format!(
                    "spec was transformed with A = {transform_constant}, asked for A = {a}"
                )));
            }
            Complex64::new(1.0, 0.0)
        }
    };
    let n = spec.n();
    let mut mat = vec![vec![ZERO; n]; n];
    for t in spec.terms() {
        let (j, k) = (t.indices()[0], t.indices()[1]);
        mat[j][k] += factor * t.coeff();
    }
    Ok(mat)
}

/// `A^2 a_jk psi_jk + b psi = 0`, the linear equation sharing the plane-wave
/// solutions of the quadratic homogeneous equation.
pub fn linearize(spec: &PdeSpec, a: Complex64) -> Result<LinearPdeSpec> {
    LinearPdeSpec::new(quadratic_matrix(spec, a)?, spec.b())
}

/// Quadratic in the time component of the wave vector obtained by inserting
/// `psi = exp(i alpha_l x_l)` into the quadratic homogeneous equation, with
/// `alpha_1..3 = k` fixed and `alpha_4 = omega` unknown:
///
/// `leading omega^2 + linear omega + constant = 0`.
///
/// The roots are values of `alpha_4`, the coefficient of `t` in the
/// exponent. For the physical convention `exp(i(k.r - omega t))` negate them;
/// with no time-space cross terms the two roots are symmetric and the sign is
/// immaterial.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionQuadratic {
    pub leading: Complex64,
    pub linear: Complex64,
    pub constant: Complex64,
    pub roots: [Complex64; 2],
}

impl DispersionQuadratic {
    pub fn eval(&self, omega: Complex64) -> Complex64 {
        (self.leading * omega + self.linear) * omega + self.constant
    }

    /// The root with positive real part and negligible imaginary part.
    pub fn positive_real_root(&self) -> Option<f64> {
        self.roots
            .iter()
            .filter(|r| r.re > 0.0 && r.im.abs() <= 1e-12 * r.norm())
            .map(|r| r.re)
            .fold(None, |acc, r| Some(acc.map_or(r, |a: f64| a.max(r))))
    }
}

pub fn dispersion_quadratic(spec: &PdeSpec, a: Complex64, k: Vec3) -> Result<DispersionQuadratic> {
    if spec.n() != 4 {
        return Err(Error::Unsupported(format!(
            "dispersion extraction needs n = 4 (x, y, z, t), got n = {}",
            spec.n()
        )));
    }
    let mat = quadratic_matrix(spec, a)?;
    let t = 3;
    let leading = mat[t][t];
    let linear = (0..3)
        .map(|s| (mat[s][t] + mat[t][s]) * k[s])
        .fold(ZERO, |acc, v| acc + v);
    let mut constant = -spec.b();
    for j in 0..3 {
        for l in 0..3 {
            constant += mat[j][l] * (k[j] * k[l]);
        }
    }
    if leading == ZERO {
        let root = (linear != ZERO).then(|| -constant / linear);
        return Err(Error::DegenerateQuadratic { root });
    }
    Ok(DispersionQuadratic {
        leading,
        linear,
        constant,
        roots: quadratic_roots(leading, linear, constant),
    })
}

/// Roots of `a z^2 + b z + c` avoiding cancellation between `-b` and the
/// discriminant root. Requires `a != 0`.
fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    let sign = if (b.conj() * disc).re >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (b + sign * disc);
    if q == ZERO {
        return [ZERO, ZERO];
    }
    [q / a, c / q]
}
