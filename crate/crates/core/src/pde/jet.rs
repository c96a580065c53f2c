//! Local derivative data ("jets") of a field at a point, from closed-form
//! fields or from second-order central differences on sampled fields.
//!
//! Variables are ordered spatial axes first, time last. A field stack with
//! one level has no time variable; with two levels derivatives are centred
//! at the half step and only first time derivatives exist; with three levels
//! everything is centred on the middle level.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Grid, ScalarField};
use crate::kinematics::PlaneWave;

/// |psi| below this fraction of the field scale counts as a zero.
pub const NEAR_ZERO_REL: f64 = 1e-12;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: Complex64,
    pub grad: Vec<Complex64>,
    pub hess: Option<Vec<Vec<Complex64>>>,
    /// Second derivatives of `ln psi`.
    pub log_hess: Option<Vec<Vec<Complex64>>>,
    /// Magnitude the near-zero test is relative to.
    pub scale: f64,
}

impl Jet {
    pub fn n_vars(&self) -> usize {
        self.grad.len()
    }

    pub fn hessian(&self) -> Result<&[Vec<Complex64>]> {
        self.hess
            .as_deref()
            .ok_or_else(|| Error::InsufficientData("second derivatives need three time levels".into()))
    }

    pub fn log_hessian(&self) -> Result<&[Vec<Complex64>]> {
        self.log_hess
            .as_deref()
            .ok_or_else(|| Error::InsufficientData("log curvature needs three time levels".into()))
    }

    pub fn check_nonzero(&self, index: usize) -> Result<()> {
        let magnitude = self.value.norm();
        let threshold = NEAR_ZERO_REL * self.scale;
        if magnitude == 0.0 || magnitude < threshold {
            return Err(Error::NearZeroField { index, magnitude, threshold });
        }
        Ok(())
    }
}

/// (psi psi_jk - psi_j psi_k) / psi^2.
pub fn log_hessian_from(value: Complex64, grad: &[Complex64], hess: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let v2 = value * value;
    (0..grad.len())
        .map(|j| {
            (0..grad.len())
                .map(|k| (value * hess[j][k] - grad[j] * grad[k]) / v2)
                .collect()
        })
        .collect()
}

/// A closed-form field with exact derivatives.
pub trait AnalyticField {
    fn n_vars(&self) -> usize;
    fn jet(&self, x: &[f64]) -> Jet;
}

/// `amplitude * exp(sum_l rates_l x_l)`. Plane waves have purely imaginary rates.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpField {
    pub amplitude: Complex64,
    pub rates: Vec<Complex64>,
}

impl ExpField {
    pub fn new(amplitude: Complex64, rates: Vec<Complex64>) -> Self {
        Self { amplitude, rates }
    }

    /// `exp(i alpha . x)`, the oscillatory family of the dispersion analysis.
    pub fn oscillatory(amplitude: Complex64, alpha: &[f64]) -> Self {
        Self {
            amplitude,
            rates: alpha.iter().map(|&a| Complex64::new(0.0, a)).collect(),
        }
    }

    /// Space-time plane wave `A exp(i(k.r - omega t))` over the first
    /// `space_dims` components of `k`, time last.
    pub fn plane_wave(wave: &PlaneWave, space_dims: usize) -> Self {
        let mut rates: Vec<Complex64> = wave.k[..space_dims]
            .iter()
            .map(|&k| Complex64::new(0.0, k))
            .collect();
        rates.push(Complex64::new(0.0, -wave.omega));
        Self { amplitude: wave.amplitude, rates }
    }

    pub fn value(&self, x: &[f64]) -> Complex64 {
        let e: Complex64 = self.rates.iter().zip(x).map(|(r, &xi)| r * xi).sum();
        self.amplitude * e.exp()
    }
}

impl AnalyticField for ExpField {
    fn n_vars(&self) -> usize {
        self.rates.len()
    }

    fn jet(&self, x: &[f64]) -> Jet {
        let value = self.value(x);
        let n = self.rates.len();
        let grad = self.rates.iter().map(|r| r * value).collect();
        let hess = (0..n)
            .map(|j| (0..n).map(|k| self.rates[j] * self.rates[k] * value).collect())
            .collect();
        Jet {
            value,
            grad,
            hess: Some(hess),
            log_hess: Some(vec![vec![ZERO; n]; n]),
            scale: value.norm(),
        }
    }
}

/// Superposition of exponential modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SumField {
    pub modes: Vec<ExpField>,
}

impl AnalyticField for SumField {
    fn n_vars(&self) -> usize {
        self.modes.first().map_or(0, |m| m.rates.len())
    }

    fn jet(&self, x: &[f64]) -> Jet {
        let n = self.n_vars();
        let mut value = ZERO;
        let mut grad = vec![ZERO; n];
        let mut hess = vec![vec![ZERO; n]; n];
        for mode in &self.modes {
            let j = mode.jet(x);
            value += j.value;
            for a in 0..n {
                grad[a] += j.grad[a];
                for b in 0..n {
                    hess[a][b] += j.hess.as_ref().unwrap()[a][b];
                }
            }
        }
        let log_hess = log_hessian_from(value, &grad, &hess);
        Jet {
            value,
            grad,
            hess: Some(hess),
            log_hess: Some(log_hess),
            scale: self.modes.iter().map(|m| m.amplitude.norm()).sum(),
        }
    }
}

/// `constant + gradient . x`, e.g. the particle-like action `-E t + p.r`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineField {
    pub constant: Complex64,
    pub gradient: Vec<Complex64>,
}

impl AffineField {
    /// `-E t + p.r` over the first `space_dims` momentum components, time last.
    pub fn particle_action(energy: f64, momentum: [f64; 3], space_dims: usize) -> Self {
        let mut gradient: Vec<Complex64> = momentum[..space_dims]
            .iter()
            .map(|&p| Complex64::new(p, 0.0))
            .collect();
        gradient.push(Complex64::new(-energy, 0.0));
        Self { constant: ZERO, gradient }
    }

    pub fn value(&self, x: &[f64]) -> Complex64 {
        self.constant + self.gradient.iter().zip(x).map(|(g, &xi)| g * xi).sum::<Complex64>()
    }
}

impl AnalyticField for AffineField {
    fn n_vars(&self) -> usize {
        self.gradient.len()
    }

    fn jet(&self, x: &[f64]) -> Jet {
        let n = self.gradient.len();
        let value = self.value(x);
        let hess = vec![vec![ZERO; n]; n];
        let log_hess = log_hessian_from(value, &self.gradient, &hess);
        Jet {
            value,
            grad: self.gradient.clone(),
            hess: Some(hess),
            log_hess: Some(log_hess),
            scale: value.norm(),
        }
    }
}

/// One to three consecutive time levels of a field, `dt` apart.
#[derive(Debug, Clone)]
pub struct FieldStack {
    levels: Vec<ScalarField>,
    dt: f64,
    scale: f64,
}

impl FieldStack {
    pub fn new(levels: Vec<ScalarField>, dt: f64) -> Result<Self> {
        if levels.is_empty() || levels.len() > 3 {
            return Err(Error::invalid(format!(
                "a field stack holds 1 to 3 time levels, got {}",
                levels.len()
            )));
        }
        for l in &levels[1..] {
            levels[0].check_same_grid(l)?;
        }
        if levels.len() > 1 && !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid(format!("time step must be > 0, got {dt}")));
        }
        let scale = levels.iter().map(|l| l.max_abs()).fold(0.0, f64::max);
        Ok(Self { levels, dt, scale })
    }

    pub fn single(field: ScalarField) -> Self {
        let scale = field.max_abs();
        Self { levels: vec![field], dt: 0.0, scale }
    }

    pub fn grid(&self) -> &Grid {
        self.levels[0].grid()
    }

    pub fn levels(&self) -> &[ScalarField] {
        &self.levels
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Time at which jets are centred.
    pub fn centre_time(&self) -> f64 {
        match self.levels.len() {
            1 => self.levels[0].time(),
            2 => 0.5 * (self.levels[0].time() + self.levels[1].time()),
            _ => self.levels[1].time(),
        }
    }

    /// Whether `n_vars` includes time as the last variable.
    pub fn has_time_variable(&self, n_vars: usize) -> Result<bool> {
        let d = self.grid().dims();
        if n_vars == d {
            Ok(false)
        } else if n_vars == d + 1 {
            if self.levels.len() < 2 {
                return Err(Error::InsufficientData(
                    "time derivatives need at least two time levels".into(),
                ));
            }
            Ok(true)
        } else {
            Err(Error::invalid(format!(
                "{n_vars} variables do not fit a {d}D grid (expected {d} or {})",
                d + 1
            )))
        }
    }

    /// Value at the centre time (half-step average for two levels).
    pub fn centre_value(&self, i: usize) -> Complex64 {
        match self.levels.len() {
            1 => self.levels[0].values()[i],
            2 => 0.5 * (self.levels[0].values()[i] + self.levels[1].values()[i]),
            _ => self.levels[1].values()[i],
        }
    }

    fn check_sample(&self, level: &ScalarField, i: usize) -> Result<()> {
        let magnitude = level.values()[i].norm();
        let threshold = NEAR_ZERO_REL * self.scale;
        if magnitude == 0.0 || magnitude < threshold {
            return Err(Error::NearZeroField { index: i, magnitude, threshold });
        }
        Ok(())
    }

    /// Central-difference jet at flat index `i` for an equation in `n_vars`
    /// variables. `log_hess` is left empty; see [`FieldStack::jet_with_log_curvature`].
    pub fn jet(&self, i: usize, n_vars: usize) -> Result<Jet> {
        self.jet_impl(i, n_vars, false)
    }

    /// As [`FieldStack::jet`], also filling `log_hess`. Fails near zeros of psi.
    pub fn jet_with_log_curvature(&self, i: usize, n_vars: usize) -> Result<Jet> {
        self.jet_impl(i, n_vars, true)
    }

    fn jet_impl(&self, i: usize, n_vars: usize, with_log: bool) -> Result<Jet> {
        let grid = *self.grid();
        if grid.points() < 4 {
            return Err(Error::InsufficientResolution { points: grid.points(), required: 4 });
        }
        let timed = self.has_time_variable(n_vars)?;
        let d = grid.dims();
        let h = grid.spacing();
        let nl = self.levels.len();
        let mut grad = vec![ZERO; n_vars];
        let value = self.centre_value(i);

        // spatial derivatives of the centre value
        let spatial_levels: Vec<&ScalarField> = match nl {
            1 => vec![&self.levels[0]],
            2 => vec![&self.levels[0], &self.levels[1]],
            _ => vec![&self.levels[1]],
        };
        let w = 1.0 / spatial_levels.len() as f64;
        let mut hess = vec![vec![ZERO; n_vars]; n_vars];
        for lvl in &spatial_levels {
            let v = lvl.values();
            for a in 0..d {
                let ip = grid.shifted(i, a, 1);
                let im = grid.shifted(i, a, -1);
                grad[a] += w * (v[ip] - v[im]) / (2.0 * h);
                hess[a][a] += w * (v[ip] - 2.0 * v[i] + v[im]) / (h * h);
                for b in (a + 1)..d {
                    let pp = grid.shifted(ip, b, 1);
                    let pm = grid.shifted(ip, b, -1);
                    let mp = grid.shifted(im, b, 1);
                    let mm = grid.shifted(im, b, -1);
                    let mixed = w * (v[pp] - v[pm] - v[mp] + v[mm]) / (4.0 * h * h);
                    hess[a][b] += mixed;
                    hess[b][a] += mixed;
                }
            }
        }

        let have_second = !timed || nl == 3;
        if timed {
            let t = n_vars - 1;
            let dt = self.dt;
            if nl == 2 {
                let (v0, v1) = (self.levels[0].values(), self.levels[1].values());
                grad[t] = (v1[i] - v0[i]) / dt;
            } else {
                let (v0, v1, v2) = (
                    self.levels[0].values(),
                    self.levels[1].values(),
                    self.levels[2].values(),
                );
                grad[t] = (v2[i] - v0[i]) / (2.0 * dt);
                hess[t][t] = (v2[i] - 2.0 * v1[i] + v0[i]) / (dt * dt);
                for a in 0..d {
                    let ip = grid.shifted(i, a, 1);
                    let im = grid.shifted(i, a, -1);
                    let mixed = (v2[ip] - v2[im] - v0[ip] + v0[im]) / (4.0 * h * dt);
                    hess[a][t] = mixed;
                    hess[t][a] = mixed;
                }
            }
        }

        let log_hess = if have_second && with_log {
            Some(self.log_curvature(i, n_vars, timed)?)
        } else {
            None
        };

        Ok(Jet {
            value,
            grad,
            hess: have_second.then_some(hess),
            log_hess,
            scale: self.scale,
        })
    }

    /// Second differences of `ln psi` built from principal logarithms of
    /// neighbour ratios, so no global branch choice is needed as long as the
    /// phase changes by less than pi between neighbours.
    fn log_curvature(&self, i: usize, n_vars: usize, timed: bool) -> Result<Vec<Vec<Complex64>>> {
        let grid = *self.grid();
        let d = grid.dims();
        let h = grid.spacing();
        let centre = if self.levels.len() == 3 { &self.levels[1] } else { &self.levels[0] };
        let v = centre.values();
        let lr = |num: Complex64, den: Complex64| (num / den).ln();
        let mut out = vec![vec![ZERO; n_vars]; n_vars];
        self.check_sample(centre, i)?;
        for a in 0..d {
            let ip = grid.shifted(i, a, 1);
            let im = grid.shifted(i, a, -1);
            self.check_sample(centre, ip)?;
            self.check_sample(centre, im)?;
            out[a][a] = (lr(v[ip], v[i]) - lr(v[i], v[im])) / (h * h);
            for b in (a + 1)..d {
                let pp = grid.shifted(ip, b, 1);
                let pm = grid.shifted(ip, b, -1);
                let mp = grid.shifted(im, b, 1);
                let mm = grid.shifted(im, b, -1);
                for &s in &[pp, pm, mp, mm] {
                    self.check_sample(centre, s)?;
                }
                let mixed = (lr(v[pp], v[pm]) - lr(v[mp], v[mm])) / (4.0 * h * h);
                out[a][b] = mixed;
                out[b][a] = mixed;
            }
        }
        if timed {
            let t = n_vars - 1;
            let dt = self.dt;
            let (l0, l2) = (&self.levels[0], &self.levels[2]);
            let (v0, v2) = (l0.values(), l2.values());
            self.check_sample(l0, i)?;
            self.check_sample(l2, i)?;
            out[t][t] = (lr(v2[i], v[i]) - lr(v[i], v0[i])) / (dt * dt);
            for a in 0..d {
                let ip = grid.shifted(i, a, 1);
                let im = grid.shifted(i, a, -1);
                for (l, s) in [(l0, ip), (l0, im), (l2, ip), (l2, im)] {
                    self.check_sample(l, s)?;
                }
                let mixed = (lr(v2[ip], v2[im]) - lr(v0[ip], v0[im])) / (4.0 * h * dt);
                out[a][t] = mixed;
                out[t][a] = mixed;
            }
        }
        Ok(out)
    }
}

/// Samples an analytic field over a grid at time `t`. With `n_vars == dims + 1`
/// the last variable is set to `t`.
pub fn sample(field: &dyn AnalyticField, grid: Grid, t: f64) -> Result<ScalarField> {
    let d = grid.dims();
    let n = field.n_vars();
    if n != d && n != d + 1 {
        return Err(Error::invalid(format!("{n}-variable field cannot be sampled on a {d}D grid")));
    }
    let mut x = vec![0.0; n];
    Ok(ScalarField::from_fn(grid, t, |r| {
        x[..d].copy_from_slice(&r[..d]);
        if n == d + 1 {
            x[d] = t;
        }
        field.jet(&x).value
    }))
}

/// Stack of `levels` consecutive samples of an analytic field starting at `t0`.
pub fn sample_stack(
    field: &dyn AnalyticField,
    grid: Grid,
    t0: f64,
    dt: f64,
    levels: usize,
) -> Result<FieldStack> {
    let fields = (0..levels)
        .map(|l| sample(field, grid, t0 + l as f64 * dt))
        .collect::<Result<Vec<_>>>()?;
    FieldStack::new(fields, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exp_field_jet_is_exact() {
        let f = ExpField::new(Complex64::new(2.0, 0.0), vec![Complex64::new(1.0, 0.0)]);
        let j = f.jet(&[0.5]);
        let e = 2.0 * 0.5f64.exp();
        assert!((j.value.re - e).abs() < 1e-15);
        assert!((j.grad[0].re - e).abs() < 1e-15);
        assert!((j.hessian().unwrap()[0][0].re - e).abs() < 1e-15);
        assert_eq!(j.log_hessian().unwrap()[0][0], ZERO);
    }

    #[test]
    fn grid_jet_second_order_on_plane_wave() {
        let mut errs = Vec::new();
        for n in [32usize, 64, 128] {
            let g = Grid::new(1, n, 2.0 * PI).unwrap();
            let w = PlaneWave::new(Complex64::new(1.0, 0.0), [3.0, 0.0, 0.0], 2.0);
            let f = ExpField::plane_wave(&w, 1);
            let dt = 0.5 * g.spacing();
            let st = sample_stack(&f, g, 0.0, dt, 3).unwrap();
            let x = [g.coords(5)[0], dt];
            let exact = f.jet(&x);
            let num = st.jet_with_log_curvature(5, 2).unwrap();
            let h = num.hessian().unwrap();
            let he = exact.hessian().unwrap();
            let mut e: f64 = 0.0;
            for a in 0..2 {
                e = e.max((num.grad[a] - exact.grad[a]).norm());
                for b in 0..2 {
                    e = e.max((h[a][b] - he[a][b]).norm());
                }
            }
            errs.push(e);
            assert!(num.log_hessian().unwrap().iter().flatten().all(|v| v.norm() < 1e-9));
        }
        for p in errs.windows(2) {
            let order = (p[0] / p[1]).log2();
            assert!((order - 2.0).abs() < 0.1, "order {order}");
        }
    }

    #[test]
    fn two_levels_give_first_derivatives_only() {
        let g = Grid::new(1, 16, 2.0 * PI).unwrap();
        let w = PlaneWave::new(Complex64::new(1.0, 0.0), [1.0, 0.0, 0.0], 1.0);
        let st = sample_stack(&ExpField::plane_wave(&w, 1), g, 0.0, 0.01, 2).unwrap();
        let j = st.jet(0, 2).unwrap();
        assert!(j.hess.is_none());
        assert!(matches!(j.hessian(), Err(Error::InsufficientData(_))));
        assert!((st.centre_time() - 0.005).abs() < 1e-15);
    }

    #[test]
    fn variable_count_must_match_grid() {
        let g = Grid::new(1, 16, 1.0).unwrap();
        let st = FieldStack::single(ScalarField::zeros(g, 0.0));
        assert!(matches!(st.jet(0, 2), Err(Error::InsufficientData(_))));
        assert!(matches!(st.jet(0, 3), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn zero_field_rejected_for_log_curvature() {
        let g = Grid::new(1, 16, 1.0).unwrap();
        let st = FieldStack::single(ScalarField::zeros(g, 0.0));
        assert!(st.jet(3, 1).is_ok());
        assert!(matches!(st.jet_with_log_curvature(3, 1), Err(Error::NearZeroField { .. })));
    }
}
