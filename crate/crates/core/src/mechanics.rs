//! Classical relativistic particle in a scalar potential: Newton's law with
//! the relativistic momentum, irrotational momentum fields, and the
//! Hamilton-Jacobi residual with a potential.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid, Region, ScalarField};
use crate::kinematics::{self, PhysicalConstants};
use crate::pde::jet::{AffineField, FieldStack};
use crate::report::fmt_float;
use crate::solvers::hje_residual_with_potential;
use crate::vec3::{self, Vec3};

pub trait Potential {
    fn value(&self, r: Vec3) -> f64;
    fn gradient(&self, r: Vec3) -> Vec3;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialPreset {
    Free,
    /// `phi = -F . r`, a uniform force `F`.
    Linear { force: Vec3 },
    /// `phi = kappa |r|^2 / 2`.
    Harmonic { kappa: f64 },
    Constant { value: f64 },
}

impl Potential for PotentialPreset {
    fn value(&self, r: Vec3) -> f64 {
        match *self {
            PotentialPreset::Free => 0.0,
            PotentialPreset::Linear { force } => -vec3::dot(force, r),
            PotentialPreset::Harmonic { kappa } => 0.5 * kappa * vec3::dot(r, r),
            PotentialPreset::Constant { value } => value,
        }
    }

    fn gradient(&self, r: Vec3) -> Vec3 {
        match *self {
            PotentialPreset::Free | PotentialPreset::Constant { .. } => vec3::ZERO,
            PotentialPreset::Linear { force } => vec3::scale(force, -1.0),
            PotentialPreset::Harmonic { kappa } => vec3::scale(r, kappa),
        }
    }
}

/// Same function as [`kinematics::particle_velocity`].
pub fn velocity_from_momentum(p: Vec3, consts: &PhysicalConstants) -> Result<Vec3> {
    kinematics::particle_velocity(p, consts)
}

/// `p = m0 v / sqrt(1 - v^2 / c^2)`, defined for `|v| < c`.
pub fn momentum_from_velocity(v: Vec3, consts: &PhysicalConstants) -> Result<Vec3> {
    if consts.is_massless() {
        return Err(Error::Domain("momentum from velocity needs m0 > 0".into()));
    }
    let beta = vec3::norm(v) / consts.c;
    if !(beta < 1.0) {
        return Err(Error::Domain(format!("speed must be below c, got |v|/c = {beta}")));
    }
    let gamma = 1.0 / ((1.0 - beta) * (1.0 + beta)).sqrt();
    Ok(vec3::scale(v, consts.m0 * gamma))
}

/// `sqrt(m0^2 c^4 + p^2 c^2) + phi(r)`.
pub fn particle_energy(r: Vec3, p: Vec3, potential: &dyn Potential, consts: &PhysicalConstants) -> f64 {
    kinematics::energy_from_momentum(p, consts) + potential.value(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub r: Vec3,
    pub p: Vec3,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&TrajectorySample> {
        self.samples.last()
    }

    /// Largest |E(t) - E(0)| along the trajectory.
    pub fn max_energy_error(&self) -> f64 {
        let Some(first) = self.samples.first() else { return 0.0 };
        self.samples.iter().map(|s| (s.energy - first.energy).abs()).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,rx,ry,rz,px,py,pz,energy\n");
        for s in &self.samples {
            let cells = [s.t, s.r[0], s.r[1], s.r[2], s.p[0], s.p[1], s.p[2], s.energy];
            let row: Vec<String> = cells.iter().map(|&x| fmt_float(x)).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    #[default]
    Rk4,
}

/// Classical fourth-order Runge-Kutta for `dr/dt = v(p)`, `dp/dt = -grad phi(r)`.
/// Returns `steps + 1` samples including the initial state.
pub fn integrate_newton(
    potential: &dyn Potential,
    r0: Vec3,
    p0: Vec3,
    consts: &PhysicalConstants,
    dt: f64,
    steps: usize,
    method: Integrator,
) -> Result<Trajectory> {
    let Integrator::Rk4 = method;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid(format!("dt must be > 0, got {dt}")));
    }
    if !(vec3::is_finite(r0) && vec3::is_finite(p0)) {
        return Err(Error::invalid("initial state must be finite"));
    }
    let velocity = |p: Vec3| kinematics::particle_velocity(p, consts);
    let force = |r: Vec3| vec3::scale(potential.gradient(r), -1.0);
    velocity(p0)?;

    let mut samples = Vec::with_capacity(steps + 1);
    let (mut r, mut p) = (r0, p0);
    samples.push(TrajectorySample { t: 0.0, r, p, energy: particle_energy(r, p, potential, consts) });
    for step in 1..=steps {
        let k1r = velocity(p)?;
        let k1p = force(r);
        let k2r = velocity(vec3::add(p, vec3::scale(k1p, 0.5 * dt)))?;
        let k2p = force(vec3::add(r, vec3::scale(k1r, 0.5 * dt)));
        let k3r = velocity(vec3::add(p, vec3::scale(k2p, 0.5 * dt)))?;
        let k3p = force(vec3::add(r, vec3::scale(k2r, 0.5 * dt)));
        let k4r = velocity(vec3::add(p, vec3::scale(k3p, dt)))?;
        let k4p = force(vec3::add(r, vec3::scale(k3r, dt)));
        let combine = |a: Vec3, b: Vec3, c: Vec3, d: Vec3| {
            let mut out = [0.0; 3];
            for i in 0..3 {
                out[i] = (a[i] + 2.0 * b[i] + 2.0 * c[i] + d[i]) * dt / 6.0;
            }
            out
        };
        let r_next = vec3::add(r, combine(k1r, k2r, k3r, k4r));
        let p_next = vec3::add(p, combine(k1p, k2p, k3p, k4p));
        let t = step as f64 * dt;
        let energy = particle_energy(r_next, p_next, potential, consts);
        if !(vec3::is_finite(r_next) && vec3::is_finite(p_next) && energy.is_finite()) {
            return Err(Error::Divergence { step: step - 1, time: (step - 1) as f64 * dt });
        }
        r = r_next;
        p = p_next;
        samples.push(TrajectorySample { t, r, p, energy });
    }
    Ok(Trajectory { samples })
}

/// Largest |grad S - p(t)| along a free trajectory, where `S = -E t + p0.r`
/// is the on-shell action of the initial momentum and its gradient is taken
/// by central differences of step `eps` at each sample point.
pub fn free_action_duality_defect(traj: &Trajectory, consts: &PhysicalConstants, eps: f64) -> Result<f64> {
    let first = traj.samples.first().ok_or_else(|| Error::InsufficientData("empty trajectory".into()))?;
    let energy = kinematics::energy_from_momentum(first.p, consts);
    let action = AffineField::particle_action(energy, first.p, 3);
    let mut worst: f64 = 0.0;
    for s in &traj.samples {
        let mut sq = 0.0;
        for a in 0..3 {
            let mut hi = [s.r[0], s.r[1], s.r[2], s.t];
            let mut lo = hi;
            hi[a] += eps;
            lo[a] -= eps;
            let grad = (action.value(&hi) - action.value(&lo)).re / (hi[a] - lo[a]);
            sq += (grad - s.p[a]).powi(2);
        }
        worst = worst.max(sq.sqrt());
    }
    Ok(worst)
}

/// Real 3-vector samples on a 3D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    values: Vec<Vec3>,
}

impl VectorField {
    pub fn new(grid: Grid, values: Vec<Vec3>) -> Result<Self> {
        if grid.dims() != 3 {
            return Err(Error::invalid("vector fields live on 3D grids"));
        }
        if values.len() != grid.len() {
            return Err(Error::invalid(format!(
                "{} vectors for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(Vec3) -> Vec3) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(grid.coords(i))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Vec3] {
        &self.values
    }
}

/// Max norm of the central-difference curl over `region`.
pub fn curl_check(field: &VectorField, region: Region) -> f64 {
    let grid = field.grid();
    let v = field.values();
    let h2 = 2.0 * grid.spacing();
    let d = |i: usize, axis: usize, comp: usize| {
        (v[grid.shifted(i, axis, 1)][comp] - v[grid.shifted(i, axis, -1)][comp]) / h2
    };
    let mut worst: f64 = 0.0;
    for i in (0..grid.len()).filter(|&i| region.contains(grid, i)) {
        let curl = [d(i, 1, 2) - d(i, 2, 1), d(i, 2, 0) - d(i, 0, 2), d(i, 0, 1) - d(i, 1, 0)];
        worst = worst.max(vec3::norm(curl));
    }
    worst
}

/// Pointwise `(S_t + phi)^2 - c^2 |grad S|^2 - m0^2 c^4` from sampled time
/// levels of `S`.
pub fn hje_potential_residual(
    stack: &FieldStack,
    potential: &dyn Potential,
    consts: &PhysicalConstants,
) -> Result<ScalarField> {
    hje_residual_with_potential(stack, consts, false, |r| potential.value(r))
}

/// The zero potential, for callers that want the free residual in the same shape.
pub const FREE: PotentialPreset = PotentialPreset::Free;
