//! Relativistic wave-particle kinematics in an explicit unit system.
//!
//! Every function takes [`PhysicalConstants`]; nothing assumes natural units.
//! Only the positive-energy, positive-frequency branch is represented.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::{self, Vec3};

/// The triple (hbar, c, m0) fixing the unit system.
///
/// `m0 == 0` selects the massless branch in every formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
    pub m0: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, c: f64, m0: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::invalid(format!("hbar must be finite and > 0, got {hbar}")));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::invalid(format!("c must be finite and > 0, got {c}")));
        }
        if !(m0.is_finite() && m0 >= 0.0) {
            return Err(Error::invalid(format!("m0 must be finite and >= 0, got {m0}")));
        }
        Ok(Self { hbar, c, m0 })
    }

    /// hbar = c = m0 = 1.
    pub const fn natural() -> Self {
        Self { hbar: 1.0, c: 1.0, m0: 1.0 }
    }

    pub const fn massless(hbar: f64, c: f64) -> Self {
        Self { hbar, c, m0: 0.0 }
    }

    pub fn is_massless(&self) -> bool {
        self.m0 == 0.0
    }

    /// m0 c^2.
    pub fn rest_energy(&self) -> f64 {
        self.m0 * self.c * self.c
    }

    /// m0 c^2 / hbar.
    pub fn rest_frequency(&self) -> f64 {
        self.rest_energy() / self.hbar
    }

    /// The constant of the logarithmic transform fixed by the Planck relation, hbar / i = -i hbar.
    pub fn transform_constant(&self) -> Complex64 {
        Complex64::new(0.0, -self.hbar)
    }
}

/// An (E, p) pair. `on_shell` records whether it was built to satisfy
/// E^2 = p^2 c^2 + m0^2 c^4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleState {
    pub energy: f64,
    pub momentum: Vec3,
    pub on_shell: bool,
}

impl ParticleState {
    pub fn on_shell(momentum: Vec3, consts: &PhysicalConstants) -> Self {
        Self {
            energy: energy_from_momentum(momentum, consts),
            momentum,
            on_shell: true,
        }
    }

    pub fn off_shell(energy: f64, momentum: Vec3) -> Self {
        Self { energy, momentum, on_shell: false }
    }

    /// Relative violation of the energy-momentum relation.
    pub fn shell_defect(&self, consts: &PhysicalConstants) -> f64 {
        let e_shell = energy_from_momentum(self.momentum, consts);
        let lhs = self.energy * self.energy;
        let rhs = e_shell * e_shell;
        let scale = lhs.abs().max(rhs.abs());
        if scale == 0.0 {
            0.0
        } else {
            (lhs - rhs).abs() / scale
        }
    }
}

/// psi = amplitude * exp(i (k . r - omega t)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave {
    pub amplitude: Complex64,
    pub k: Vec3,
    pub omega: f64,
}

impl PlaneWave {
    pub fn new(amplitude: Complex64, k: Vec3, omega: f64) -> Self {
        Self { amplitude, k, omega }
    }

    /// Plane wave whose frequency sits on the positive dispersion branch.
    pub fn on_shell(amplitude: Complex64, k: Vec3, consts: &PhysicalConstants) -> Self {
        Self {
            amplitude,
            k,
            omega: dispersion_omega(vec3::norm(k), consts),
        }
    }

    pub fn phase(&self, r: Vec3, t: f64) -> f64 {
        vec3::dot(self.k, r) - self.omega * t
    }

    pub fn eval(&self, r: Vec3, t: f64) -> Complex64 {
        self.amplitude * Complex64::cis(self.phase(r, t))
    }

    pub fn shell_defect(&self, consts: &PhysicalConstants) -> f64 {
        let w = dispersion_omega(vec3::norm(self.k), consts);
        if w == 0.0 {
            self.omega.abs()
        } else {
            (self.omega - w).abs() / w
        }
    }

    pub fn is_on_shell(&self, consts: &PhysicalConstants, rel_tol: f64) -> bool {
        self.shell_defect(consts) <= rel_tol
    }
}

/// Positive root of E^2 = |p|^2 c^2 + m0^2 c^4.
pub fn energy_from_momentum(p: Vec3, consts: &PhysicalConstants) -> f64 {
    (vec3::norm(p) * consts.c).hypot(consts.rest_energy())
}

/// E = hbar omega.
pub fn planck_energy(omega: f64, consts: &PhysicalConstants) -> f64 {
    consts.hbar * omega
}

/// p = hbar k.
pub fn de_broglie_momentum(k: Vec3, consts: &PhysicalConstants) -> Vec3 {
    vec3::scale(k, consts.hbar)
}

/// omega(k) = sqrt(c^2 k^2 + (m0 c^2 / hbar)^2); exactly c k when m0 = 0.
pub fn dispersion_omega(k: f64, consts: &PhysicalConstants) -> f64 {
    (consts.c * k).hypot(consts.rest_frequency())
}

/// omega(k) - m0 c^2 / hbar without cancellation: c^2 k^2 / (omega + m0 c^2 / hbar).
pub fn kinetic_frequency(k: f64, consts: &PhysicalConstants) -> f64 {
    let ck = consts.c * k;
    if ck == 0.0 {
        return 0.0;
    }
    ck * ck / (dispersion_omega(k, consts) + consts.rest_frequency())
}

/// omega / k. Diverges at k = 0 for massive particles.
pub fn phase_velocity(k: f64, consts: &PhysicalConstants) -> Result<f64> {
    if k < 0.0 || k.is_nan() {
        return Err(Error::Domain(format!("wavenumber magnitude must be >= 0, got {k}")));
    }
    if k == 0.0 {
        if consts.is_massless() {
            return Ok(consts.c);
        }
        return Err(Error::Domain(
            "phase velocity diverges at k = 0 for m0 > 0".into(),
        ));
    }
    Ok(dispersion_omega(k, consts) / k)
}

/// d omega / d k = c^2 k / omega(|k|). Zero at k = 0.
pub fn group_velocity(k: Vec3, consts: &PhysicalConstants) -> Vec3 {
    let w = dispersion_omega(vec3::norm(k), consts);
    if w == 0.0 {
        return vec3::ZERO;
    }
    vec3::scale(k, consts.c * consts.c / w)
}

/// v = (p / m0) / sqrt(1 + (p / m0 c)^2).
pub fn particle_velocity(p: Vec3, consts: &PhysicalConstants) -> Result<Vec3> {
    if consts.is_massless() {
        return Err(Error::Domain(
            "particle velocity needs m0 > 0; use group_velocity for massless waves".into(),
        ));
    }
    let mc = consts.m0 * consts.c;
    let gamma = (vec3::norm(p) / mc).hypot(1.0);
    Ok(vec3::scale(p, 1.0 / (consts.m0 * gamma)))
}
