//! Conversion between the wave function and the complex action
//! `S = (hbar/i) ln psi`.

use num_complex::Complex64;

use super::jet::NEAR_ZERO_REL;
use crate::error::{Error, Result};
use crate::grid::ScalarField;
use crate::kinematics::PhysicalConstants;

/// Flat index of the sample the phase at `flat` is unwrapped from: the last
/// non-zero axis index is decremented. The origin has none.
fn predecessor(field: &ScalarField, flat: usize) -> Option<usize> {
    let grid = field.grid();
    let mut idx = grid.multi_index(flat);
    let axis = (0..grid.dims()).rev().find(|&a| idx[a] > 0)?;
    idx[axis] -= 1;
    Some(grid.flat_index(idx))
}

/// Continuous phase of `psi`, unwrapped along grid axes from the origin.
/// Consecutive samples must differ in phase by less than pi.
pub fn unwrapped_phase(psi: &ScalarField) -> Result<Vec<f64>> {
    let values = psi.values();
    let threshold = NEAR_ZERO_REL * psi.max_abs();
    for (index, v) in values.iter().enumerate() {
        let magnitude = v.norm();
        if magnitude == 0.0 || magnitude < threshold {
            return Err(Error::NearZeroField { index, magnitude, threshold });
        }
    }
    let mut phase = vec![0.0; values.len()];
    for i in 0..values.len() {
        phase[i] = match predecessor(psi, i) {
            None => values[i].arg(),
            Some(p) => phase[p] + (values[i] / values[p]).arg(),
        };
    }
    Ok(phase)
}

/// `(hbar/i) ln psi = hbar theta - i hbar ln|psi|` with `theta` unwrapped.
pub fn action_from_wavefunction(psi: &ScalarField, consts: &PhysicalConstants) -> Result<ScalarField> {
    let phase = unwrapped_phase(psi)?;
    let hbar = consts.hbar;
    let values = psi
        .values()
        .iter()
        .zip(&phase)
        .map(|(v, &th)| Complex64::new(hbar * th, -hbar * v.norm().ln()))
        .collect();
    ScalarField::new(*psi.grid(), values, psi.time())
}

/// `exp(i S / hbar)`.
pub fn wavefunction_from_action(action: &ScalarField, consts: &PhysicalConstants) -> ScalarField {
    let scale = Complex64::new(0.0, 1.0 / consts.hbar);
    action.map(|s| (scale * s).exp())
}
