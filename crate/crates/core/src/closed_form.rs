//! Analytic ground state of the four-site ring and its overlaps with the
//! candidate product states `|1111>`, `|+-+->` and `|0101>`.
//!
//! For `gamma > -1` the ground state lives in the span of
//!
//! ```text
//! |phi_1> = (|0101> + |1010>) / sqrt(2)
//! |phi_2> = (|1100> + |0011> + |1001> + |0110>) / 2
//! ```
//!
//! where the Hamiltonian reduces to `-4 [[gamma, -sqrt(2)], [-sqrt(2), 0]]`.
//! For `gamma < -1` it is `|1111>` once a small Zeeman field breaks the
//! `|0000>` / `|1111>` tie. `gamma = -1` itself is a level crossing and is
//! rejected wherever the branch matters.

use num_complex::Complex64;
use std::f64::consts::SQRT_2;

use crate::error::{domain, Error, Result};
use crate::spin_model::StateVector;

const N_SITES: usize = 4;

/// Ground energy of the four-site ring.
///
/// `4 gamma` below the crossing, `-2 gamma - 2 sqrt(gamma^2 + 8)` above it.
/// Both branches equal `-4` at `gamma = -1`.
pub fn eg_closed(gamma: f64) -> f64 {
    if gamma < -1.0 {
        eg_ferromagnetic_branch(gamma)
    } else {
        eg_xy_branch(gamma)
    }
}

/// `|1111>` energy, `4 gamma` (no field).
pub fn eg_ferromagnetic_branch(gamma: f64) -> f64 {
    4.0 * gamma
}

/// Lowest eigenvalue of the two-state effective Hamiltonian.
pub fn eg_xy_branch(gamma: f64) -> f64 {
    -2.0 * gamma - 2.0 * (gamma * gamma + 8.0).sqrt()
}

/// Effective Hamiltonian on `{|phi_1>, |phi_2>}`.
pub fn effective_hamiltonian(gamma: f64) -> [[f64; 2]; 2] {
    [[-4.0 * gamma, 4.0 * SQRT_2], [4.0 * SQRT_2, 0.0]]
}

/// Mixing angle of `cos(alpha)|phi_1> + sin(alpha)|phi_2>`, always in `(-pi/2, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaAngle(f64);

impl AlphaAngle {
    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn cos(self) -> f64 {
        self.0.cos()
    }

    pub fn sin(self) -> f64 {
        self.0.sin()
    }
}

/// `alpha = -atan2(2 sqrt(2), gamma) / 2`.
///
/// `tan(2 alpha) = -2 sqrt(2) / gamma` alone has two solutions in `(-pi/2, 0)`
/// for `gamma < 0`; the `atan2` form picks the one whose vector is the lower
/// eigenvector of [`effective_hamiltonian`].
pub fn alpha_of_gamma(gamma: f64) -> Result<AlphaAngle> {
    if !(gamma > -1.0) || !gamma.is_finite() {
        return domain(format!("alpha is defined for finite gamma > -1, got {gamma}"));
    }
    Ok(AlphaAngle(-(2.0 * SQRT_2).atan2(gamma) / 2.0))
}

/// Closed-form ground state of the four-site ring.
pub fn ground_state_closed(gamma: f64) -> Result<StateVector> {
    if gamma == -1.0 {
        return Err(Error::BranchAmbiguity);
    }
    if gamma < -1.0 {
        return StateVector::basis(N_SITES, 0b1111);
    }
    let alpha = alpha_of_gamma(gamma)?;
    let a1 = alpha.cos() / SQRT_2;
    let a2 = alpha.sin() / 2.0;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << N_SITES];
    for idx in [0b0101, 0b1010] {
        amps[idx] = Complex64::new(a1, 0.0);
    }
    for idx in [0b1100, 0b0011, 0b1001, 0b0110] {
        amps[idx] = Complex64::new(a2, 0.0);
    }
    StateVector::normalized(N_SITES, amps)
}

/// Overlaps of the ground state with `|1111>`, `|+-+->` and `|0101>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapTriple {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl OverlapTriple {
    pub fn squares(&self) -> [f64; 3] {
        [
            self.lambda1 * self.lambda1,
            self.lambda2 * self.lambda2,
            self.lambda3 * self.lambda3,
        ]
    }
}

pub fn overlaps_closed(gamma: f64) -> Result<OverlapTriple> {
    if gamma == -1.0 {
        return Err(Error::BranchAmbiguity);
    }
    if !gamma.is_finite() {
        return domain(format!("gamma must be finite, got {gamma}"));
    }
    if gamma < -1.0 {
        return Ok(OverlapTriple {
            lambda1: 1.0,
            lambda2: 0.25,
            lambda3: 0.0,
        });
    }
    let alpha = alpha_of_gamma(gamma)?;
    Ok(OverlapTriple {
        lambda1: 0.0,
        lambda2: SQRT_2 / 4.0 * alpha.cos() - 0.5 * alpha.sin(),
        lambda3: alpha.cos() / SQRT_2,
    })
}
