//! Physical scales: leg self-inductance, critical current, Josephson energy
//! and the magnetic self-energy correction `κ`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Vacuum permeability, H/m.
pub const MU0: f64 = 4.0 * PI * 1e-7;
/// Magnetic flux quantum h/2e, Wb (CODATA 2018).
pub const PHI0: f64 = 2.067833848e-15;

/// Plaquette geometry and material scale.
///
/// `half_width` is `a`; the leg is `2a` wide. `jc_scale` converts `a·D`
/// (m²) into the junction critical current (A).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub leg_length: f64,
    pub half_width: f64,
    pub legs: u32,
    pub jc_scale: f64,
    pub mu0: f64,
    pub phi0: f64,
}

impl Default for PhysicalParams {
    /// Triangular plaquettes, 45 μm legs, 15 μm wide.
    fn default() -> Self {
        Self {
            leg_length: 45e-6,
            half_width: 7.5e-6,
            legs: 3,
            jc_scale: 1500.0,
            mu0: MU0,
            phi0: PHI0,
        }
    }
}

impl PhysicalParams {
    pub fn new(leg_length: f64, half_width: f64, legs: u32) -> Self {
        Self {
            leg_length,
            half_width,
            legs,
            ..Self::default()
        }
    }

    pub fn with_jc_scale(mut self, jc_scale: f64) -> Self {
        self.jc_scale = jc_scale;
        self
    }

    /// `D = 2a` is accepted (it is the zero-inductance limit).
    pub fn validate(&self) -> Result<()> {
        let (d, a) = (self.leg_length, self.half_width);
        if !(a > 0.0) || !d.is_finite() {
            return Err(Error::Domain(format!("leg half-width must be positive, got {a}")));
        }
        if d < 2.0 * a {
            return Err(Error::Domain(format!(
                "leg length {d} must be at least the leg width {}",
                2.0 * a
            )));
        }
        if self.legs < 3 {
            return Err(Error::Domain(format!(
                "a polygon needs at least 3 legs, got {}",
                self.legs
            )));
        }
        if !(self.jc_scale >= 0.0) {
            return Err(Error::Domain(format!(
                "critical current scale must be non-negative, got {}",
                self.jc_scale
            )));
        }
        Ok(())
    }

    /// `κ` from this geometry.
    pub fn kappa(&self) -> Result<f64> {
        let l = leg_self_inductance(self)?;
        let ic = critical_current(self);
        energy_prefactor_with(l, ic, self.phi0)
    }
}

/// Self-inductance of an `m`-leg polygonal plaquette with flat legs of length
/// `D` and width `2a`:
///
/// ```text
/// L = m μ₀/4π · [ (D-a) asinh((D-a)/a) - a asinh(1) + √2 a - √(a² + (D-a)²) ]
/// ```
pub fn leg_self_inductance(params: &PhysicalParams) -> Result<f64> {
    params.validate()?;
    let a = params.half_width;
    let s = params.leg_length - a;
    let bracket =
        s * (s / a).asinh() - a * 1f64.asinh() + std::f64::consts::SQRT_2 * a - a.hypot(s);
    // rounding can leave a -1e-21 residue at D = 2a
    let bracket = bracket.max(0.0);
    Ok(params.legs as f64 * params.mu0 / (4.0 * PI) * bracket)
}

/// `I_c = jc_scale · a · D`.
pub fn critical_current(params: &PhysicalParams) -> f64 {
    params.jc_scale * params.half_width * params.leg_length
}

/// `E_J = Φ₀ I_c / 2π`.
pub fn josephson_energy(critical_current: f64) -> Result<f64> {
    if !(critical_current > 0.0) {
        return Err(Error::Domain(format!(
            "critical current must be positive, got {critical_current}"
        )));
    }
    Ok(PHI0 * critical_current / (2.0 * PI))
}

/// `κ = 1 - 2 L I_c² / E_J`.
pub fn energy_prefactor(inductance: f64, critical_current: f64) -> Result<f64> {
    energy_prefactor_with(inductance, critical_current, PHI0)
}

fn energy_prefactor_with(inductance: f64, critical_current: f64, phi0: f64) -> Result<f64> {
    if !(inductance >= 0.0) {
        return Err(Error::Domain(format!(
            "inductance must be non-negative, got {inductance}"
        )));
    }
    if !(critical_current > 0.0) {
        return Err(Error::Domain(format!(
            "critical current must be positive, got {critical_current}"
        )));
    }
    let ej = phi0 * critical_current / (2.0 * PI);
    let kappa = 1.0 - 2.0 * inductance * critical_current * critical_current / ej;
    if kappa <= 0.0 {
        return Err(Error::Unphysical(kappa));
    }
    Ok(kappa)
}
