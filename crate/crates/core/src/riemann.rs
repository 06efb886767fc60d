//! Riemann problems between neighbouring constant states.

use crate::error::{Result, SdwError};
use crate::states::FluidState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RiemannSolution {
    Contact { speed: f64 },
    VacuumFan { u_left: f64, u_right: f64 },
    /// Simple shadow wave with constant speed `y` and strength `rate * t`.
    SimpleSdw { y: f64, rate: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiemannKind {
    Contact,
    VacuumFan,
    SimpleSdw,
}

impl RiemannSolution {
    pub fn kind(&self) -> RiemannKind {
        match self {
            RiemannSolution::Contact { .. } => RiemannKind::Contact,
            RiemannSolution::VacuumFan { .. } => RiemannKind::VacuumFan,
            RiemannSolution::SimpleSdw { .. } => RiemannKind::SimpleSdw,
        }
    }

    pub fn strength_rate(&self) -> f64 {
        match self {
            RiemannSolution::SimpleSdw { rate, .. } => *rate,
            _ => 0.0,
        }
    }
}

/// Relative density gap below which two densities are treated as equal.
pub const EQUAL_DENSITY_REL: f64 = 1e-12;

pub fn densities_equal(rho_l: f64, rho_r: f64) -> bool {
    (rho_l - rho_r).abs() <= EQUAL_DENSITY_REL * rho_l.max(rho_r)
}

/// Speed y_{l,r} of the overcompressive simple shadow wave.
pub fn sdw_speed(left: &FluidState, right: &FluidState) -> f64 {
    if densities_equal(left.rho, right.rho) {
        0.5 * (left.u + right.u)
    } else {
        let (a, b) = (left.rho.sqrt(), right.rho.sqrt());
        (b * right.u + a * left.u) / (a + b)
    }
}

/// Strength growth rate sqrt(rho_l rho_r) (u_l - u_r).
pub fn sdw_rate(left: &FluidState, right: &FluidState) -> f64 {
    if densities_equal(left.rho, right.rho) {
        0.5 * (left.rho + right.rho) * (left.u - right.u)
    } else {
        (left.rho * right.rho).sqrt() * (left.u - right.u)
    }
}

/// True when the pair carries no jump at all and emits no front.
pub fn is_trivial(left: &FluidState, right: &FluidState) -> bool {
    left.rho == right.rho && left.u == right.u && left.e == right.e
}

pub fn solve_riemann(left: &FluidState, right: &FluidState) -> Result<RiemannSolution> {
    for s in [left, right] {
        s.validate()?;
        if !(s.rho > 0.0) {
            return Err(SdwError::NonPositiveDensity { x: f64::NAN, rho: s.rho });
        }
    }
    Ok(if left.u == right.u {
        RiemannSolution::Contact { speed: left.u }
    } else if left.u < right.u {
        RiemannSolution::VacuumFan { u_left: left.u, u_right: right.u }
    } else {
        RiemannSolution::SimpleSdw { y: sdw_speed(left, right), rate: sdw_rate(left, right) }
    })
}

/// Velocity inside a centred vacuum fan, linear in x between the edges.
pub fn vacuum_velocity(fan: &RiemannSolution, x: f64, t: f64, anchor: f64) -> Result<f64> {
    let (ul, ur) = match fan {
        RiemannSolution::VacuumFan { u_left, u_right } => (*u_left, *u_right),
        _ => return Err(SdwError::InvalidState("not a vacuum fan".into())),
    };
    fan_velocity(ul, ur, anchor, x, t)
}

pub fn fan_velocity(ul: f64, ur: f64, anchor: f64, x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(SdwError::InvalidState("fan velocity needs t > 0".into()));
    }
    let lo = anchor + ul * t;
    let hi = anchor + ur * t;
    let slack = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    if x < lo - slack || x > hi + slack {
        return Err(SdwError::OutsideFan { x, lo, hi });
    }
    let w = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
    Ok(ul + (ur - ul) * w)
}
