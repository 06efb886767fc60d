//! Closed-form shadow-wave trajectories: strength, speed, front and atom energy.

use crate::error::{Result, SdwError};
use crate::riemann::{densities_equal, sdw_rate, sdw_speed};
use crate::states::FluidState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdwKind {
    Bulk,
    LeftVacuum,
    RightVacuum,
    DoubleVacuum,
}

impl SdwKind {
    pub fn from_states(left: &FluidState, right: &FluidState) -> Self {
        match (left.rho > 0.0, right.rho > 0.0) {
            (true, true) => SdwKind::Bulk,
            (false, true) => SdwKind::LeftVacuum,
            (true, false) => SdwKind::RightVacuum,
            (false, false) => SdwKind::DoubleVacuum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdwTrajectory {
    pub t0: f64,
    pub x0: f64,
    /// Strength at birth; zero for simple waves born from Riemann data.
    pub gamma: f64,
    /// Speed at birth.
    pub c0: f64,
    pub left: FluidState,
    pub right: FluidState,
    pub kind: SdwKind,
    /// Specific internal energy of the atom at birth (3x3 only).
    pub e_s0: Option<f64>,
    y: f64,
    rate: f64,
}

/// Values of a trajectory at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdwPoint {
    pub xi: f64,
    pub us: f64,
    pub c: f64,
}

fn time_slack(t0: f64) -> f64 {
    1e-12 * (1.0 + t0.abs())
}

impl SdwTrajectory {
    /// Wave born at (t0, x0) from a delta of mass `gamma` moving at `c0`.
    pub fn new(
        t0: f64,
        x0: f64,
        gamma: f64,
        c0: f64,
        left: FluidState,
        right: FluidState,
    ) -> Result<Self> {
        left.validate()?;
        right.validate()?;
        if !(gamma >= 0.0) || !gamma.is_finite() || !c0.is_finite() {
            return Err(SdwError::InvalidState(format!("gamma = {gamma}, c0 = {c0}")));
        }
        let kind = SdwKind::from_states(&left, &right);
        let scale = 1e-12 * (1.0 + left.u.abs() + right.u.abs() + c0.abs());
        let lo = if right.rho > 0.0 { right.u } else { f64::NEG_INFINITY };
        let hi = if left.rho > 0.0 { left.u } else { f64::INFINITY };
        if gamma > 0.0 && (c0 < lo - scale || c0 > hi + scale) {
            return Err(SdwError::NotOvercompressive { c0, u_l: left.u, u_r: right.u });
        }
        let c0 = c0.clamp(lo, hi);
        if gamma == 0.0 && (kind != SdwKind::Bulk || !(left.u > right.u)) {
            return Err(SdwError::Inadmissible(
                "zero initial strength needs two dense states with u_l > u_r".into(),
            ));
        }
        let (y, rate) = match kind {
            SdwKind::Bulk => (sdw_speed(&left, &right), sdw_rate(&left, &right)),
            SdwKind::RightVacuum => (left.u, 0.0),
            SdwKind::LeftVacuum => (right.u, 0.0),
            SdwKind::DoubleVacuum => (c0, 0.0),
        };
        let c0 = if gamma == 0.0 { y } else { c0 };
        Ok(SdwTrajectory { t0, x0, gamma, c0, left, right, kind, e_s0: None, y, rate })
    }

    /// Simple shadow wave emanating from Riemann data at (t0, x0).
    pub fn simple(t0: f64, x0: f64, left: FluidState, right: FluidState) -> Result<Self> {
        let mut s = SdwTrajectory::new(t0, x0, 0.0, 0.0, left, right)?;
        if left.e.is_some() && right.e.is_some() {
            s.e_s0 = Some(s.simple_energy());
        }
        Ok(s)
    }

    pub fn with_energy(mut self, e_s0: f64) -> Self {
        self.e_s0 = Some(e_s0);
        self
    }

    /// Limit speed y_{l,r} (or the edge velocity for vacuum kinds).
    pub fn limit_speed(&self) -> f64 {
        self.y
    }

    /// Strength growth rate of the simple wave with the same outer states.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// The second root z_{l,r}; only defined for distinct densities.
    pub fn z(&self) -> Option<f64> {
        if self.kind != SdwKind::Bulk || densities_equal(self.left.rho, self.right.rho) {
            return None;
        }
        let (a, b) = (self.left.rho.sqrt(), self.right.rho.sqrt());
        Some((self.left.u * a - self.right.u * b) / (a - b))
    }

    fn tau(&self, t: f64) -> Result<f64> {
        if t < self.t0 - time_slack(self.t0) {
            return Err(SdwError::BeforeBirth { t, t0: self.t0 });
        }
        Ok((t - self.t0).max(0.0))
    }

    pub fn eval(&self, t: f64) -> Result<SdwPoint> {
        let tau = self.tau(t)?;
        Ok(self.eval_tau(tau))
    }

    fn eval_tau(&self, tau: f64) -> SdwPoint {
        let g = self.gamma;
        let c0 = self.c0;
        match self.kind {
            SdwKind::Bulk => {
                let k = self.rate;
                let y = self.y;
                if g == 0.0 {
                    return SdwPoint { xi: k * tau, us: y, c: self.x0 + y * tau };
                }
                let drho = self.jump_rho();
                let s = g + k * tau;
                let xi = (s * s + 2.0 * g * drho * (c0 - y) * tau).max(0.0).sqrt();
                let d = xi + s;
                let dxi = if xi > 0.0 { (s * k + g * drho * (c0 - y)) / xi } else { k };
                let dd = dxi + k;
                let w = 2.0 * g * (c0 - y) * (d - tau * dd) / (d * d);
                SdwPoint { xi, us: y + w, c: self.x0 + y * tau + 2.0 * g * (c0 - y) * tau / d }
            }
            SdwKind::RightVacuum => {
                let (rho, u) = (self.left.rho, self.left.u);
                let v0 = u - c0;
                let xi = (g * g + 2.0 * rho * g * v0 * tau).sqrt();
                SdwPoint { xi, us: u - g * v0 / xi, c: self.x0 + u * tau - 2.0 * g * v0 * tau / (xi + g) }
            }
            SdwKind::LeftVacuum => {
                let (rho, u) = (self.right.rho, self.right.u);
                let v0 = c0 - u;
                let xi = (g * g + 2.0 * rho * g * v0 * tau).sqrt();
                SdwPoint { xi, us: u + g * v0 / xi, c: self.x0 + u * tau + 2.0 * g * v0 * tau / (xi + g) }
            }
            SdwKind::DoubleVacuum => SdwPoint { xi: g, us: c0, c: self.x0 + c0 * tau },
        }
    }

    fn jump_rho(&self) -> f64 {
        if densities_equal(self.left.rho, self.right.rho) {
            0.0
        } else {
            self.right.rho - self.left.rho
        }
    }

    pub fn strength(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?.xi)
    }

    pub fn speed(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?.us)
    }

    pub fn front_position(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?.c)
    }

    /// Time derivative of the speed, i.e. the front curvature c''(t).
    pub fn speed_derivative(&self, t: f64) -> Result<f64> {
        let tau = self.tau(t)?;
        let p = self.eval_tau(tau);
        let g = self.gamma;
        let c0 = self.c0;
        let xi3 = p.xi * p.xi * p.xi;
        Ok(match self.kind {
            SdwKind::Bulk => {
                if g == 0.0 {
                    return Ok(0.0);
                }
                let (a, b) = (self.left.rho.sqrt(), self.right.rho.sqrt());
                let (ul, ur) = (self.left.u, self.right.u);
                let tail = if densities_equal(self.left.rho, self.right.rho) {
                    let rho = 0.5 * (self.left.rho + self.right.rho);
                    2.0 * rho * (ul - ur)
                } else {
                    (a + b) * ((b - a) * c0 + a * ul - b * ur)
                };
                -g * g * (c0 - self.y) * tail / xi3
            }
            SdwKind::RightVacuum => {
                let v0 = self.left.u - c0;
                self.left.rho * g * g * v0 * v0 / xi3
            }
            SdwKind::LeftVacuum => {
                let v0 = c0 - self.right.u;
                -self.right.rho * g * g * v0 * v0 / xi3
            }
            SdwKind::DoubleVacuum => 0.0,
        })
    }

    /// Mass, momentum and energy fluxes into the atom: c'[q] - [f] per component.
    fn energy_jumps(&self) -> (f64, f64) {
        let e_of = |s: &FluidState| s.energy_density();
        let f_of = |s: &FluidState| s.u * s.energy_density();
        (e_of(&self.right) - e_of(&self.left), f_of(&self.right) - f_of(&self.left))
    }

    /// Atom internal energy of a simple wave, fixed by the energy balance.
    fn simple_energy(&self) -> f64 {
        let (je, jf) = self.energy_jumps();
        (self.y * je - jf) / self.rate - 0.5 * self.y * self.y
    }

    /// Specific internal energy e_s(t) of the atom from the integrated energy balance.
    pub fn energy_component(&self, t: f64) -> Result<f64> {
        let e0 = self.e_s0.ok_or(SdwError::EnergyMissing)?;
        let tau = self.tau(t)?;
        if self.gamma == 0.0 {
            return Ok(e0);
        }
        let p = self.eval_tau(tau);
        let (je, jf) = self.energy_jumps();
        let total = self.gamma * (e0 + 0.5 * self.c0 * self.c0) + je * (p.c - self.x0) - jf * tau;
        Ok(total / p.xi - 0.5 * p.us * p.us)
    }

    /// Total atom energy xi (u_s^2/2 + e_s).
    pub fn atom_energy(&self, t: f64) -> Result<f64> {
        let p = self.eval(t)?;
        let e = self.energy_component(t)?;
        Ok(p.xi * (0.5 * p.us * p.us + e))
    }
}

/// A front in the x-t plane: straight line or shadow-wave curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrontCurve {
    Line { t0: f64, x0: f64, speed: f64 },
    Shadow(SdwTrajectory),
}

impl FrontCurve {
    pub fn birth_time(&self) -> f64 {
        match self {
            FrontCurve::Line { t0, .. } => *t0,
            FrontCurve::Shadow(s) => s.t0,
        }
    }

    pub fn position(&self, t: f64) -> f64 {
        match self {
            FrontCurve::Line { t0, x0, speed } => x0 + speed * (t - t0),
            FrontCurve::Shadow(s) => s.eval_tau((t - s.t0).max(0.0)).c,
        }
    }

    pub fn speed(&self, t: f64) -> f64 {
        match self {
            FrontCurve::Line { speed, .. } => *speed,
            FrontCurve::Shadow(s) => s.eval_tau((t - s.t0).max(0.0)).us,
        }
    }

    pub fn strength(&self, t: f64) -> f64 {
        match self {
            FrontCurve::Line { .. } => 0.0,
            FrontCurve::Shadow(s) => s.eval_tau((t - s.t0).max(0.0)).xi,
        }
    }

    pub fn point(&self, t: f64) -> SdwPoint {
        match self {
            FrontCurve::Line { .. } => SdwPoint { xi: 0.0, us: self.speed(t), c: self.position(t) },
            FrontCurve::Shadow(s) => s.eval_tau((t - s.t0).max(0.0)),
        }
    }

    pub fn limit_speed(&self) -> f64 {
        match self {
            FrontCurve::Line { speed, .. } => *speed,
            FrontCurve::Shadow(s) => s.limit_speed(),
        }
    }

    /// Largest speed attained on [t, inf); speeds are monotone in time.
    pub fn max_future_speed(&self, t: f64) -> f64 {
        self.speed(t).max(self.limit_speed())
    }

    pub fn min_future_speed(&self, t: f64) -> f64 {
        self.speed(t).min(self.limit_speed())
    }

    pub fn trajectory(&self) -> Option<&SdwTrajectory> {
        match self {
            FrontCurve::Shadow(s) => Some(s),
            FrontCurve::Line { .. } => None,
        }
    }
}
