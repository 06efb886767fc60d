//! Energy and entropy diagnostics: production across shadow waves, jumps at interactions, totals.

use crate::analysis::{snapshot, snapshot_before, MeasureSnapshot};
use crate::error::{Result, SdwError};
use crate::interactions::Region;
use crate::sdw::{FrontCurve, SdwTrajectory};
use crate::states::FluidState;
use crate::tracker::{MovingWindow, WaveFan};

/// Entropy pair used for totals and event jumps.
#[derive(Debug, Clone, Copy)]
pub enum EntropyPair {
    /// eta = rho u^2 / 2, the physical energy.
    Kinetic,
    /// eta = -rho e (3x3).
    NegInternal,
    /// eta = rho (R(u) + S(e)) with R convex, S decreasing and convex (3x3).
    Semiconvex { r: fn(f64) -> f64, s: fn(f64) -> f64 },
}

fn square(u: f64) -> f64 {
    u * u
}

fn neg(e: f64) -> f64 {
    -e
}

impl EntropyPair {
    /// R(u) = u^2, S(e) = -e.
    pub fn semiconvex_default() -> Self {
        EntropyPair::Semiconvex { r: square, s: neg }
    }

    pub fn needs_energy(&self) -> bool {
        !matches!(self, EntropyPair::Kinetic)
    }

    /// eta(rho, u, e) of a fluid state.
    pub fn density(&self, s: &FluidState) -> Result<f64> {
        if s.rho == 0.0 {
            return Ok(0.0);
        }
        self.specific(s.u, s.e).map(|v| s.rho * v)
    }

    /// Entropy per unit mass at velocity u and internal energy e.
    fn specific(&self, u: f64, e: Option<f64>) -> Result<f64> {
        Ok(match self {
            EntropyPair::Kinetic => 0.5 * u * u,
            EntropyPair::NegInternal => -e.ok_or(SdwError::EnergyMissing)?,
            EntropyPair::Semiconvex { r, s } => r(u) + s(e.ok_or(SdwError::EnergyMissing)?),
        })
    }
}

/// Energy production -1/2 (rho_l (u_l - u_s)^3 + rho_r (u_s - u_r)^3) at the speed `us`.
pub fn production_at(left: &FluidState, right: &FluidState, us: f64) -> f64 {
    let dl = left.u - us;
    let dr = us - right.u;
    -0.5 * (left.rho * dl * dl * dl + right.rho * dr * dr * dr)
}

pub fn production(traj: &SdwTrajectory, t: f64) -> Result<f64> {
    Ok(production_at(&traj.left, &traj.right, traj.speed(t)?))
}

/// Rate of the atom internal energy d/dt (xi e_s), from the mass, momentum and energy balances.
pub fn atom_internal_rate(traj: &SdwTrajectory, t: f64) -> Result<f64> {
    let p = traj.eval(t)?;
    let (l, r) = (&traj.left, &traj.right);
    let jump = |f: &dyn Fn(&FluidState) -> f64| f(r) - f(l);
    let d_rho = jump(&|s| s.rho);
    let d_m = jump(&|s| s.momentum());
    let d_mu = jump(&|s| s.momentum() * s.u);
    let d_e = jump(&|s| s.energy_density());
    let d_fe = jump(&|s| s.u * s.energy_density());
    let dxi = p.us * d_rho - d_m;
    let dp = p.us * d_m - d_mu;
    let dus = (dp - dxi * p.us) / p.xi.max(f64::MIN_POSITIVE);
    let total = p.us * d_e - d_fe;
    let kinetic = 0.5 * dxi * p.us * p.us + p.xi * p.us * dus;
    Ok(total - kinetic)
}

/// Production of eta = -rho e across the wave: internal-energy inflow minus atom heating.
pub fn internal_production(traj: &SdwTrajectory, t: f64) -> Result<f64> {
    let us = traj.speed(t)?;
    let (l, r) = (&traj.left, &traj.right);
    let inflow = r.rho * r.e.unwrap_or(0.0) * (us - r.u) + l.rho * l.e.unwrap_or(0.0) * (l.u - us);
    if traj.e_s0.is_none() {
        return Err(SdwError::EnergyMissing);
    }
    Ok(inflow - atom_internal_rate(traj, t)?)
}

/// Total entropy jump when two atoms merge: -1/2 xi_l xi_r (u_l - u_r)^2 / (xi_l + xi_r).
pub fn entropy_drop_at_merge(xi_l: f64, us_l: f64, xi_r: f64, us_r: f64) -> Result<f64> {
    entropy_drop_multi(&[(xi_l, us_l), (xi_r, us_r)])
}

/// Kinetic energy lost when several atoms stick: -1/2 sum_{i<j} xi_i xi_j (u_i - u_j)^2 / xi.
pub fn entropy_drop_multi(parts: &[(f64, f64)]) -> Result<f64> {
    let total: f64 = parts.iter().map(|p| p.0).sum();
    if !(total > 0.0) {
        return Err(SdwError::InvalidState("merging atoms carry no mass".into()));
    }
    let mut acc = 0.0;
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            acc += a.0 * b.0 * (a.1 - b.1) * (a.1 - b.1);
        }
    }
    Ok(-0.5 * acc / total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FanTransition {
    /// A shadow wave enters a vacuum fan through its left edge.
    Enter,
    /// A shadow wave leaves a fan through its right edge.
    Exit,
}

/// Jump of the production rate when a shadow wave crosses a fan edge with far state (rho, u).
pub fn delta_d_sdw_cd(kind: FanTransition, rho: f64, u: f64, us: f64) -> f64 {
    let d = us - u;
    match kind {
        FanTransition::Enter => 0.5 * rho * d * d * d,
        FanTransition::Exit => -0.5 * rho * d * d * d,
    }
}

/// Closed-form production jump for two merging simple waves of equal density.
pub fn constant_density_delta_d(rho: f64, ul: f64, um: f64, ur: f64) -> f64 {
    -0.375 * rho * (ul - ur) * (ul - um) * (um - ur)
}

/// Entropy of a snapshot over [a, b], atoms included.
pub fn snapshot_entropy(s: &MeasureSnapshot, a: f64, b: f64, pair: EntropyPair) -> Result<f64> {
    for at in &s.atoms {
        if at.x < a || at.x > b {
            return Err(SdwError::WindowTooSmall { lo: a, hi: b, x: at.x });
        }
    }
    let mut acc = 0.0;
    for p in &s.pieces {
        let (lo, hi) = (p.lo.max(a), p.hi.min(b));
        if hi > lo {
            if let Region::Fluid(st) = p.region {
                acc += pair.density(&st)? * (hi - lo);
            }
        }
    }
    for at in &s.atoms {
        if at.mass > 0.0 {
            acc += at.mass * pair.specific(at.speed, at.e_s)?;
        }
    }
    Ok(acc)
}

/// Total entropy of the tracked solution over [a, b] at time t.
pub fn total_entropy(fan: &WaveFan, t: f64, a: f64, b: f64, pair: EntropyPair) -> Result<f64> {
    snapshot_entropy(&snapshot(fan, t)?, a, b, pair)
}

/// Total entropy over the moving window; no entropy flux crosses its ends.
pub fn total_entropy_moving(fan: &WaveFan, t: f64, w: &MovingWindow, pair: EntropyPair) -> Result<f64> {
    let (a, b) = w.at(t);
    total_entropy(fan, t, a, b, pair)
}

/// Summed production of all active shadow waves in a front list.
fn production_sum(fan: &WaveFan, ids: &[usize], t: f64) -> Result<f64> {
    let mut acc = 0.0;
    for &id in ids {
        if let FrontCurve::Shadow(s) = &fan.record(id).front.curve {
            acc += production(s, t)?;
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventEntropy {
    pub time: f64,
    pub position: f64,
    pub participants: usize,
    /// E(T+0) - E(T-0) from snapshots.
    pub measured: f64,
    /// Closed-form atom energy loss (kinetic pair only).
    pub predicted: Option<f64>,
    /// Jump of the summed production rate.
    pub delta_d: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontProduction {
    pub id: usize,
    pub samples: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub fronts: Vec<FrontProduction>,
    pub events: Vec<EventEntropy>,
    pub trace: Vec<(f64, f64)>,
}

impl EntropyReport {
    /// Events where the total entropy increased by more than `tol`.
    pub fn increases(&self, tol: f64) -> Vec<&EventEntropy> {
        self.events.iter().filter(|e| e.measured > tol).collect()
    }
}

/// Production curves, event jumps and the total-entropy trace of a run up to `t_end`.
pub fn entropy_report(fan: &WaveFan, t_end: f64, samples: usize, pair: EntropyPair) -> Result<EntropyReport> {
    let w = fan.moving_window(t_end);
    let mut fronts = Vec::new();
    if !pair.needs_energy() {
        for r in fan.records() {
            if let FrontCurve::Shadow(s) = &r.front.curve {
                if r.birth > t_end {
                    continue;
                }
                let t1 = r.death.unwrap_or(t_end).min(t_end);
                let n = samples.max(1);
                let mut pts = Vec::with_capacity(n + 1);
                for k in 0..=n {
                    let t = r.birth + (t1 - r.birth) * k as f64 / n as f64;
                    pts.push((t, production(s, t)?));
                }
                fronts.push(FrontProduction { id: r.front.id, samples: pts });
            }
        }
    }
    let mut events = Vec::new();
    for ev in fan.history().iter().filter(|e| e.time <= t_end) {
        let (a, b) = w.at(ev.time);
        let before = snapshot_before(fan, ev.time)?;
        let after = snapshot(fan, ev.time)?;
        let measured = snapshot_entropy(&after, a, b, pair)? - snapshot_entropy(&before, a, b, pair)?;
        let parts: Vec<(f64, f64)> = ev.incoming.iter().map(|p| (p.xi, p.us)).collect();
        let predicted = match pair {
            EntropyPair::Kinetic if ev.gamma > 0.0 => Some(entropy_drop_multi(&parts)?),
            EntropyPair::Kinetic => Some(0.0),
            _ => None,
        };
        let delta_d = production_sum(fan, &fan.live_at(ev.time)?, ev.time)?
            - production_sum(fan, &fan.live_before(ev.time)?, ev.time)?;
        events.push(EventEntropy {
            time: ev.time,
            position: ev.position,
            participants: ev.participants.len(),
            measured,
            predicted,
            delta_d,
        });
    }
    let n = samples.max(1);
    let mut trace = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = t_end * k as f64 / n as f64;
        trace.push((t, total_entropy_moving(fan, t, &w, pair)?));
    }
    Ok(EntropyReport { fronts, events, trace })
}
