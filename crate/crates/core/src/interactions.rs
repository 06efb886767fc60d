//! Wave fronts, crossing detection and resolution of interactions into one shadow wave.

use crate::error::{Result, SdwError};
use crate::numeric::brent;
use crate::sdw::{FrontCurve, SdwKind, SdwTrajectory};
use crate::states::FluidState;
use crate::Tolerances;

/// Centred vacuum fan born at (anchor, 0) between edges moving at u_left < u_right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VacuumFan {
    pub anchor: f64,
    pub u_left: f64,
    pub u_right: f64,
}

impl VacuumFan {
    /// Interior velocity at (x, t), linear in x and clamped to the edges.
    pub fn velocity(&self, x: f64, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.5 * (self.u_left + self.u_right);
        }
        let lo = self.anchor + self.u_left * t;
        let hi = self.anchor + self.u_right * t;
        let w = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
        self.u_left + (self.u_right - self.u_left) * w
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Fluid(FluidState),
    Vacuum(VacuumFan),
}

impl Region {
    pub fn density(&self) -> f64 {
        match self {
            Region::Fluid(s) => s.rho,
            Region::Vacuum(_) => 0.0,
        }
    }

    pub fn is_vacuum(&self) -> bool {
        matches!(self, Region::Vacuum(_))
    }

    /// Representative fluid state; vacuum gets the fan velocity at (x, t).
    pub fn state_at(&self, x: f64, t: f64) -> FluidState {
        match self {
            Region::Fluid(s) => *s,
            Region::Vacuum(f) => FluidState::vacuum(f.velocity(x, t)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontRole {
    Contact,
    FanLeftEdge,
    FanRightEdge,
    Shadow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveFront {
    pub id: usize,
    pub role: FrontRole,
    pub curve: FrontCurve,
    pub left: Region,
    pub right: Region,
}

impl WaveFront {
    pub fn position(&self, t: f64) -> f64 {
        self.curve.position(t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeKind {
    /// Dense left, vacuum right.
    A1,
    /// Dense on both sides.
    A2,
    /// Vacuum left, dense right.
    A3,
    /// Vacuum on both sides.
    A4,
}

impl OutcomeKind {
    pub fn from_kind(k: SdwKind) -> Self {
        match k {
            SdwKind::RightVacuum => OutcomeKind::A1,
            SdwKind::Bulk => OutcomeKind::A2,
            SdwKind::LeftVacuum => OutcomeKind::A3,
            SdwKind::DoubleVacuum => OutcomeKind::A4,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            OutcomeKind::A1 => "A1",
            OutcomeKind::A2 => "A2",
            OutcomeKind::A3 => "A3",
            OutcomeKind::A4 => "A4",
        }
    }
}

/// Strength, speed and (3x3) internal energy of one participant at the event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Incoming {
    pub id: usize,
    pub xi: f64,
    pub us: f64,
    pub e_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteractionEvent {
    pub time: f64,
    pub position: f64,
    /// Participant ids, left to right.
    pub participants: Vec<usize>,
    pub outcome: OutcomeKind,
    pub incoming: Vec<Incoming>,
    pub result: usize,
    pub gamma: f64,
    pub c0: f64,
    pub e_s0: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Resolution {
    pub trajectory: SdwTrajectory,
    pub outcome: OutcomeKind,
    pub incoming: Vec<Incoming>,
}

/// First time t >= t_now (up to `horizon`) where the two fronts meet.
pub fn next_crossing(
    left: &FrontCurve,
    right: &FrontCurve,
    t_now: f64,
    horizon: f64,
    tol: &Tolerances,
) -> Option<(f64, f64)> {
    let gap = |t: f64| right.position(t) - left.position(t);
    let xtol = |t: f64| tol.root_rel * (1.0 + t.abs());
    let found = |t: f64| Some((t, 0.5 * (left.position(t) + right.position(t))));
    let mut t = t_now.max(left.birth_time()).max(right.birth_time());
    let mut g = gap(t);
    if g <= 0.0 {
        if left.speed(t) > right.speed(t) {
            return found(t);
        }
        // touching but separating, e.g. the two edges of a fresh fan
        t += 1e-9 * (1.0 + t.abs());
        g = gap(t);
        if g <= 0.0 {
            return None;
        }
    }
    for iter in 0..400 {
        if t > horizon {
            return None;
        }
        let vt = left.max_future_speed(t) - right.min_future_speed(t);
        if vt <= 0.0 {
            return None;
        }
        let t_safe = t + g / vt;
        let r = left.speed(t) - right.speed(t);
        if r > 0.0 {
            let t_n = (t + g / r).min(horizon.max(t_safe));
            if t_n > t_safe {
                let g_n = gap(t_n);
                if g_n <= 0.0 {
                    let g_s = gap(t_safe);
                    let (a, b) = if g_s > 0.0 { (t_safe, t_n) } else { (t, t_safe) };
                    let root = brent(gap, a, b, xtol(b));
                    return found(root);
                }
            }
        }
        if t_safe - t <= xtol(t) {
            return found(t_safe);
        }
        t = t_safe;
        g = gap(t);
        if g <= 0.0 {
            return found(t);
        }
        if iter == 399 {
            break;
        }
    }
    // slow approach: geometric scan for a sign change, then bracket
    let mut step = g / (left.max_future_speed(t) - right.min_future_speed(t)).max(f64::MIN_POSITIVE);
    let mut prev = t;
    while prev <= horizon {
        let next = (prev + step).min(horizon);
        if gap(next) <= 0.0 {
            return found(brent(gap, prev, next, xtol(next)));
        }
        if next >= horizon {
            break;
        }
        prev = next;
        step *= 2.0;
    }
    None
}

/// Merge adjacent fronts meeting at (t, x) into one outgoing shadow wave.
pub fn resolve(participants: &[WaveFront], t: f64, x: f64) -> Result<Resolution> {
    if participants.len() < 2 {
        return Err(SdwError::NotAdjacent("an interaction needs at least two fronts".into()));
    }
    for w in participants.windows(2) {
        if w[0].right != w[1].left {
            return Err(SdwError::NotAdjacent(format!("fronts {} and {}", w[0].id, w[1].id)));
        }
    }
    let three = participants
        .iter()
        .flat_map(|p| [p.left, p.right])
        .any(|r| matches!(r, Region::Fluid(s) if s.e.is_some()));
    let mut incoming = Vec::with_capacity(participants.len());
    for p in participants {
        let pt = p.curve.point(t);
        let e_s = match p.curve.trajectory() {
            Some(s) if three && pt.xi > 0.0 => Some(s.energy_component(t)?),
            _ => None,
        };
        incoming.push(Incoming { id: p.id, xi: pt.xi, us: pt.us, e_s });
    }
    let left = participants[0].left.state_at(x, t);
    let right = participants[participants.len() - 1].right.state_at(x, t);
    let gamma: f64 = incoming.iter().map(|p| p.xi).sum();
    let momentum: f64 = incoming.iter().map(|p| p.xi * p.us).sum();
    let traj = if gamma > 0.0 {
        let traj = SdwTrajectory::new(t, x, gamma, momentum / gamma, left, right)?;
        if three {
            let total: f64 = incoming
                .iter()
                .map(|p| p.xi * (0.5 * p.us * p.us + p.e_s.unwrap_or(0.0)))
                .sum();
            let c0 = traj.c0;
            traj.with_energy((total - 0.5 * gamma * c0 * c0) / gamma)
        } else {
            traj
        }
    } else if left.rho > 0.0 && right.rho > 0.0 && left.u > right.u {
        SdwTrajectory::simple(t, x, left, right)?
    } else {
        return Err(SdwError::Inadmissible(format!(
            "zero total strength with u_l = {} <= u_r = {}",
            left.u, right.u
        )));
    };
    Ok(Resolution { outcome: OutcomeKind::from_kind(traj.kind), trajectory: traj, incoming })
}

/// Indices [lo, hi] of the chain of fronts that meet together with the head pair.
///
/// `crossings[i]` is the pending meeting of fronts i and i + 1; the head pair is (head, head + 1).
pub fn cluster_events(head: usize, crossings: &[Option<(f64, f64)>], tol_cluster: f64) -> (usize, usize) {
    let (t, x) = match crossings.get(head).copied().flatten() {
        Some(c) => c,
        None => return (head, head + 1),
    };
    let near = |c: Option<(f64, f64)>| match c {
        Some((ti, xi)) => (ti - t).abs() <= tol_cluster && (xi - x).abs() <= tol_cluster * (1.0 + x.abs()),
        None => false,
    };
    let mut lo = head;
    while lo > 0 && near(crossings[lo - 1]) {
        lo -= 1;
    }
    let mut hi = head + 1;
    while hi < crossings.len() && near(crossings[hi]) {
        hi += 1;
    }
    (lo, hi)
}
