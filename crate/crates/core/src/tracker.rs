//! The front-tracking event loop: Riemann initialization, clustered interactions, history.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Result, SdwError};
use crate::interactions::{
    cluster_events, next_crossing, resolve, FrontRole, InteractionEvent, Region, VacuumFan, WaveFront,
};
use crate::riemann::{is_trivial, solve_riemann, RiemannSolution};
use crate::sdw::{FrontCurve, SdwTrajectory};
use crate::states::{build_partition, sample_states, InitialData, Partition, SampledStates};
use crate::Tolerances;

/// A front together with its life span and genealogy.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontRecord {
    pub front: WaveFront,
    pub birth: f64,
    /// Time the front was absorbed into an interaction; `None` while alive.
    pub death: Option<f64>,
    pub parents: Vec<usize>,
    pub child: Option<usize>,
    /// Left-to-right order key, stable under merges.
    pub rank: usize,
}

impl FrontRecord {
    /// Alive on [birth, death).
    pub fn alive_at(&self, t: f64) -> bool {
        self.birth <= t && self.death.is_none_or(|d| t < d)
    }
}

#[derive(Debug, Clone, Copy)]
struct Pending {
    t: f64,
    x: f64,
    left: usize,
    right: usize,
}

impl PartialEq for Pending {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Pending {}
impl PartialOrd for Pending {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Pending {
    fn cmp(&self, o: &Self) -> Ordering {
        self.t
            .total_cmp(&o.t)
            .then(self.x.total_cmp(&o.x))
            .then(self.left.cmp(&o.left))
    }
}

/// Moving window whose ends travel with the constant outer states, so no mass crosses them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovingWindow {
    pub a0: f64,
    pub ua: f64,
    pub b0: f64,
    pub ub: f64,
}

impl MovingWindow {
    pub fn at(&self, t: f64) -> (f64, f64) {
        (self.a0 + self.ua * t, self.b0 + self.ub * t)
    }
}

#[derive(Debug, Clone)]
pub struct WaveFan {
    pub partition: Partition,
    pub samples: SampledStates,
    records: Vec<FrontRecord>,
    initial: Vec<usize>,
    live: Vec<usize>,
    next_cross: Vec<Option<(f64, f64)>>,
    queue: BinaryHeap<Reverse<Pending>>,
    horizon: f64,
    t_now: f64,
    history: Vec<InteractionEvent>,
    tol: Tolerances,
}

impl WaveFan {
    /// Solve the Riemann problem at every partition point and seed the front list.
    pub fn initialize(samples: &SampledStates, p: &Partition, tol: Tolerances) -> Result<WaveFan> {
        let s = &samples.states;
        if s.len() != p.points.len() {
            return Err(SdwError::InvalidState(format!(
                "{} states for {} partition points",
                s.len(),
                p.points.len()
            )));
        }
        let mut fronts = Vec::new();
        let line = |x0: f64, speed: f64| FrontCurve::Line { t0: 0.0, x0, speed };
        for i in 0..s.len() - 1 {
            let (l, r, y) = (s[i], s[i + 1], p.points[i]);
            if is_trivial(&l, &r) {
                continue;
            }
            let (lr, rr) = (Region::Fluid(l), Region::Fluid(r));
            match solve_riemann(&l, &r)? {
                RiemannSolution::Contact { speed } => {
                    fronts.push((FrontRole::Contact, line(y, speed), lr, rr));
                }
                RiemannSolution::VacuumFan { u_left, u_right } => {
                    let fan = Region::Vacuum(VacuumFan { anchor: y, u_left, u_right });
                    fronts.push((FrontRole::FanLeftEdge, line(y, u_left), lr, fan));
                    fronts.push((FrontRole::FanRightEdge, line(y, u_right), fan, rr));
                }
                RiemannSolution::SimpleSdw { .. } => {
                    let traj = SdwTrajectory::simple(0.0, y, l, r)?;
                    fronts.push((FrontRole::Shadow, FrontCurve::Shadow(traj), lr, rr));
                }
            }
        }
        let records: Vec<FrontRecord> = fronts
            .into_iter()
            .enumerate()
            .map(|(id, (role, curve, left, right))| FrontRecord {
                front: WaveFront { id, role, curve, left, right },
                birth: 0.0,
                death: None,
                parents: Vec::new(),
                child: None,
                rank: id,
            })
            .collect();
        let n = records.len();
        Ok(WaveFan {
            partition: p.clone(),
            samples: samples.clone(),
            records,
            initial: (0..n).collect(),
            live: (0..n).collect(),
            next_cross: vec![None; n],
            queue: BinaryHeap::new(),
            horizon: 0.0,
            t_now: 0.0,
            history: Vec::new(),
            tol,
        })
    }

    /// Partition, sample and initialize in one step.
    pub fn from_data(data: &InitialData, epsilon: f64, c: f64, tol: Tolerances) -> Result<WaveFan> {
        data.validate()?;
        let p = build_partition(data, epsilon, c)?;
        let s = sample_states(data, &p)?;
        WaveFan::initialize(&s, &p, tol)
    }

    pub fn t_now(&self) -> f64 {
        self.t_now
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    pub fn history(&self) -> &[InteractionEvent] {
        &self.history
    }

    pub fn records(&self) -> &[FrontRecord] {
        &self.records
    }

    pub fn record(&self, id: usize) -> &FrontRecord {
        &self.records[id]
    }

    /// Ids of the active fronts, left to right.
    pub fn live(&self) -> &[usize] {
        &self.live
    }

    pub fn count_fronts(&self) -> usize {
        self.live.len()
    }

    pub fn fronts(&self) -> Vec<&WaveFront> {
        self.live.iter().map(|&id| &self.records[id].front).collect()
    }

    fn refresh_pair(&mut self, k: usize) {
        let (l, r) = (self.live[k], self.live[k + 1]);
        let c = next_crossing(
            &self.records[l].front.curve,
            &self.records[r].front.curve,
            self.t_now,
            self.horizon,
            &self.tol,
        );
        self.next_cross[l] = c;
        if let Some((t, x)) = c {
            self.queue.push(Reverse(Pending { t, x, left: l, right: r }));
        }
    }

    fn rebuild_queue(&mut self) {
        self.queue.clear();
        for &id in &self.live {
            self.next_cross[id] = None;
        }
        for k in 0..self.live.len().saturating_sub(1) {
            self.refresh_pair(k);
        }
    }

    /// Advance to `t_end`, resolving every interaction on the way.
    pub fn run_until(&mut self, t_end: f64) -> Result<()> {
        if t_end < self.t_now {
            return Err(SdwError::Invariant(format!("cannot run back from {} to {t_end}", self.t_now)));
        }
        if t_end > self.horizon {
            self.horizon = t_end;
            self.rebuild_queue();
        }
        while let Some(Reverse(top)) = self.queue.peek().copied() {
            if top.t > t_end {
                break;
            }
            self.queue.pop();
            let k = match self.live.iter().position(|&id| id == top.left) {
                Some(k) if self.live.get(k + 1) == Some(&top.right) => k,
                _ => continue,
            };
            if top.t < self.t_now - self.tol.root_rel * (1.0 + self.t_now.abs()) {
                return Err(SdwError::Invariant(format!(
                    "event time regression: {} after {}",
                    top.t, self.t_now
                )));
            }
            let crossings: Vec<Option<(f64, f64)>> =
                self.live[..self.live.len() - 1].iter().map(|&id| self.next_cross[id]).collect();
            let (lo, hi) = cluster_events(k, &crossings, self.tol.cluster);
            self.merge(lo, hi, top.t.max(self.t_now), top.x)?;
        }
        self.t_now = t_end;
        Ok(())
    }

    fn merge(&mut self, lo: usize, hi: usize, t: f64, x: f64) -> Result<()> {
        let ids: Vec<usize> = self.live[lo..=hi].to_vec();
        let parts: Vec<WaveFront> = ids.iter().map(|&id| self.records[id].front.clone()).collect();
        let res = resolve(&parts, t, x)?;
        let id = self.records.len();
        let left = parts[0].left;
        let right = parts[parts.len() - 1].right;
        let rank = ids.iter().map(|&i| self.records[i].rank).min().unwrap_or(id);
        for &p in &ids {
            let r = &mut self.records[p];
            r.death = Some(t);
            r.child = Some(id);
        }
        self.history.push(InteractionEvent {
            time: t,
            position: x,
            participants: ids.clone(),
            outcome: res.outcome,
            incoming: res.incoming,
            result: id,
            gamma: res.trajectory.gamma,
            c0: res.trajectory.c0,
            e_s0: res.trajectory.e_s0,
        });
        self.records.push(FrontRecord {
            front: WaveFront {
                id,
                role: FrontRole::Shadow,
                curve: FrontCurve::Shadow(res.trajectory),
                left,
                right,
            },
            birth: t,
            death: None,
            parents: ids,
            child: None,
            rank,
        });
        self.next_cross.push(None);
        self.live.splice(lo..=hi, [id]);
        self.t_now = t;
        if lo > 0 {
            self.refresh_pair(lo - 1);
        }
        if lo + 1 < self.live.len() {
            self.refresh_pair(lo);
        }
        Ok(())
    }

    /// Active fronts at time t, left to right; at an event time the outgoing wave is listed.
    pub fn live_at(&self, t: f64) -> Result<Vec<usize>> {
        self.replay(t, true)
    }

    /// Active fronts just before t; at an event time the incoming waves are listed.
    pub fn live_before(&self, t: f64) -> Result<Vec<usize>> {
        self.replay(t, false)
    }

    fn replay(&self, t: f64, inclusive: bool) -> Result<Vec<usize>> {
        if t > self.t_now + 1e-12 * (1.0 + self.t_now.abs()) || t < 0.0 {
            return Err(SdwError::OutsideHorizon { t, horizon: self.t_now });
        }
        let mut live = self.initial.clone();
        for ev in self.history.iter().take_while(|e| e.time < t || (inclusive && e.time == t)) {
            let lo = live
                .iter()
                .position(|&id| id == ev.participants[0])
                .ok_or_else(|| SdwError::Invariant("history replay lost a front".into()))?;
            live.splice(lo..lo + ev.participants.len(), [ev.result]);
        }
        Ok(live)
    }

    /// Consecutive time intervals with a fixed front list, covering [0, t_end].
    pub fn segments(&self, t_end: f64) -> Vec<(f64, f64, Vec<usize>)> {
        let mut out = Vec::new();
        let mut live = self.initial.clone();
        let mut t0 = 0.0;
        for ev in self.history.iter().take_while(|e| e.time < t_end) {
            if ev.time > t0 {
                out.push((t0, ev.time, live.clone()));
                t0 = ev.time;
            }
            if let Some(lo) = live.iter().position(|&id| id == ev.participants[0]) {
                live.splice(lo..lo + ev.participants.len(), [ev.result]);
            }
        }
        if t_end > t0 {
            out.push((t0, t_end, live));
        }
        out
    }

    /// Regions between consecutive fronts at time t: one more entry than fronts.
    pub fn regions(&self, ids: &[usize]) -> Vec<Region> {
        let s = &self.samples.states;
        if ids.is_empty() {
            return vec![Region::Fluid(s[s.len() - 1])];
        }
        let mut out = Vec::with_capacity(ids.len() + 1);
        out.push(self.records[ids[0]].front.left);
        for &id in ids {
            out.push(self.records[id].front.right);
        }
        out
    }

    /// Window that contains every front up to `t_end` and moves with the outer states.
    pub fn moving_window(&self, t_end: f64) -> MovingWindow {
        let s = &self.samples.states;
        let (umin, umax) = s
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), st| (a.min(st.u), b.max(st.u)));
        let (first, last) = (s[0], s[s.len() - 1]);
        let p = &self.partition.points;
        let (r, x_max) = (p[0], p[p.len() - 1]);
        let t = t_end.max(0.0);
        MovingWindow {
            a0: r - (first.u - umin) * t - 1.0,
            ua: first.u,
            b0: x_max + (umax - last.u) * t + 1.0,
            ub: last.u,
        }
    }

    /// Id of the front born at the junction R, if any.
    pub fn junction_front(&self) -> Result<usize> {
        let r = self.partition.points[0];
        self.initial
            .iter()
            .copied()
            .find(|&id| {
                let f = &self.records[id].front;
                f.curve.position(0.0) == r && f.role == FrontRole::Shadow
            })
            .ok_or(SdwError::NoJunctionFront)
    }

    /// The 0-SDW: the junction front followed through its descendants.
    pub fn junction_chain(&self) -> Result<Vec<usize>> {
        let mut chain = vec![self.junction_front()?];
        while let Some(c) = self.records[*chain.last().unwrap()].child {
            chain.push(c);
        }
        Ok(chain)
    }

    /// Ordering, overcompressibility and adjacency of the active list at `t_now`.
    pub fn check_invariants(&self) -> Result<()> {
        let t = self.t_now;
        let slack = |x: f64| 1e-9 * (1.0 + x.abs());
        for w in self.live.windows(2) {
            let (a, b) = (&self.records[w[0]].front, &self.records[w[1]].front);
            if a.right != b.left {
                return Err(SdwError::Invariant(format!("fronts {} and {} share no region", a.id, b.id)));
            }
            let (xa, xb) = (a.position(t), b.position(t));
            if xa > xb + slack(xb) {
                return Err(SdwError::Invariant(format!(
                    "front order violated at t = {t}: {xa} > {xb} (ids {} {})",
                    a.id, b.id
                )));
            }
        }
        for &id in &self.live {
            if let Some(s) = self.records[id].front.curve.trajectory() {
                let us = s.speed(t)?;
                let hi = if s.left.rho > 0.0 { s.left.u } else { f64::INFINITY };
                let lo = if s.right.rho > 0.0 { s.right.u } else { f64::NEG_INFINITY };
                if us > hi + slack(hi) || us < lo - slack(lo) {
                    return Err(SdwError::Invariant(format!("front {id} not overcompressive at t = {t}")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{FluidState, Profile};

    fn data(u0: f64, u: Profile) -> InitialData {
        InitialData::new(FluidState::new(1.0, u0), 0.0, Profile::Constant(1.0), u, 1.0)
    }

    #[test]
    fn constant_data_has_no_fronts() {
        let fan = WaveFan::from_data(&data(1.0, Profile::Constant(1.0)), 1e-3, 2.0, Tolerances::default())
            .unwrap();
        assert_eq!(fan.count_fronts(), 0);
    }

    #[test]
    fn decreasing_data_gives_one_sdw_per_point() {
        let mut fan =
            WaveFan::from_data(&data(2.0, Profile::Linear { a: 1.0, b: -1.0 }), 1e-3, 2.0, Tolerances::default())
                .unwrap();
        assert_eq!(fan.count_fronts(), 10);
        assert!(fan.fronts().iter().all(|f| f.role == FrontRole::Shadow));
        fan.run_until(50.0).unwrap();
        assert_eq!(fan.count_fronts(), 1);
        let chain = fan.junction_chain().unwrap();
        assert_eq!(*chain.last().unwrap(), fan.live()[0]);
    }

    #[test]
    fn increasing_data_has_no_events() {
        let mut fan =
            WaveFan::from_data(&data(-0.5, Profile::Linear { a: 0.0, b: 1.0 }), 1e-3, 2.0, Tolerances::default())
                .unwrap();
        let n = fan.count_fronts();
        fan.run_until(10.0).unwrap();
        assert_eq!(fan.count_fronts(), n);
        assert!(fan.history().is_empty());
        fan.check_invariants().unwrap();
    }

    #[test]
    fn replay_matches_live_list() {
        let mut fan =
            WaveFan::from_data(&data(2.0, Profile::Linear { a: 1.0, b: -1.0 }), 1e-3, 2.0, Tolerances::default())
                .unwrap();
        fan.run_until(0.7).unwrap();
        assert_eq!(fan.live_at(0.7).unwrap(), fan.live().to_vec());
        let segs = fan.segments(0.7);
        assert_eq!(segs.last().unwrap().2, fan.live().to_vec());
        assert!(segs.windows(2).all(|w| w[0].1 == w[1].0));
    }
}
