//! Measure snapshots, weak-form residuals, the classical oracle and refinement diagnostics.

use crate::error::{Result, SdwError};
use crate::interactions::Region;
use crate::numeric::{brent, bump, bump_cdf, bump_deriv, integrate};
use crate::sdw::FrontCurve;
use crate::states::{FluidState, InitialData, Partition};
use crate::tracker::WaveFan;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub region: Region,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub id: usize,
    pub x: f64,
    pub mass: f64,
    pub momentum: f64,
    pub speed: f64,
    /// Specific internal energy of the atom (3x3 only).
    pub e_s: Option<f64>,
}

impl Atom {
    pub fn energy(&self) -> f64 {
        self.mass * (0.5 * self.speed * self.speed + self.e_s.unwrap_or(0.0))
    }
}

/// Conserved totals over an interval.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Totals {
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
}

/// Solution at one time: piecewise-constant part plus atoms on the shadow-wave fronts.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSnapshot {
    pub t: f64,
    /// Tiles the real line; the outer pieces are unbounded.
    pub pieces: Vec<Piece>,
    pub atoms: Vec<Atom>,
}

impl MeasureSnapshot {
    fn piece_at(&self, x: f64) -> &Piece {
        let k = self.pieces.partition_point(|p| p.hi < x);
        &self.pieces[k.min(self.pieces.len() - 1)]
    }

    /// Absolutely continuous part at x (vacuum carries the fan velocity).
    pub fn state_at(&self, x: f64) -> FluidState {
        self.piece_at(x).region.state_at(x, self.t)
    }

    pub fn totals(&self, a: f64, b: f64) -> Totals {
        let mut out = Totals::default();
        for p in &self.pieces {
            let (lo, hi) = (p.lo.max(a), p.hi.min(b));
            if hi <= lo {
                continue;
            }
            if let Region::Fluid(s) = p.region {
                let w = hi - lo;
                out.mass += s.rho * w;
                out.momentum += s.momentum() * w;
                out.energy += s.energy_density() * w;
            }
        }
        for at in self.atoms.iter().filter(|at| at.x >= a && at.x <= b) {
            out.mass += at.mass;
            out.momentum += at.momentum;
            out.energy += at.energy();
        }
        out
    }

    /// Mass in [a, x] for each x of `xs`, atoms included.
    pub fn cumulative_mass(&self, a: f64, xs: &[f64]) -> Vec<f64> {
        xs.iter().map(|&x| self.totals(a, x).mass).collect()
    }
}

fn assemble(fan: &WaveFan, t: f64, ids: &[usize]) -> Result<MeasureSnapshot> {
    let regions = fan.regions(ids);
    let mut xs: Vec<f64> = ids.iter().map(|&id| fan.record(id).front.position(t)).collect();
    for k in 1..xs.len() {
        if xs[k] < xs[k - 1] {
            xs[k] = xs[k - 1];
        }
    }
    let mut pieces = Vec::with_capacity(regions.len());
    let mut lo = f64::NEG_INFINITY;
    for (k, region) in regions.into_iter().enumerate() {
        let hi = xs.get(k).copied().unwrap_or(f64::INFINITY);
        pieces.push(Piece { lo, hi, region });
        lo = hi;
    }
    let mut atoms = Vec::new();
    for (&id, &x) in ids.iter().zip(&xs) {
        if let FrontCurve::Shadow(s) = &fan.record(id).front.curve {
            let p = s.eval(t)?;
            let e_s = if s.e_s0.is_some() { Some(s.energy_component(t)?) } else { None };
            atoms.push(Atom { id, x, mass: p.xi, momentum: p.xi * p.us, speed: p.us, e_s });
        }
    }
    Ok(MeasureSnapshot { t, pieces, atoms })
}

/// Snapshot at t; at an interaction time the outgoing wave is shown.
pub fn snapshot(fan: &WaveFan, t: f64) -> Result<MeasureSnapshot> {
    let ids = fan.live_at(t)?;
    assemble(fan, t, &ids)
}

/// Snapshot at t with the incoming waves of any interaction at exactly t.
pub fn snapshot_before(fan: &WaveFan, t: f64) -> Result<MeasureSnapshot> {
    let ids = fan.live_before(t)?;
    assemble(fan, t, &ids)
}

/// Tensor bump exp(-1/(1-s^2)) in x and t, scaled to a rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    pub xc: f64,
    pub tc: f64,
    pub rx: f64,
    pub rt: f64,
}

impl TestFunction {
    pub fn new(xc: f64, tc: f64, rx: f64, rt: f64) -> Result<Self> {
        if !(rx > 0.0 && rt > 0.0) || !xc.is_finite() || !tc.is_finite() {
            return Err(SdwError::BadTestFunction(format!("radii ({rx}, {rt}) must be positive")));
        }
        if tc + rt <= 0.0 {
            return Err(SdwError::BadTestFunction("support lies before t = 0".into()));
        }
        Ok(TestFunction { xc, tc, rx, rt })
    }

    fn sx(&self, x: f64) -> f64 {
        (x - self.xc) / self.rx
    }

    fn time_factor(&self, t: f64) -> (f64, f64) {
        let s = (t - self.tc) / self.rt;
        (bump(s), bump_deriv(s) / self.rt)
    }

    pub fn value(&self, x: f64, t: f64) -> f64 {
        bump(self.sx(x)) * self.time_factor(t).0
    }

    /// (phi_t, phi_x) at (x, t).
    pub fn gradient(&self, x: f64, t: f64) -> (f64, f64) {
        let (tt, dt) = self.time_factor(t);
        let s = self.sx(x);
        (bump(s) * dt, bump_deriv(s) / self.rx * tt)
    }

    /// Integral of the spatial factor over [a, b].
    fn space_integral(&self, a: f64, b: f64) -> f64 {
        self.rx * (bump_cdf(self.sx(b)) - bump_cdf(self.sx(a)))
    }

    /// Difference of the spatial factor between b and a.
    fn space_jump(&self, a: f64, b: f64) -> f64 {
        let v = |x: f64| if x.is_finite() { bump(self.sx(x)) } else { 0.0 };
        v(b) - v(a)
    }

    pub fn t_range(&self) -> (f64, f64) {
        ((self.tc - self.rt).max(0.0), self.tc + self.rt)
    }
}

/// How shadow waves enter the weak residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rendering {
    /// Delta atoms on the central lines (the epsilon -> 0 limit).
    Atoms,
    /// Each wave spread over [c - h, c + h] with h = epsilon t / 2 and density xi / (2h).
    Widened,
}

/// Contribution of a constant state on [a, b] to the mass and momentum residual integrands.
fn strip(phi: &TestFunction, rho: f64, u: f64, a: f64, b: f64, t: f64) -> (f64, f64) {
    if rho == 0.0 || !(b > a) {
        return (0.0, 0.0);
    }
    let (tt, dt) = phi.time_factor(t);
    let it = phi.space_integral(a, b) * dt;
    let ix = phi.space_jump(a, b) * tt;
    (rho * (it + u * ix), rho * u * (it + u * ix))
}

/// Weak-form residuals (E1, E2) of the tracked solution against a test function.
pub fn weak_residual(fan: &WaveFan, phi: &TestFunction, rendering: Rendering) -> Result<(f64, f64)> {
    let (t_lo, t_hi) = phi.t_range();
    if t_hi > fan.t_now() * (1.0 + 1e-12) {
        return Err(SdwError::BadTestFunction(format!(
            "support reaches t = {t_hi} beyond the evolved time {}",
            fan.t_now()
        )));
    }
    let tol = fan.tolerances().quad_abs;
    let eps = fan.partition.epsilon;
    let mut e1 = 0.0;
    let mut e2 = 0.0;
    if phi.tc - phi.rt < 0.0 {
        let p = &fan.partition.points;
        let s = &fan.samples.states;
        let (t0, _) = phi.time_factor(0.0);
        for (i, st) in s.iter().enumerate() {
            let a = if i == 0 { f64::NEG_INFINITY } else { p[i - 1] };
            let b = if i + 1 == s.len() { f64::INFINITY } else { p[i] };
            let w = phi.rx * (bump_cdf(phi.sx(b)) - bump_cdf(phi.sx(a))) * t0;
            e1 += st.rho * w;
            e2 += st.momentum() * w;
        }
    }
    for (a, b, ids) in fan.segments(t_hi) {
        let (a, b) = (a.max(t_lo), b.min(t_hi));
        if b <= a {
            continue;
        }
        let regions = fan.regions(&ids);
        let curves: Vec<&FrontCurve> = ids.iter().map(|&id| &fan.record(id).front.curve).collect();
        let integrand = |t: f64, comp: usize| -> f64 {
            let xs: Vec<f64> = curves.iter().map(|c| c.position(t)).collect();
            let mut acc = 0.0;
            for (k, r) in regions.iter().enumerate() {
                if let Region::Fluid(s) = r {
                    let lo = if k == 0 { f64::NEG_INFINITY } else { xs[k - 1] };
                    let hi = xs.get(k).copied().unwrap_or(f64::INFINITY);
                    let v = strip(phi, s.rho, s.u, lo, hi, t);
                    acc += if comp == 0 { v.0 } else { v.1 };
                }
            }
            for (k, c) in curves.iter().enumerate() {
                let pt = c.point(t);
                if pt.xi <= 0.0 {
                    continue;
                }
                let (ft, fx) = phi.gradient(pt.c, t);
                let atom = pt.xi * (ft + pt.us * fx);
                let atom = if comp == 0 { atom } else { atom * pt.us };
                acc += atom;
                if rendering == Rendering::Widened {
                    let h = 0.5 * eps * t;
                    if h > 0.0 {
                        let (l, r) = (regions[k].state_at(pt.c, t), regions[k + 1].state_at(pt.c, t));
                        let inner = strip(phi, pt.xi / (2.0 * h), pt.us, pt.c - h, pt.c + h, t);
                        let left = strip(phi, l.rho, l.u, pt.c - h, pt.c, t);
                        let right = strip(phi, r.rho, r.u, pt.c, pt.c + h, t);
                        let d = if comp == 0 {
                            inner.0 - left.0 - right.0
                        } else {
                            inner.1 - left.1 - right.1
                        };
                        acc += d - atom;
                    }
                }
            }
            acc
        };
        e1 += integrate(|t| integrand(t, 0), a, b, tol);
        e2 += integrate(|t| integrand(t, 1), a, b, tol);
    }
    Ok((e1, e2))
}

/// Life span of the classical solution: inf of -1/u'(x) over focusing x > R.
pub fn t_max_unfiltered(data: &InitialData) -> f64 {
    focusing_points(data)
        .into_iter()
        .map(|(t, _)| t)
        .fold(f64::INFINITY, f64::min)
}

/// Sampled focusing points (time, position) of the decreasing characteristics.
fn focusing_points(data: &InitialData) -> Vec<(f64, f64)> {
    let n = 20_000;
    let mut xs: Vec<f64> = (0..=n)
        .map(|k| data.r + (data.x_max - data.r) * k as f64 / n as f64)
        .collect();
    xs.extend(data.extrema());
    xs.iter()
        .filter_map(|&x| {
            let d = data.u.derivative(x);
            (d < 0.0).then(|| (-1.0 / d, x - data.u.value(x) / d))
        })
        .collect()
}

/// Life span restricted to focusing points D_x not yet absorbed by the 0-SDW curve.
pub fn t_max(data: &InitialData, gamma: &GammaCurve) -> f64 {
    let (_, t_end) = gamma.span();
    focusing_points(data)
        .into_iter()
        .filter(|&(t, x)| t > t_end || x > gamma.position(t).unwrap_or(f64::NEG_INFINITY))
        .map(|(t, _)| t)
        .fold(f64::INFINITY, f64::min)
}

/// Classical solution right of the 0-SDW, by characteristics x = psi + u(psi) t.
pub fn classical_solution(data: &InitialData, x: f64, t: f64) -> Result<FluidState> {
    let life = t_max_unfiltered(data);
    if t >= life {
        return Err(SdwError::PastLifeSpan { t, t_max: life });
    }
    if t < 0.0 {
        return Err(SdwError::OutsideHorizon { t, horizon: life });
    }
    if t == 0.0 {
        return Ok(data.state_at(x));
    }
    let u_end = data.u.value(data.x_max);
    let u_at = |p: f64| data.u.value(p.min(data.x_max));
    let g = |p: f64| p + u_at(p) * t - x;
    if g(data.r) > 0.0 {
        return Err(SdwError::NotClassical { x, t });
    }
    let hi = data.x_max.max(x - u_end * t) + 1.0;
    let psi = brent(g, data.r, hi, 1e-15 * (1.0 + x.abs()));
    if psi >= data.x_max {
        return Ok(data.state_at(data.x_max));
    }
    let jac = 1.0 + data.u.derivative(psi) * t;
    let s = data.state_at(psi);
    Ok(FluidState { rho: s.rho / jac, ..s })
}

/// Halve every cell; the cube-root scale halves, so epsilon drops by 8.
pub fn refine_partition(p: &Partition) -> Result<Partition> {
    refine_partition_ratio(p, 0.5)
}

/// Split every cell at fraction `theta` of its length.
pub fn refine_partition_ratio(p: &Partition, theta: f64) -> Result<Partition> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(SdwError::Refinement(format!("split fraction {theta} outside (0, 1)")));
    }
    let mut points = Vec::with_capacity(2 * p.points.len());
    for w in p.points.windows(2) {
        points.push(w[0]);
        points.push(w[0] + theta * (w[1] - w[0]));
    }
    points.push(*p.points.last().unwrap());
    let q = Partition { points, epsilon: p.epsilon / 8.0, c: p.c, mode: p.mode };
    q.check_bounds().map_err(|e| SdwError::Refinement(e.to_string()))?;
    Ok(q)
}

/// The 0-SDW front x = c(t) as a chain of closed-form pieces.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaCurve {
    pub level: usize,
    pub pieces: Vec<(f64, f64, FrontCurve)>,
    pub samples: Vec<(f64, f64)>,
}

impl GammaCurve {
    pub fn extract(fan: &WaveFan, level: usize) -> Result<GammaCurve> {
        let t_end = fan.t_now();
        let mut pieces = Vec::new();
        let mut samples = Vec::new();
        for id in fan.junction_chain()? {
            let r = fan.record(id);
            let t1 = r.death.unwrap_or(t_end).min(t_end);
            if t1 < r.birth {
                break;
            }
            pieces.push((r.birth, t1, r.front.curve));
            for k in 0..=32 {
                let t = r.birth + (t1 - r.birth) * k as f64 / 32.0;
                samples.push((t, r.front.curve.position(t)));
            }
        }
        Ok(GammaCurve { level, pieces, samples })
    }

    pub fn span(&self) -> (f64, f64) {
        match (self.pieces.first(), self.pieces.last()) {
            (Some(a), Some(b)) => (a.0, b.1),
            _ => (0.0, 0.0),
        }
    }

    pub fn anchor(&self) -> f64 {
        self.pieces.first().map_or(f64::NAN, |p| p.2.position(p.0))
    }

    pub fn position(&self, t: f64) -> Result<f64> {
        let (a, b) = self.span();
        if t < a || t > b {
            return Err(SdwError::OutsideHorizon { t, horizon: b });
        }
        let k = self.pieces.partition_point(|p| p.1 < t).min(self.pieces.len() - 1);
        Ok(self.pieces[k].2.position(t))
    }

    pub fn speed(&self, t: f64) -> Result<f64> {
        self.position(t)?;
        let k = self.pieces.partition_point(|p| p.1 < t).min(self.pieces.len() - 1);
        Ok(self.pieces[k].2.speed(t))
    }
}

/// Largest position gap between two 0-SDW curves over [0, horizon].
pub fn gamma_distance(g1: &GammaCurve, g2: &GammaCurve, horizon: f64) -> Result<f64> {
    let (a1, a2) = (g1.anchor(), g2.anchor());
    if (a1 - a2).abs() > 1e-12 * (1.0 + a1.abs()) {
        return Err(SdwError::AnchorMismatch(a1, a2));
    }
    let end = g1.span().1.min(g2.span().1);
    if horizon > end {
        return Err(SdwError::OutsideHorizon { t: horizon, horizon: end });
    }
    let mut ts: Vec<f64> = (0..=4000).map(|k| horizon * k as f64 / 4000.0).collect();
    for g in [g1, g2] {
        ts.extend(g.pieces.iter().map(|p| p.0).filter(|&t| t <= horizon));
    }
    let mut best: f64 = 0.0;
    for t in ts {
        best = best.max((g1.position(t)? - g2.position(t)?).abs());
    }
    Ok(best)
}

/// Smallest gap u_s - u between the 0-SDW speed and the fluid velocity on its right.
pub fn gamma_alpha(fan: &WaveFan, horizon: f64) -> Result<f64> {
    let mut alpha = f64::INFINITY;
    for id in fan.junction_chain()? {
        let r = fan.record(id);
        let t1 = r.death.unwrap_or(horizon).min(horizon);
        if t1 < r.birth {
            break;
        }
        for k in 0..=32 {
            let t = r.birth + (t1 - r.birth) * k as f64 / 32.0;
            let x = r.front.position(t);
            let right = r.front.right.state_at(x, t);
            if right.rho > 0.0 {
                alpha = alpha.min(r.front.curve.speed(t) - right.u);
            }
        }
    }
    Ok(alpha)
}
