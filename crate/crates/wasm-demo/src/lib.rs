//! Browser bindings for the shadow-wave tracker: Riemann trajectories, x-t front
//! diagrams and density profiles. Results are flat `f64` arrays for plotting.

use sdw_core::analysis::snapshot;
use sdw_core::interactions::{FrontRole, Region};
use sdw_core::sdw::SdwTrajectory;
use sdw_core::states::{FluidState, InitialData, Profile};
use sdw_core::tracker::WaveFan;
use sdw_core::Tolerances;
use wasm_bindgen::prelude::*;

pub const PRESETS: [&str; 6] = ["case-iii", "valley", "zigzag", "hat", "constant-density", "case-ii-stopping"];

pub fn preset(name: &str) -> Result<InitialData, String> {
    let affine = |k: &[(f64, f64)]| Profile::AffineByParts { knots: k.to_vec() };
    let one = Profile::Constant(1.0);
    let (u0, rho, u) = match name {
        "case-iii" => (2.0, one, Profile::Linear { a: 1.0, b: -1.0 }),
        "valley" => (1.0, one, affine(&[(0.0, 1.0), (0.5, -0.5), (1.0, 0.5)])),
        "zigzag" => (0.0, one, affine(&[(0.0, 0.0), (0.25, 1.0), (0.5, 0.0), (1.0, 1.5)])),
        "hat" => (
            0.5,
            Profile::TanhRamp { base: 1.5, amplitude: 0.5, center: 0.5, width: 0.2 },
            affine(&[(0.0, 0.0), (0.4, 1.0), (1.0, 0.0)]),
        ),
        "constant-density" => {
            (2.0, Profile::Constant(2.0), affine(&[(0.0, 1.5), (0.3, 1.2), (0.6, 0.3), (1.0, -1.0)]))
        }
        "case-ii-stopping" => (0.5, one, Profile::Linear { a: 0.0, b: 1.0 }),
        _ => return Err(format!("unknown preset {name:?}")),
    };
    let rho0 = rho.value(0.0);
    Ok(InitialData::new(FluidState::new(rho0, u0), 0.0, rho, u, 1.0))
}

/// Rows (t, xi, u_s, c) of a wave born at the origin, for `n` + 1 times in [0, t_max].
pub fn trajectory_table(
    left: (f64, f64),
    right: (f64, f64),
    gamma: f64,
    c0: f64,
    t_max: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    let w = SdwTrajectory::new(
        0.0,
        0.0,
        gamma,
        c0,
        FluidState::new(left.0, left.1),
        FluidState::new(right.0, right.1),
    )
    .map_err(|e| e.to_string())?;
    let n = n.max(1);
    let mut out = Vec::with_capacity(4 * (n + 1));
    for k in 0..=n {
        let t = t_max * k as f64 / n as f64;
        let p = w.eval(t).map_err(|e| e.to_string())?;
        out.extend([t, p.xi, p.us, p.c]);
    }
    Ok(out)
}

/// A tracked run that can be queried at any time up to `t_end`.
#[wasm_bindgen]
pub struct Simulation {
    fan: WaveFan,
    t_end: f64,
}

impl Simulation {
    pub fn create(preset_name: &str, epsilon: f64, t_end: f64) -> Result<Simulation, String> {
        let data = preset(preset_name)?;
        let mut fan = WaveFan::from_data(&data, epsilon, 2.0, Tolerances::default()).map_err(|e| e.to_string())?;
        fan.run_until(t_end).map_err(|e| e.to_string())?;
        Ok(Simulation { fan, t_end })
    }

    /// Flat list of polylines: [role, count, t0, x0, t1, x1, ...] per front.
    /// Roles: 0 contact, 1 fan left edge, 2 fan right edge, 3 shadow wave.
    pub fn front_lines(&self, samples: usize) -> Vec<f64> {
        let samples = samples.max(1);
        let mut out = Vec::new();
        for r in self.fan.records() {
            if r.birth > self.t_end {
                continue;
            }
            let end = r.death.unwrap_or(self.t_end).min(self.t_end);
            let role = match r.front.role {
                FrontRole::Contact => 0.0,
                FrontRole::FanLeftEdge => 1.0,
                FrontRole::FanRightEdge => 2.0,
                FrontRole::Shadow => 3.0,
            };
            out.extend([role, (samples + 1) as f64]);
            for k in 0..=samples {
                let t = r.birth + (end - r.birth) * k as f64 / samples as f64;
                out.extend([t, r.front.position(t)]);
            }
        }
        out
    }

    /// Rows (x, rho, u) on a uniform grid over [lo, hi] at time t; vacuum has rho = 0.
    pub fn profile_at(&self, t: f64, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, String> {
        let s = snapshot(&self.fan, t.clamp(0.0, self.t_end)).map_err(|e| e.to_string())?;
        let n = n.max(1);
        let mut out = Vec::with_capacity(3 * (n + 1));
        for k in 0..=n {
            let x = lo + (hi - lo) * k as f64 / n as f64;
            let piece = s.pieces.iter().find(|p| x >= p.lo && x < p.hi).unwrap_or(&s.pieces[s.pieces.len() - 1]);
            let st = piece.region.state_at(x, s.t);
            out.extend([x, st.rho, st.u]);
        }
        Ok(out)
    }

    /// Rows (x, mass, speed) for each delta atom at time t.
    pub fn atoms_at(&self, t: f64) -> Result<Vec<f64>, String> {
        let s = snapshot(&self.fan, t.clamp(0.0, self.t_end)).map_err(|e| e.to_string())?;
        Ok(s.atoms.iter().flat_map(|a| [a.x, a.mass, a.speed]).collect())
    }

    /// Number of vacuum regions at time t.
    pub fn vacuum_count(&self, t: f64) -> Result<usize, String> {
        let ids = self.fan.live_at(t.clamp(0.0, self.t_end)).map_err(|e| e.to_string())?;
        Ok(self.fan.regions(&ids).iter().filter(|r| matches!(r, Region::Vacuum(_))).count())
    }
}

#[wasm_bindgen]
impl Simulation {
    #[wasm_bindgen(constructor)]
    pub fn new(preset_name: &str, epsilon: f64, t_end: f64) -> Result<Simulation, JsError> {
        Simulation::create(preset_name, epsilon, t_end).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = frontLines)]
    pub fn js_front_lines(&self, samples: usize) -> Vec<f64> {
        self.front_lines(samples)
    }

    #[wasm_bindgen(js_name = profile)]
    pub fn js_profile(&self, t: f64, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, JsError> {
        self.profile_at(t, lo, hi, n).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = atoms)]
    pub fn js_atoms(&self, t: f64) -> Result<Vec<f64>, JsError> {
        self.atoms_at(t).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = eventCount)]
    pub fn event_count(&self) -> usize {
        self.fan.history().len()
    }

    #[wasm_bindgen(getter, js_name = tEnd)]
    pub fn t_end(&self) -> f64 {
        self.t_end
    }
}

#[wasm_bindgen(js_name = riemannCurves)]
#[allow(clippy::too_many_arguments)]
pub fn riemann_curves(
    rho_l: f64,
    u_l: f64,
    rho_r: f64,
    u_r: f64,
    gamma: f64,
    c0: f64,
    t_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    trajectory_table((rho_l, u_l), (rho_r, u_r), gamma, c0, t_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = presets)]
pub fn presets() -> Vec<String> {
    PRESETS.iter().map(|s| s.to_string()).collect()
}
