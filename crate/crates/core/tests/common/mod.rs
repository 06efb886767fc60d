#![allow(dead_code)]

use sdw_core::states::{FluidState, InitialData, Profile};
use sdw_core::tracker::WaveFan;
use sdw_core::Tolerances;

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Adaptive Dormand-Prince 5(4) integration, reporting the state at each of `outputs`.
pub fn dopri5<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    t0: f64,
    outputs: &[f64],
    rtol: f64,
    atol: f64,
) -> Vec<[f64; N]> {
    let mut out = Vec::with_capacity(outputs.len());
    let mut t = t0;
    let mut y = y0;
    let mut h: f64 = 1e-3;
    for &target in outputs {
        while t < target {
            let step = h.min(target - t);
            let mut k = [[0.0; N]; 7];
            k[0] = f(t, &y);
            for s in 0..6 {
                let mut ys = y;
                for i in 0..N {
                    for j in 0..=s {
                        ys[i] += step * A[s][j] * k[j][i];
                    }
                }
                k[s + 1] = f(t + C[s] * step, &ys);
            }
            let mut y5 = y;
            for i in 0..N {
                for j in 0..6 {
                    y5[i] += step * A[5][j] * k[j][i];
                }
            }
            let mut err: f64 = 0.0;
            for i in 0..N {
                let e: f64 = (0..7).map(|j| E[j] * k[j][i]).sum::<f64>() * step;
                let sc = atol + rtol * y[i].abs().max(y5[i].abs());
                err = err.max((e / sc).abs());
            }
            if err <= 1.0 {
                t += step;
                y = y5;
                if step < h {
                    // clipped at an output point; keep the previous step size
                    continue;
                }
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = step * fac;
        }
        out.push(y);
    }
    out
}

/// Right-hand side of the strength / momentum balance for (xi, xi u_s).
pub fn sdw_rhs(l: FluidState, r: FluidState) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    move |_, y| {
        let us = y[1] / y[0];
        let d_rho = r.rho - l.rho;
        let d_m = r.rho * r.u - l.rho * l.u;
        let d_mu = r.rho * r.u * r.u - l.rho * l.u * l.u;
        [us * d_rho - d_m, us * d_m - d_mu]
    }
}

pub fn tol() -> Tolerances {
    Tolerances::default()
}

pub fn unit_data(u0: f64, rho: Profile, u: Profile) -> InitialData {
    let rho0 = match &rho {
        Profile::Constant(c) => *c,
        _ => 1.0,
    };
    InitialData::new(FluidState::new(rho0, u0), 0.0, rho, u, 1.0)
}

/// Named initial-data configurations covering the monotonicity cases.
pub fn golden_suite() -> Vec<(&'static str, InitialData)> {
    let lin = |a: f64, b: f64| Profile::Linear { a, b };
    vec![
        ("case-I", unit_data(-0.5, lin(1.0, 1.0), lin(0.0, 1.0))),
        ("case-II-absorbing", unit_data(1.0, Profile::Constant(1.0), lin(0.0, 0.5))),
        ("case-II-stopping", unit_data(0.5, Profile::Constant(1.0), lin(0.0, 1.0))),
        ("case-III", unit_data(2.0, Profile::Constant(1.0), lin(1.0, -1.0))),
        ("case-IV", unit_data(0.5, lin(1.0, 0.5), lin(1.0, -1.0))),
        (
            "hat",
            unit_data(
                0.5,
                Profile::TanhRamp { base: 1.5, amplitude: 0.5, center: 0.5, width: 0.2 },
                Profile::AffineByParts { knots: vec![(0.0, 0.0), (0.4, 1.0), (1.0, 0.0)] },
            ),
        ),
        (
            "valley",
            unit_data(
                1.0,
                Profile::Constant(1.0),
                Profile::AffineByParts { knots: vec![(0.0, 1.0), (0.5, -0.5), (1.0, 0.5)] },
            ),
        ),
        (
            "zigzag",
            unit_data(
                0.0,
                Profile::Constant(1.0),
                Profile::AffineByParts { knots: vec![(0.0, 0.0), (0.25, 1.0), (0.5, 0.0), (1.0, 1.5)] },
            ),
        ),
        (
            "constant-density",
            unit_data(2.0, Profile::Constant(2.0), Profile::AffineByParts {
                knots: vec![(0.0, 1.5), (0.3, 1.2), (0.6, 0.3), (1.0, -1.0)],
            }),
        ),
    ]
}

pub fn run(data: &InitialData, epsilon: f64, t_end: f64) -> WaveFan {
    let mut fan = WaveFan::from_data(data, epsilon, 2.0, tol()).expect("initialize");
    fan.run_until(t_end).expect("run");
    fan
}
