use crate::args::{RiemannArgs, RunArgs};
use crate::config::{PairSpec, RenderingSpec, RunConfig};
use crate::error::{io_err, CliError, Result};
use crate::output::{emit_events, emit_snapshot, num, write, Table};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdw_core::analysis::{
    classical_solution, gamma_alpha, gamma_distance, refine_partition, snapshot, snapshot_before, t_max, weak_residual,
    GammaCurve, Rendering, TestFunction,
};
use sdw_core::entropy::{entropy_report, EntropyPair};
use sdw_core::interactions::{FrontRole, OutcomeKind};
use sdw_core::riemann::{is_trivial, solve_riemann, RiemannSolution};
use sdw_core::sdw::{FrontCurve, SdwTrajectory};
use sdw_core::states::{build_partition, sample_states, FluidState, InitialData, Partition};
use sdw_core::tracker::WaveFan;
use sdw_core::Tolerances;
use std::io::Write;
use std::path::{Path, PathBuf};

fn describe(s: &RiemannSolution) -> String {
    match s {
        RiemannSolution::Contact { speed } => format!("contact speed={speed}"),
        RiemannSolution::VacuumFan { u_left, u_right } => format!("vacuum_fan u_left={u_left}, u_right={u_right}"),
        RiemannSolution::SimpleSdw { y, rate } => format!("simple_sdw y={y}, xi_rate={rate}"),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(io_err("<stdout>"))
}

fn prepare_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))
}

pub fn riemann(a: &RiemannArgs, out: &mut dyn Write) -> Result<()> {
    if let Some(n) = a.sweep {
        return sweep(n, a.seed, a.out.as_deref(), out);
    }
    let (Some(l), Some(r)) = (a.left, a.right) else {
        return Err(CliError::Config("riemann needs --left and --right (or --sweep)".into()));
    };
    let (l, r) = (FluidState::new(l.0, l.1), FluidState::new(r.0, r.1));
    l.validate()?;
    r.validate()?;
    if l.rho > 0.0 && r.rho > 0.0 {
        let line = if is_trivial(&l, &r) { "no wave".to_string() } else { describe(&solve_riemann(&l, &r)?) };
        emit(out, &format!("{line}\n"))?;
    }
    let (Some(gamma), Some(c0)) = (a.gamma, a.c0) else {
        return Ok(());
    };
    let w = SdwTrajectory::new(0.0, a.x0, gamma, c0, l, r)?;
    let mut t = Table::new(&["t", "xi", "u_s", "c"]);
    for &time in &a.times {
        let p = w.eval(time)?;
        t.push_nums(&[time, p.xi, p.us, p.c]);
    }
    match &a.out {
        Some(dir) => {
            prepare_dir(dir)?;
            write(&dir.join("trajectory.csv"), &t.render())
        }
        None => emit(out, &t.render()),
    }
}

fn sweep(n: usize, seed: u64, dir: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Table::new(&["rho_l", "u_l", "rho_r", "u_r", "kind", "y", "rate", "ok"]);
    let mut bad = 0usize;
    for _ in 0..n {
        let l = FluidState::new(rng.gen_range(0.1..5.0), rng.gen_range(-3.0..3.0));
        let r = FluidState::new(rng.gen_range(0.1..5.0), rng.gen_range(-3.0..3.0));
        let sol = solve_riemann(&l, &r)?;
        let (kind, y, rate, ok) = match sol {
            RiemannSolution::Contact { speed } => ("contact", speed, 0.0, true),
            RiemannSolution::VacuumFan { .. } => ("vacuum_fan", f64::NAN, 0.0, true),
            RiemannSolution::SimpleSdw { y, rate } => {
                let mass = y * (r.rho - l.rho) - (r.momentum() - l.momentum());
                let ok = r.u <= y && y <= l.u && rate > 0.0 && (mass - rate).abs() <= 1e-12 * (1.0 + rate);
                ("simple_sdw", y, rate, ok)
            }
        };
        bad += usize::from(!ok);
        t.push(vec![num(l.rho), num(l.u), num(r.rho), num(r.u), kind.into(), num(y), num(rate), ok.to_string()]);
    }
    match dir {
        Some(d) => {
            prepare_dir(d)?;
            write(&d.join("sweep.csv"), &t.render())?;
        }
        None => emit(out, &t.render())?,
    }
    if bad > 0 {
        return Err(CliError::Invariant(format!("{bad} of {n} sweep draws violate u_r <= y <= u_l")));
    }
    Ok(())
}

/// Config with command-line overrides applied, validated.
pub struct Prepared {
    pub cfg: RunConfig,
    pub data: InitialData,
    pub tol: Tolerances,
    pub levels: usize,
}

pub fn prepare(a: &RunArgs) -> Result<Prepared> {
    let mut cfg = RunConfig::load(&a.config)?;
    if let Some(e) = a.epsilon {
        cfg.epsilon = e;
    }
    if let Some(t) = a.t_end {
        cfg.t_end = t;
    }
    if let Some(o) = &a.out {
        cfg.output = o.clone();
    }
    if let Some(m) = a.mode {
        cfg.mode = m;
    }
    let levels = a.levels.or(cfg.converge.levels).unwrap_or(4);
    if levels == 0 {
        return Err(CliError::Config("levels must be at least 1".into()));
    }
    let data = cfg.validate()?;
    let tol = cfg.tolerances()?;
    Ok(Prepared { cfg, data, tol, levels })
}

fn track(p: &Prepared) -> Result<WaveFan> {
    let mut fan = WaveFan::from_data(&p.data, p.cfg.epsilon, p.cfg.c, p.tol)?;
    fan.run_until(p.cfg.t_end)?;
    fan.check_invariants().map_err(|e| CliError::Invariant(e.to_string()))?;
    Ok(fan)
}

fn role(r: FrontRole) -> &'static str {
    match r {
        FrontRole::Contact => "contact",
        FrontRole::FanLeftEdge => "fan_left_edge",
        FrontRole::FanRightEdge => "fan_right_edge",
        FrontRole::Shadow => "shadow",
    }
}

fn uniform(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |k| if k == n { b } else { a + (b - a) * k as f64 / n as f64 })
}

pub fn evolve(p: &Prepared, out: &mut dyn Write) -> Result<()> {
    let fan = track(p)?;
    let (cfg, dir) = (&p.cfg, &p.cfg.output);
    let t_end = cfg.t_end;
    prepare_dir(dir)?;
    let mut index = Table::new(&["index", "t", "file"]);
    for (i, &t) in cfg.snapshot_times().iter().enumerate() {
        let name = format!("snapshot_{i:03}.csv");
        write(&dir.join(&name), &emit_snapshot(&snapshot(&fan, t)?))?;
        index.push(vec![i.to_string(), num(t), name]);
    }
    write(&dir.join("snapshots.csv"), &index.render())?;
    write(&dir.join("events.jsonl"), &emit_events(fan.history()))?;

    let mut curvature: f64 = 0.0;
    if cfg.diagnostics.fronts {
        let mut fronts = Table::new(&["id", "role", "birth", "death", "x_birth", "parents", "child"]);
        let mut curves = Table::new(&["id", "t", "x", "xi", "u_s"]);
        for r in fan.records() {
            let end = r.death.unwrap_or(t_end).min(t_end);
            let parents: Vec<String> = r.parents.iter().map(usize::to_string).collect();
            fronts.push(vec![
                r.front.id.to_string(),
                role(r.front.role).into(),
                num(r.birth),
                r.death.map(num).unwrap_or_default(),
                num(r.front.position(r.birth)),
                parents.join(";"),
                r.child.map(|c| c.to_string()).unwrap_or_default(),
            ]);
            if r.birth > t_end {
                continue;
            }
            for t in uniform(r.birth, end, cfg.diagnostics.samples) {
                let pt = r.front.curve.point(t);
                curves.push(vec![r.front.id.to_string(), num(t), num(pt.c), num(pt.xi), num(pt.us)]);
                if let FrontCurve::Shadow(s) = &r.front.curve {
                    curvature = curvature.max(s.speed_derivative(t)?.abs());
                }
            }
        }
        write(&dir.join("fronts.csv"), &fronts.render())?;
        write(&dir.join("front_curves.csv"), &curves.render())?;
    }

    let mut drift: f64 = 0.0;
    if cfg.diagnostics.conservation {
        let w = fan.moving_window(t_end);
        let mut ledger = Table::new(&["t", "phase", "mass", "momentum", "energy"]);
        let (a0, b0) = w.at(0.0);
        let start = snapshot(&fan, 0.0)?.totals(a0, b0);
        let scale = start.mass.abs() + start.momentum.abs();
        let mut record = |t: f64, phase: &str, before: bool| -> Result<()> {
            let (a, b) = w.at(t);
            let s = if before { snapshot_before(&fan, t)? } else { snapshot(&fan, t)? };
            let tot = s.totals(a, b);
            drift = drift.max((tot.mass - start.mass).abs() / scale).max((tot.momentum - start.momentum).abs() / scale);
            ledger.push(vec![num(t), phase.into(), num(tot.mass), num(tot.momentum), num(tot.energy)]);
            Ok(())
        };
        for t in uniform(0.0, t_end, cfg.diagnostics.samples) {
            record(t, "sample", false)?;
        }
        for e in fan.history() {
            record(e.time, "before", true)?;
            record(e.time, "after", false)?;
        }
        write(&dir.join("ledger.csv"), &ledger.render())?;
    }

    let mut counts = [0usize; 4];
    for e in fan.history() {
        counts[match e.outcome {
            OutcomeKind::A1 => 0,
            OutcomeKind::A2 => 1,
            OutcomeKind::A3 => 2,
            OutcomeKind::A4 => 3,
        }] += 1;
    }
    let summary = format!(
        "events {} (A1 {}, A2 {}, A3 {}, A4 {}), live fronts {}, max conservation drift {:.2e}, max |c''| {:.2e}\nwrote {}\n",
        fan.history().len(),
        counts[0],
        counts[1],
        counts[2],
        counts[3],
        fan.count_fronts(),
        drift,
        curvature,
        dir.display()
    );
    emit(out, &summary)?;
    if drift > 1e-9 {
        return Err(CliError::Invariant(format!("conservation drift {drift:.3e} exceeds 1e-9")));
    }
    Ok(())
}

struct Level {
    partition: Partition,
    fan: WaveFan,
}

fn oracle_l1(fan: &WaveFan, t: f64, a: f64, b: f64, oracle: &[(f64, f64, f64)]) -> Result<f64> {
    let s = snapshot(fan, t)?;
    let h = (b - a) / oracle.len() as f64;
    let mut err = 0.0;
    for &(x, u, m) in oracle {
        err += (s.state_at(x).u - u).abs() * h;
        err += (s.totals(a, x).mass - m).abs() * h;
    }
    Ok(err)
}

/// Classical (u, cumulative mass from a) at cell midpoints, or why it is unavailable.
fn oracle_table(data: &InitialData, t: f64, a: f64, b: f64) -> std::result::Result<Vec<(f64, f64, f64)>, String> {
    let n = 2000;
    let h = (b - a) / n as f64;
    let mut rows = Vec::with_capacity(n);
    let mut mass = 0.0;
    let mut prev_rho: Option<f64> = None;
    for k in 0..n {
        let x = a + (k as f64 + 0.5) * h;
        let s = classical_solution(data, x, t).map_err(|e| e.to_string())?;
        mass += match prev_rho {
            Some(q) => 0.5 * h * (q + s.rho),
            None => 0.5 * h * s.rho,
        };
        prev_rho = Some(s.rho);
        rows.push((x, s.u, mass));
    }
    Ok(rows)
}

pub fn converge(p: &Prepared, out: &mut dyn Write) -> Result<()> {
    let cfg = &p.cfg;
    let t_end = cfg.t_end;
    let mut partitions = vec![build_partition(&p.data, cfg.epsilon, cfg.c)?];
    for _ in 1..p.levels {
        let next = refine_partition(partitions.last().unwrap())?;
        partitions.push(next);
    }
    let runs: Vec<Result<Level>> = std::thread::scope(|scope| {
        let handles: Vec<_> = partitions
            .iter()
            .map(|part| {
                scope.spawn(move || -> Result<Level> {
                    let s = sample_states(&p.data, part)?;
                    let mut fan = WaveFan::initialize(&s, part, p.tol)?;
                    fan.run_until(t_end)?;
                    fan.check_invariants().map_err(|e| CliError::Invariant(e.to_string()))?;
                    Ok(Level { partition: part.clone(), fan })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("level thread panicked")).collect()
    });
    let levels: Vec<Level> = runs.into_iter().collect::<Result<_>>()?;

    let (r, x_max) = (p.data.r, p.data.x_max);
    let [xc, tc, rx, rt] =
        cfg.converge.test_function.unwrap_or([0.5 * (r + x_max), 0.5 * t_end, 0.5 * (x_max - r), 0.5 * t_end]);
    let phi = TestFunction::new(xc, tc, rx, rt)?;
    let rendering = match cfg.converge.rendering {
        RenderingSpec::Atoms => Rendering::Atoms,
        RenderingSpec::Widened => Rendering::Widened,
    };

    let mut notes = Vec::new();
    let curves: Option<Vec<GammaCurve>> = levels
        .iter()
        .enumerate()
        .map(|(i, l)| GammaCurve::extract(&l.fan, i).ok())
        .collect();
    let mut alpha = f64::INFINITY;
    let mut distances = vec![None; levels.len()];
    match &curves {
        Some(cs) => {
            let life = t_max(&p.data, cs.last().unwrap());
            let horizon = if life.is_finite() { (0.8 * life).min(t_end) } else { 0.8 * t_end };
            for l in &levels {
                alpha = alpha.min(gamma_alpha(&l.fan, horizon)?);
            }
            for (i, w) in cs.windows(2).enumerate() {
                distances[i] = Some(gamma_distance(&w[0], &w[1], horizon)?);
            }
            notes.push(format!("0-SDW horizon {horizon}, T_max {life}, alpha {alpha:.6}"));
            if !(alpha > 0.0) {
                notes.push("alpha <= 0: the 0-SDW touches the fluid velocity; distances are not expected to converge".into());
            }
        }
        None => notes.push("no shadow wave at the junction: 0-SDW column omitted".into()),
    }

    let [a, b] = cfg.converge.oracle_window.unwrap_or([r + 0.2 * (x_max - r), r + 0.8 * (x_max - r)]);
    let mut oracle = oracle_table(&p.data, t_end, a, b);
    if let (Ok(_), Some(cs)) = (&oracle, &curves) {
        let g = cs.last().unwrap().position(t_end)?;
        if g >= a {
            oracle = Err(format!("window start {a} is left of the 0-SDW at {g}"));
        }
    }
    if let Err(why) = &oracle {
        notes.push(format!("classical oracle omitted: {why}"));
        if cfg.converge.require_oracle {
            return Err(CliError::Precondition(format!("classical oracle unavailable: {why}")));
        }
    }

    let mut table = Table::new(&["level", "mu", "epsilon", "e1", "e2", "gamma_distance", "l1_error"]);
    for (i, l) in levels.iter().enumerate() {
        let (e1, e2) = weak_residual(&l.fan, &phi, rendering)?;
        let l1 = match &oracle {
            Ok(o) => num(oracle_l1(&l.fan, t_end, a, b, o)?),
            Err(_) => String::new(),
        };
        table.push(vec![
            i.to_string(),
            num(l.partition.mu()),
            num(l.partition.epsilon),
            num(e1),
            num(e2),
            distances[i].map(num).unwrap_or_default(),
            l1,
        ]);
    }
    prepare_dir(&cfg.output)?;
    write(&cfg.output.join("converge.csv"), &table.render())?;
    emit(out, &table.render())?;
    for n in notes {
        emit(out, &format!("# {n}\n"))?;
    }
    Ok(())
}

pub fn entropy(p: &Prepared, out: &mut dyn Write) -> Result<()> {
    let fan = track(p)?;
    let cfg = &p.cfg;
    let pair = match cfg.diagnostics.entropy_pair {
        PairSpec::Kinetic => EntropyPair::Kinetic,
        PairSpec::NegInternal => EntropyPair::NegInternal,
        PairSpec::Semiconvex => EntropyPair::semiconvex_default(),
    };
    let rep = entropy_report(&fan, cfg.t_end, cfg.diagnostics.samples, pair)?;
    let dir: &PathBuf = &cfg.output;
    prepare_dir(dir)?;
    let mut fronts = Table::new(&["id", "t", "d"]);
    for f in &rep.fronts {
        for &(t, d) in &f.samples {
            fronts.push(vec![f.id.to_string(), num(t), num(d)]);
        }
    }
    let mut events = Table::new(&["index", "time", "position", "participants", "measured", "predicted", "delta_d"]);
    for (i, e) in rep.events.iter().enumerate() {
        events.push(vec![
            i.to_string(),
            num(e.time),
            num(e.position),
            e.participants.to_string(),
            num(e.measured),
            e.predicted.map(num).unwrap_or_default(),
            num(e.delta_d),
        ]);
    }
    let mut trace = Table::new(&["t", "entropy"]);
    for &(t, e) in &rep.trace {
        trace.push_nums(&[t, e]);
    }
    write(&dir.join("entropy_fronts.csv"), &fronts.render())?;
    write(&dir.join("entropy_events.csv"), &events.render())?;
    write(&dir.join("entropy_trace.csv"), &trace.render())?;
    let first = rep.trace.first().map_or(0.0, |p| p.1);
    let last = rep.trace.last().map_or(0.0, |p| p.1);
    let worst = rep.events.iter().map(|e| e.measured).fold(f64::NEG_INFINITY, f64::max);
    emit(
        out,
        &format!(
            "entropy {first:.10e} -> {last:.10e}, {} events, largest event jump {}\nwrote {}\n",
            rep.events.len(),
            if rep.events.is_empty() { "none".to_string() } else { format!("{worst:.3e}") },
            dir.display()
        ),
    )
}
