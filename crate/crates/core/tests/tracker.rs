mod common;

use common::{run, tol, unit_data};
use sdw_core::interactions::{FrontRole, OutcomeKind, Region};
use sdw_core::states::{FluidState, Profile};
use sdw_core::tracker::WaveFan;

fn lin(a: f64, b: f64) -> Profile {
    Profile::Linear { a, b }
}

#[test]
fn decreasing_velocity_gives_one_wave_per_point() {
    let data = unit_data(2.0, Profile::Constant(1.0), lin(1.0, -1.0));
    let fan = WaveFan::from_data(&data, 1e-3, 2.0, tol()).unwrap();
    assert_eq!(fan.count_fronts(), 10);
    assert!(fan.fronts().iter().all(|f| f.role == FrontRole::Shadow));
}

#[test]
fn decreasing_velocity_ends_in_a_single_wave() {
    let data = unit_data(2.0, Profile::Constant(1.0), lin(1.0, -1.0));
    let mut fan = WaveFan::from_data(&data, 1e-3, 2.0, tol()).unwrap();
    let n = fan.count_fronts();
    fan.run_until(0.05).unwrap();
    assert!(fan.history().is_empty());
    fan.run_until(50.0).unwrap();
    assert_eq!(fan.count_fronts(), 1);
    let last = fan.fronts()[0].clone();
    assert_eq!(last.left, Region::Fluid(FluidState::new(1.0, 2.0)));
    assert_eq!(last.right, Region::Fluid(FluidState::new(1.0, 0.0)));
    // every pairwise merge removes exactly one front
    let mut count = n;
    for e in fan.history() {
        count -= e.participants.len() - 1;
    }
    assert_eq!(count, 1);
}

#[test]
fn increasing_velocity_has_no_interactions() {
    let data = unit_data(-0.5, lin(1.0, 1.0), lin(0.0, 1.0));
    let fan = run(&data, 1e-3, 20.0);
    assert!(fan.history().is_empty());
    assert!(fan.fronts().iter().all(|f| f.role != FrontRole::Shadow));
}

#[test]
fn interactions_stop_inside_a_fan() {
    let u0 = 0.5;
    let data = unit_data(u0, Profile::Constant(1.0), lin(0.0, 1.0));
    let mut fan = run(&data, 1e-3, 20.0);
    let events = fan.history().len();
    assert!(events > 0);
    fan.run_until(200.0).unwrap();
    assert_eq!(fan.history().len(), events);
    let last = fan.history().last().unwrap().clone();
    assert_eq!(last.outcome, OutcomeKind::A1);
    let edge = fan.record(*last.participants.last().unwrap()).front.clone();
    assert_eq!(edge.role, FrontRole::FanLeftEdge);
    let Region::Vacuum(v) = edge.right else { panic!("{:?}", edge.right) };
    assert!(v.u_left < u0 && u0 <= v.u_right, "{v:?}");
}

#[test]
fn event_times_are_nondecreasing_and_replay_is_consistent() {
    let data = unit_data(
        1.0,
        Profile::Constant(1.0),
        Profile::AffineByParts { knots: vec![(0.0, 1.0), (0.5, -0.5), (1.0, 0.5)] },
    );
    let fan = run(&data, 1e-3, 3.0);
    let h = fan.history();
    assert!(h.windows(2).all(|w| w[0].time <= w[1].time));
    fan.check_invariants().unwrap();
    for e in h {
        let before = fan.live_before(e.time).unwrap();
        let after = fan.live_at(e.time).unwrap();
        assert!(e.participants.iter().all(|id| before.contains(id) && !after.contains(id)));
        assert!(after.contains(&e.result));
    }
    let mut t0 = 0.0;
    for (a, b, ids) in fan.segments(3.0) {
        assert!(a >= t0 && b >= a);
        t0 = a;
        let pos: Vec<f64> = ids.iter().map(|&i| fan.record(i).front.position(0.5 * (a + b))).collect();
        assert!(pos.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    }
}

#[test]
fn constant_data_has_no_fronts() {
    let data = unit_data(0.3, Profile::Constant(1.0), Profile::Constant(0.3));
    let fan = run(&data, 1e-3, 5.0);
    assert_eq!(fan.count_fronts(), 0);
    assert!(fan.history().is_empty());
}
