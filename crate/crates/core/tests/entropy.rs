mod common;

use common::{golden_suite, run, unit_data};
use sdw_core::entropy::{constant_density_delta_d, entropy_report, production, production_at, EntropyPair};
use sdw_core::sdw::SdwTrajectory;
use sdw_core::states::{FluidState, Profile};

#[test]
fn symmetric_wave_dissipates_at_unit_rate() {
    assert_eq!(production_at(&FluidState::new(1.0, 1.0), &FluidState::new(1.0, -1.0), 0.0), -1.0);
}

#[test]
fn simple_wave_production_is_constant() {
    let w = SdwTrajectory::simple(0.0, 0.0, FluidState::new(1.0, 2.0), FluidState::new(4.0, 0.0)).unwrap();
    let d0 = production(&w, 0.0).unwrap();
    assert!(d0 < 0.0);
    for t in [0.5, 2.0, 10.0] {
        assert!((production(&w, t).unwrap() - d0).abs() < 1e-13);
    }
}

#[test]
fn two_wave_merge_matches_closed_form() {
    // constant density 2 with cells at velocities 3, 2, 1
    let data = unit_data(3.0, Profile::Constant(2.0), Profile::Linear { a: 3.0, b: -2.0 });
    let fan = run(&data, 0.125, 2.0);
    let rep = entropy_report(&fan, 2.0, 16, EntropyPair::Kinetic).unwrap();
    assert_eq!(rep.events.len(), 1);
    let ev = &rep.events[0];
    assert!((ev.time - 0.5).abs() < 1e-12);
    assert!((ev.delta_d - constant_density_delta_d(2.0, 3.0, 2.0, 1.0)).abs() < 1e-10);
    assert!((ev.delta_d + 1.5).abs() < 1e-10);
    assert!((ev.measured - ev.predicted.unwrap()).abs() < 1e-10);
}

#[test]
fn measured_drops_match_predictions() {
    let data = unit_data(2.0, Profile::Constant(1.0), Profile::Linear { a: 1.0, b: -1.0 });
    let fan = run(&data, 1e-3, 3.0);
    let rep = entropy_report(&fan, 3.0, 8, EntropyPair::Kinetic).unwrap();
    assert!(!rep.events.is_empty());
    for ev in &rep.events {
        let p = ev.predicted.unwrap();
        assert!(p < 0.0);
        assert!((ev.measured - p).abs() < 1e-10 * (1.0 + p.abs()), "{ev:?}");
    }
}

#[test]
fn absorbing_a_contact_costs_nothing() {
    let data = unit_data(1.0, Profile::Linear { a: 1.0, b: 1.0 }, Profile::Constant(0.0));
    let fan = run(&data, 1e-3, 3.0);
    let rep = entropy_report(&fan, 3.0, 8, EntropyPair::Kinetic).unwrap();
    assert!(!rep.events.is_empty());
    for ev in &rep.events {
        assert_eq!(ev.predicted, Some(0.0));
        assert!(ev.measured.abs() < 1e-10, "{ev:?}");
    }
}

#[test]
fn constant_data_has_flat_entropy() {
    let data = unit_data(0.5, Profile::Constant(2.0), Profile::Constant(0.5));
    let fan = run(&data, 1e-3, 2.0);
    let rep = entropy_report(&fan, 2.0, 10, EntropyPair::Kinetic).unwrap();
    let e0 = rep.trace[0].1;
    assert!(e0 > 0.0);
    assert!(rep.trace.iter().all(|&(_, e)| (e - e0).abs() < 1e-12 * e0));
}

#[test]
fn kinetic_entropy_never_increases() {
    for (name, data) in golden_suite() {
        let fan = run(&data, 1e-3, 3.0);
        let rep = entropy_report(&fan, 3.0, 32, EntropyPair::Kinetic).unwrap();
        for f in &rep.fronts {
            assert!(f.samples.iter().all(|&(_, d)| d <= 1e-12), "{name}: front {}", f.id);
        }
        assert!(rep.increases(1e-10).is_empty(), "{name}");
        for w in rep.trace.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-10 * (1.0 + w[0].1.abs()), "{name}: {w:?}");
        }
    }
}
