use sdw_core::riemann::{fan_velocity, solve_riemann, vacuum_velocity, RiemannSolution};
use sdw_core::states::FluidState;

#[test]
fn simple_wave_speed_and_rate() {
    let l = FluidState::new(1.0, 2.0);
    let r = FluidState::new(4.0, 0.0);
    let sol = solve_riemann(&l, &r).unwrap();
    let RiemannSolution::SimpleSdw { y, rate } = sol else { panic!("{sol:?}") };
    assert!((y - 2.0 / 3.0).abs() < 1e-15);
    assert!((rate - 4.0).abs() < 1e-14);
    // mass and momentum balance of a delta growing at `rate` and moving at y
    let mass = y * (r.rho - l.rho) - (r.momentum() - l.momentum());
    let mom = y * (r.momentum() - l.momentum()) - (r.rho * r.u * r.u - l.rho * l.u * l.u);
    assert!((mass - rate).abs() < 1e-12);
    assert!((mom - rate * y).abs() < 1e-12);
}

#[test]
fn contact_and_fan() {
    let sol = solve_riemann(&FluidState::new(1.0, 1.0), &FluidState::new(5.0, 1.0)).unwrap();
    assert_eq!(sol, RiemannSolution::Contact { speed: 1.0 });
    let sol = solve_riemann(&FluidState::new(1.0, -1.0), &FluidState::new(1.0, 1.0)).unwrap();
    assert_eq!(sol, RiemannSolution::VacuumFan { u_left: -1.0, u_right: 1.0 });
}

#[test]
fn fan_interior_velocity() {
    let fan = RiemannSolution::VacuumFan { u_left: -1.0, u_right: 1.0 };
    assert_eq!(vacuum_velocity(&fan, 0.0, 1.0, 0.0).unwrap(), 0.0);
    assert_eq!(vacuum_velocity(&fan, -1.0, 1.0, 0.0).unwrap(), -1.0);
    assert!((fan_velocity(0.0, 2.0, 0.0, 2.0, 2.0).unwrap() - 1.0).abs() < 1e-15);
    assert!(vacuum_velocity(&fan, 1.5, 1.0, 0.0).is_err());
}
