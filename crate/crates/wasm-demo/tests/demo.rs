use sdw_demo::{preset, trajectory_table, Simulation, PRESETS};

#[test]
fn every_preset_runs() {
    for name in PRESETS {
        let sim = Simulation::create(name, 1e-3, 2.0).unwrap();
        let lines = sim.front_lines(8);
        assert!(!lines.is_empty(), "{name}");
        let prof = sim.profile_at(1.0, -0.5, 3.0, 100).unwrap();
        assert_eq!(prof.len(), 3 * 101);
        assert!(prof.chunks(3).all(|r| r[1] >= 0.0));
    }
    assert!(preset("nope").is_err());
}

#[test]
fn front_lines_are_well_formed() {
    let sim = Simulation::create("valley", 1e-3, 2.0).unwrap();
    let lines = sim.front_lines(4);
    let mut i = 0;
    let mut fronts = 0;
    while i < lines.len() {
        assert!((0.0..=3.0).contains(&lines[i]));
        let n = lines[i + 1] as usize;
        assert_eq!(n, 5);
        let pts = &lines[i + 2..i + 2 + 2 * n];
        assert!(pts.chunks(2).zip(pts.chunks(2).skip(1)).all(|(a, b)| a[0] <= b[0]));
        i += 2 + 2 * n;
        fronts += 1;
    }
    assert_eq!(i, lines.len());
    assert!(fronts > 0);
}

#[test]
fn late_time_atoms_and_vacuum() {
    let sim = Simulation::create("case-iii", 1e-3, 2.0).unwrap();
    // all fluid is swept into one atom moving between u = 2 and u = 0
    let atoms = sim.atoms_at(2.0).unwrap();
    assert_eq!(atoms.len(), 3);
    assert!(atoms[1] > 0.0 && atoms[2] < 2.0 && atoms[2] > 0.0);
    assert_eq!(sim.vacuum_count(2.0).unwrap(), 0);
    let zig = Simulation::create("zigzag", 1e-3, 2.0).unwrap();
    assert!(zig.vacuum_count(1.0).unwrap() > 0);
}

#[test]
fn riemann_table_matches_symmetric_wave() {
    let rows = trajectory_table((1.0, 1.0), (1.0, -1.0), 1.0, 0.0, 2.0, 4).unwrap();
    assert_eq!(rows.len(), 20);
    for r in rows.chunks(4) {
        assert!((r[1] - (1.0 + 2.0 * r[0])).abs() < 1e-14);
        assert_eq!(r[2], 0.0);
    }
    assert!(trajectory_table((1.0, 1.0), (1.0, -1.0), 1.0, 3.0, 2.0, 4).is_err());
}
