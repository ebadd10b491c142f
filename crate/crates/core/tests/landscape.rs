mod support;

use jjarray::landscape::{ground_branches_with, degeneracy_classes, DEGENERACY_TOL};
use jjarray::{
    builtin_topology, crossing, ground_branches, parabola, CouplingSystem, Crossing,
    EnumerationWindow, Execution, VortexConfig, BUILTIN_NAMES,
};

fn system(name: &str) -> CouplingSystem {
    CouplingSystem::assemble(&builtin_topology(name).unwrap()).unwrap()
}

fn cfg(v: &[i64]) -> VortexConfig {
    VortexConfig::new(v.to_vec())
}

/// Sign changes of `E_a - E_b` on a fine grid, refined by bisection.
fn grid_crossings(s: &CouplingSystem, a: &VortexConfig, b: &VortexConfig, lo: f64, hi: f64) -> Vec<f64> {
    let d = |f: f64| s.energy(a, f, 1.0).unwrap() - s.energy(b, f, 1.0).unwrap();
    let steps = 20_000;
    let h = (hi - lo) / steps as f64;
    let mut out = Vec::new();
    for k in 0..steps {
        let (mut x0, mut x1) = (lo + k as f64 * h, lo + (k + 1) as f64 * h);
        if d(x0).signum() != d(x1).signum() {
            for _ in 0..60 {
                let m = 0.5 * (x0 + x1);
                if d(m).signum() == d(x0).signum() {
                    x0 = m;
                } else {
                    x1 = m;
                }
            }
            out.push(0.5 * (x0 + x1));
        }
    }
    out
}

#[test]
fn empty_stack_versus_single_outer_vortex() {
    let s = system("triangle-stack-4");
    let (n0, n1) = (cfg(&[0, 0, 0, 0]), cfg(&[1, 0, 0, 0]));
    let oracle = grid_crossings(&s, &n0, &n1, -2.0, 2.0);
    assert_eq!(oracle.len(), 1);
    // exact value from equating the two parabolas symbolically
    assert!((oracle[0] - 25.0 / 72.0).abs() < 1e-12);

    let b0 = parabola(&s, &n0, 1.0).unwrap();
    let b1 = parabola(&s, &n1, 1.0).unwrap();
    match crossing(&b0, &b1) {
        Crossing::At(r) => {
            assert_eq!(r.len(), 1);
            assert!((r[0] - 25.0 / 72.0).abs() < 1e-12);
        }
        Crossing::Everywhere => panic!("distinct configurations"),
    }
}

#[test]
fn symmetric_configs_cross_everywhere() {
    let s = system("triangle-stack-4");
    let a = parabola(&s, &cfg(&[1, 0, 0, 0]), 1.0).unwrap();
    let b = parabola(&s, &cfg(&[0, 0, 1, 0]), 1.0).unwrap();
    assert_eq!(crossing(&a, &b), Crossing::Everywhere);
}

#[test]
fn crossings_agree_with_grid_oracle() {
    let s = system("square-2x2-checkerboard-pi");
    let pairs = [
        (cfg(&[0, 0, 0, 0]), cfg(&[1, 0, 0, 1])),
        (cfg(&[1, 0, 0, 0]), cfg(&[0, 1, 1, 0])),
        (cfg(&[-1, 1, 0, 1]), cfg(&[0, 0, 0, 0])),
    ];
    for (a, b) in pairs {
        let ba = parabola(&s, &a, 1.0).unwrap();
        let bb = parabola(&s, &b, 1.0).unwrap();
        let Crossing::At(r) = crossing(&ba, &bb) else { panic!() };
        let inside: Vec<f64> = r.into_iter().filter(|x| (-3.0..3.0).contains(x)).collect();
        let oracle = grid_crossings(&s, &a, &b, -3.0, 3.0);
        assert_eq!(inside.len(), oracle.len(), "{a} vs {b}");
        for (x, y) in inside.iter().zip(&oracle) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}

#[test]
fn stack_ground_sequence_matches_scan() {
    let s = system("triangle-stack-4");
    let w = EnumerationWindow::new(0, 1).unwrap();
    support::check_against_scan(&s, w, 0.0, 1.0, 1.0, 1e-3, 2e-3).unwrap();
    let classes = support::branch_classes(&ground_branches(&s, w, (0.0, 1.0), 1.0).unwrap());
    let seq: Vec<_> = classes.iter().map(|(c, _)| c.clone()).collect();
    assert_eq!(
        seq,
        vec![
            vec![cfg(&[0, 0, 0, 0])],
            vec![cfg(&[0, 0, 0, 1])],
            vec![cfg(&[1, 1, 1, 0])],
            vec![cfg(&[1, 1, 1, 1])],
        ]
    );
}

#[test]
fn intervals_tile_the_range() {
    for name in BUILTIN_NAMES {
        let s = system(name);
        let (lo, hi) = (-1.0, 1.3);
        let branches = ground_branches(&s, EnumerationWindow::default(), (lo, hi), 0.9).unwrap();
        let mut ivs: Vec<(f64, f64)> = support::branch_classes(&branches)
            .into_iter()
            .flat_map(|(_, iv)| iv)
            .collect();
        ivs.sort_by(|a, b| a.0.total_cmp(&b.0));
        assert_eq!(ivs[0].0, lo, "{name}");
        assert_eq!(ivs.last().unwrap().1, hi, "{name}");
        for w in ivs.windows(2) {
            assert_eq!(w[0].1, w[1].0, "{name}");
            assert!(w[0].1 > w[0].0);
        }
    }
}

#[test]
fn execution_modes_agree() {
    let s = system("spin-star-5-pi");
    let w = EnumerationWindow::default();
    let seq = ground_branches_with(&s, w, (-1.0, 1.0), 1.0, Execution::Sequential).unwrap();
    let par = ground_branches_with(&s, w, (-1.0, 1.0), 1.0, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
}

#[test]
fn spin_star_is_decoupled() {
    // no shared junctions: every plaquette flips independently at f = 1/2
    let s = system("spin-star-5");
    let w = EnumerationWindow::new(0, 1).unwrap();
    let b = ground_branches(&s, w, (0.0, 1.0), 1.0).unwrap();
    let classes = support::branch_classes(&b);
    assert_eq!(classes.len(), 2);
    assert_eq!(classes[0].0, vec![cfg(&[0; 5])]);
    assert_eq!(classes[1].0, vec![cfg(&[1; 5])]);
    assert!((classes[0].1[0].1 - 0.5).abs() < 1e-12);
    let at_half = degeneracy_classes(&s, w, 0.5, 1.0, DEGENERACY_TOL).unwrap();
    assert_eq!(at_half[0].configs.len(), 32);
}

#[test]
fn multiplicity_counts_symmetric_partners() {
    let s = system("square-2x2");
    let w = EnumerationWindow::new(0, 1).unwrap();
    for b in ground_branches(&s, w, (0.0, 1.0), 1.0).unwrap() {
        let partners = ground_branches(&s, w, (0.0, 1.0), 1.0)
            .unwrap()
            .into_iter()
            .filter(|x| x.ground_intervals == b.ground_intervals)
            .count();
        assert_eq!(b.multiplicity, partners);
    }
}
