//! Oracles shared by the integration test targets. The reference energy uses
//! its own Gauss-Jordan inverse; the brute-force scans use only the pointwise
//! solve, never the parabola coefficients or the lower envelope.

#![allow(dead_code)]

use jjarray::landscape::{ground_branches, LandscapeBranch};
use jjarray::{
    enumerate_configs, ArrayTopology, CouplingSystem, EnumerationWindow, VortexConfig,
};

/// Gauss-Jordan inverse with partial pivoting.
pub fn dense_inverse(m: &[i64], n: usize) -> Vec<f64> {
    let mut a: Vec<f64> = m.iter().map(|&v| v as f64).collect();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))
            .unwrap();
        for k in 0..n {
            a.swap(col * n + k, piv * n + k);
            inv.swap(col * n + k, piv * n + k);
        }
        let p = a[col * n + col];
        for k in 0..n {
            a[col * n + k] /= p;
            inv[col * n + k] /= p;
        }
        for r in 0..n {
            if r != col {
                let factor = a[r * n + col];
                for k in 0..n {
                    a[r * n + k] -= factor * a[col * n + k];
                    inv[r * n + k] -= factor * inv[col * n + k];
                }
            }
        }
    }
    inv
}

/// Energy via an explicit inverse and a junction walk over the topology.
pub fn reference_energy(topo: &ArrayTopology, n: &VortexConfig, f: f64, kappa: f64) -> f64 {
    let dim = topo.len();
    let inv = dense_inverse(&topo.coupling_matrix(), dim);
    let parity = topo.pi_parity();
    let r: Vec<f64> = (0..dim)
        .map(|i| {
            2.0 * std::f64::consts::PI
                * (n.as_slice()[i] as f64 - f - 0.5 * parity[i] as f64)
        })
        .collect();
    let cur: Vec<f64> = (0..dim)
        .map(|i| (0..dim).map(|j| inv[i * dim + j] * r[j]).sum())
        .collect();
    let mut total = 0.0;
    for p in 0..dim {
        total += topo.boundary_count(p) as f64 * cur[p] * cur[p];
        for q in 0..dim {
            let s = topo.shared_count(p, q) as f64;
            total += s * (cur[p] - cur[q]).powi(2);
        }
    }
    0.5 * kappa * total
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every plaquette permutation preserving labels and shared counts.
pub fn brute_force_automorphisms(topo: &ArrayTopology) -> Vec<Vec<usize>> {
    let n = topo.len();
    let pl = topo.plaquettes();
    permutations(n)
        .into_iter()
        .filter(|p| {
            (0..n).all(|i| {
                pl[i].junction_count == pl[p[i]].junction_count
                    && pl[i].pi_parity() == pl[p[i]].pi_parity()
                    && (0..n).all(|j| topo.shared_count(i, j) == topo.shared_count(p[i], p[j]))
            })
        })
        .collect()
}

pub fn brute_force_orbits(topo: &ArrayTopology) -> Vec<Vec<usize>> {
    let autos = brute_force_automorphisms(topo);
    let n = topo.len();
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if orbits.iter().any(|o| o.contains(&i)) {
            continue;
        }
        let mut o: Vec<usize> = autos.iter().map(|p| p[i]).collect();
        o.sort_unstable();
        o.dedup();
        orbits.push(o);
    }
    orbits
}

/// Applies a plaquette permutation: the vortex of plaquette `i` moves to `perm[i]`.
pub fn permute(n: &VortexConfig, perm: &[usize]) -> VortexConfig {
    let mut out = vec![0; n.len()];
    for (i, &p) in perm.iter().enumerate() {
        out[p] = n.as_slice()[i];
    }
    VortexConfig::new(out)
}

pub fn same(a: f64, b: f64, rel: f64) -> bool {
    let d = (a - b).abs();
    d <= 1e-12 || d <= rel * a.abs().max(b.abs())
}

/// Ground set at `f` by direct evaluation of every configuration.
pub fn scan_ground_set(
    system: &CouplingSystem,
    configs: &[VortexConfig],
    f: f64,
    kappa: f64,
) -> Vec<VortexConfig> {
    let e: Vec<f64> = configs
        .iter()
        .map(|n| system.energy(n, f, kappa).unwrap())
        .collect();
    let emin = e.iter().cloned().fold(f64::INFINITY, f64::min);
    configs
        .iter()
        .zip(&e)
        .filter(|(_, &x)| same(x, emin, 1e-9))
        .map(|(n, _)| n.clone())
        .collect()
}

/// Runs of constant ground set along a uniform scan: `(set, first f, last f)`.
pub fn scan_runs(
    system: &CouplingSystem,
    window: EnumerationWindow,
    lo: f64,
    hi: f64,
    step: f64,
    kappa: f64,
) -> Vec<(Vec<VortexConfig>, f64, f64)> {
    let configs = enumerate_configs(system.dim(), window).unwrap();
    let points = ((hi - lo) / step).round() as usize;
    let mut runs: Vec<(Vec<VortexConfig>, f64, f64)> = Vec::new();
    for k in 0..=points {
        let f = lo + k as f64 * step;
        let set = scan_ground_set(system, &configs, f, kappa);
        match runs.last_mut() {
            Some(run) if run.0 == set => run.2 = f,
            _ => runs.push((set, f, f)),
        }
    }
    runs
}

/// Groups analytic branches sharing identical intervals into `(configs, intervals)`.
pub fn branch_classes(
    branches: &[LandscapeBranch],
) -> Vec<(Vec<VortexConfig>, Vec<(f64, f64)>)> {
    let mut out: Vec<(Vec<VortexConfig>, Vec<(f64, f64)>)> = Vec::new();
    for b in branches {
        let iv: Vec<(f64, f64)> = b.ground_intervals.iter().map(|i| (i.lo, i.hi)).collect();
        match out.iter_mut().find(|(_, x)| *x == iv) {
            Some(entry) => entry.0.push(b.config.clone()),
            None => out.push((vec![b.config.clone()], iv)),
        }
    }
    for (c, _) in &mut out {
        c.sort();
    }
    out
}

/// Compares analytic ground intervals against a brute-force scan at `step`.
/// Every analytic interval wider than `2·tol` must appear as a scan run of
/// the same ground set with both ends within `tol`, and every scan run of two
/// or more points must be explained by an analytic interval.
pub fn check_against_scan(
    system: &CouplingSystem,
    window: EnumerationWindow,
    lo: f64,
    hi: f64,
    kappa: f64,
    step: f64,
    tol: f64,
) -> Result<(), String> {
    let branches = ground_branches(system, window, (lo, hi), kappa).map_err(|e| e.to_string())?;
    let classes = branch_classes(&branches);
    let runs = scan_runs(system, window, lo, hi, step, kappa);
    for (configs, ivs) in &classes {
        for &(a, b) in ivs {
            if b - a <= 2.0 * tol {
                continue;
            }
            let hit = runs.iter().any(|(set, first, last)| {
                set == configs && (first - a).abs() <= tol && (last - b).abs() <= tol
            });
            if !hit {
                return Err(format!("analytic interval [{a}, {b}] of {configs:?} not found in scan"));
            }
        }
    }
    for (set, first, last) in &runs {
        if last - first < step * 1.5 {
            continue;
        }
        let explained = classes.iter().any(|(configs, ivs)| {
            configs == set
                && ivs
                    .iter()
                    .any(|&(a, b)| (first - a).abs() <= tol && (last - b).abs() <= tol)
        });
        if !explained {
            return Err(format!("scan run [{first}, {last}] of {set:?} has no analytic interval"));
        }
    }
    Ok(())
}

/// Sweep ground sets agree with the analytic branch owners at every grid
/// point farther than 1e-9 from an interval endpoint.
pub fn check_grid_analytic(
    system: &CouplingSystem,
    window: EnumerationWindow,
    lo: f64,
    hi: f64,
    step: f64,
    kappa: f64,
) -> Result<(), String> {
    use jjarray::{sweep, FluxGrid};
    let branches = ground_branches(system, window, (lo, hi), kappa).map_err(|e| e.to_string())?;
    let ends: Vec<f64> = branches
        .iter()
        .flat_map(|b| b.ground_intervals.iter().flat_map(|i| [i.lo, i.hi]))
        .collect();
    let grid = FluxGrid::new(lo, hi, step).map_err(|e| e.to_string())?;
    let table = sweep(system, window, grid, kappa).map_err(|e| e.to_string())?;
    for f in grid.points() {
        if ends.iter().any(|e| (e - f).abs() < 1e-9) {
            continue;
        }
        let grid_set: Vec<VortexConfig> = table.ground_at(f).into_iter().cloned().collect();
        let mut owners: Vec<VortexConfig> = branches
            .iter()
            .filter(|b| b.is_ground_at(f))
            .map(|b| b.config.clone())
            .collect();
        owners.sort();
        if grid_set != owners {
            return Err(format!("f = {f}: sweep {grid_set:?} vs branches {owners:?}"));
        }
    }
    Ok(())
}

/// `E_gs(f + 1) = E_gs(f)` for `f ∈ [-1, 0]` with window {-2..2}.
pub fn check_periodicity(system: &CouplingSystem, kappa: f64) -> Result<(), String> {
    use jjarray::{sweep, FluxGrid};
    let w = EnumerationWindow::new(-2, 2).unwrap();
    let left = sweep(system, w, FluxGrid::new(-1.0, 0.0, 0.05).unwrap(), kappa)
        .map_err(|e| e.to_string())?;
    let right = sweep(system, w, FluxGrid::new(0.0, 1.0, 0.05).unwrap(), kappa)
        .map_err(|e| e.to_string())?;
    let gs = |t: &jjarray::SweepTable| -> Vec<f64> {
        let mut v: Vec<(f64, f64)> = Vec::new();
        for r in t.ground_rows() {
            if v.last().map(|x| x.0) != Some(r.f) {
                v.push((r.f, r.energy));
            }
        }
        v.into_iter().map(|x| x.1).collect()
    };
    let (a, b) = (gs(&left), gs(&right));
    if a.len() != b.len() {
        return Err("grid length mismatch".into());
    }
    for (k, (x, y)) in a.iter().zip(&b).enumerate() {
        if !same(*x, *y, 1e-9) {
            return Err(format!("E_gs({}) = {x} but E_gs(+1) = {y}", -1.0 + 0.05 * k as f64));
        }
    }
    Ok(())
}

/// Branches of the all-π system over `[lo, hi]` are those of the ordinary
/// system over `[lo + ½, hi + ½]`, shifted back.
pub fn check_pi_shift_branches(
    pi: &CouplingSystem,
    ordinary: &CouplingSystem,
    window: EnumerationWindow,
    lo: f64,
    hi: f64,
) -> Result<(), String> {
    let bp = ground_branches(pi, window, (lo, hi), 1.0).map_err(|e| e.to_string())?;
    let bo = ground_branches(ordinary, window, (lo + 0.5, hi + 0.5), 1.0)
        .map_err(|e| e.to_string())?;
    if bp.len() != bo.len() {
        return Err(format!("{} branches vs {}", bp.len(), bo.len()));
    }
    for (x, y) in bp.iter().zip(&bo) {
        if x.config != y.config || x.ground_intervals.len() != y.ground_intervals.len() {
            return Err(format!("{} vs {}", x.config, y.config));
        }
        for (i, j) in x.ground_intervals.iter().zip(&y.ground_intervals) {
            if (i.lo - (j.lo - 0.5)).abs() > 1e-9 || (i.hi - (j.hi - 0.5)).abs() > 1e-9 {
                return Err(format!("{}: {i:?} vs shifted {j:?}", x.config));
            }
        }
    }
    Ok(())
}

/// Configurations related by an automorphism share a degeneracy class.
pub fn check_orbit_degeneracy(
    topo: &ArrayTopology,
    system: &CouplingSystem,
    window: EnumerationWindow,
    fluxes: &[f64],
) -> Result<(), String> {
    use jjarray::landscape::{degeneracy_classes, DEGENERACY_TOL};
    let autos = brute_force_automorphisms(topo);
    for &f in fluxes {
        let classes = degeneracy_classes(system, window, f, 1.0, DEGENERACY_TOL)
            .map_err(|e| e.to_string())?;
        let class_of = |n: &VortexConfig| classes.iter().position(|c| c.configs.contains(n));
        for c in &classes {
            for n in &c.configs {
                for p in &autos {
                    let m = permute(n, p);
                    if class_of(&m) != class_of(n) {
                        return Err(format!("f = {f}: {n} and image {m} split"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Pointwise invariants of one `(n, f, κ)` sample.
pub fn check_point_invariants(
    topo: &ArrayTopology,
    system: &CouplingSystem,
    n: &VortexConfig,
    f: f64,
    kappa: f64,
    shift: i64,
) -> Result<(), String> {
    let e = system.energy(n, f, kappa).map_err(|e| e.to_string())?;
    if e < 0.0 {
        return Err(format!("negative energy {e}"));
    }
    let shifted = VortexConfig::new(n.as_slice().iter().map(|v| v + shift).collect());
    let es = system.energy(&shifted, f + shift as f64, kappa).unwrap();
    if !same(e, es, 1e-9) {
        return Err(format!("shift covariance: {e} vs {es}"));
    }
    // with parity P, g -> -g under n -> P - n, f -> -f
    let parity = topo.pi_parity();
    let mirrored = VortexConfig::new(
        n.as_slice()
            .iter()
            .zip(&parity)
            .map(|(v, &p)| p as i64 - v)
            .collect(),
    );
    let em = system.energy(&mirrored, -f, kappa).unwrap();
    if !same(e, em, 1e-9) {
        return Err(format!("mirror: {e} vs {em}"));
    }
    for p in brute_force_automorphisms(topo) {
        let ep = system.energy(&permute(n, &p), f, kappa).unwrap();
        if !same(e, ep, 1e-9) {
            return Err(format!("automorphism {p:?}: {e} vs {ep}"));
        }
    }
    Ok(())
}
