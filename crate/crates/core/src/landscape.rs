//! Energy landscapes over applied flux.
//!
//! For a fixed vortex configuration `n` the energy is an exact parabola in the
//! frustration `f`. With `u = M⁻¹·1`, `v = M⁻¹·(n - P/2)` and `W = M⁻¹QM⁻¹`:
//!
//! ```text
//! E(f) = ½κ(2π)² (v - f u)ᵀ Q (v - f u)
//!      = A f² + B f + C,   A = ½κ(2π)² uᵀQu,  B = -κ(2π)² uᵀQv,  C = ½κ(2π)² vᵀQv
//! ```
//!
//! `A` does not depend on `n`, so every branch of one system has the same
//! curvature and is evaluated with bit-identical `A`.
//!
//! Ground-state intervals come from an exact lower envelope of those
//! parabolas; the flux grid of [`sweep`] is only for plotting.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::bilinear;
use crate::par::{self, Execution};
use crate::quadratic::{check_kappa, CouplingSystem, VortexConfig};

/// Upper bound on `(n_max - n_min + 1)^N_p`.
pub const MAX_CONFIGS: u128 = 10_000_000;

/// Relative tolerance for calling two energies equal.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Energies below this are treated as exact zeros when comparing.
const ABS_ENERGY_FLOOR: f64 = 1e-12;

/// Coefficient tolerance, relative to the largest coefficient, for calling two
/// parabolas identical.
const QUAD_TOL: f64 = 1e-10;

const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

/// Per-plaquette range of fluxoid quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationWindow {
    n_min: i64,
    n_max: i64,
}

impl Default for EnumerationWindow {
    fn default() -> Self {
        Self { n_min: -1, n_max: 1 }
    }
}

impl EnumerationWindow {
    pub fn new(n_min: i64, n_max: i64) -> Result<Self> {
        if n_min > n_max {
            return Err(Error::InvalidWindow(format!("n_min {n_min} exceeds n_max {n_max}")));
        }
        Ok(Self { n_min, n_max })
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn width(&self) -> u128 {
        (self.n_max as i128 - self.n_min as i128 + 1) as u128
    }

    /// Number of configurations over `plaquettes` plaquettes, saturating.
    pub fn count(&self, plaquettes: usize) -> u128 {
        let w = self.width();
        (0..plaquettes).fold(1u128, |acc, _| acc.saturating_mul(w))
    }

    fn check(&self, plaquettes: usize) -> Result<()> {
        let count = self.count(plaquettes);
        if count > MAX_CONFIGS {
            return Err(Error::WindowTooLarge {
                count,
                limit: MAX_CONFIGS,
            });
        }
        Ok(())
    }
}

/// Every configuration in the window, in lexicographic order.
pub fn enumerate_configs(plaquettes: usize, window: EnumerationWindow) -> Result<Vec<VortexConfig>> {
    window.check(plaquettes)?;
    let total = window.count(plaquettes) as usize;
    let mut out = Vec::with_capacity(total);
    let mut current = vec![window.n_min; plaquettes];
    loop {
        out.push(VortexConfig::new(current.clone()));
        // odometer increment from the last coordinate
        let mut pos = plaquettes;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            if current[pos] < window.n_max {
                current[pos] += 1;
                break;
            }
            current[pos] = window.n_min;
        }
    }
}

/// `E(f) = a f² + b f + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parabola {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Parabola {
    pub fn eval(&self, f: f64) -> f64 {
        (self.a * f + self.b) * f + self.c
    }

    pub fn slope(&self, f: f64) -> f64 {
        2.0 * self.a * f + self.b
    }

    pub fn vertex(&self) -> f64 {
        -self.b / (2.0 * self.a)
    }

    fn scale(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    fn minus(&self, other: &Parabola) -> Parabola {
        Parabola {
            a: self.a - other.a,
            b: self.b - other.b,
            c: self.c - other.c,
        }
    }
}

/// Closed flux interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, f: f64) -> bool {
        self.lo <= f && f <= self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }
}

/// One vortex configuration's energy parabola and where it is the ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeBranch {
    pub config: VortexConfig,
    pub quad: Parabola,
    pub vertex_f: f64,
    pub ground_intervals: Vec<Interval>,
    /// Number of configurations in the window sharing this exact parabola.
    pub multiplicity: usize,
}

impl LandscapeBranch {
    pub fn energy(&self, f: f64) -> f64 {
        self.quad.eval(f)
    }

    pub fn is_ground_at(&self, f: f64) -> bool {
        self.ground_intervals.iter().any(|i| i.contains(f))
    }
}

/// Energy parabola of `n`, with no ground intervals filled in.
pub fn parabola(system: &CouplingSystem, n: &VortexConfig, kappa: f64) -> Result<LandscapeBranch> {
    check_kappa(kappa)?;
    let quad = quad_coefficients(system, n, kappa)?;
    let v = system.solve(&system.offset(n)?)?;
    let u = system.unit_response();
    // exact ratio, independent of kappa and of rounding in b
    let vertex_f = bilinear(system.q(), system.dim(), u, &v) / system.unit_stiffness();
    Ok(LandscapeBranch {
        config: n.clone(),
        quad,
        vertex_f,
        ground_intervals: Vec::new(),
        multiplicity: 1,
    })
}

fn quad_coefficients(system: &CouplingSystem, n: &VortexConfig, kappa: f64) -> Result<Parabola> {
    let v = system.solve(&system.offset(n)?)?;
    let u = system.unit_response();
    let (q, d) = (system.q(), system.dim());
    let k = kappa * FOUR_PI_SQ;
    Ok(Parabola {
        a: 0.5 * k * system.unit_stiffness(),
        b: -k * bilinear(q, d, u, &v),
        c: 0.5 * k * bilinear(q, d, &v, &v),
    })
}

/// Result of intersecting two branches.
#[derive(Debug, Clone, PartialEq)]
pub enum Crossing {
    /// Identical parabolas: degenerate at every flux.
    Everywhere,
    /// Sorted crossing points; empty when the branches never meet.
    At(Vec<f64>),
}

/// Flux values where two branches have equal energy.
pub fn crossing(first: &LandscapeBranch, second: &LandscapeBranch) -> Crossing {
    let scale = first.quad.scale().max(second.quad.scale()).max(f64::MIN_POSITIVE);
    let d = first.quad.minus(&second.quad);
    let tol = QUAD_TOL * scale;
    if d.a.abs() <= tol && d.b.abs() <= tol && d.c.abs() <= tol {
        return Crossing::Everywhere;
    }
    Crossing::At(roots(&d, scale))
}

/// Real roots of `d`, sorted. A double root is reported once.
fn roots(d: &Parabola, scale: f64) -> Vec<f64> {
    if d.a.abs() <= 1e-14 * scale {
        if d.b.abs() <= 1e-14 * scale {
            return Vec::new();
        }
        return vec![-d.c / d.b];
    }
    let disc = d.b * d.b - 4.0 * d.a * d.c;
    if disc < -1e-14 * (d.b * d.b).max(scale * scale) {
        return Vec::new();
    }
    if disc <= 0.0 {
        return vec![-d.b / (2.0 * d.a)];
    }
    let q = -0.5 * (d.b + d.b.signum() * disc.sqrt());
    let (r1, r2) = if q == 0.0 {
        let r = (-d.c / d.a).sqrt();
        (-r, r)
    } else {
        (q / d.a, d.c / q)
    };
    let mut out = vec![r1.min(r2), r1.max(r2)];
    out.dedup();
    out
}

/// Smallest `r > after` at which `d` turns negative.
fn first_overtake(d: &Parabola, after: f64, scale: f64) -> Option<f64> {
    let rs = roots(d, scale);
    rs.into_iter()
        .filter(|&r| r > after)
        .find(|&r| {
            if d.a.abs() <= 1e-14 * scale {
                d.b < 0.0
            } else {
                d.slope(r) < 0.0
            }
        })
}

/// Index of the lowest parabola just to the right of `f`.
fn lowest_right_of(quads: &[Parabola], f: f64, scale: f64) -> usize {
    let emin = quads.iter().map(|q| q.eval(f)).fold(f64::INFINITY, f64::min);
    let tol = 1e-10 * emin.abs().max(1.0);
    let slope_tol = 1e-12 * scale;
    let mut best: Option<usize> = None;
    for (i, q) in quads.iter().enumerate() {
        if q.eval(f) > emin + tol {
            continue;
        }
        best = match best {
            None => Some(i),
            Some(j) => {
                let (si, sj) = (q.slope(f), quads[j].slope(f));
                let better = if (si - sj).abs() > slope_tol {
                    si < sj
                } else {
                    q.a < quads[j].a
                };
                Some(if better { i } else { j })
            }
        };
    }
    best.expect("at least one parabola")
}

/// Lower envelope of `quads` over `[lo, hi]` as `(index, interval)` pieces.
fn lower_envelope(quads: &[Parabola], lo: f64, hi: f64) -> Vec<(usize, Interval)> {
    let scale = quads.iter().map(Parabola::scale).fold(1.0, f64::max);
    let eps = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    let mut pieces = Vec::new();
    let mut current = lowest_right_of(quads, lo, scale);
    let mut start = lo;
    let mut f = lo;
    loop {
        let next = quads
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != current)
            .filter_map(|(_, q)| first_overtake(&q.minus(&quads[current]), f + eps, scale))
            .fold(hi, f64::min);
        if next >= hi {
            pieces.push((current, Interval { lo: start, hi }));
            return pieces;
        }
        let successor = lowest_right_of(quads, next, scale);
        if successor != current {
            if next > start {
                pieces.push((current, Interval { lo: start, hi: next }));
            }
            start = next;
            current = successor;
        }
        f = next;
    }
}

/// Groups indices of identical parabolas. Groups are in order of first member.
fn identical_groups(quads: &[Parabola]) -> Vec<Vec<usize>> {
    let scale = quads.iter().map(Parabola::scale).fold(1.0, f64::max);
    let tol = QUAD_TOL * scale;
    let mut order: Vec<usize> = (0..quads.len()).collect();
    order.sort_by(|&i, &j| quads[i].b.total_cmp(&quads[j].b).then(i.cmp(&j)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        let q = &quads[i];
        // group representatives are ascending in b, so scan back from the tail
        let mut found = None;
        for g in (0..groups.len()).rev() {
            let r = &quads[groups[g][0]];
            if r.b < q.b - tol {
                break;
            }
            if (r.a - q.a).abs() <= tol && (r.b - q.b).abs() <= tol && (r.c - q.c).abs() <= tol {
                found = Some(g);
                break;
            }
        }
        match found {
            Some(g) => groups[g].push(i),
            None => groups.push(vec![i]),
        }
    }
    for g in &mut groups {
        g.sort_unstable();
    }
    groups.sort_by_key(|g| g[0]);
    groups
}

/// Ground-state branches over `f_range`, computed from exact parabola
/// crossings. Only configurations that are the ground state on an interval of
/// positive length are returned, ordered by where that first happens. The
/// intervals of all returned branches tile `f_range`; a crossing point belongs
/// to both neighbours.
pub fn ground_branches(
    system: &CouplingSystem,
    window: EnumerationWindow,
    f_range: (f64, f64),
    kappa: f64,
) -> Result<Vec<LandscapeBranch>> {
    ground_branches_with(system, window, f_range, kappa, Execution::default())
}

pub fn ground_branches_with(
    system: &CouplingSystem,
    window: EnumerationWindow,
    f_range: (f64, f64),
    kappa: f64,
    exec: Execution,
) -> Result<Vec<LandscapeBranch>> {
    let (lo, hi) = f_range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidGrid(format!("empty flux range [{lo}, {hi}]")));
    }
    check_kappa(kappa)?;
    let configs = enumerate_configs(system.dim(), window)?;
    let branches = par::map(&configs, exec, |n| parabola(system, n, kappa))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let quads: Vec<Parabola> = branches.iter().map(|b| b.quad).collect();
    let groups = identical_groups(&quads);
    let reps: Vec<Parabola> = groups.iter().map(|g| quads[g[0]]).collect();

    let mut intervals: Vec<Vec<Interval>> = vec![Vec::new(); groups.len()];
    for (g, iv) in lower_envelope(&reps, lo, hi) {
        intervals[g].push(iv);
    }

    let mut out = Vec::new();
    for (g, members) in groups.iter().enumerate() {
        if intervals[g].is_empty() {
            continue;
        }
        for &i in members {
            let mut b = branches[i].clone();
            b.ground_intervals = intervals[g].clone();
            b.multiplicity = members.len();
            out.push(b);
        }
    }
    out.sort_by(|x, y| {
        x.ground_intervals[0]
            .lo
            .total_cmp(&y.ground_intervals[0].lo)
            .then_with(|| x.config.cmp(&y.config))
    });
    Ok(out)
}

/// Uniform flux grid `f_min, f_min + step, ... <= f_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxGrid {
    pub f_min: f64,
    pub f_max: f64,
    pub f_step: f64,
}

impl FluxGrid {
    pub fn new(f_min: f64, f_max: f64, f_step: f64) -> Result<Self> {
        if !(f_min.is_finite() && f_max.is_finite()) || f_max < f_min {
            return Err(Error::InvalidGrid(format!("empty flux range [{f_min}, {f_max}]")));
        }
        if !(f_step > 0.0 && f_step.is_finite()) {
            return Err(Error::InvalidGrid(format!("flux step must be positive, got {f_step}")));
        }
        Ok(Self { f_min, f_max, f_step })
    }

    pub fn len(&self) -> usize {
        ((self.f_max - self.f_min) / self.f_step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|k| self.f_min + k as f64 * self.f_step)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub f: f64,
    pub config: VortexConfig,
    pub energy: f64,
    pub is_ground: bool,
}

/// All `(f, config)` energies, ordered by `f` then configuration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn ground_rows(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.is_ground)
    }

    /// Ground configurations at grid point `f` (compared exactly).
    pub fn ground_at(&self, f: f64) -> Vec<&VortexConfig> {
        self.rows
            .iter()
            .filter(|r| r.f == f && r.is_ground)
            .map(|r| &r.config)
            .collect()
    }
}

pub(crate) fn same_energy(x: f64, y: f64, tol: f64) -> bool {
    let d = (x - y).abs();
    d <= ABS_ENERGY_FLOOR || d <= tol * x.abs().max(y.abs())
}

pub fn sweep(
    system: &CouplingSystem,
    window: EnumerationWindow,
    grid: FluxGrid,
    kappa: f64,
) -> Result<SweepTable> {
    sweep_with(system, window, grid, kappa, Execution::default())
}

/// Energies come from the pointwise current solve, not from the parabola
/// coefficients.
pub fn sweep_with(
    system: &CouplingSystem,
    window: EnumerationWindow,
    grid: FluxGrid,
    kappa: f64,
    exec: Execution,
) -> Result<SweepTable> {
    check_kappa(kappa)?;
    let configs = enumerate_configs(system.dim(), window)?;
    let points = grid.points();
    let blocks = par::map(&points, exec, |&f| -> Result<Vec<SweepRow>> {
        let mut rows = configs
            .iter()
            .map(|n| {
                Ok(SweepRow {
                    f,
                    config: n.clone(),
                    energy: system.energy(n, f, kappa)?,
                    is_ground: false,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let emin = rows.iter().map(|r| r.energy).fold(f64::INFINITY, f64::min);
        for r in &mut rows {
            r.is_ground = same_energy(r.energy, emin, DEGENERACY_TOL);
        }
        Ok(rows)
    });
    let mut table = SweepTable::default();
    for block in blocks {
        table.rows.extend(block?);
    }
    Ok(table)
}

/// Configurations sharing one energy at a given flux.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyClass {
    pub energy: f64,
    pub configs: Vec<VortexConfig>,
}

/// Groups the window's configurations by energy at `f` (relative tolerance
/// `tol`), lowest energy first.
pub fn degeneracy_classes(
    system: &CouplingSystem,
    window: EnumerationWindow,
    f: f64,
    kappa: f64,
    tol: f64,
) -> Result<Vec<DegeneracyClass>> {
    degeneracy_classes_with(system, window, f, kappa, tol, Execution::default())
}

pub fn degeneracy_classes_with(
    system: &CouplingSystem,
    window: EnumerationWindow,
    f: f64,
    kappa: f64,
    tol: f64,
    exec: Execution,
) -> Result<Vec<DegeneracyClass>> {
    check_kappa(kappa)?;
    let configs = enumerate_configs(system.dim(), window)?;
    let energies = par::map(&configs, exec, |n| system.energy(n, f, kappa))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..configs.len()).collect();
    order.sort_by(|&i, &j| energies[i].total_cmp(&energies[j]).then(i.cmp(&j)));
    let mut classes: Vec<DegeneracyClass> = Vec::new();
    for i in order {
        match classes.last_mut() {
            Some(c) if same_energy(c.energy, energies[i], tol) => c.configs.push(configs[i].clone()),
            _ => classes.push(DegeneracyClass {
                energy: energies[i],
                configs: vec![configs[i].clone()],
            }),
        }
    }
    Ok(classes)
}
