//! Flux quantization in the harmonic approximation.
//!
//! Each plaquette `p` carries a clockwise circulating current `I_p`. A junction
//! on the boundary of `p` carries `I_p`; a junction shared with `q` carries
//! `I_p - I_q`. Summing the phase drops around every loop gives `M·I = r` with
//!
//! ```text
//! M_pp = junctions(p),  M_pq = -shared(p, q),  r_p = 2π (n_p - f - P_p / 2)
//! ```
//!
//! where `P_p` is the π-parity of plaquette `p`. The total energy, in units of
//! the Josephson energy, is `½ κ Iᵀ Q I` with `Q = 2M - diag(boundary)`. That
//! matrix is what one gets from summing the squared junction phase drops
//! plaquette by plaquette, so each shared junction is counted once from each
//! side. For the four-triangle stack this is
//! `4(I₁² + I₂² + I₃²) + 6 I₄² - 4(I₁ + I₂ + I₃) I₄`.
//!
//! Currents are dimensionless (multiples of `I_c` times the phase drop in
//! radians); conversion to amperes belongs to [`crate::physical`].

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{bilinear, Cholesky};
use crate::topology::{builtin_topology, ArrayTopology};

const TWO_PI: f64 = 2.0 * PI;

/// Trapped fluxoid quantum numbers, one per plaquette.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VortexConfig(Vec<i64>);

impl VortexConfig {
    pub fn new(n: Vec<i64>) -> Self {
        Self(n)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn uniform(len: usize, value: i64) -> Self {
        Self(vec![value; len])
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of plaquettes holding a nonzero quantum number.
    pub fn occupied(&self) -> usize {
        self.0.iter().filter(|&&v| v != 0).count()
    }
}

impl From<Vec<i64>> for VortexConfig {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

/// Semicolon-joined, e.g. `1;0;0;0`.
impl fmt::Display for VortexConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Circulating currents, clockwise positive.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentVector(Vec<f64>);

impl CurrentVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for CurrentVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Edge {
    a: usize,
    b: usize,
    count: u32,
}

/// Coupling matrix `M`, energy form `Q` and parity vector `P` of a topology,
/// together with the factorization of `M`.
#[derive(Debug, Clone)]
pub struct CouplingSystem {
    dim: usize,
    m: Vec<i64>,
    q: Vec<i64>,
    parity: Vec<u8>,
    boundary: Vec<u32>,
    edges: Vec<Edge>,
    chol: Cholesky,
    /// `M⁻¹·1`, the response to a uniform unit frustration.
    unit_response: Vec<f64>,
    /// `1ᵀ M⁻¹ Q M⁻¹ 1`.
    unit_stiffness: f64,
}

impl CouplingSystem {
    pub fn assemble(topo: &ArrayTopology) -> Result<Self> {
        let dim = topo.len();
        let m = topo.coupling_matrix();
        let boundary: Vec<u32> = (0..dim).map(|i| topo.boundary_count(i)).collect();
        let mut q = vec![0i64; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                q[i * dim + j] = 2 * m[i * dim + j];
            }
            q[i * dim + i] -= boundary[i] as i64;
        }
        let mf: Vec<f64> = m.iter().map(|&v| v as f64).collect();
        let chol = Cholesky::factor(&mf, dim)?;
        let unit_response = chol.solve(&vec![1.0; dim])?;
        let unit_stiffness = bilinear(&q, dim, &unit_response, &unit_response);
        let edges = (0..dim)
            .flat_map(|a| ((a + 1)..dim).map(move |b| (a, b)))
            .filter_map(|(a, b)| {
                let count = topo.shared_count(a, b);
                (count > 0).then_some(Edge { a, b, count })
            })
            .collect();
        Ok(Self {
            dim,
            m,
            q,
            parity: topo.pi_parity(),
            boundary,
            edges,
            chol,
            unit_response,
            unit_stiffness,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major `M`.
    pub fn m(&self) -> &[i64] {
        &self.m
    }

    /// Row-major `Q`.
    pub fn q(&self) -> &[i64] {
        &self.q
    }

    pub fn parity(&self) -> &[u8] {
        &self.parity
    }

    pub fn boundary(&self) -> &[u32] {
        &self.boundary
    }

    fn check_len(&self, n: &VortexConfig) -> Result<()> {
        if n.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: n.len(),
            });
        }
        Ok(())
    }

    /// Reduced frustration `g = n - f - P/2`.
    pub fn frustration(&self, n: &VortexConfig, f: f64) -> Result<Vec<f64>> {
        self.check_len(n)?;
        Ok(n
            .as_slice()
            .iter()
            .zip(&self.parity)
            .map(|(&ni, &pi)| ni as f64 - f - 0.5 * pi as f64)
            .collect())
    }

    /// Offset `h = n - P/2`, so that `g = h - f·1`.
    pub(crate) fn offset(&self, n: &VortexConfig) -> Result<Vec<f64>> {
        self.frustration(n, 0.0)
    }

    /// Right-hand side `2π·g`.
    pub fn rhs(&self, n: &VortexConfig, f: f64) -> Result<Vec<f64>> {
        Ok(self
            .frustration(n, f)?
            .into_iter()
            .map(|g| TWO_PI * g)
            .collect())
    }

    pub fn solve_currents(&self, n: &VortexConfig, f: f64) -> Result<CurrentVector> {
        let r = self.rhs(n, f)?;
        Ok(CurrentVector(self.chol.solve(&r)?))
    }

    /// `‖M·I - r‖∞`.
    pub fn residual(&self, currents: &CurrentVector, n: &VortexConfig, f: f64) -> Result<f64> {
        let r = self.rhs(n, f)?;
        let d = self.dim;
        Ok((0..d)
            .map(|i| {
                let mi: f64 = (0..d)
                    .map(|j| self.m[i * d + j] as f64 * currents[j])
                    .sum();
                (mi - r[i]).abs()
            })
            .fold(0.0, f64::max))
    }

    /// Energy in units of `E_J`: `½ κ Iᵀ Q I`.
    pub fn energy(&self, n: &VortexConfig, f: f64, kappa: f64) -> Result<f64> {
        check_kappa(kappa)?;
        let i = self.solve_currents(n, f)?;
        Ok(0.5 * kappa * bilinear(&self.q, self.dim, i.as_slice(), i.as_slice()))
    }

    /// The same energy, summed junction by junction around each plaquette.
    pub fn junction_sum_energy(&self, n: &VortexConfig, f: f64, kappa: f64) -> Result<f64> {
        check_kappa(kappa)?;
        let i = self.solve_currents(n, f)?;
        Ok(0.5 * kappa * junction_sum(&self.boundary, &self.edges, i.as_slice()))
    }

    pub(crate) fn unit_response(&self) -> &[f64] {
        &self.unit_response
    }

    pub(crate) fn unit_stiffness(&self) -> f64 {
        self.unit_stiffness
    }

    pub(crate) fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.chol.solve(b)
    }
}

/// Σ over plaquettes of Σ over their junctions of the squared phase drop.
fn junction_sum(boundary: &[u32], edges: &[Edge], currents: &[f64]) -> f64 {
    let mut total = 0.0;
    for (p, &b) in boundary.iter().enumerate() {
        total += b as f64 * currents[p] * currents[p];
    }
    for e in edges {
        // seen once from each side
        let from_a = currents[e.a] - currents[e.b];
        let from_b = currents[e.b] - currents[e.a];
        total += e.count as f64 * (from_a * from_a + from_b * from_b);
    }
    total
}

pub(crate) fn check_kappa(kappa: f64) -> Result<()> {
    if kappa > 0.0 && kappa <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidKappa(kappa))
    }
}

/// Explicit inverse of the four-triangle coupling matrix, scaled by 27/π.
/// Rows follow internal indices, with the central triangle last.
const STACK_INVERSE_27: [[f64; 4]; 4] = [
    [21.0, 3.0, 3.0, 9.0],
    [3.0, 21.0, 3.0, 9.0],
    [3.0, 3.0, 21.0, 9.0],
    [9.0, 9.0, 9.0, 27.0],
];

/// Closed-form currents of the ordinary four-triangle stack, bypassing the
/// solver entirely.
pub fn closed_form_currents_oracle(
    topo: &ArrayTopology,
    n: &VortexConfig,
    f: f64,
) -> Result<CurrentVector> {
    let reference = builtin_topology("triangle-stack-4")?;
    if !topo.same_structure(&reference) {
        return Err(Error::WrongTopology(topo.name().to_string()));
    }
    if n.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: n.len(),
        });
    }
    let g: Vec<f64> = n.as_slice().iter().map(|&v| v as f64 - f).collect();
    Ok(CurrentVector(
        STACK_INVERSE_27
            .iter()
            .map(|row| PI / 27.0 * row.iter().zip(&g).map(|(c, gi)| c * gi).sum::<f64>())
            .collect(),
    ))
}
