//! Plaquette-array topologies.
//!
//! A topology is purely combinatorial: how many junctions each plaquette has,
//! how many of them are π-junctions, and how many junctions each pair of
//! plaquettes shares. Geometry lives in [`crate::physical`].
//!
//! Plaquettes carry user-facing ids (any distinct positive integers). After
//! construction they are sorted by id and addressed by a dense internal index
//! `0..len()`. In the built-in `triangle-stack-4` the central triangle has
//! id 4, so it is the row coupled to every other row of the coupling matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Cholesky;

/// Largest array for which [`automorphism_orbits`] runs its exhaustive search.
pub const AUTOMORPHISM_LIMIT: usize = 12;

pub const BUILTIN_NAMES: [&str; 6] = [
    "triangle-stack-4",
    "triangle-stack-4-pi",
    "square-2x2",
    "square-2x2-checkerboard-pi",
    "spin-star-5",
    "spin-star-5-pi",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Plaquette {
    pub id: u32,
    pub junction_count: u32,
    pub pi_junction_count: u32,
}

impl Plaquette {
    pub fn new(id: u32, junction_count: u32, pi_junction_count: u32) -> Self {
        Self {
            id,
            junction_count,
            pi_junction_count,
        }
    }

    /// 1 for a π-ring (odd number of π-junctions), 0 otherwise.
    pub fn pi_parity(&self) -> u8 {
        (self.pi_junction_count % 2) as u8
    }
}

/// Junctions shared between two plaquettes, referenced by id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SharedJunctionLink {
    pub a: u32,
    pub b: u32,
    pub count: u32,
}

impl SharedJunctionLink {
    pub fn new(a: u32, b: u32, count: u32) -> Self {
        Self { a, b, count }
    }
}

/// A validated plaquette array. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayTopology {
    name: String,
    plaquettes: Vec<Plaquette>,
    /// Canonical: `a < b` by id, sorted by `(a, b)`.
    links: Vec<SharedJunctionLink>,
    /// Dense symmetric shared-count matrix over internal indices.
    shared: Vec<u32>,
}

impl ArrayTopology {
    /// Validates and canonicalizes. Fails if ids collide, links are malformed,
    /// a plaquette shares more junctions than it has, or the coupling matrix
    /// is not positive definite.
    pub fn new(
        name: impl Into<String>,
        mut plaquettes: Vec<Plaquette>,
        links: Vec<SharedJunctionLink>,
    ) -> Result<Self> {
        let name = name.into();
        if plaquettes.is_empty() {
            return Err(Error::Validation("topology has no plaquettes".into()));
        }
        plaquettes.sort_by_key(|p| p.id);
        for w in plaquettes.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::Validation(format!("duplicate plaquette id {}", w[0].id)));
            }
        }
        for p in &plaquettes {
            if p.id == 0 {
                return Err(Error::Validation("plaquette ids must be positive".into()));
            }
            if p.junction_count == 0 {
                return Err(Error::Validation(format!(
                    "plaquette {} has no junctions",
                    p.id
                )));
            }
            if p.pi_junction_count > p.junction_count {
                return Err(Error::Validation(format!(
                    "plaquette {} has {} pi-junctions but only {} junctions",
                    p.id, p.pi_junction_count, p.junction_count
                )));
            }
        }

        let n = plaquettes.len();
        let index_of = |id: u32| plaquettes.binary_search_by_key(&id, |p| p.id).ok();
        let mut canon = Vec::with_capacity(links.len());
        let mut shared = vec![0u32; n * n];
        for l in &links {
            if l.a == l.b {
                return Err(Error::Validation(format!("plaquette {} linked to itself", l.a)));
            }
            if l.count == 0 {
                return Err(Error::Validation(format!(
                    "link {}-{} shares zero junctions",
                    l.a, l.b
                )));
            }
            let (i, j) = match (index_of(l.a), index_of(l.b)) {
                (Some(i), Some(j)) => (i, j),
                _ => {
                    return Err(Error::Validation(format!(
                        "link {}-{} references an unknown plaquette",
                        l.a, l.b
                    )))
                }
            };
            if shared[i * n + j] != 0 {
                return Err(Error::Validation(format!("duplicate link {}-{}", l.a, l.b)));
            }
            shared[i * n + j] = l.count;
            shared[j * n + i] = l.count;
            let (a, b) = if l.a < l.b { (l.a, l.b) } else { (l.b, l.a) };
            canon.push(SharedJunctionLink::new(a, b, l.count));
        }
        canon.sort_by_key(|l| (l.a, l.b));

        for (i, p) in plaquettes.iter().enumerate() {
            let total: u64 = (0..n).map(|j| shared[i * n + j] as u64).sum();
            if total > p.junction_count as u64 {
                return Err(Error::Validation(format!(
                    "plaquette {} shares {} junctions but has only {}",
                    p.id, total, p.junction_count
                )));
            }
        }

        let topo = Self {
            name,
            plaquettes,
            links: canon,
            shared,
        };
        let m: Vec<f64> = topo.coupling_matrix().iter().map(|&v| v as f64).collect();
        Cholesky::factor(&m, n)?;
        Ok(topo)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.plaquettes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plaquettes.is_empty()
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    pub fn links(&self) -> &[SharedJunctionLink] {
        &self.links
    }

    pub fn index_of(&self, id: u32) -> Option<usize> {
        self.plaquettes.binary_search_by_key(&id, |p| p.id).ok()
    }

    /// Junctions shared between internal indices `i` and `j` (0 when `i == j`).
    pub fn shared_count(&self, i: usize, j: usize) -> u32 {
        self.shared[i * self.len() + j]
    }

    pub fn shared_total(&self, i: usize) -> u32 {
        let n = self.len();
        self.shared[i * n..(i + 1) * n].iter().sum()
    }

    /// Junctions of plaquette `i` that belong to no other plaquette.
    pub fn boundary_count(&self, i: usize) -> u32 {
        self.plaquettes[i].junction_count - self.shared_total(i)
    }

    /// Parity vector `P`: 1 for π-rings.
    pub fn pi_parity(&self) -> Vec<u8> {
        self.plaquettes.iter().map(Plaquette::pi_parity).collect()
    }

    /// Integer coupling matrix `M` (row-major): junction counts on the
    /// diagonal, minus shared counts off it.
    pub fn coupling_matrix(&self) -> Vec<i64> {
        let n = self.len();
        let mut m = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = if i == j {
                    self.plaquettes[i].junction_count as i64
                } else {
                    -(self.shared_count(i, j) as i64)
                };
            }
        }
        m
    }

    /// Same topology with every π-junction count replaced.
    pub fn with_pi_counts(&self, name: impl Into<String>, pi: &[u32]) -> Result<Self> {
        if pi.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: pi.len(),
            });
        }
        let plaquettes = self
            .plaquettes
            .iter()
            .zip(pi)
            .map(|(p, &c)| Plaquette::new(p.id, p.junction_count, c))
            .collect();
        Self::new(name, plaquettes, self.links.clone())
    }

    /// Structural equality, ignoring the name.
    pub fn same_structure(&self, other: &Self) -> bool {
        self.plaquettes == other.plaquettes && self.links == other.links
    }

    pub fn to_document(&self) -> TopologyDocument {
        TopologyDocument {
            name: self.name.clone(),
            plaquettes: self
                .plaquettes
                .iter()
                .map(|p| PlaquetteEntry {
                    id: p.id as i64,
                    junctions: p.junction_count as i64,
                    pi_junctions: p.pi_junction_count as i64,
                })
                .collect(),
            shared: self
                .links
                .iter()
                .map(|l| LinkEntry {
                    a: l.a as i64,
                    b: l.b as i64,
                    count: l.count as i64,
                })
                .collect(),
        }
    }

    /// Pretty-printed topology document.
    pub fn serialize(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serializes")
    }
}

/// On-disk topology document. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyDocument {
    pub name: String,
    pub plaquettes: Vec<PlaquetteEntry>,
    #[serde(default)]
    pub shared: Vec<LinkEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaquetteEntry {
    pub id: i64,
    pub junctions: i64,
    #[serde(default)]
    pub pi_junctions: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkEntry {
    pub a: i64,
    pub b: i64,
    pub count: i64,
}

fn to_u32(value: i64, what: &str) -> Result<u32> {
    u32::try_from(value).map_err(|_| Error::Validation(format!("{what} out of range: {value}")))
}

impl TryFrom<TopologyDocument> for ArrayTopology {
    type Error = Error;

    fn try_from(doc: TopologyDocument) -> Result<Self> {
        let plaquettes = doc
            .plaquettes
            .iter()
            .map(|p| {
                Ok(Plaquette::new(
                    to_u32(p.id, "plaquette id")?,
                    to_u32(p.junctions, "junction count")?,
                    to_u32(p.pi_junctions, "pi-junction count")?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let links = doc
            .shared
            .iter()
            .map(|l| {
                Ok(SharedJunctionLink::new(
                    to_u32(l.a, "link endpoint")?,
                    to_u32(l.b, "link endpoint")?,
                    to_u32(l.count, "shared count")?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        ArrayTopology::new(doc.name, plaquettes, links)
    }
}

/// Parses and validates a topology document.
pub fn parse_topology(text: &str) -> Result<ArrayTopology> {
    let doc: TopologyDocument =
        serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    ArrayTopology::try_from(doc)
}

fn uniform(
    name: &str,
    junctions: u32,
    pi: &[u32],
    links: &[(u32, u32)],
) -> ArrayTopology {
    let plaquettes = pi
        .iter()
        .enumerate()
        .map(|(i, &c)| Plaquette::new(i as u32 + 1, junctions, c))
        .collect();
    let links = links
        .iter()
        .map(|&(a, b)| SharedJunctionLink::new(a, b, 1))
        .collect();
    ArrayTopology::new(name, plaquettes, links).expect("built-in topology is valid")
}

/// Returns one of the [`BUILTIN_NAMES`] topologies.
///
/// * `triangle-stack-4`: outer triangles 1-3 each share one junction with the
///   central triangle 4.
/// * `square-2x2`: squares 1 2 / 3 4 sharing the four inner edges. The
///   checkerboard variant makes 1 and 4 π-rings and gives 2 and 3 an even
///   number of π-junctions.
/// * `spin-star-5`: central square 1 with four squares 2-5 touching it at the
///   corners only, so no junction is shared.
pub fn builtin_topology(name: &str) -> Result<ArrayTopology> {
    const STACK: [(u32, u32); 3] = [(1, 4), (2, 4), (3, 4)];
    const GRID: [(u32, u32); 4] = [(1, 2), (1, 3), (2, 4), (3, 4)];
    let topo = match name {
        "triangle-stack-4" => uniform(name, 3, &[0; 4], &STACK),
        "triangle-stack-4-pi" => uniform(name, 3, &[1; 4], &STACK),
        "square-2x2" => uniform(name, 4, &[0; 4], &GRID),
        "square-2x2-checkerboard-pi" => uniform(name, 4, &[1, 2, 2, 1], &GRID),
        "spin-star-5" => uniform(name, 4, &[0; 5], &[]),
        "spin-star-5-pi" => uniform(name, 4, &[1; 5], &[]),
        _ => return Err(Error::UnknownTopology(name.to_string())),
    };
    Ok(topo)
}

/// Searches for an automorphism mapping internal index `from` to `to`.
/// An automorphism preserves junction counts, π-parity and every shared count.
pub fn find_automorphism(topo: &ArrayTopology, from: usize, to: usize) -> Option<Vec<usize>> {
    let n = topo.len();
    let label = |i: usize| {
        let p = &topo.plaquettes[i];
        let mut nbrs: Vec<u32> = (0..n)
            .map(|j| topo.shared_count(i, j))
            .filter(|&c| c > 0)
            .collect();
        nbrs.sort_unstable();
        (p.junction_count, p.pi_parity(), nbrs)
    };
    let labels: Vec<_> = (0..n).map(label).collect();
    if labels[from] != labels[to] {
        return None;
    }

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    image[from] = to;
    used[to] = true;
    let order: Vec<usize> = std::iter::once(from)
        .chain((0..n).filter(|&i| i != from))
        .collect();

    fn extend(
        topo: &ArrayTopology,
        labels: &[(u32, u8, Vec<u32>)],
        order: &[usize],
        depth: usize,
        image: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let i = order[depth];
        for cand in 0..image.len() {
            if used[cand] || labels[cand] != labels[i] {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&k| topo.shared_count(i, k) == topo.shared_count(cand, image[k]));
            if !consistent {
                continue;
            }
            image[i] = cand;
            used[cand] = true;
            if extend(topo, labels, order, depth + 1, image, used) {
                return true;
            }
            used[cand] = false;
            image[i] = usize::MAX;
        }
        false
    }

    if extend(topo, &labels, &order, 1, &mut image, &mut used) {
        Some(image)
    } else {
        None
    }
}

/// Partitions internal plaquette indices into automorphism orbits. Each orbit
/// is sorted; orbits are ordered by their smallest member.
pub fn automorphism_orbits(topo: &ArrayTopology) -> Result<Vec<Vec<usize>>> {
    let n = topo.len();
    if n > AUTOMORPHISM_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: AUTOMORPHISM_LIMIT,
        });
    }
    let mut orbit_of: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if root(&mut orbit_of, i) == root(&mut orbit_of, j) {
                continue;
            }
            if let Some(perm) = find_automorphism(topo, i, j) {
                for (k, &img) in perm.iter().enumerate() {
                    let (a, b) = (root(&mut orbit_of, k), root(&mut orbit_of, img));
                    orbit_of[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut orbit_of, i);
        if slot[r] == usize::MAX {
            slot[r] = orbits.len();
            orbits.push(Vec::new());
        }
        orbits[slot[r]].push(i);
    }
    Ok(orbits)
}
