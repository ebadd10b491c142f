//! Circulating supercurrents and flux-dependent energy landscapes of
//! Josephson-junction plaquette arrays, including π-junction rings, in the
//! harmonic (linearized Josephson relation) approximation.
//!
//! The pipeline is
//! [`ArrayTopology`] → [`CouplingSystem`] → currents / energies →
//! [`landscape`] sweeps, ground-state branches and degeneracy classes.
//! Energies are in units of the Josephson energy `E_J` throughout;
//! [`physical`] supplies the conversion and the self-inductance correction `κ`.

pub mod error;
pub mod landscape;
pub mod linalg;
pub mod par;
pub mod physical;
pub mod quadratic;
pub mod topology;

pub use error::{Error, Result};
pub use landscape::{
    crossing, degeneracy_classes, enumerate_configs, ground_branches, parabola, sweep, Crossing,
    DegeneracyClass, EnumerationWindow, FluxGrid, Interval, LandscapeBranch, Parabola, SweepRow,
    SweepTable,
};
pub use par::Execution;
pub use physical::PhysicalParams;
pub use quadratic::{closed_form_currents_oracle, CouplingSystem, CurrentVector, VortexConfig};
pub use topology::{
    automorphism_orbits, builtin_topology, parse_topology, ArrayTopology, Plaquette,
    SharedJunctionLink, BUILTIN_NAMES,
};
