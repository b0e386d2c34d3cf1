//! Hochschild cochains, their differential and cohomology.

mod cochain;
mod model;
mod separability;

pub use cochain::{
    cohomology_basis, cup_product, derivation_commutator, op_transport, op_transport_into,
    transport_sign, Cochain,
};
pub use model::{cohomology_dims, Arg, CochainModel, ModelKind, ModelTag, Paths, DEFAULT_CAP};
pub use separability::{
    check_separability_idempotent, periodic_resolution_check, ResolutionCheck, SeparabilityFailure,
};
