pub mod algebra;
pub mod bimodule;
pub mod deform;
pub mod error;
pub mod exact;
pub mod frobenius;
pub mod hochschild;
pub mod lie;
pub mod poset;
pub mod simplicial;

pub use algebra::{Algebra, GroupTable, Origin, PosetLayout};
pub use bimodule::{check_bimodule_morphism, Bimodule, ModuleKind, MorphismFailure};
pub use error::{Error, Result};
pub use poset::Poset;
pub use deform::{DeformSpec, Hbar, Partition};
pub use frobenius::BilinearForm;
pub use hochschild::{Cochain, CochainModel, ModelKind, ModelTag};
pub use lie::{LieAlgebra, LieModule};
pub use simplicial::NerveComplex;
