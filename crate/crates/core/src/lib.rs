//! Partition posets with block sizes ≡ 1 (mod k), complexes of k-trees, and
//! exact verification that the order complex of the former is a subdivision
//! of the latter.

pub mod bitset;
pub mod error;
pub mod homology;
pub mod ktrees;
pub mod partition;
pub mod perm;
pub mod poset;
pub mod simplicial;
pub mod subdivision;

pub use error::{Error, Result};
pub use ktrees::{KTree, NestedFamily};
pub use partition::{GSet, KInstance, Partition, PartitionPoset};
pub use perm::Permutation;
pub use poset::{Chain, ExtensionPolicy, Poset};
pub use simplicial::SimplicialComplex;
pub use subdivision::{verify_theorem, CarrierMap, SubdivisionReport, VerifyOptions};
