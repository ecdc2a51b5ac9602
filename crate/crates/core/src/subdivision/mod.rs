//! Building sets, nested set complexes, blowups and the verification of
//! Δ(Π^(k)_m) as a subdivision of T^k_n.

pub mod blowup;
pub mod building;
pub mod carrier;
pub mod equivariance;
pub mod geometry;
pub mod lemmas;
pub mod nested;
pub mod report;
pub mod sigma;
pub mod theorem;

pub use blowup::{blowup_sequence, Blowup, BlowupStep};
pub use building::{is_building_set, BuildingSetCheck};
pub use carrier::{
    check_compatibility, global_carrier_map, local_carrier_maps, verify_carrier_map, CarrierMap, LocalCarrierMap,
};
pub use equivariance::{check_equivariance, check_map_equivariance, EquivarianceReport, PermutationSample};
pub use nested::{is_nested, nested_set_complex};
pub use report::{CheckResult, SubdivisionReport, Verdict};
pub use sigma::{sigma_lattice, SigmaLattice};
pub use theorem::{verify_theorem, VerifyOptions};
