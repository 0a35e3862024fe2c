//! Exact lattice computations for Ulrich bundles on K3 surfaces of degree `2a`
//! whose Picard lattice is `Z h ⊕ Z A ⊕ Z B`.
//!
//! * [`lattice`]: Gram matrices, signature, reflections.
//! * [`enumeration`]: provably exhaustive search for classes of given degree and square.
//! * [`k3`]: Riemann–Roch, Ulrich conditions, very-ampleness and Ulrich line-bundle certificates.
//! * [`rank2`]: Chern bounds and the rank-2 classification table.
//! * [`scan`]: grid scans with attached certificates.

pub mod certificate;
mod dec;
pub mod enumeration;
pub mod error;
pub mod k3;
pub mod lattice;
pub mod rank2;
pub mod scan;

pub use certificate::{Certificate, Verdict};
pub use dec::value as int_value;
pub use enumeration::{
    brute_force_oracle, discriminant_certificate, enumerate, enumerate_polarized,
    restricted_form_coefficients, DegreeSlice, RestrictedForm, WitnessSet,
};
pub use error::{Error, Result};
pub use k3::{
    certify_very_ample, find_ulrich_line_bundles, hilbert_polynomial, nefify, riemann_roch_chi,
    slope, ulrich_dual_transform, ulrich_numerical_conditions, ChernData,
    UlrichLineBundleCertificate, VeryAmpleCertificate,
};
pub use lattice::{DivisorClass, GramLattice, InertiaSignature};
pub use rank2::{
    bogomolov_check, chern_bounds, classify_u, hodge_index_check, moduli_dimensions,
    BoundReport, Classification, Rank2Row,
};
pub use scan::{scan_rank2, ScanReport};
