//! Weight modules over rank-one weak generalized Weyl algebras `A(R, σ, t)`.
//!
//! The algebra is generated over `R` by `X` and `Y` subject to
//! `YX = t`, `XY = σ(t)`, `Xr = σ(r)X` and `rY = Yσ(r)`.

pub mod band;
pub mod classify;
pub mod descriptor;
pub mod dynamics;
pub mod factor;
pub mod field;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod string;
pub mod universe;

pub use band::{
    band_iso, build_band, detect_band_data, pmodule_is_simple, BandData, BandError, BandGenerator,
    BandModule, BandVariant, BandVector, PModuleData,
};
pub use classify::{
    classify_point, heisenberg_catalogue, heisenberg_universe, BandFamily, CatalogueItem,
    CatalogueReport, ClassificationReport, ClassifyBounds, ClassifyError, HeisenbergSpec,
    ItemContent, SimpleVerdict, StringFamily,
};
pub use descriptor::{DescriptorError, SCHEMA};
pub use dynamics::{
    class_kind, class_leaves, export_dot, forward_orbit, same_class, ClassKind, OrbitReport,
    Verdict,
};
pub use field::{Field, PrimeField, Rationals};
pub use linalg::Matrix;
pub use oracle::{
    brute_simple, check_relations, generalized_weight_decomposition, to_matrices, BruteOptions,
    FiniteModule, ModuleRef, OracleError, Realization, RelationReport, Simplicity,
};
pub use poly::FpPoly;
pub use scalar::{Angle, CycloScalar};
pub use string::{
    build_string, string_act, string_is_simple, string_iso, Generator, IsoOutcome, StringElement,
    StringError, StringKind, StringModule, TailCertificate,
};
pub use universe::{
    make_universe, MaxIdeal, Residue, ResidueElement, RingElem, UniverseError, UniverseSpec,
    Vanishing, WeightUniverse, ZDot,
};
