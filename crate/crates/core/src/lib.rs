//! Twisted group cohomology for SL(2,C) holonomy representations.
//!
//! Given a finite presentation of a 3-manifold group together with a lift of
//! its holonomy to SL(2,C), this crate builds the symmetric-power and adjoint
//! representations, computes H^0, Z^1, B^1 and H^1 with twisted coefficients
//! via Fox calculus, enumerates the lifts of the holonomy, certifies
//! positivity of the fiberwise Weitzenbock operator, and compares every
//! computed dimension against the closed-form predictions.

pub mod cohomology;
pub mod corpus;
pub mod error;
pub mod gf2;
pub mod group;
pub mod linalg;
pub mod report;
pub mod reps;
pub mod verify;
pub mod weitzenbock;

pub use cohomology::{h1_report, Cocycle, CohomologyReport};
pub use corpus::{load_file, load_str, resolve, CorpusEntry, PresentationFile};
pub use error::{Error, Result};
pub use gf2::{gf2_affine_solutions, Gf2Matrix};
pub use group::{
    evaluate_word, fox_matrix, parse_word, validate_representation, GroupPresentation,
    PeripheralKind, PeripheralSystem, Representation, Word,
};
pub use linalg::{
    hermitian_spectrum, kernel_basis, numerical_rank, rank_decision, CMatrix, CVector,
    RankDecision, ToleranceProfile, C64,
};
pub use report::ReportDocument;
pub use reps::{
    adjoint_matrix, enumerate_lifts, invariant_pairing, is_positive_lift, principal_decomposition,
    su2_inner_product, sym_power_lie, sym_power_matrix, BilinearForm, FormKind, Lift,
    SignCharacter,
};
pub use verify::{
    predict_h1_adjoint, predict_h1_en, verify_manifold, verify_manifold_with_warnings, CheckKind,
    EntryKind, ManifoldTopology, VerificationRecord,
};
pub use weitzenbock::{
    build_h, build_t, build_tstar, positivity_certificate, LieAction, LieBasis,
    PositivityCertificate, WeitzenboeckOperator,
};
