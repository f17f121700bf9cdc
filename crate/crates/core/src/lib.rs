//! Persistent cup-length and zero-divisor-cup-length of Vietoris–Rips
//! filtrations over small prime fields, erosion distances between the
//! resulting tables, and the Gromov–Hausdorff lower bounds they give.

pub mod cohomology;
pub mod erosion;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod metric;
pub mod persistence;
pub mod tolerance;
pub mod vr;
pub mod zero_divisor;

pub use cohomology::{cup_length, cup_length_of_map, induced_map, GradedRing, RingMap};
pub use erosion::{
    erosion_distance, gh_lower_bound_report, is_eps_eroded, step_erosion_closed_form, ErosionReport, GhConfig,
    StepFunctorSpec,
};
pub use error::{Error, Result};
pub use linalg::{FfMatrix, Prime};
pub use metric::{diameter_gh_lower_bound, FiniteMetricSpace};
pub use persistence::{
    persistent_betti, persistent_cuplength, persistent_table, persistent_zcl, synthetic_step_table, Extended,
    Invariant, PersistentInvariantTable,
};
pub use tolerance::Tolerances;
pub use vr::{Convention, FilteredComplex, SimplicialComplex, VrOptions};
pub use zero_divisor::{nilpotency, zcl_map, zcl_space, Nilpotency, TensorSquareRing};
