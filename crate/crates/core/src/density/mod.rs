//! Perturbation of period planes, realization of orbit classes orthogonal to
//! them, and the seeded density experiment.

pub mod experiment;
pub mod perturb;
pub mod plane;
pub mod realize;
pub mod reduce;

pub use perturb::{check_certificate, is_saturated_snf, perturb_to_saturated, Perturbation, SaturationCertificate};
pub use plane::{principal_angle_residual, principal_angle_svd, validate_period, RealPlane};
pub use realize::{brute_delta_search, default_realize_bound, realize_orbit, PeriodData, Realization, Strategy};
pub use experiment::{density_experiment, write_csv, ExperimentConfig, TrialRow};
