//! A laboratory for a hierarchy of SLE-type growth processes and their
//! conformal-field-theory counterparts.
//!
//! Two engines live side by side:
//!
//! * an **exact-rational Virasoro engine** ([`verma`], [`singular`],
//!   [`minimal`], [`bridge`]): normal ordering in Verma modules, Gram
//!   matrices, singular-vector search, quotient-module reduction, and the
//!   solver that matches generator drifts of grade-`n` stochastic
//!   evolutions against null vectors of minimal models (the grade-two /
//!   Yang-Lee correspondence at `kappa = 40` is the flagship computation);
//!
//! * a **numerical Loewner-flow engine** ([`drive`], [`loewner`],
//!   [`trace`], [`stochastic`]): forward/inverse flows of the grade-`n`
//!   Loewner equation `dg/dt = 2 / (g^(n-1) (g^n - Y_t))` in the wedge
//!   `0 < arg z < pi/n`, traces, hulls, and seeded Monte Carlo experiments
//!   testing the scale-invariance, stationarity, and backward-flow laws.
//!
//! Everything in the algebra half is exact (`BigRational` coefficients,
//! polynomials in the parameters `kappa`, `c`, `delta`); everything in the
//! flow half is deterministic for a fixed seed.

pub mod bridge;
pub mod drive;
pub mod ks;
pub mod linalg;
pub mod loewner;
pub mod minimal;
pub mod partition;
pub mod poly;
pub mod rational;
pub mod report;
pub mod selftest;
pub mod singular;
pub mod stochastic;
pub mod trace;
pub mod verma;

pub use bridge::{
    candidate_vector, drift_from_walk, martingale_generator_check, obstruction_l1,
    solve_kappa_null, solve_kappa_singular, CandidateSpec, GeneratorDrift, NullRoot,
    NullSolution, Sign, SingularSolution,
};
pub use minimal::{kappa_parameterization, minimal_model_c, minimal_model_weight, AlgebraError};
pub use partition::{partitions_of, Partition};
pub use poly::{Param, ParamPoly};
pub use rational::Rational;
pub use singular::{find_singular_vectors, gram_matrix, submodule_reduce, QuotientModule};
pub use verma::{act_lowering, act_raising, commutator, LieTerm, PBWVector, VermaParams};

pub use drive::DrivePath;
pub use ks::{ks_two_sample, TestReport};
pub use loewner::{
    conjugation_check, f_map, flow_forward, inverse_map, principal_root, shifted_flow, sqrt_h,
    step_exact, ConjugationReport, FlowConfig, FlowError, FlowResult, StepOutcome, Wedge,
};
pub use stochastic::{
    backward_law_experiment, sample_brownian, scale_invariance_experiment,
    stationarity_experiment, ExperimentReport, ExperimentStatus, Seed,
};
pub use trace::{hull_grid, trace_sample, GridSpec, HullGrid, TraceCurve};
