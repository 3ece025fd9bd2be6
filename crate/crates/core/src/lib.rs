//! Two-atom Jaynes-Cummings model with intensity-dependent coupling.
//!
//! One cavity mode (`sqrt(a†a) a† σ^-` coupling) or two modes coupled through a
//! nondegenerate two-photon transition. Provides initial-state construction,
//! blockwise exact propagation with two independent cross-checks, the reduced
//! atomic linear entropy, and analytic revival / disentanglement predictors.
//!
//! All numerical types are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below are what the CLI and the acceptance suite use.

pub mod error;
pub mod evolution;
pub mod fock;
pub mod hamiltonian;
pub mod observables;
pub mod predictors;
pub mod scalar;

pub use error::{JcmError, Result};
pub use evolution::{
    evolve_block_exact, evolve_closed_form_one_mode, evolve_closed_form_two_mode, evolve_dense_oracle, omega1,
    omega2, omega3, rabi_one_mode, rabi_two_mode, BlockExact, ClosedForm, DenseOracle, EngineKind, Propagator,
};
pub use fock::{
    build_initial_state, coherent_amplitudes, preset_atomic_state, AtomLabel, AtomicPreset, AtomicState,
    CoherentSpec, FieldSpec, FockCutoff, JointSpace, JointState, ModelKind,
};
pub use hamiltonian::{build_one_mode, build_semiclassical, build_two_mode, enumerate_blocks, HamiltonianMatrix};
pub use observables::{
    entropy_series, linear_entropy, prob_both_excited, reduce_atomic, EntropySeries, ReducedAtomicDensity,
};
pub use predictors::{
    classify_initial_state, disentanglement_times, revival_periods_one_mode, revival_periods_two_mode,
    taylor_rabi_residual, DisentanglementClass, StateClass,
};
pub use scalar::{Cplx, Real};

pub type C64 = Cplx<f64>;
pub type C32 = Cplx<f32>;
pub type AtomicState64 = AtomicState<f64>;
pub type AtomicState32 = AtomicState<f32>;
pub type CoherentSpec64 = CoherentSpec<f64>;
pub type FieldSpec64 = FieldSpec<f64>;
pub type JointState64 = JointState<f64>;
pub type JointState32 = JointState<f32>;
pub type Hamiltonian64 = HamiltonianMatrix<f64>;
pub type Hamiltonian32 = HamiltonianMatrix<f32>;
pub type BlockExact64 = BlockExact<f64>;
pub type DenseOracle64 = DenseOracle<f64>;
pub type EntropySeries64 = EntropySeries<f64>;
pub type ReducedAtomicDensity64 = ReducedAtomicDensity<f64>;

/// Library version, echoed into run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
