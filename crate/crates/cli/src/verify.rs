//! Engine cross-checks on small cutoffs.

use jcm_core::{
    build_initial_state, AtomicState64, BlockExact, CoherentSpec, DenseOracle, EngineKind, FieldSpec64, FockCutoff,
    Hamiltonian64, JointSpace, JointState64, Propagator, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ORACLE_TOLERANCE: f64 = 1e-10;
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_deviation < self.tolerance
    }
}

fn random_joint(space: JointSpace, rng: &mut ChaCha8Rng) -> JointState64 {
    let amps = (0..space.dim())
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let mut psi = JointState64::from_amplitudes(space, amps).expect("dimension matches");
    psi.normalize().expect("nonzero random state");
    psi
}

fn random_atomic(rng: &mut ChaCha8Rng) -> AtomicState64 {
    let mut z = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    AtomicState64::normalized(z(), z(), z(), z()).expect("nonzero random state")
}

/// `states` random states times `times` random `gt ∈ [0, 10]` per space.
pub fn run_oracle_suite(seed: u64, states: usize, times: usize) -> jcm_core::Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    for (label, space) in [
        ("block-exact vs dense, one mode, cutoff 8", JointSpace::one_mode(FockCutoff::new(8))),
        ("block-exact vs dense, two modes, cutoffs (6,6)", JointSpace::two_mode(FockCutoff::new(6), FockCutoff::new(6))),
    ] {
        let h = Hamiltonian64::build(space);
        let block = BlockExact::new(&h);
        let dense = DenseOracle::new(&h)?;
        let mut worst = 0.0f64;
        for _ in 0..states {
            let psi = random_joint(space, &mut rng);
            for _ in 0..times {
                let t = rng.gen_range(0.0..10.0);
                worst = worst.max(block.evolve(&psi, t)?.max_abs_diff(&dense.evolve(&psi, t)?));
            }
        }
        checks.push(Check { name: label.into(), max_deviation: worst, tolerance: ORACLE_TOLERANCE });
    }
    for (label, field, cutoff) in [
        ("closed form vs block-exact, one mode, nbar 2, cutoff 20", FieldSpec64::OneMode(CoherentSpec::new(2.0, 0.4)?), 20),
        (
            "closed form vs block-exact, two modes, nbar (1,1), cutoffs 12",
            FieldSpec64::TwoMode(CoherentSpec::new(1.0, 0.2)?, CoherentSpec::new(1.0, 1.3)?),
            12,
        ),
    ] {
        let space = match field {
            FieldSpec64::OneMode(_) => JointSpace::one_mode(FockCutoff::new(cutoff)),
            FieldSpec64::TwoMode(..) => JointSpace::two_mode(FockCutoff::new(cutoff), FockCutoff::new(cutoff)),
        };
        let h = Hamiltonian64::build(space);
        let block = EngineKind::BlockExact.build(&h)?;
        let closed = EngineKind::ClosedForm.build(&h)?;
        let mut worst = 0.0f64;
        for _ in 0..states {
            let psi = build_initial_state(&random_atomic(&mut rng), &field, space)?;
            for _ in 0..times {
                let t = rng.gen_range(0.0..10.0);
                worst = worst.max(block.evolve(&psi, t)?.max_abs_diff(&closed.evolve(&psi, t)?));
            }
        }
        checks.push(Check { name: label.into(), max_deviation: worst, tolerance: CLOSED_FORM_TOLERANCE });
    }
    Ok(checks)
}
