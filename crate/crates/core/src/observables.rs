//! Reduced atomic density matrix, linear entropy and populations.

use log::warn;
use nalgebra::{DMatrix, Matrix4};
use rayon::prelude::*;

use crate::error::{JcmError, Result};
use crate::evolution::Propagator;
use crate::fock::{AtomLabel, JointState};
use crate::scalar::{czero, norm_sqr, Cplx, Real};

/// Values outside `[0, 3/4]` by more than this are reported as numerically unhealthy.
pub const ENTROPY_HEALTH_TOLERANCE: f64 = 1e-9;

/// Largest linear entropy of a 4-level subsystem.
pub const MAX_LINEAR_ENTROPY: f64 = 0.75;

/// `ρ_AT = Tr_F |ψ><ψ|` on the basis `++, +-, -+, --`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedAtomicDensity<T: Real> {
    pub matrix: Matrix4<Cplx<T>>,
}

impl<T: Real> ReducedAtomicDensity<T> {
    pub fn trace(&self) -> T {
        (0..4).fold(T::zero(), |acc, i| acc + self.matrix[(i, i)].re)
    }

    /// `Tr ρ²`, computed as `Σ |ρ_ij|²` (exact for Hermitian ρ).
    pub fn purity(&self) -> T {
        self.matrix.iter().fold(T::zero(), |acc, &z| acc + norm_sqr(z))
    }

    pub fn population(&self, label: AtomLabel) -> T {
        self.matrix[(label.index(), label.index())].re
    }
}

pub fn reduce_atomic<T: Real>(state: &JointState<T>) -> ReducedAtomicDensity<T> {
    let mut m = Matrix4::from_element(czero());
    for a in AtomLabel::ALL {
        let xa = state.label_slice(a);
        for b in AtomLabel::ALL {
            if b < a {
                continue;
            }
            let xb = state.label_slice(b);
            let v = xa.iter().zip(xb.iter()).fold(czero(), |acc, (p, q)| acc + p * q.conj());
            m[(a.index(), b.index())] = v;
            m[(b.index(), a.index())] = v.conj();
        }
    }
    ReducedAtomicDensity { matrix: m }
}

/// Reduced density matrix of the field, `Tr_A |ψ><ψ|`, over the retained Fock configurations.
///
/// Quadratic in the Fock dimension; meant for small spaces.
pub fn reduce_field<T: Real>(state: &JointState<T>) -> DMatrix<Cplx<T>> {
    let n = state.space().fock_len();
    let mut m = DMatrix::from_element(n, n, czero());
    for label in AtomLabel::ALL {
        let x = state.label_slice(label);
        for i in 0..n {
            if x[i] == czero() {
                continue;
            }
            for j in 0..n {
                m[(i, j)] += x[i] * x[j].conj();
            }
        }
    }
    m
}

/// `S = 1 - Tr ρ²`.
///
/// Values outside `[0, 3/4]` beyond [`ENTROPY_HEALTH_TOLERANCE`] are logged, not clamped.
pub fn linear_entropy<T: Real>(rho: &ReducedAtomicDensity<T>) -> T {
    let s = T::one() - rho.purity();
    let sf = s.to_f64();
    if !(-ENTROPY_HEALTH_TOLERANCE..=MAX_LINEAR_ENTROPY + ENTROPY_HEALTH_TOLERANCE).contains(&sf) {
        warn!("linear entropy {sf:e} outside [0, 3/4]; state is not normalized or numerically degraded");
    }
    s
}

/// `W_{++} = Σ |amplitude(++, ·)|²`.
pub fn prob_both_excited<T: Real>(state: &JointState<T>) -> T {
    state
        .label_slice(AtomLabel::PP)
        .iter()
        .fold(T::zero(), |acc, &z| acc + norm_sqr(z))
}

/// Sampled entropy dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropySeries<T: Real> {
    pub gt: Vec<T>,
    pub entropy: Vec<T>,
    pub w_pp: Vec<T>,
    pub norm: Vec<T>,
}

impl<T: Real> EntropySeries<T> {
    pub fn len(&self) -> usize {
        self.gt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gt.is_empty()
    }
}

/// One sample of the series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T: Real> {
    pub gt: T,
    pub entropy: T,
    pub w_pp: T,
    pub norm: T,
    pub purity: T,
}

pub fn sample<T: Real>(engine: &dyn Propagator<T>, initial: &JointState<T>, t: T) -> Result<Sample<T>> {
    let psi = engine.evolve(initial, t)?;
    let rho = reduce_atomic(&psi);
    Ok(Sample {
        gt: t,
        entropy: linear_entropy(&rho),
        w_pp: prob_both_excited(&psi),
        norm: psi.norm(),
        purity: rho.purity(),
    })
}

/// Evaluates every grid point independently (in parallel) and assembles in grid order.
pub fn entropy_series<T: Real>(
    engine: &dyn Propagator<T>,
    initial: &JointState<T>,
    grid: &[T],
) -> Result<EntropySeries<T>> {
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(JcmError::InvalidArgument("time grid must be strictly increasing".into()));
    }
    let samples = grid
        .par_iter()
        .map(|&t| sample(engine, initial, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropySeries {
        gt: samples.iter().map(|s| s.gt).collect(),
        entropy: samples.iter().map(|s| s.entropy).collect(),
        w_pp: samples.iter().map(|s| s.w_pp).collect(),
        norm: samples.iter().map(|s| s.norm).collect(),
    })
}

/// `n` evenly spaced points on `[t0, t1]` (both ends included).
pub fn uniform_grid<T: Real>(t0: T, t1: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![t0],
        _ => {
            let step = (t1 - t0) / T::of_usize(n - 1);
            (0..n).map(|k| t0 + step * T::of_usize(k)).collect()
        }
    }
}
