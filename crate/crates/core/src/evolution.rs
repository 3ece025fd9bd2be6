//! Time evolution under the interaction Hamiltonian.
//!
//! Three propagators share one interface:
//!
//! * [`BlockExact`] diagonalizes every excitation block once and applies
//!   `exp(-iHt)` spectrally. This is the engine used for production runs.
//! * [`DenseOracle`] diagonalizes the whole truncated matrix. Small spaces only.
//! * [`ClosedForm`] evaluates the analytic amplitudes `A, B, C, D` built from the
//!   Rabi frequencies, block by block, with no linear algebra at all.
//!
//! Time is `gt` (ħ = g = 1).

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{JcmError, Result};
use crate::fock::{
    build_initial_state, AtomLabel, AtomicState, FieldSpec, FockCutoff, JointSpace, JointState, ModelKind,
};
use crate::hamiltonian::{block_members, HamiltonianMatrix};
use crate::scalar::{cis, cre, czero, Cplx, Real};

/// Largest dimension the dense oracle accepts.
pub const DENSE_ORACLE_LIMIT: usize = 2000;

/// `Ω_n = sqrt((2n(n+3) + 5) / 2)`; the nonzero eigenvalues of block `n` are `±2Ω_n`.
pub fn rabi_one_mode<T: Real>(n: usize) -> T {
    rabi_one_mode_ext(n as i64)
}

/// Same formula, extended to the boundary blocks `n = -1, -2`.
pub(crate) fn rabi_one_mode_ext<T: Real>(n: i64) -> T {
    let n = T::of_i64(n);
    ((T::lit(2.0) * n * (n + T::lit(3.0)) + T::lit(5.0)) / T::lit(2.0)).sqrt()
}

/// `Ω1(n1, n2) = sqrt(2[(n1+1)²(n2+1)² + (n1+2)²(n2+2)²])`, the nonzero block
/// eigenvalue magnitude of the two-mode block anchored at `(n1, n2)`.
pub fn omega1<T: Real>(n1: i64, n2: i64) -> Result<T> {
    if n1 < 0 || n2 < 0 {
        return Err(JcmError::UndefinedShift(n1, n2));
    }
    Ok(omega1_ext(n1, n2))
}

fn omega1_ext<T: Real>(n1: i64, n2: i64) -> T {
    let a = T::of_i64((n1 + 1) * (n2 + 1));
    let b = T::of_i64((n1 + 2) * (n2 + 2));
    (T::lit(2.0) * (a * a + b * b)).sqrt()
}

/// `Ω2(n1, n2) = Ω1(n1 - 2, n2 - 2)`
pub fn omega2<T: Real>(n1: i64, n2: i64) -> Result<T> {
    omega1(n1 - 2, n2 - 2).map_err(|_| JcmError::UndefinedShift(n1, n2))
}

/// `Ω3(n1, n2) = Ω1(n1 - 1, n2 - 1)`
pub fn omega3<T: Real>(n1: i64, n2: i64) -> Result<T> {
    omega1(n1 - 1, n2 - 1).map_err(|_| JcmError::UndefinedShift(n1, n2))
}

/// `(Ω1, Ω2, Ω3)` at `(n1, n2)`; needs `n1, n2 >= 2` so that every shift is defined.
pub fn rabi_two_mode<T: Real>(n1: i64, n2: i64) -> Result<(T, T, T)> {
    Ok((omega1(n1, n2)?, omega2(n1, n2)?, omega3(n1, n2)?))
}

/// Tabulated Rabi frequencies for a truncated space.
#[derive(Debug, Clone, PartialEq)]
pub enum RabiFrequencyTable<T: Real> {
    /// `Ω_n`, `n = 0..=nmax`
    OneMode(Vec<T>),
    /// `Ω1(n1, n2)` row-major; `Ω2`, `Ω3` follow by shifting.
    TwoMode { n2_len: usize, omega1: Vec<T> },
}

impl<T: Real> RabiFrequencyTable<T> {
    pub fn for_space(space: &JointSpace) -> Self {
        let (n1max, n2max) = space.nmax();
        match space.kind() {
            ModelKind::OneMode => Self::OneMode((0..=n1max).map(rabi_one_mode).collect()),
            ModelKind::TwoMode => Self::TwoMode {
                n2_len: n2max + 1,
                omega1: (0..=n1max as i64)
                    .flat_map(|a| (0..=n2max as i64).map(move |b| omega1_ext(a, b)))
                    .collect(),
            },
        }
    }

    pub fn one_mode(&self, n: usize) -> Option<T> {
        match self {
            Self::OneMode(v) => v.get(n).copied(),
            Self::TwoMode { .. } => None,
        }
    }

    pub fn omega1(&self, n1: i64, n2: i64) -> Option<T> {
        match self {
            Self::TwoMode { n2_len, omega1 } if n1 >= 0 && n2 >= 0 && (n2 as usize) < *n2_len => {
                omega1.get(n1 as usize * n2_len + n2 as usize).copied()
            }
            _ => None,
        }
    }

    pub fn omega2(&self, n1: i64, n2: i64) -> Option<T> {
        self.omega1(n1 - 2, n2 - 2)
    }

    pub fn omega3(&self, n1: i64, n2: i64) -> Option<T> {
        self.omega1(n1 - 1, n2 - 1)
    }
}

/// A propagator `ψ(0) ↦ ψ(t)` on a fixed truncated space.
pub trait Propagator<T: Real>: Send + Sync {
    fn kind(&self) -> EngineKind;

    fn space(&self) -> &JointSpace;

    fn evolve(&self, initial: &JointState<T>, t: T) -> Result<JointState<T>>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EngineKind {
    ClosedForm,
    #[default]
    BlockExact,
    DenseOracle,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::ClosedForm => "closed-form",
            EngineKind::BlockExact => "block-exact",
            EngineKind::DenseOracle => "dense-oracle",
        }
    }

    pub fn build<T: Real>(self, h: &HamiltonianMatrix<T>) -> Result<Box<dyn Propagator<T>>> {
        Ok(match self {
            EngineKind::ClosedForm => Box::new(ClosedForm::new(*h.space())),
            EngineKind::BlockExact => Box::new(BlockExact::new(h)),
            EngineKind::DenseOracle => Box::new(DenseOracle::new(h)?),
        })
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = JcmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "closed-form" | "closed" | "closedform" => Ok(EngineKind::ClosedForm),
            "block-exact" | "block" | "blockexact" | "exact" => Ok(EngineKind::BlockExact),
            "dense-oracle" | "dense" | "oracle" => Ok(EngineKind::DenseOracle),
            _ => Err(JcmError::InvalidArgument(format!("unknown engine '{s}'"))),
        }
    }
}

fn check_space<T: Real>(expected: &JointSpace, state: &JointState<T>) -> Result<()> {
    if state.space() != expected {
        return Err(JcmError::SpaceMismatch);
    }
    Ok(())
}

#[derive(Debug, Clone)]
struct BlockSpectrum<T: Real> {
    indices: Vec<usize>,
    values: Vec<T>,
    vectors: DMatrix<T>,
}

/// Per-block spectral propagator; eigendecompositions are computed once.
#[derive(Debug, Clone)]
pub struct BlockExact<T: Real> {
    space: JointSpace,
    spectra: Vec<BlockSpectrum<T>>,
}

impl<T: Real> BlockExact<T> {
    pub fn new(h: &HamiltonianMatrix<T>) -> Self {
        let spectra = h
            .iter()
            .map(|(block, m)| {
                let (values, vectors) = if m.nrows() == 1 {
                    (vec![m[(0, 0)]], DMatrix::identity(1, 1))
                } else {
                    let eig = SymmetricEigen::new(m.clone());
                    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
                };
                BlockSpectrum { indices: block.indices.clone(), values, vectors }
            })
            .collect();
        Self { space: *h.space(), spectra }
    }

    /// Eigenvalues of every block, in block order.
    pub fn block_eigenvalues(&self) -> impl Iterator<Item = &[T]> {
        self.spectra.iter().map(|s| s.values.as_slice())
    }
}

impl<T: Real> Propagator<T> for BlockExact<T> {
    fn kind(&self) -> EngineKind {
        EngineKind::BlockExact
    }

    fn space(&self) -> &JointSpace {
        &self.space
    }

    fn evolve(&self, initial: &JointState<T>, t: T) -> Result<JointState<T>> {
        check_space(&self.space, initial)?;
        let psi = initial.amplitudes();
        let mut out = vec![czero(); psi.len()];
        let mut coeffs = [czero::<T>(); 4];
        for spec in &self.spectra {
            let n = spec.indices.len();
            for (k, slot) in coeffs.iter_mut().enumerate().take(n) {
                let mut c = czero::<T>();
                for (i, &g) in spec.indices.iter().enumerate() {
                    c += psi[g].scale(spec.vectors[(i, k)]);
                }
                *slot = c * cis(-spec.values[k] * t);
            }
            for (i, &g) in spec.indices.iter().enumerate() {
                let mut acc = czero();
                for (k, c) in coeffs.iter().enumerate().take(n) {
                    acc += c.scale(spec.vectors[(i, k)]);
                }
                out[g] = acc;
            }
        }
        JointState::from_amplitudes(self.space, out)
    }
}

/// Full-matrix spectral propagator, independent of the block bookkeeping.
#[derive(Debug, Clone)]
pub struct DenseOracle<T: Real> {
    space: JointSpace,
    values: Vec<T>,
    vectors: DMatrix<Cplx<T>>,
}

impl<T: Real> DenseOracle<T> {
    pub fn new(h: &HamiltonianMatrix<T>) -> Result<Self> {
        Self::from_dense(*h.space(), h.to_dense())
    }

    /// Diagonalizes an explicit Hermitian matrix over `space`.
    pub fn from_dense(space: JointSpace, dense: DMatrix<Cplx<T>>) -> Result<Self> {
        let dim = space.dim();
        if dim > DENSE_ORACLE_LIMIT {
            return Err(JcmError::DimensionTooLarge { dim, limit: DENSE_ORACLE_LIMIT });
        }
        if dense.nrows() != dim || dense.ncols() != dim {
            return Err(JcmError::SpaceMismatch);
        }
        let eig = SymmetricEigen::new(dense);
        Ok(Self { space, values: eig.eigenvalues.iter().copied().collect(), vectors: eig.eigenvectors })
    }
}

impl<T: Real> Propagator<T> for DenseOracle<T> {
    fn kind(&self) -> EngineKind {
        EngineKind::DenseOracle
    }

    fn space(&self) -> &JointSpace {
        &self.space
    }

    fn evolve(&self, initial: &JointState<T>, t: T) -> Result<JointState<T>> {
        check_space(&self.space, initial)?;
        let psi = nalgebra::DVector::from_column_slice(initial.amplitudes());
        let mut c = self.vectors.ad_mul(&psi);
        for (ck, &e) in c.iter_mut().zip(self.values.iter()) {
            *ck *= cis(-e * t);
        }
        let out = &self.vectors * c;
        JointState::from_amplitudes(self.space, out.iter().copied().collect())
    }
}

/// Analytic propagator elements of one excitation block.
///
/// `a` couples `|++>` to each singly excited member, `b` couples each singly
/// excited member to `|-->`, and `big_omega = sqrt(2(a² + b²))` is the nonzero
/// eigenvalue magnitude. The antisymmetric combination `|+-> - |-+>` is dark.
#[derive(Debug, Clone, Copy)]
pub struct BlockCoefficients<T: Real> {
    pub pp_pp: Cplx<T>,
    /// `<+-|U|++> = <-+|U|++>`
    pub x_pp: Cplx<T>,
    pub mm_pp: Cplx<T>,
    /// `<+-|U|+-> = <-+|U|-+>`
    pub x_same: Cplx<T>,
    /// `<+-|U|-+>`
    pub x_other: Cplx<T>,
    /// `<--|U|+->`
    pub mm_x: Cplx<T>,
    pub mm_mm: Cplx<T>,
}

impl<T: Real> BlockCoefficients<T> {
    /// Elements of `exp(-iHt)` for couplings `a`, `b` and `big_omega = sqrt(2(a²+b²))`.
    pub fn new(a: T, b: T, big_omega: T, t: T) -> Self {
        let one = T::one();
        let half = T::lit(0.5);
        let s2 = a * a + b * b;
        if s2 == T::zero() {
            let z = czero();
            return Self {
                pp_pp: cre(one),
                x_pp: z,
                mm_pp: z,
                x_same: cre(one),
                x_other: z,
                mm_x: z,
                mm_mm: cre(one),
            };
        }
        let c = (big_omega * t).cos();
        let s = (big_omega * t).sin();
        // sin²(Ωt/2) written without cancellation
        let half_sin = (half * big_omega * t).sin();
        let sin_sq_half = half_sin * half_sin;
        let neg_i = |x: T| Cplx::new(T::zero(), -x);
        Self {
            // (b² + a² cos Ωt) / (a² + b²)
            pp_pp: cre(one - T::lit(2.0) * a * a * sin_sq_half / s2),
            x_pp: neg_i(a * s / big_omega),
            // -ab (1 - cos Ωt) / (a² + b²)
            mm_pp: cre(-T::lit(2.0) * a * b * sin_sq_half / s2),
            x_same: cre(half * (one + c)),
            x_other: cre(-sin_sq_half),
            mm_x: neg_i(b * s / big_omega),
            mm_mm: cre(one - T::lit(2.0) * b * b * sin_sq_half / s2),
        }
    }
}

/// Propagator assembled from the analytic block amplitudes.
///
/// For a complete block the oscillation frequency is the tabulated Rabi
/// frequency (`2Ω_n` for one mode, `Ω1(n1, n2)` for two modes). Blocks cut by
/// the Fock truncation or by `n = 0` keep only the couplings whose partners
/// exist, which the same formula handles with `a` or `b` set to zero.
#[derive(Debug, Clone)]
pub struct ClosedForm {
    space: JointSpace,
}

impl ClosedForm {
    pub fn new(space: JointSpace) -> Self {
        Self { space }
    }

    /// Couplings and frequency of the block anchored at `anchor`, honoring truncation.
    fn block<T: Real>(&self, anchor: (i64, i64)) -> (T, T, T) {
        let kind = self.space.kind();
        let [pp, pm, _, mm] = block_members(kind, anchor);
        let has = |n1: i64, n2: i64| self.space.contains(n1, n2);
        let (m1, m2) = anchor;
        let (a_full, b_full) = match kind {
            ModelKind::OneMode => (m1 + 1, m1 + 2),
            ModelKind::TwoMode => ((m1 + 1) * (m2 + 1), (m1 + 2) * (m2 + 2)),
        };
        let a_on = has(pp.n1, pp.n2) && has(pm.n1, pm.n2);
        let b_on = has(pm.n1, pm.n2) && has(mm.n1, mm.n2);
        let a = if a_on { T::of_i64(a_full) } else { T::zero() };
        let b = if b_on { T::of_i64(b_full) } else { T::zero() };
        let big_omega = if a_on && b_on {
            match kind {
                ModelKind::OneMode => T::lit(2.0) * rabi_one_mode_ext::<T>(m1),
                ModelKind::TwoMode => omega1_ext(m1, m2),
            }
        } else {
            (T::lit(2.0) * (a * a + b * b)).sqrt()
        };
        (a, b, big_omega)
    }

    /// `(A, B, C, D)` amplitudes of Fock configuration `(n1, n2)` at time `t`.
    pub fn amplitudes<T: Real>(&self, initial: &JointState<T>, n1: i64, n2: i64, t: T) -> [Cplx<T>; 4] {
        use AtomLabel::*;
        let (s1, s2) = self.space.kind().photon_shift();
        let psi = |l: AtomLabel, a: i64, b: i64| initial.amplitude(l, a, b);

        // A: |++> member of the block anchored at (n1, n2)
        let (a, b, w) = self.block::<T>((n1, n2));
        let k = BlockCoefficients::new(a, b, w, t);
        let amp_a = k.pp_pp * psi(PP, n1, n2)
            + k.x_pp * (psi(PM, n1 + s1, n2 + s2) + psi(MP, n1 + s1, n2 + s2))
            + k.mm_pp * psi(MM, n1 + 2 * s1, n2 + 2 * s2);

        // B, C: singly excited members of the block anchored one shift below
        let (a, b, w) = self.block::<T>((n1 - s1, n2 - s2));
        let k = BlockCoefficients::new(a, b, w, t);
        let pp_term = k.x_pp * psi(PP, n1 - s1, n2 - s2);
        let mm_term = k.mm_x * psi(MM, n1 + s1, n2 + s2);
        let (pm, mp) = (psi(PM, n1, n2), psi(MP, n1, n2));
        let amp_b = pp_term + k.x_same * pm + k.x_other * mp + mm_term;
        let amp_c = pp_term + k.x_other * pm + k.x_same * mp + mm_term;

        // D: |--> member of the block anchored two shifts below
        let (a, b, w) = self.block::<T>((n1 - 2 * s1, n2 - 2 * s2));
        let k = BlockCoefficients::new(a, b, w, t);
        let amp_d = k.mm_pp * psi(PP, n1 - 2 * s1, n2 - 2 * s2)
            + k.mm_x * (psi(PM, n1 - s1, n2 - s2) + psi(MP, n1 - s1, n2 - s2))
            + k.mm_mm * psi(MM, n1, n2);

        [amp_a, amp_b, amp_c, amp_d]
    }
}

impl<T: Real> Propagator<T> for ClosedForm {
    fn kind(&self) -> EngineKind {
        EngineKind::ClosedForm
    }

    fn space(&self) -> &JointSpace {
        &self.space
    }

    fn evolve(&self, initial: &JointState<T>, t: T) -> Result<JointState<T>> {
        check_space(&self.space, initial)?;
        let mut out = JointState::zeros(self.space);
        let (n1max, n2max) = self.space.nmax();
        for n1 in 0..=n1max as i64 {
            for n2 in 0..=n2max as i64 {
                let amps = self.amplitudes(initial, n1, n2, t);
                for (label, z) in AtomLabel::ALL.into_iter().zip(amps) {
                    let i = self.space.index(label, n1, n2).expect("in range");
                    out.amplitudes_mut()[i] = z;
                }
            }
        }
        Ok(out)
    }
}

/// Closed-form evolution of `atomic ⊗ |v>` with a single mode truncated at `cutoff`.
pub fn evolve_closed_form_one_mode<T: Real>(
    atomic: &AtomicState<T>,
    field: &crate::fock::CoherentSpec<T>,
    cutoff: FockCutoff,
    t: T,
) -> Result<JointState<T>> {
    let space = JointSpace::one_mode(cutoff);
    let initial = build_initial_state(atomic, &FieldSpec::OneMode(*field), space)?;
    ClosedForm::new(space).evolve(&initial, t)
}

/// Closed-form evolution of `atomic ⊗ |v1, v2>`.
pub fn evolve_closed_form_two_mode<T: Real>(
    atomic: &AtomicState<T>,
    fields: (&crate::fock::CoherentSpec<T>, &crate::fock::CoherentSpec<T>),
    cutoffs: (FockCutoff, FockCutoff),
    t: T,
) -> Result<JointState<T>> {
    let space = JointSpace::two_mode(cutoffs.0, cutoffs.1);
    let initial = build_initial_state(atomic, &FieldSpec::TwoMode(*fields.0, *fields.1), space)?;
    ClosedForm::new(space).evolve(&initial, t)
}

/// Block-spectral evolution; builds the Hamiltonian for the state's space.
pub fn evolve_block_exact<T: Real>(h: &HamiltonianMatrix<T>, initial: &JointState<T>, t: T) -> Result<JointState<T>> {
    BlockExact::new(h).evolve(initial, t)
}

/// Dense-matrix evolution, refusing spaces above [`DENSE_ORACLE_LIMIT`].
pub fn evolve_dense_oracle<T: Real>(h: &HamiltonianMatrix<T>, initial: &JointState<T>, t: T) -> Result<JointState<T>> {
    DenseOracle::new(h)?.evolve(initial, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{preset_atomic_state, AtomicPreset, CoherentSpec};
    use crate::hamiltonian::{build_one_mode, build_two_mode};

    #[test]
    fn one_mode_frequency_values() {
        assert!((rabi_one_mode::<f64>(0) - 2.5f64.sqrt()).abs() < 1e-15);
        assert!((rabi_one_mode::<f64>(0) - 1.58114).abs() < 1e-5);
        assert!((rabi_one_mode::<f64>(30) - 992.5f64.sqrt()).abs() < 1e-12);
        assert!((rabi_one_mode::<f64>(30) - 31.5040).abs() < 1e-4);
        for n in 0..=100usize {
            let lhs = 2.0 * rabi_one_mode::<f64>(n);
            let (a, b) = ((n + 1) as f64, (n + 2) as f64);
            assert!((lhs - (2.0 * (a * a + b * b)).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn two_mode_frequency_values() {
        assert!((omega1::<f64>(0, 0).unwrap() - 34f64.sqrt()).abs() < 1e-14);
        assert_eq!(omega2::<f64>(2, 2).unwrap(), omega1::<f64>(0, 0).unwrap());
        assert_eq!(omega3::<f64>(1, 1).unwrap(), omega1::<f64>(0, 0).unwrap());
        assert!(matches!(omega2::<f64>(1, 5), Err(JcmError::UndefinedShift(1, 5))));
        assert!(rabi_two_mode::<f64>(1, 3).is_err());
        for n1 in 0..8 {
            for n2 in 0..8 {
                let w1 = omega1::<f64>(n1, n2).unwrap();
                assert_eq!(w1, omega2::<f64>(n1 + 2, n2 + 2).unwrap());
                assert_eq!(w1, omega3::<f64>(n1 + 1, n2 + 1).unwrap());
            }
        }
    }

    #[test]
    fn x_notation_readings_differ_from_block_eigenvalue() {
        // X(m1, m2) = sqrt(m1 m2 (m1+1)(m2+1)); the frequency written as
        // sqrt(2(X1 (n1+1)(n2+1) + X2 (n1+2)(n2+2))) has two readings.
        let x = |m1: f64, m2: f64| (m1 * m2 * (m1 + 1.0) * (m2 + 1.0)).sqrt();
        let evaluated = |n1: f64, n2: f64| (2.0 * (x(n1 + 1.0, n2 + 1.0) + x(n1 + 3.0, n2 + 3.0))).sqrt();
        let product = |n1: f64, n2: f64| {
            (2.0 * (x(n1, n2) * (n1 + 1.0) * (n2 + 1.0) + x(n1 + 1.0, n2 + 1.0) * (n1 + 2.0) * (n2 + 2.0))).sqrt()
        };
        let rel = |f: &dyn Fn(f64, f64) -> f64, n1: i64, n2: i64| {
            let c = omega1::<f64>(n1, n2).unwrap();
            (f(n1 as f64, n2 as f64) - c) / c
        };
        for (n1, n2, want_eval, want_prod) in [
            (0, 0, -0.0925148, -0.3140057),
            (1, 1, -0.4822730, -0.2005156),
            (50, 50, -0.9802084, -0.0097536),
            (50, 150, -0.9885327, -0.0065354),
        ] {
            assert!((rel(&evaluated, n1, n2) - want_eval).abs() < 1e-6, "({n1},{n2})");
            assert!((rel(&product, n1, n2) - want_prod).abs() < 1e-6, "({n1},{n2})");
        }
    }

    #[test]
    fn table_lookup() {
        let t = RabiFrequencyTable::<f64>::for_space(&JointSpace::two_mode(FockCutoff::new(5), FockCutoff::new(4)));
        assert_eq!(t.omega1(3, 2), Some(omega1(3, 2).unwrap()));
        assert_eq!(t.omega2(3, 2), Some(omega1(1, 0).unwrap()));
        assert_eq!(t.omega3(0, 2), None);
        let t = RabiFrequencyTable::<f64>::for_space(&JointSpace::one_mode(FockCutoff::new(5)));
        assert_eq!(t.one_mode(5), Some(rabi_one_mode(5)));
        assert_eq!(t.one_mode(6), None);
    }

    #[test]
    fn block_eigenvalues_match_frequencies() {
        // interior one-mode blocks: {±2Ω_n, 0, 0}
        let h = build_one_mode::<f64>(FockCutoff::new(53));
        let engine = BlockExact::new(&h);
        for (block, vals) in h.blocks().iter().zip(engine.block_eigenvalues()) {
            let n = block.anchor.0;
            if !block.is_complete() || n > 50 {
                continue;
            }
            let mut v = vals.to_vec();
            v.sort_by(f64::total_cmp);
            let w = 2.0 * rabi_one_mode::<f64>(n as usize);
            assert!((v[0] + w).abs() < 1e-10 && (v[3] - w).abs() < 1e-10, "n={n}: {v:?}");
            assert!(v[1].abs() < 1e-10 && v[2].abs() < 1e-10);
        }
        let h = build_two_mode::<f64>(FockCutoff::new(6), FockCutoff::new(6));
        let engine = BlockExact::new(&h);
        for (block, vals) in h.blocks().iter().zip(engine.block_eigenvalues()) {
            if !block.is_complete() {
                continue;
            }
            let mut v = vals.to_vec();
            v.sort_by(f64::total_cmp);
            let w = omega1::<f64>(block.anchor.0, block.anchor.1).unwrap();
            assert!((v[3] - w).abs() < 1e-10 * w && (v[0] + w).abs() < 1e-10 * w);
        }
    }

    #[test]
    fn engine_names_round_trip() {
        for k in [EngineKind::ClosedForm, EngineKind::BlockExact, EngineKind::DenseOracle] {
            assert_eq!(k.name().parse::<EngineKind>().unwrap(), k);
        }
        assert!("rk4".parse::<EngineKind>().is_err());
    }

    #[test]
    fn dense_oracle_refuses_large_spaces() {
        let h = build_one_mode::<f64>(FockCutoff::new(600));
        assert!(matches!(
            DenseOracle::new(&h),
            Err(JcmError::DimensionTooLarge { dim: 2404, limit: DENSE_ORACLE_LIMIT })
        ));
    }

    #[test]
    fn closed_form_at_zero_time_is_identity() {
        let field = CoherentSpec::new(2.0, 0.4).unwrap();
        let atomic = AtomicState::normalized(
            Cplx::new(0.3, 0.1),
            Cplx::new(-0.2, 0.5),
            Cplx::new(0.6, 0.0),
            Cplx::new(0.1, -0.4),
        )
        .unwrap();
        let cut = FockCutoff::new(20);
        let space = JointSpace::one_mode(cut);
        let psi0 = build_initial_state(&atomic, &FieldSpec::OneMode(field), space).unwrap();
        let psi = evolve_closed_form_one_mode(&atomic, &field, cut, 0.0).unwrap();
        assert!(psi.max_abs_diff(&psi0) < 1e-15);
    }

    #[test]
    fn closed_form_matches_block_exact_one_mode() {
        let field = CoherentSpec::new(2.0, 0.0).unwrap();
        let cut = FockCutoff::new(20);
        let atomic = AtomicState::basis(AtomLabel::PP);
        let space = JointSpace::one_mode(cut);
        let h = build_one_mode::<f64>(cut);
        let psi0 = build_initial_state(&atomic, &FieldSpec::OneMode(field), space).unwrap();
        let exact = evolve_block_exact(&h, &psi0, 0.7).unwrap();
        let closed = evolve_closed_form_one_mode(&atomic, &field, cut, 0.7).unwrap();
        assert!(exact.max_abs_diff(&closed) < 1e-8);
    }

    #[test]
    fn singlet_is_stationary_in_every_engine() {
        let field = FieldSpec::TwoMode(CoherentSpec::new(1.0, 0.2).unwrap(), CoherentSpec::new(1.5, 0.0).unwrap());
        let space = JointSpace::two_mode(FockCutoff::new(10), FockCutoff::new(11));
        let psi0 = build_initial_state(&preset_atomic_state(AtomicPreset::Phi4, 0.0), &field, space).unwrap();
        let h = HamiltonianMatrix::<f64>::build(space);
        for kind in [EngineKind::ClosedForm, EngineKind::BlockExact, EngineKind::DenseOracle] {
            let e = kind.build(&h).unwrap();
            for t in [0.1, 1.7, 9.3] {
                let psi = e.evolve(&psi0, t).unwrap();
                assert!(psi.max_abs_diff(&psi0) < 1e-12, "{kind} t={t}");
            }
        }
    }

    #[test]
    fn wrong_space_rejected() {
        let h = build_one_mode::<f64>(FockCutoff::new(4));
        let other = JointState::<f64>::zeros(JointSpace::one_mode(FockCutoff::new(5)));
        assert_eq!(evolve_block_exact(&h, &other, 1.0).unwrap_err(), JcmError::SpaceMismatch);
    }

    #[test]
    fn single_precision_engines_agree() {
        let field = FieldSpec::OneMode(CoherentSpec::new(2.0f32, 0.0).unwrap());
        let space = JointSpace::one_mode(FockCutoff::new(14));
        let psi0 = build_initial_state(&preset_atomic_state(AtomicPreset::A, 0.0f32), &field, space).unwrap();
        let h = HamiltonianMatrix::<f32>::build(space);
        let a = BlockExact::new(&h).evolve(&psi0, 1.3).unwrap();
        let b = ClosedForm::new(space).evolve(&psi0, 1.3).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-5);
        assert!((a.norm() - 1.0).abs() < 1e-5);
    }
}
