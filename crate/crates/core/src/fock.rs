//! Basis bookkeeping, coherent-state amplitudes and initial states.
//!
//! The joint Hilbert space is `{|++>, |+->, |-+>, |-->} ⊗ Fock(mode 1) [⊗ Fock(mode 2)]`.
//! Atom 1 is the left label. Amplitudes are stored densely, label-major, with the
//! Fock indices in row-major order; a one-mode space is laid out as a two-mode
//! space whose second mode only has the vacuum.

use std::fmt;
use std::str::FromStr;

use crate::error::{JcmError, Result};
use crate::scalar::{cis, cre, czero, norm_sqr, Cplx, Real};

/// Retained Poisson mass must be at least `1 - TRUNCATION_TOLERANCE`.
pub const TRUNCATION_TOLERANCE: f64 = 1e-6;

/// Default width multiplier `w` in `nmax = ceil(nbar + w·sqrt(nbar))`.
pub const DEFAULT_CUTOFF_WIDTH: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// Two atoms, one mode, `sqrt(a†a) a†` coupling.
    OneMode,
    /// Two atoms, two modes, nondegenerate two-photon transition.
    TwoMode,
}

impl ModelKind {
    pub fn modes(self) -> usize {
        match self {
            ModelKind::OneMode => 1,
            ModelKind::TwoMode => 2,
        }
    }

    /// Photon shift `(Δn1, Δn2)` produced by de-exciting one atom.
    pub fn photon_shift(self) -> (i64, i64) {
        match self {
            ModelKind::OneMode => (1, 0),
            ModelKind::TwoMode => (1, 1),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::OneMode => "one-mode",
            ModelKind::TwoMode => "two-mode",
        })
    }
}

/// Two-atom basis label; `P` is the excited state `|+>`, `M` the ground state `|->`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomLabel {
    PP,
    PM,
    MP,
    MM,
}

impl AtomLabel {
    pub const ALL: [AtomLabel; 4] = [AtomLabel::PP, AtomLabel::PM, AtomLabel::MP, AtomLabel::MM];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// Number of excited atoms.
    pub fn excitations(self) -> i64 {
        match self {
            AtomLabel::PP => 2,
            AtomLabel::PM | AtomLabel::MP => 1,
            AtomLabel::MM => 0,
        }
    }

    /// `(atom1 excited, atom2 excited)`
    pub fn atoms(self) -> (bool, bool) {
        match self {
            AtomLabel::PP => (true, true),
            AtomLabel::PM => (true, false),
            AtomLabel::MP => (false, true),
            AtomLabel::MM => (false, false),
        }
    }

    pub fn from_atoms(first: bool, second: bool) -> Self {
        match (first, second) {
            (true, true) => AtomLabel::PP,
            (true, false) => AtomLabel::PM,
            (false, true) => AtomLabel::MP,
            (false, false) => AtomLabel::MM,
        }
    }
}

/// Pure state of the atom pair, `alpha|++> + beta|+-> + gamma|-+> + delta|-->`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomicState<T: Real> {
    amps: [Cplx<T>; 4],
}

impl<T: Real> AtomicState<T> {
    /// Accepts amplitudes that are already normalized (`1e-12` in `f64`).
    pub fn new(alpha: Cplx<T>, beta: Cplx<T>, gamma: Cplx<T>, delta: Cplx<T>) -> Result<Self> {
        let s = Self { amps: [alpha, beta, gamma, delta] };
        let n = s.norm_sqr();
        if (n - T::one()).abs() > norm_tolerance::<T>() {
            return Err(JcmError::NotNormalized(n.to_f64()));
        }
        Ok(s)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(alpha: Cplx<T>, beta: Cplx<T>, gamma: Cplx<T>, delta: Cplx<T>) -> Result<Self> {
        let mut s = Self { amps: [alpha, beta, gamma, delta] };
        let n = s.norm_sqr();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(JcmError::NotNormalized(n.to_f64()));
        }
        let inv = T::one() / n.sqrt();
        for a in s.amps.iter_mut() {
            *a = a.scale(inv);
        }
        Ok(s)
    }

    pub fn basis(label: AtomLabel) -> Self {
        let mut amps = [czero(); 4];
        amps[label.index()] = cre(T::one());
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[Cplx<T>; 4] {
        &self.amps
    }

    pub fn get(&self, label: AtomLabel) -> Cplx<T> {
        self.amps[label.index()]
    }

    pub fn alpha(&self) -> Cplx<T> {
        self.amps[0]
    }
    pub fn beta(&self) -> Cplx<T> {
        self.amps[1]
    }
    pub fn gamma(&self) -> Cplx<T> {
        self.amps[2]
    }
    pub fn delta(&self) -> Cplx<T> {
        self.amps[3]
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, &a| acc + norm_sqr(a))
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Cplx<T> {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .fold(czero(), |acc, (a, b)| acc + a.conj() * b)
    }
}

/// Normalization tolerance appropriate for the scalar precision.
pub fn norm_tolerance<T: Real>() -> T {
    if std::mem::size_of::<T>() >= 8 {
        T::lit(1e-12)
    } else {
        T::lit(1e-5)
    }
}

/// Coherent mode `|v>` with `v = sqrt(nbar)·e^{i·phase}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentSpec<T: Real> {
    nbar: T,
    phase: T,
}

impl<T: Real> CoherentSpec<T> {
    pub fn new(nbar: T, phase: T) -> Result<Self> {
        if !nbar.is_finite() || nbar < T::zero() {
            return Err(JcmError::InvalidArgument(format!("mean photon number {nbar} must be finite and >= 0")));
        }
        if !phase.is_finite() {
            return Err(JcmError::InvalidArgument(format!("phase {phase} must be finite")));
        }
        let two_pi = T::two_pi();
        let mut phase = phase % two_pi;
        if phase < T::zero() {
            phase += two_pi;
        }
        Ok(Self { nbar, phase })
    }

    pub fn nbar(&self) -> T {
        self.nbar
    }

    /// Phase reduced to `[0, 2π)`.
    pub fn phase(&self) -> T {
        self.phase
    }

    /// Complex amplitude `v`.
    pub fn amplitude(&self) -> Cplx<T> {
        cis(self.phase).scale(self.nbar.sqrt())
    }
}

/// Highest retained Fock index of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockCutoff {
    pub nmax: usize,
}

impl FockCutoff {
    pub fn new(nmax: usize) -> Self {
        Self { nmax }
    }

    /// `ceil(nbar + width·sqrt(nbar))`
    /// `ceil(nbar + width·sqrt(nbar))`, raised if needed until the Poisson mass
    /// beyond `nmax` drops below [`TRUNCATION_TOLERANCE`].
    pub fn for_nbar<T: Real>(nbar: T, width: T) -> Self {
        let n = nbar.to_f64();
        let w = width.to_f64();
        let nominal = (n + w * n.sqrt()).ceil().max(0.0) as usize;
        Self { nmax: nominal.max(Self::min_for_tolerance(n)) }
    }

    /// Smallest `nmax` whose retained Poisson mass is at least `1 - TRUNCATION_TOLERANCE`.
    pub fn min_for_tolerance(nbar: f64) -> usize {
        if nbar <= 0.0 {
            return 0;
        }
        // small margin so the f64 sum in coherent_amplitudes clears the same bar
        let target = 1.0 - TRUNCATION_TOLERANCE + 1e-12;
        let ln_nbar = nbar.ln();
        let mut ln_fact = 0.0_f64;
        let mut mass = 0.0_f64;
        let mut k = 0usize;
        loop {
            if k > 0 {
                ln_fact += (k as f64).ln();
            }
            mass += (-nbar + k as f64 * ln_nbar - ln_fact).exp();
            if mass >= target {
                return k;
            }
            k += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.nmax + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `F_n = exp(-nbar/2) nbar^{n/2} / sqrt(n!) · e^{i n phase}` for `n = 0..=nmax`.
///
/// Magnitudes are evaluated as `exp(ln|F_n|)` so large `n` never overflows.
pub fn coherent_amplitudes<T: Real>(spec: &CoherentSpec<T>, cutoff: FockCutoff) -> Result<Vec<Cplx<T>>> {
    let nbar = spec.nbar().to_f64();
    let phase = spec.phase();
    let mut out = Vec::with_capacity(cutoff.len());
    if nbar == 0.0 {
        out.push(cre(T::one()));
        out.resize(cutoff.len(), czero());
        return Ok(out);
    }
    let ln_nbar = nbar.ln();
    let mut ln_fact = 0.0_f64;
    let mut retained = 0.0_f64;
    for n in 0..=cutoff.nmax {
        if n > 0 {
            ln_fact += (n as f64).ln();
        }
        let ln_mag = -0.5 * nbar + 0.5 * n as f64 * ln_nbar - 0.5 * ln_fact;
        let mag = ln_mag.exp();
        retained += mag * mag;
        out.push(cis(phase * T::of_usize(n)).scale(T::lit(mag)));
    }
    if retained < 1.0 - TRUNCATION_TOLERANCE {
        return Err(JcmError::Truncation {
            nmax: cutoff.nmax,
            retained,
            tolerance: TRUNCATION_TOLERANCE,
        });
    }
    Ok(out)
}

/// Named atomic preparations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomicPreset {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
    A,
    B,
    PP,
    PM,
    MP,
    MM,
}

impl AtomicPreset {
    pub const ALL: [AtomicPreset; 10] = [
        AtomicPreset::Phi1,
        AtomicPreset::Phi2,
        AtomicPreset::Phi3,
        AtomicPreset::Phi4,
        AtomicPreset::A,
        AtomicPreset::B,
        AtomicPreset::PP,
        AtomicPreset::PM,
        AtomicPreset::MP,
        AtomicPreset::MM,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AtomicPreset::Phi1 => "phi1",
            AtomicPreset::Phi2 => "phi2",
            AtomicPreset::Phi3 => "phi3",
            AtomicPreset::Phi4 => "phi4",
            AtomicPreset::A => "a",
            AtomicPreset::B => "b",
            AtomicPreset::PP => "pp",
            AtomicPreset::PM => "pm",
            AtomicPreset::MP => "mp",
            AtomicPreset::MM => "mm",
        }
    }
}

impl fmt::Display for AtomicPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AtomicPreset {
    type Err = JcmError;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '|' | '>' | ',' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        let p = match key.as_str() {
            "phi1" | "1" => AtomicPreset::Phi1,
            "phi2" | "2" => AtomicPreset::Phi2,
            "phi3" | "3" => AtomicPreset::Phi3,
            "phi4" | "4" | "singlet" => AtomicPreset::Phi4,
            "a" | "psia" => AtomicPreset::A,
            "b" | "psib" => AtomicPreset::B,
            "pp" | "++" => AtomicPreset::PP,
            "pm" | "+-" => AtomicPreset::PM,
            "mp" | "-+" => AtomicPreset::MP,
            "mm" | "--" => AtomicPreset::MM,
            _ => return Err(JcmError::UnknownPreset(s.to_string())),
        };
        Ok(p)
    }
}

/// Preset amplitudes. `theta` is `phi` for one mode and `phi1 + phi2` for two modes.
///
/// `Phi1..Phi4` diagonalize the semiclassical interaction; `A` and `B` are the
/// symmetric combinations `e^{-iθ}(Phi1 - Phi2)/√2` and `(Phi1 + Phi2)/√2`.
pub fn preset_atomic_state<T: Real>(preset: AtomicPreset, theta: T) -> AtomicState<T> {
    let half = T::lit(0.5);
    let r2 = T::lit(std::f64::consts::FRAC_1_SQRT_2);
    let z = czero::<T>();
    let e1 = cis(theta);
    let e2 = cis(theta + theta);
    let amps = match preset {
        AtomicPreset::Phi1 => [e2.scale(half), e1.scale(half), e1.scale(half), cre(half)],
        AtomicPreset::Phi2 => [e2.scale(half), -e1.scale(half), -e1.scale(half), cre(half)],
        AtomicPreset::Phi3 => [-e2.scale(r2), z, z, cre(r2)],
        AtomicPreset::Phi4 => [z, cre(r2), cre(-r2), z],
        AtomicPreset::A => [z, cre(r2), cre(r2), z],
        AtomicPreset::B => [e2.scale(r2), z, z, cre(r2)],
        AtomicPreset::PP => return AtomicState::basis(AtomLabel::PP),
        AtomicPreset::PM => return AtomicState::basis(AtomLabel::PM),
        AtomicPreset::MP => return AtomicState::basis(AtomLabel::MP),
        AtomicPreset::MM => return AtomicState::basis(AtomLabel::MM),
    };
    AtomicState { amps }
}

/// Field part of an initial condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldSpec<T: Real> {
    OneMode(CoherentSpec<T>),
    TwoMode(CoherentSpec<T>, CoherentSpec<T>),
}

impl<T: Real> FieldSpec<T> {
    pub fn kind(&self) -> ModelKind {
        match self {
            FieldSpec::OneMode(_) => ModelKind::OneMode,
            FieldSpec::TwoMode(..) => ModelKind::TwoMode,
        }
    }

    /// Phase entering the semiclassical eigenvectors.
    pub fn theta(&self) -> T {
        match self {
            FieldSpec::OneMode(c) => c.phase(),
            FieldSpec::TwoMode(a, b) => a.phase() + b.phase(),
        }
    }

    /// Space with the default `ceil(nbar + w·sqrt(nbar))` cutoff per mode.
    pub fn space(&self, width: T) -> JointSpace {
        match self {
            FieldSpec::OneMode(c) => JointSpace::one_mode(FockCutoff::for_nbar(c.nbar(), width)),
            FieldSpec::TwoMode(a, b) => JointSpace::two_mode(
                FockCutoff::for_nbar(a.nbar(), width),
                FockCutoff::for_nbar(b.nbar(), width),
            ),
        }
    }
}

/// Shape of the truncated joint space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JointSpace {
    kind: ModelKind,
    cutoffs: [FockCutoff; 2],
}

impl JointSpace {
    pub fn one_mode(cutoff: FockCutoff) -> Self {
        Self { kind: ModelKind::OneMode, cutoffs: [cutoff, FockCutoff::new(0)] }
    }

    pub fn two_mode(c1: FockCutoff, c2: FockCutoff) -> Self {
        Self { kind: ModelKind::TwoMode, cutoffs: [c1, c2] }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// Cutoffs of the physical modes (one entry for one-mode spaces).
    pub fn cutoffs(&self) -> &[FockCutoff] {
        &self.cutoffs[..self.kind.modes()]
    }

    pub fn nmax(&self) -> (usize, usize) {
        (self.cutoffs[0].nmax, self.cutoffs[1].nmax)
    }

    /// Number of Fock configurations.
    pub fn fock_len(&self) -> usize {
        self.cutoffs[0].len() * self.cutoffs[1].len()
    }

    pub fn dim(&self) -> usize {
        4 * self.fock_len()
    }

    #[inline]
    pub fn contains(&self, n1: i64, n2: i64) -> bool {
        n1 >= 0 && n2 >= 0 && n1 as usize <= self.cutoffs[0].nmax && n2 as usize <= self.cutoffs[1].nmax
    }

    /// Flat index of the Fock configuration, if retained.
    #[inline]
    pub fn fock_index(&self, n1: i64, n2: i64) -> Option<usize> {
        self.contains(n1, n2)
            .then(|| n1 as usize * self.cutoffs[1].len() + n2 as usize)
    }

    #[inline]
    pub fn index(&self, label: AtomLabel, n1: i64, n2: i64) -> Option<usize> {
        self.fock_index(n1, n2).map(|f| label.index() * self.fock_len() + f)
    }

    /// Inverse of [`JointSpace::index`].
    pub fn decode(&self, idx: usize) -> (AtomLabel, usize, usize) {
        let f = idx % self.fock_len();
        let label = AtomLabel::from_index(idx / self.fock_len()).expect("index in range");
        (label, f / self.cutoffs[1].len(), f % self.cutoffs[1].len())
    }
}

/// Pure joint atom-field state in a truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState<T: Real> {
    space: JointSpace,
    amps: Vec<Cplx<T>>,
}

impl<T: Real> JointState<T> {
    pub fn zeros(space: JointSpace) -> Self {
        Self { space, amps: vec![czero(); space.dim()] }
    }

    pub fn from_amplitudes(space: JointSpace, amps: Vec<Cplx<T>>) -> Result<Self> {
        if amps.len() != space.dim() {
            return Err(JcmError::InvalidArgument(format!(
                "expected {} amplitudes, got {}",
                space.dim(),
                amps.len()
            )));
        }
        Ok(Self { space, amps })
    }

    pub fn space(&self) -> &JointSpace {
        &self.space
    }

    pub fn kind(&self) -> ModelKind {
        self.space.kind
    }

    pub fn amplitudes(&self) -> &[Cplx<T>] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Cplx<T>] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Cplx<T>> {
        self.amps
    }

    /// Amplitude of `|label>|n1, n2>`; zero outside the retained range.
    #[inline]
    pub fn amplitude(&self, label: AtomLabel, n1: i64, n2: i64) -> Cplx<T> {
        self.space.index(label, n1, n2).map_or_else(czero, |i| self.amps[i])
    }

    /// Slice of amplitudes carrying the given atomic label, indexed by Fock configuration.
    pub fn label_slice(&self, label: AtomLabel) -> &[Cplx<T>] {
        let len = self.space.fock_len();
        &self.amps[label.index() * len..(label.index() + 1) * len]
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, &a| acc + norm_sqr(a))
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if !(n > T::zero()) {
            return Err(JcmError::NotNormalized(0.0));
        }
        let inv = T::one() / n;
        for a in self.amps.iter_mut() {
            *a = a.scale(inv);
        }
        Ok(())
    }

    /// Largest `|a_i - b_i|` over the shared space.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.space, other.space, "comparing states from different spaces");
        self.amps
            .iter()
            .zip(other.amps.iter())
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm_sqr().sqrt()))
    }
}

/// Product state `atomic ⊗ |v>` (or `|v1, v2>`), renormalized after truncation.
pub fn build_initial_state<T: Real>(
    atomic: &AtomicState<T>,
    field: &FieldSpec<T>,
    space: JointSpace,
) -> Result<JointState<T>> {
    if field.kind() != space.kind() {
        return Err(JcmError::SpaceMismatch);
    }
    if (atomic.norm_sqr() - T::one()).abs() > norm_tolerance::<T>() {
        return Err(JcmError::NotNormalized(atomic.norm_sqr().to_f64()));
    }
    let (f1, f2) = match field {
        FieldSpec::OneMode(c) => (coherent_amplitudes(c, space.cutoffs[0])?, vec![cre(T::one())]),
        FieldSpec::TwoMode(a, b) => (
            coherent_amplitudes(a, space.cutoffs[0])?,
            coherent_amplitudes(b, space.cutoffs[1])?,
        ),
    };
    let mut state = JointState::zeros(space);
    let fock_len = space.fock_len();
    for label in AtomLabel::ALL {
        let c = atomic.get(label);
        let base = label.index() * fock_len;
        for (i, &x) in f1.iter().enumerate() {
            for (j, &y) in f2.iter().enumerate() {
                state.amps[base + i * f2.len() + j] = c * x * y;
            }
        }
    }
    state.normalize()?;
    Ok(state)
}
