//! Interaction Hamiltonians in the truncated joint basis (units of ħg).
//!
//! Both models conserve an excitation number, so the truncated operator is
//! stored as a list of invariant blocks
//! `{|++, m>, |+-, m+s>, |-+, m+s>, |--, m+2s>}` where `s` is the photon shift
//! of one atomic de-excitation (`(1)` for one mode, `(1, 1)` for two modes).
//! Blocks touching `n < 0` or the cutoff lose the missing members.

use nalgebra::{DMatrix, Matrix4};

use crate::fock::{AtomLabel, FieldSpec, JointSpace, ModelKind};
use crate::scalar::{cre, czero, Cplx, Real};

/// A basis vector `|label>|n1, n2>` (`n2 = 0` for one mode).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub label: AtomLabel,
    pub n1: i64,
    pub n2: i64,
}

impl BasisState {
    pub fn new(label: AtomLabel, n1: i64, n2: i64) -> Self {
        Self { label, n1, n2 }
    }
}

/// `<n+1| sqrt(a†a) a† |n> = n + 1`
#[inline]
fn raise_element(n: i64) -> i64 {
    n + 1
}

/// `<n-1| a sqrt(a†a) |n> = n`
#[inline]
fn lower_element(n: i64) -> i64 {
    n
}

/// `H_int |basis>` in the untruncated space, as `(target, coefficient)` pairs.
///
/// One mode: `Σ_i sqrt(a†a) a† σ_i^- + σ_i^+ a sqrt(a†a)`.
/// Two modes: `Σ_i sqrt(a1†a1) a1† sqrt(a2†a2) a2† σ_i^- + h.c.`
pub fn apply_interaction(kind: ModelKind, basis: BasisState) -> Vec<(BasisState, i64)> {
    let (e1, e2) = basis.label.atoms();
    let mut out = Vec::with_capacity(2);
    for atom in 0..2 {
        let excited = if atom == 0 { e1 } else { e2 };
        let flip = |a: bool, b: bool| if atom == 0 { (!a, b) } else { (a, !b) };
        let (f1, f2) = flip(e1, e2);
        let label = AtomLabel::from_atoms(f1, f2);
        let (target, coeff) = if excited {
            // σ^- emits into every mode
            match kind {
                ModelKind::OneMode => (BasisState::new(label, basis.n1 + 1, basis.n2), raise_element(basis.n1)),
                ModelKind::TwoMode => (
                    BasisState::new(label, basis.n1 + 1, basis.n2 + 1),
                    raise_element(basis.n1) * raise_element(basis.n2),
                ),
            }
        } else {
            match kind {
                ModelKind::OneMode => (BasisState::new(label, basis.n1 - 1, basis.n2), lower_element(basis.n1)),
                ModelKind::TwoMode => (
                    BasisState::new(label, basis.n1 - 1, basis.n2 - 1),
                    lower_element(basis.n1) * lower_element(basis.n2),
                ),
            }
        };
        if coeff != 0 {
            out.push((target, coeff));
        }
    }
    out
}

/// Conserved excitation count: photons plus atomic excitations, where one
/// atomic excitation is worth one photon per mode.
pub fn excitation_number(kind: ModelKind, basis: BasisState) -> i64 {
    let exc = basis.label.excitations();
    match kind {
        ModelKind::OneMode => basis.n1 + exc,
        ModelKind::TwoMode => basis.n1 + basis.n2 + 2 * exc,
    }
}

/// Invariant subspace of `H_int` anchored at the `|++>` Fock configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExcitationBlock {
    pub kind: ModelKind,
    /// Fock configuration of the `|++>` member (may be negative for boundary blocks).
    pub anchor: (i64, i64),
    /// Retained members in the order `++, +-, -+, --`.
    pub members: Vec<BasisState>,
    /// Flat indices of `members` in the joint space.
    pub indices: Vec<usize>,
}

impl ExcitationBlock {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// True when all four members are retained.
    pub fn is_complete(&self) -> bool {
        self.members.len() == 4
    }

    pub fn position(&self, label: AtomLabel) -> Option<usize> {
        self.members.iter().position(|m| m.label == label)
    }
}

/// Members of the block anchored at `anchor`, ignoring truncation.
pub fn block_members(kind: ModelKind, anchor: (i64, i64)) -> [BasisState; 4] {
    let (s1, s2) = kind.photon_shift();
    let (m1, m2) = anchor;
    [
        BasisState::new(AtomLabel::PP, m1, m2),
        BasisState::new(AtomLabel::PM, m1 + s1, m2 + s2),
        BasisState::new(AtomLabel::MP, m1 + s1, m2 + s2),
        BasisState::new(AtomLabel::MM, m1 + 2 * s1, m2 + 2 * s2),
    ]
}

/// Anchor of the block holding `basis`.
pub fn anchor_of(kind: ModelKind, basis: BasisState) -> (i64, i64) {
    let (s1, s2) = kind.photon_shift();
    let k = 2 - basis.label.excitations();
    (basis.n1 - k * s1, basis.n2 - k * s2)
}

/// Partition of the truncated basis into excitation blocks.
pub fn enumerate_blocks(space: &JointSpace) -> Vec<ExcitationBlock> {
    let kind = space.kind();
    let (n1max, n2max) = space.nmax();
    let (s1, s2) = kind.photon_shift();
    let range2: Vec<i64> = if s2 == 0 { vec![0] } else { (-2..=n2max as i64).collect() };
    let mut blocks = Vec::new();
    for m1 in -2 * s1..=n1max as i64 {
        for &m2 in &range2 {
            let mut members = Vec::with_capacity(4);
            let mut indices = Vec::with_capacity(4);
            for b in block_members(kind, (m1, m2)) {
                if let Some(i) = space.index(b.label, b.n1, b.n2) {
                    members.push(b);
                    indices.push(i);
                }
            }
            if !members.is_empty() {
                blocks.push(ExcitationBlock { kind, anchor: (m1, m2), members, indices });
            }
        }
    }
    blocks
}

/// Truncated `H_int` stored blockwise; every block is real symmetric.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix<T: Real> {
    space: JointSpace,
    blocks: Vec<ExcitationBlock>,
    matrices: Vec<DMatrix<T>>,
}

impl<T: Real> HamiltonianMatrix<T> {
    pub fn build(space: JointSpace) -> Self {
        let kind = space.kind();
        let blocks = enumerate_blocks(&space);
        let matrices = blocks
            .iter()
            .map(|block| {
                let n = block.len();
                let mut h = DMatrix::<T>::zeros(n, n);
                for (col, &member) in block.members.iter().enumerate() {
                    for (target, coeff) in apply_interaction(kind, member) {
                        if !space.contains(target.n1, target.n2) {
                            continue;
                        }
                        let row = block
                            .members
                            .iter()
                            .position(|m| *m == target)
                            .expect("interaction leaves excitation block");
                        h[(row, col)] += T::of_i64(coeff);
                    }
                }
                h
            })
            .collect();
        Self { space, blocks, matrices }
    }

    pub fn space(&self) -> &JointSpace {
        &self.space
    }

    pub fn kind(&self) -> ModelKind {
        self.space.kind()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn blocks(&self) -> &[ExcitationBlock] {
        &self.blocks
    }

    pub fn block_matrices(&self) -> &[DMatrix<T>] {
        &self.matrices
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExcitationBlock, &DMatrix<T>)> {
        self.blocks.iter().zip(self.matrices.iter())
    }

    /// Dense complex copy, for the oracle and for tests.
    pub fn to_dense(&self) -> DMatrix<Cplx<T>> {
        let dim = self.dim();
        let mut m = DMatrix::from_element(dim, dim, czero());
        for (block, h) in self.iter() {
            for (i, &gi) in block.indices.iter().enumerate() {
                for (j, &gj) in block.indices.iter().enumerate() {
                    m[(gi, gj)] = cre(h[(i, j)]);
                }
            }
        }
        m
    }

    /// `<row|H|col>` by flat index.
    pub fn element(&self, row: usize, col: usize) -> T {
        let (l, n1, n2) = self.space.decode(col);
        let target_anchor = anchor_of(self.kind(), BasisState::new(l, n1 as i64, n2 as i64));
        let (rl, r1, r2) = self.space.decode(row);
        if anchor_of(self.kind(), BasisState::new(rl, r1 as i64, r2 as i64)) != target_anchor {
            return T::zero();
        }
        let b = self
            .blocks
            .iter()
            .position(|b| b.anchor == target_anchor)
            .expect("every basis state belongs to a block");
        let block = &self.blocks[b];
        let i = block.indices.iter().position(|&g| g == row).unwrap();
        let j = block.indices.iter().position(|&g| g == col).unwrap();
        self.matrices[b][(i, j)]
    }

    /// Matrix element between basis states given by label and Fock indices.
    pub fn matrix_element(&self, bra: BasisState, ket: BasisState) -> T {
        match (
            self.space.index(bra.label, bra.n1, bra.n2),
            self.space.index(ket.label, ket.n1, ket.n2),
        ) {
            (Some(r), Some(c)) => self.element(r, c),
            _ => T::zero(),
        }
    }
}

pub fn build_one_mode<T: Real>(cutoff: crate::fock::FockCutoff) -> HamiltonianMatrix<T> {
    HamiltonianMatrix::build(JointSpace::one_mode(cutoff))
}

pub fn build_two_mode<T: Real>(c1: crate::fock::FockCutoff, c2: crate::fock::FockCutoff) -> HamiltonianMatrix<T> {
    HamiltonianMatrix::build(JointSpace::two_mode(c1, c2))
}

/// Semiclassical Hamiltonian on the atomic basis `++, +-, -+, --`: the field
/// operators are replaced by the coherent amplitudes.
///
/// One mode: `|v| Σ_i (v* σ_i^- + v σ_i^+)`.
/// Two modes: `Σ_i (|v1| v1* |v2| v2* σ_i^- + h.c.)`.
pub fn build_semiclassical<T: Real>(field: &FieldSpec<T>) -> Matrix4<Cplx<T>> {
    let up = match field {
        FieldSpec::OneMode(c) => {
            let v = c.amplitude();
            v.scale(v.norm_sqr().sqrt())
        }
        FieldSpec::TwoMode(a, b) => {
            let (v1, v2) = (a.amplitude(), b.amplitude());
            v1 * v2 * cre(v1.norm_sqr().sqrt() * v2.norm_sqr().sqrt())
        }
    };
    let down = up.conj();
    let mut h = Matrix4::from_element(czero());
    // σ_1^+: -+ → ++, -- → +-; σ_2^+: +- → ++, -- → -+
    let raises = [(2usize, 0usize), (3, 1), (1, 0), (3, 2)];
    for (from, to) in raises {
        h[(to, from)] += up;
        h[(from, to)] += down;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{preset_atomic_state, AtomicPreset, CoherentSpec, FockCutoff};
    use AtomLabel::*;

    fn bs(l: AtomLabel, n1: i64, n2: i64) -> BasisState {
        BasisState::new(l, n1, n2)
    }

    #[test]
    fn one_mode_elements() {
        let h = build_one_mode::<f64>(FockCutoff::new(6));
        assert_eq!(h.matrix_element(bs(PM, 1, 0), bs(PP, 0, 0)), 1.0);
        assert_eq!(h.matrix_element(bs(MP, 1, 0), bs(PP, 0, 0)), 1.0);
        assert_eq!(h.matrix_element(bs(MM, 2, 0), bs(PM, 1, 0)), 2.0);
        assert_eq!(h.matrix_element(bs(PP, 3, 0), bs(PM, 4, 0)), 4.0);
        assert_eq!(h.matrix_element(bs(MM, 2, 0), bs(PP, 0, 0)), 0.0);
        assert_eq!(h.matrix_element(bs(PM, 1, 0), bs(MP, 1, 0)), 0.0);
    }

    #[test]
    fn two_mode_elements() {
        let h = build_two_mode::<f64>(FockCutoff::new(6), FockCutoff::new(6));
        assert_eq!(h.matrix_element(bs(PM, 1, 1), bs(PP, 0, 0)), 1.0);
        assert_eq!(h.matrix_element(bs(PM, 2, 3), bs(PP, 1, 2)), 6.0);
        assert_eq!(h.matrix_element(bs(MM, 3, 4), bs(MP, 2, 3)), 12.0);
        // boundary: |+-,0,j> still couples down to |--,1,j+1>
        assert_eq!(h.matrix_element(bs(MM, 1, 3), bs(PM, 0, 2)), 3.0);
    }

    #[test]
    fn hermitian() {
        for h in [
            build_one_mode::<f64>(FockCutoff::new(9)),
            build_two_mode::<f64>(FockCutoff::new(4), FockCutoff::new(5)),
        ] {
            let d = h.to_dense();
            let diff = (&d - d.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(diff < 1e-12);
        }
    }

    #[test]
    fn dense_matches_operator_action() {
        // every nonzero operator element inside the cutoff shows up in the dense matrix
        for space in [
            JointSpace::one_mode(FockCutoff::new(7)),
            JointSpace::two_mode(FockCutoff::new(4), FockCutoff::new(3)),
        ] {
            let h = HamiltonianMatrix::<f64>::build(space);
            let d = h.to_dense();
            let mut reference = DMatrix::<f64>::zeros(space.dim(), space.dim());
            for col in 0..space.dim() {
                let (l, n1, n2) = space.decode(col);
                for (t, c) in apply_interaction(space.kind(), bs(l, n1 as i64, n2 as i64)) {
                    if let Some(row) = space.index(t.label, t.n1, t.n2) {
                        reference[(row, col)] += c as f64;
                    }
                }
            }
            assert_eq!(d.map(|z| z.re), reference);
        }
    }

    #[test]
    fn block_examples() {
        let space = JointSpace::one_mode(FockCutoff::new(10));
        let blocks = enumerate_blocks(&space);
        let b0 = blocks.iter().find(|b| b.anchor == (0, 0)).unwrap();
        assert_eq!(b0.members, vec![bs(PP, 0, 0), bs(PM, 1, 0), bs(MP, 1, 0), bs(MM, 2, 0)]);
        let holder = blocks.iter().find(|b| b.members.contains(&bs(MM, 0, 0))).unwrap();
        assert!(holder.position(PP).is_none());
        assert_eq!(holder.len(), 1);
        let top = blocks.iter().find(|b| b.anchor == (10, 0)).unwrap();
        assert_eq!(top.members, vec![bs(PP, 10, 0)]);
    }

    #[test]
    fn blocks_partition_basis() {
        for space in [
            JointSpace::one_mode(FockCutoff::new(0)),
            JointSpace::one_mode(FockCutoff::new(13)),
            JointSpace::two_mode(FockCutoff::new(5), FockCutoff::new(2)),
            JointSpace::two_mode(FockCutoff::new(0), FockCutoff::new(3)),
        ] {
            let blocks = enumerate_blocks(&space);
            let mut seen = vec![0u8; space.dim()];
            for b in &blocks {
                assert!(b.len() <= 4 && !b.is_empty());
                for &i in &b.indices {
                    seen[i] += 1;
                }
            }
            assert!(seen.iter().all(|&c| c == 1));
            assert_eq!(blocks.iter().map(|b| b.len()).sum::<usize>(), space.dim());
        }
    }

    #[test]
    fn commutes_with_excitation_number() {
        for space in [
            JointSpace::one_mode(FockCutoff::new(12)),
            JointSpace::two_mode(FockCutoff::new(5), FockCutoff::new(6)),
        ] {
            let h = HamiltonianMatrix::<f64>::build(space).to_dense();
            let n = DMatrix::<f64>::from_diagonal(&nalgebra::DVector::from_iterator(
                space.dim(),
                (0..space.dim()).map(|i| {
                    let (l, a, b) = space.decode(i);
                    excitation_number(space.kind(), bs(l, a as i64, b as i64)) as f64
                }),
            ))
            .map(cre);
            let comm = &h * &n - &n * &h;
            assert!(comm.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-10);
        }
    }

    #[test]
    fn block_closure() {
        let space = JointSpace::two_mode(FockCutoff::new(4), FockCutoff::new(4));
        let h = HamiltonianMatrix::<f64>::build(space);
        let d = h.to_dense();
        for b in h.blocks() {
            for &col in &b.indices {
                for row in 0..space.dim() {
                    if d[(row, col)].norm() != 0.0 {
                        assert!(b.indices.contains(&row));
                    }
                }
            }
        }
    }

    #[test]
    fn singlet_is_annihilated() {
        for kind in [ModelKind::OneMode, ModelKind::TwoMode] {
            for n1 in 0..6i64 {
                for n2 in 0..(if kind == ModelKind::TwoMode { 6 } else { 1 }) {
                    // (|+-> - |-+>)|n1,n2>
                    let mut acc = std::collections::HashMap::new();
                    for (label, sign) in [(PM, 1i64), (MP, -1)] {
                        for (t, c) in apply_interaction(kind, bs(label, n1, n2)) {
                            *acc.entry(t).or_insert(0) += sign * c;
                        }
                    }
                    assert!(acc.values().all(|&v| v == 0), "{kind} {n1} {n2}");
                }
            }
        }
    }

    #[test]
    fn semiclassical_vacuum_is_zero() {
        let h = build_semiclassical(&FieldSpec::OneMode(CoherentSpec::new(0.0, 1.0).unwrap()));
        assert!(h.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn semiclassical_eigenvectors() {
        let fields = [
            FieldSpec::OneMode(CoherentSpec::new(3.0f64, 0.7).unwrap()),
            FieldSpec::OneMode(CoherentSpec::new(30.0, 0.0).unwrap()),
            FieldSpec::TwoMode(CoherentSpec::new(2.0, 0.3).unwrap(), CoherentSpec::new(5.0, -1.1).unwrap()),
        ];
        for field in fields {
            let h = build_semiclassical(&field);
            assert!((h - h.adjoint()).iter().all(|z| z.norm() < 1e-12));
            let theta = field.theta();
            for p in [AtomicPreset::Phi1, AtomicPreset::Phi2, AtomicPreset::Phi3, AtomicPreset::Phi4] {
                let v = nalgebra::Vector4::from_iterator(preset_atomic_state(p, theta).amplitudes().iter().copied());
                let hv = h * v;
                let lambda = v.dotc(&hv);
                let resid = hv - v * lambda;
                assert!(resid.norm() < 1e-10 * (1.0 + lambda.norm()), "{p:?}: {resid}");
                assert!(lambda.im.abs() < 1e-10);
                if matches!(p, AtomicPreset::Phi3 | AtomicPreset::Phi4) {
                    assert!(lambda.norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn singlet_zero_mode_of_semiclassical() {
        // direct 4x4 eigensolve: the spectrum is {±2·nbar, 0, 0} and Φ4 has no weight
        // on the nonzero eigenvectors
        let field = FieldSpec::OneMode(CoherentSpec::new(4.0, 1.2).unwrap());
        let h = build_semiclassical(&field);
        let eig = h.symmetric_eigen();
        let phi4 = nalgebra::Vector4::from_iterator(
            preset_atomic_state(AtomicPreset::Phi4, 0.0).amplitudes().iter().copied(),
        );
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] + 8.0).abs() < 1e-10 && (vals[3] - 8.0).abs() < 1e-10);
        for k in 0..4 {
            if eig.eigenvalues[k].abs() > 1e-8 {
                assert!(eig.eigenvectors.column(k).dotc(&phi4).norm() < 1e-10);
            }
        }
    }
}
