//! Analytic revival periods and atom-field disentanglement times.
//!
//! The asymptotic (large mean photon number) values are plain multiples of π;
//! the exact one-mode periods come from the Rabi frequency differences around
//! the mean photon number.

use std::fmt;
use std::str::FromStr;

use crate::error::{JcmError, Result};
use crate::evolution::rabi_one_mode;
use crate::fock::{preset_atomic_state, AtomicPreset, AtomicState, ModelKind};
use crate::scalar::{czero, norm_sqr, Real};

/// Tolerance for matching a state against a preset up to global phase.
pub const CLASSIFY_TOLERANCE: f64 = 1e-9;

/// Revival periods in units of `1/g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevivalPrediction<T: Real> {
    pub kind: ModelKind,
    /// Series index (`k` for `T1R`, `m` for `T2R`).
    pub index: u32,
    /// `T1R` from the Rabi frequencies at `floor(nbar)` and `ceil(nbar)`; equal ends for integer `nbar`.
    pub exact_t1r: Option<(T, T)>,
    pub exact_t2r: Option<(T, T)>,
    pub asymptotic_t1r: T,
    pub asymptotic_t2r: T,
    /// Revivals of the two-mode model do not always appear at the predicted times.
    pub caveat: bool,
}

/// Interval of exact one-mode periods `2π·index / |scale·(Ω_{n+1} - Ω_n)|`.
fn exact_period<T: Real>(nbar: T, index: u32, scale: T) -> (T, T) {
    let lo = nbar.floor().to_f64().max(0.0) as usize;
    let hi = nbar.ceil().to_f64().max(0.0) as usize;
    let period = |n: usize| {
        let gap = scale * (rabi_one_mode::<T>(n + 1) - rabi_one_mode::<T>(n)).abs();
        T::two_pi() * T::of_usize(index as usize) / gap
    };
    let (a, b) = (period(lo), period(hi));
    (a.min(b), a.max(b))
}

/// One-mode revival periods, `|2Ω_{n+1} - 2Ω_n| T1R = 2πk` and `|4Ω_{n+1} - 4Ω_n| T2R = 2πk`.
///
/// Asymptotically `gT1R = πk` and `gT2R = πk/2`.
pub fn revival_periods_one_mode<T: Real>(nbar: T, k: u32) -> Result<RevivalPrediction<T>> {
    if !(nbar > T::zero()) || !nbar.is_finite() {
        return Err(JcmError::InvalidArgument(format!("revival periods need nbar > 0, got {nbar}")));
    }
    let kf = T::of_usize(k as usize);
    Ok(RevivalPrediction {
        kind: ModelKind::OneMode,
        index: k,
        exact_t1r: Some(exact_period(nbar, k, T::lit(2.0))),
        exact_t2r: Some(exact_period(nbar, k, T::lit(4.0))),
        asymptotic_t1r: T::pi() * kf,
        asymptotic_t2r: T::pi() * kf / T::lit(2.0),
        caveat: false,
    })
}

/// Two-mode periods `gT'1R = π sqrt(k) / sqrt(n1 n2)`, `T'2R = T'1R / 2`.
pub fn revival_periods_two_mode<T: Real>(n1bar: T, n2bar: T, k: u32) -> Result<RevivalPrediction<T>> {
    if !(n1bar > T::zero()) || !(n2bar > T::zero()) {
        return Err(JcmError::InvalidArgument(format!(
            "two-mode revival periods need positive mean photon numbers, got ({n1bar}, {n2bar})"
        )));
    }
    let t1 = T::pi() * T::of_usize(k as usize).sqrt() / (n1bar * n2bar).sqrt();
    Ok(RevivalPrediction {
        kind: ModelKind::TwoMode,
        index: k,
        exact_t1r: None,
        exact_t2r: None,
        asymptotic_t1r: t1,
        asymptotic_t2r: t1 / T::lit(2.0),
        caveat: true,
    })
}

/// Which disentanglement series applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DisentanglementClass {
    /// One mode, A or B state: `t1 ∪ t2`.
    AB,
    /// One mode, any other state: `t3`.
    Generic,
    /// Two modes, A or B state: `t4`.
    TwoModeAB,
}

impl FromStr for DisentanglementClass {
    type Err = JcmError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ab" => Ok(Self::AB),
            "generic" => Ok(Self::Generic),
            "two-mode-ab" | "twomodeab" | "two_mode_ab" => Ok(Self::TwoModeAB),
            _ => Err(JcmError::InvalidArgument(format!("unknown initial-state class '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Series {
    /// `(2k+1) T1R / 4`
    T1,
    /// `k T2R = kπ/2`
    T2,
    /// `k T1R = kπ`
    T3,
    /// `mπ/2`, independent of the photon numbers
    T4,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Series::T1 => "t1",
            Series::T2 => "t2",
            Series::T3 => "t3",
            Series::T4 => "t4",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedTime<T: Real> {
    pub series: Series,
    pub index: u32,
    /// Asymptotic value.
    pub gt: T,
    /// Value with the exact one-mode `T1R` (midpoint of the floor/ceil interval), when defined.
    pub gt_exact: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DisentanglementPrediction<T: Real> {
    pub class: DisentanglementClass,
    /// Sorted by asymptotic time.
    pub times: Vec<PredictedTime<T>>,
}

impl<T: Real> DisentanglementPrediction<T> {
    pub fn gts(&self) -> Vec<T> {
        self.times.iter().map(|p| p.gt).collect()
    }
}

/// First `count` disentanglement times (in `gt`) for the given class.
///
/// `nbar` is the mean photon number of mode 1; it only enters the exact
/// one-mode column and may be `None`.
pub fn disentanglement_times<T: Real>(
    class: DisentanglementClass,
    nbar: Option<T>,
    count: usize,
) -> Result<DisentanglementPrediction<T>> {
    let pi = T::pi();
    let exact_t1r = match (class, nbar) {
        (DisentanglementClass::AB | DisentanglementClass::Generic, Some(n)) if n > T::zero() => {
            let (lo, hi) = exact_period(n, 1, T::lit(2.0));
            Some((lo + hi) / T::lit(2.0))
        }
        _ => None,
    };
    let mut times = Vec::with_capacity(count);
    match class {
        DisentanglementClass::AB => {
            // t1 = (2k+1)π/4 and t2 = kπ/2 interleave: odd and even multiples of π/4
            for j in 1..=count as u32 {
                let gt = pi * T::of_usize(j as usize) / T::lit(4.0);
                let t = if j % 2 == 1 {
                    let k = (j - 1) / 2;
                    PredictedTime {
                        series: Series::T1,
                        index: k,
                        gt,
                        gt_exact: exact_t1r.map(|p| p * T::of_usize(2 * k as usize + 1) / T::lit(4.0)),
                    }
                } else {
                    PredictedTime { series: Series::T2, index: j / 2, gt, gt_exact: None }
                };
                times.push(t);
            }
        }
        DisentanglementClass::Generic => {
            for k in 1..=count as u32 {
                times.push(PredictedTime {
                    series: Series::T3,
                    index: k,
                    gt: pi * T::of_usize(k as usize),
                    gt_exact: exact_t1r.map(|p| p * T::of_usize(k as usize)),
                });
            }
        }
        DisentanglementClass::TwoModeAB => {
            for m in 1..=count as u32 {
                times.push(PredictedTime {
                    series: Series::T4,
                    index: m,
                    gt: pi * T::of_usize(m as usize) / T::lit(2.0),
                    gt_exact: None,
                });
            }
        }
    }
    Ok(DisentanglementPrediction { class, times })
}

/// `Ω(x)` continued to real arguments.
fn rabi_real<T: Real>(x: T) -> T {
    ((T::lit(2.0) * x * (x + T::lit(3.0)) + T::lit(5.0)) / T::lit(2.0)).sqrt()
}

/// `Ω_n` minus its first-order expansion about `nbar`.
///
/// The neglected curvature is what dephases revivals over long times.
pub fn taylor_rabi_residual<T: Real>(nbar: T, n: usize) -> T {
    let two = T::lit(2.0);
    let slope = (two * nbar + T::lit(3.0)) / (two * (two * nbar * (nbar + T::lit(3.0)) + T::lit(5.0))).sqrt();
    let nf = T::of_usize(n);
    rabi_one_mode::<T>(n) - (rabi_real(nbar) + slope * (nf - nbar))
}

/// Distances of `|Ω_{n+1} - Ω_n| t` and `|Ω_{n+2} - Ω_{n+1}| t` from the nearest
/// multiple of 2π at `n = round(nbar)`. Both vanish at exact disentanglement
/// times of the generic series.
pub fn disentanglement_condition_residual<T: Real>(nbar: T, t: T) -> (T, T) {
    let n = nbar.round().to_f64().max(0.0) as usize;
    let w = |m: usize| rabi_one_mode::<T>(m);
    let wrap = |x: T| {
        let two_pi = T::two_pi();
        let r = x % two_pi;
        r.min(two_pi - r)
    };
    (wrap((w(n + 1) - w(n)).abs() * t), wrap((w(n + 2) - w(n + 1)).abs() * t))
}

/// Result of matching an atomic state against the named presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateClass {
    /// `Phi1`, `Phi2` or `Phi3`: asymptotically factorized at all times.
    Eigenstate(AtomicPreset),
    /// `Phi4`: exactly decoupled from the field.
    EigenstateDark,
    /// The A or B state.
    AB(AtomicPreset),
    /// Another combination of `Phi1` and `Phi2`.
    Phi12Span,
    Generic,
}

impl StateClass {
    pub fn label(&self) -> &'static str {
        match self {
            StateClass::Eigenstate(_) => "eigenstate",
            StateClass::EigenstateDark => "eigenstate-dark",
            StateClass::AB(_) => "AB",
            StateClass::Phi12Span => "phi12-span",
            StateClass::Generic => "generic",
        }
    }

    /// Disentanglement series that applies for the model, if any is predicted.
    pub fn series_class(&self, kind: ModelKind) -> Option<DisentanglementClass> {
        match (kind, self) {
            (_, StateClass::Eigenstate(_) | StateClass::EigenstateDark) => None,
            (ModelKind::OneMode, StateClass::AB(_)) => Some(DisentanglementClass::AB),
            (ModelKind::OneMode, _) => Some(DisentanglementClass::Generic),
            (ModelKind::TwoMode, StateClass::AB(_)) => Some(DisentanglementClass::TwoModeAB),
            (ModelKind::TwoMode, _) => None,
        }
    }
}

impl fmt::Display for StateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateClass::Eigenstate(p) | StateClass::AB(p) => write!(f, "{} ({p})", self.label()),
            _ => f.write_str(self.label()),
        }
    }
}

/// Classifies `atomic` up to a global phase.
pub fn classify_initial_state<T: Real>(atomic: &AtomicState<T>, theta: T) -> StateClass {
    let tol = T::lit(CLASSIFY_TOLERANCE);
    let same_ray = |p: AtomicPreset| {
        let v = preset_atomic_state(p, theta);
        let overlap = v.inner(atomic);
        (T::one() - norm_sqr(overlap)).abs() < tol
    };
    if same_ray(AtomicPreset::Phi4) {
        return StateClass::EigenstateDark;
    }
    for p in [AtomicPreset::Phi1, AtomicPreset::Phi2, AtomicPreset::Phi3] {
        if same_ray(p) {
            return StateClass::Eigenstate(p);
        }
    }
    for p in [AtomicPreset::A, AtomicPreset::B] {
        if same_ray(p) {
            return StateClass::AB(p);
        }
    }
    let p1 = preset_atomic_state(AtomicPreset::Phi1, theta);
    let p2 = preset_atomic_state(AtomicPreset::Phi2, theta);
    let weight = norm_sqr(p1.inner(atomic)) + norm_sqr(p2.inner(atomic));
    if (T::one() - weight).abs() < tol && atomic.inner(atomic) != czero() {
        return StateClass::Phi12Span;
    }
    StateClass::Generic
}
