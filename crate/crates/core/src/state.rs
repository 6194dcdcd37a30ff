//! Dense pure states over small labeled qubit registers.
//!
//! Amplitude indices are big-endian over the register's label order: for
//! labels `[0, 1, 2, 3]` the amplitude at index `0b0110` belongs to the ket
//! `|0110>_{0123}`, read left to right exactly as written.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type Amplitude = Complex64;

/// Tolerance for internal invariants (norms, completeness).
pub const INVARIANT_TOL: f64 = 1e-12;
/// Tolerance for validating caller-supplied amplitudes.
pub const INPUT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_QUBITS: usize = 8;

/// Register capacity, overridable through `PQT_MAX_QUBITS`.
pub fn max_qubits() -> usize {
    std::env::var("PQT_MAX_QUBITS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PureState {
    labels: Vec<usize>,
    amps: Vec<Amplitude>,
}

impl PureState {
    /// Validated constructor. The norm must be within [`INPUT_TOL`] of one;
    /// the stored amplitudes are then rescaled to unit norm.
    pub fn new(labels: Vec<usize>, amps: Vec<Amplitude>) -> Result<Self> {
        check_register(&labels, &amps)?;
        let norm_sqr = norm_sqr(&amps);
        if (norm_sqr - 1.0).abs() > INPUT_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self::rescaled(labels, amps, norm_sqr))
    }

    /// Normalizes an arbitrary vector. Returns `Ok(None)` for the zero vector.
    pub fn from_unnormalized(labels: Vec<usize>, amps: Vec<Amplitude>) -> Result<Option<Self>> {
        check_register(&labels, &amps)?;
        let norm_sqr = norm_sqr(&amps);
        if norm_sqr <= f64::MIN_POSITIVE || !norm_sqr.is_finite() {
            return Ok(None);
        }
        Ok(Some(Self::rescaled(labels, amps, norm_sqr)))
    }

    /// Computational basis state `|index>` over `labels`.
    pub fn basis(labels: Vec<usize>, index: usize) -> Result<Self> {
        let dim = 1usize << labels.len();
        if index >= dim {
            return Err(Error::OutOfRange {
                what: "basis index",
                value: index as f64,
                range: "[0, 2^n)",
            });
        }
        let mut amps = vec![Amplitude::new(0.0, 0.0); dim];
        amps[index] = Amplitude::new(1.0, 0.0);
        Self::new(labels, amps)
    }

    fn rescaled(labels: Vec<usize>, mut amps: Vec<Amplitude>, norm_sqr: f64) -> Self {
        let scale = norm_sqr.sqrt().recip();
        for a in &mut amps {
            *a *= scale;
        }
        Self { labels, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Amplitude {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// Register position of `label`.
    pub fn position(&self, label: usize) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::UnknownQubitLabel(label))
    }

    /// The same state with its qubits permuted into `labels` order.
    pub fn reorder(&self, labels: &[usize]) -> Result<Self> {
        if labels.len() != self.labels.len() {
            return Err(Error::WrongQubitCount {
                expected: self.labels.len(),
                actual: labels.len(),
            });
        }
        let positions = labels
            .iter()
            .map(|&l| self.position(l))
            .collect::<Result<Vec<_>>>()?;
        check_unique(labels)?;
        let n = labels.len();
        let mut amps = vec![Amplitude::new(0.0, 0.0); self.amps.len()];
        for (new_index, slot) in amps.iter_mut().enumerate() {
            let mut old_index = 0;
            for (new_pos, &old_pos) in positions.iter().enumerate() {
                let bit = (new_index >> (n - 1 - new_pos)) & 1;
                old_index |= bit << (n - 1 - old_pos);
            }
            *slot = self.amps[old_index];
        }
        Ok(Self {
            labels: labels.to_vec(),
            amps,
        })
    }

    /// `<self|other>`, aligning `other` to this register's label order.
    pub fn inner(&self, other: &PureState) -> Result<Amplitude> {
        let other = other.reorder(&self.labels)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| x.conj() * y)
            .sum())
    }

    /// `|<self|other>|^2`.
    pub fn overlap(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = Amplitude::from_polar(1.0, theta);
        Self {
            labels: self.labels.clone(),
            amps: self.amps.iter().map(|a| a * phase).collect(),
        }
    }
}

pub(crate) fn norm_sqr(amps: &[Amplitude]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

fn check_unique(labels: &[usize]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateLabel(*l));
        }
    }
    Ok(())
}

fn check_register(labels: &[usize], amps: &[Amplitude]) -> Result<()> {
    let max = max_qubits();
    if labels.len() > max {
        return Err(Error::CapacityExceeded {
            requested: labels.len(),
            max,
        });
    }
    check_unique(labels)?;
    let expected = 1usize << labels.len();
    if amps.len() != expected {
        return Err(Error::AmplitudeCount {
            expected,
            actual: amps.len(),
        });
    }
    if let Some(i) = amps
        .iter()
        .position(|a| !a.re.is_finite() || !a.im.is_finite())
    {
        return Err(Error::NonFinite(i));
    }
    Ok(())
}

/// The unknown state `a|0> + b|1>` held by the sender on qubit 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InfoQubit {
    pub a: Amplitude,
    pub b: Amplitude,
}

impl InfoQubit {
    pub fn new(a: Amplitude, b: Amplitude) -> Result<Self> {
        let norm_sqr = a.norm_sqr() + b.norm_sqr();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > INPUT_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let s = norm_sqr.sqrt().recip();
        Ok(Self { a: a * s, b: b * s })
    }

    pub fn real(a: f64, b: f64) -> Result<Self> {
        Self::new(Amplitude::new(a, 0.0), Amplitude::new(b, 0.0))
    }

    /// Bloch-sphere parameterization `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        Self {
            a: Amplitude::new((theta / 2.0).cos(), 0.0),
            b: Amplitude::from_polar((theta / 2.0).sin(), phi),
        }
    }

    pub fn state(&self) -> PureState {
        PureState {
            labels: vec![0],
            amps: vec![self.a, self.b],
        }
    }

    /// The same amplitudes placed on an arbitrary single label.
    pub fn state_on(&self, label: usize) -> PureState {
        PureState {
            labels: vec![label],
            amps: vec![self.a, self.b],
        }
    }
}

pub fn make_info_state(a: Amplitude, b: Amplitude) -> Result<PureState> {
    Ok(InfoQubit::new(a, b)?.state())
}

/// The channel `cos(chi)|000> + sin(chi)|111>` on qubits 1, 2, 3.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GhzResource {
    chi: f64,
}

impl GhzResource {
    pub fn new(chi: f64) -> Result<Self> {
        Ok(Self {
            chi: checked_chi(chi)?,
        })
    }

    /// Resource with the given bipartite concurrence `C = sin(2 chi)`.
    pub fn from_concurrence(c: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::OutOfRange {
                what: "concurrence",
                value: c,
                range: "[0, 1]",
            });
        }
        Self::new(c.asin() / 2.0)
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn concurrence(&self) -> f64 {
        (2.0 * self.chi).sin()
    }

    pub fn state(&self) -> PureState {
        let mut amps = vec![Amplitude::new(0.0, 0.0); 8];
        amps[0b000] = Amplitude::new(self.chi.cos(), 0.0);
        amps[0b111] = Amplitude::new(self.chi.sin(), 0.0);
        PureState {
            labels: vec![1, 2, 3],
            amps,
        }
    }
}

pub fn make_ghz(resource: GhzResource) -> PureState {
    resource.state()
}

/// Channel angles may overshoot pi/4 by rounding only.
pub(crate) fn checked_chi(chi: f64) -> Result<f64> {
    if !chi.is_finite() || !(0.0..=FRAC_PI_4 + 1e-12).contains(&chi) {
        return Err(Error::OutOfRange {
            what: "chi",
            value: chi,
            range: "[0, pi/4]",
        });
    }
    Ok(chi.min(FRAC_PI_4))
}

/// Kronecker product; labels are concatenated left then right.
pub fn tensor(left: &PureState, right: &PureState) -> Result<PureState> {
    let requested = left.num_qubits() + right.num_qubits();
    let max = max_qubits();
    if requested > max {
        return Err(Error::CapacityExceeded { requested, max });
    }
    let mut labels = left.labels.clone();
    labels.extend_from_slice(&right.labels);
    check_unique(&labels)?;
    let amps = left
        .amps
        .iter()
        .flat_map(|l| right.amps.iter().map(move |r| l * r))
        .collect();
    Ok(PureState { labels, amps })
}

/// Contracts `<bra|` on the `measured` qubits (in that order) and returns the
/// unnormalized residual over the remaining labels in register order.
pub(crate) fn contract(
    labels: &[usize],
    amps: &[Amplitude],
    measured: &[usize],
    bra: &[Amplitude],
) -> Result<(Vec<usize>, Vec<Amplitude>)> {
    debug_assert_eq!(bra.len(), 1 << measured.len());
    let n = labels.len();
    let positions = measured
        .iter()
        .map(|&m| {
            labels
                .iter()
                .position(|&l| l == m)
                .ok_or(Error::UnknownQubitLabel(m))
        })
        .collect::<Result<Vec<_>>>()?;
    check_unique(measured)?;
    let rest: Vec<usize> = (0..n).filter(|p| !positions.contains(p)).collect();
    let rest_labels = rest.iter().map(|&p| labels[p]).collect();
    let mut out = vec![Amplitude::new(0.0, 0.0); 1 << rest.len()];
    for (index, amp) in amps.iter().enumerate() {
        if amp.re == 0.0 && amp.im == 0.0 {
            continue;
        }
        let bit = |p: usize| (index >> (n - 1 - p)) & 1;
        let sub = positions.iter().fold(0, |acc, &p| (acc << 1) | bit(p));
        let res = rest.iter().fold(0, |acc, &p| (acc << 1) | bit(p));
        out[res] += bra[sub].conj() * amp;
    }
    Ok((rest_labels, out))
}
