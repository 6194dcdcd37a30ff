//! Branch states as linear functions of the unknown input amplitudes.
//!
//! Every step of the protocol (tensoring with the channel, projecting onto a
//! measurement vector) is linear in `(a, b)`. A [`ProbeMap`] therefore stores
//! the branch vector produced by the two probe inputs `|0>` and `|1>`; the
//! unnormalized branch for any input is `scale * (a * zero + b * one)`.
//! Correctability "for all `(a, b)`" becomes an exact test on a 2x2 matrix.

use crate::error::{Error, Result};
use crate::pauli::{mat_mul, Matrix2, PauliCorrection};
use crate::state::{contract, norm_sqr, Amplitude, GhzResource, InfoQubit, PureState};

/// Relative tolerance for deciding that a Bob map is a multiple of a Pauli.
pub const CORRECTABLE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeMap {
    labels: Vec<usize>,
    zero: Vec<Amplitude>,
    one: Vec<Amplitude>,
    scale: f64,
}

impl ProbeMap {
    /// `(a|0> + b|1>)_0 (cos chi|000> + sin chi|111>)_123` as a probe map.
    pub fn initial(resource: &GhzResource) -> Self {
        let ghz = resource.state();
        let z = Amplitude::new(0.0, 0.0);
        let mut zero = vec![z; 16];
        let mut one = vec![z; 16];
        zero[..8].copy_from_slice(ghz.amplitudes());
        one[8..].copy_from_slice(ghz.amplitudes());
        Self {
            labels: vec![0, 1, 2, 3],
            zero,
            one,
            scale: 1.0,
        }
    }

    /// Map from explicit probe images, e.g. a branch written out by hand.
    pub fn from_vectors(
        labels: Vec<usize>,
        zero: Vec<Amplitude>,
        one: Vec<Amplitude>,
    ) -> Result<Self> {
        let expected = 1usize << labels.len();
        for v in [&zero, &one] {
            if v.len() != expected {
                return Err(Error::AmplitudeCount {
                    expected,
                    actual: v.len(),
                });
            }
        }
        // validates labels
        PureState::from_unnormalized(labels.clone(), zero.clone())?;
        Ok(Self::rescaled(labels, zero, one, 1.0))
    }

    fn rescaled(
        labels: Vec<usize>,
        mut zero: Vec<Amplitude>,
        mut one: Vec<Amplitude>,
        scale: f64,
    ) -> Self {
        let norm = norm_sqr(&zero).max(norm_sqr(&one)).sqrt();
        if norm > 0.0 && norm.is_finite() {
            for v in zero.iter_mut().chain(one.iter_mut()) {
                *v /= norm;
            }
            Self {
                labels,
                zero,
                one,
                scale: scale * norm,
            }
        } else {
            let z = Amplitude::new(0.0, 0.0);
            zero.fill(z);
            one.fill(z);
            Self {
                labels,
                zero,
                one,
                scale: 0.0,
            }
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Probe images, rescaled so the larger has unit norm.
    pub fn zero(&self) -> &[Amplitude] {
        &self.zero
    }

    pub fn one(&self) -> &[Amplitude] {
        &self.one
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.scale == 0.0
    }

    /// Contracts `<bra|` on `qubits`; the result lives on the other labels.
    pub fn project(&self, qubits: &[usize], bra: &[Amplitude]) -> Result<ProbeMap> {
        let (labels, zero) = contract(&self.labels, &self.zero, qubits, bra)?;
        let (_, one) = contract(&self.labels, &self.one, qubits, bra)?;
        Ok(Self::rescaled(labels, zero, one, self.scale))
    }

    /// `|ket>_{pair} (x) residual`, the post-measurement state of the full register.
    pub fn embed(pair: (usize, usize), ket: &[Amplitude; 4], residual: &ProbeMap) -> ProbeMap {
        let kron = |v: &[Amplitude]| -> Vec<Amplitude> {
            ket.iter()
                .flat_map(|k| v.iter().map(move |r| k * r))
                .collect()
        };
        let mut labels = vec![pair.0, pair.1];
        labels.extend_from_slice(&residual.labels);
        Self::rescaled(
            labels,
            kron(&residual.zero),
            kron(&residual.one),
            residual.scale,
        )
    }

    /// Unnormalized branch vector for a concrete input.
    pub fn vector_for(&self, info: &InfoQubit) -> Vec<Amplitude> {
        self.zero
            .iter()
            .zip(&self.one)
            .map(|(z, o)| (info.a * z + info.b * o) * self.scale)
            .collect()
    }

    pub fn probability(&self, info: &InfoQubit) -> f64 {
        let raw: f64 = self
            .zero
            .iter()
            .zip(&self.one)
            .map(|(z, o)| (info.a * z + info.b * o).norm_sqr())
            .sum();
        raw * self.scale * self.scale
    }

    /// Probability averaged over Haar-random inputs.
    pub fn mean_probability(&self) -> f64 {
        0.5 * (norm_sqr(&self.zero) + norm_sqr(&self.one)) * self.scale * self.scale
    }

    /// Normalized branch state for `info`, `None` when it cannot occur.
    pub fn state_for(&self, info: &InfoQubit) -> Result<Option<PureState>> {
        if self.is_zero() {
            return Ok(None);
        }
        let v: Vec<Amplitude> = self
            .zero
            .iter()
            .zip(&self.one)
            .map(|(z, o)| info.a * z + info.b * o)
            .collect();
        PureState::from_unnormalized(self.labels.clone(), v)
    }

    /// For a two-qubit map over `(spare, bob)`: Bob's map once the spare qubit
    /// is found in `bra`.
    pub fn bob_map(&self, spare: usize, bra: &[Amplitude; 2]) -> Result<BobMap> {
        if self.labels.len() != 2 {
            return Err(Error::WrongQubitCount {
                expected: 2,
                actual: self.labels.len(),
            });
        }
        let rest = self.project(&[spare], bra)?;
        let m = [[rest.zero[0], rest.one[0]], [rest.zero[1], rest.one[1]]];
        Ok(BobMap {
            label: rest.labels[0],
            m,
            scale: rest.scale,
        })
    }
}

/// Bob's qubit as a linear function of the input: `scale * M (a, b)^T`.
#[derive(Clone, Debug, PartialEq)]
pub struct BobMap {
    label: usize,
    m: Matrix2,
    scale: f64,
}

impl BobMap {
    pub fn matrix(&self) -> &Matrix2 {
        &self.m
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.scale == 0.0
    }

    fn frobenius_sqr(&self) -> f64 {
        self.m.iter().flatten().map(|x| x.norm_sqr()).sum()
    }

    fn trace_with(&self, p: PauliCorrection) -> Amplitude {
        let pm = mat_mul(&p.matrix(), &self.m);
        pm[0][0] + pm[1][1]
    }

    /// The Pauli `P` with `P M` proportional to the identity, if any.
    pub fn exact_correction(&self) -> Option<PauliCorrection> {
        if self.is_zero() {
            return None;
        }
        let norm = self.frobenius_sqr().sqrt();
        PauliCorrection::ALL.into_iter().find(|&p| {
            let pm = mat_mul(&p.matrix(), &self.m);
            let lambda = (pm[0][0] + pm[1][1]) / 2.0;
            let off = (pm[0][0] - lambda).norm_sqr()
                + (pm[1][1] - lambda).norm_sqr()
                + pm[0][1].norm_sqr()
                + pm[1][0].norm_sqr();
            off.sqrt() <= CORRECTABLE_TOL * norm
        })
    }

    /// The input-independent Pauli maximizing the Haar-averaged `p * F`,
    /// i.e. maximizing `|tr(P M)|`. Ties keep the earlier of I, Z, X, ZX.
    pub fn best_correction(&self) -> PauliCorrection {
        let mut best = PauliCorrection::I;
        let mut best_val = f64::NEG_INFINITY;
        for p in PauliCorrection::ALL {
            let v = self.trace_with(p).norm_sqr();
            if v > best_val * (1.0 + 1e-12) + 1e-300 {
                best = p;
                best_val = v;
            }
        }
        best
    }

    fn image(&self, info: &InfoQubit) -> [Amplitude; 2] {
        [
            self.m[0][0] * info.a + self.m[0][1] * info.b,
            self.m[1][0] * info.a + self.m[1][1] * info.b,
        ]
    }

    pub fn probability(&self, info: &InfoQubit) -> f64 {
        let v = self.image(info);
        (v[0].norm_sqr() + v[1].norm_sqr()) * self.scale * self.scale
    }

    /// Fidelity of the corrected state with the input; `None` if the branch
    /// has zero weight for this input.
    pub fn fidelity(&self, info: &InfoQubit, correction: PauliCorrection) -> Option<f64> {
        let v = correction.apply(self.image(info));
        let norm = v[0].norm_sqr() + v[1].norm_sqr();
        if norm <= f64::MIN_POSITIVE || self.is_zero() {
            return None;
        }
        let ip = info.a.conj() * v[0] + info.b.conj() * v[1];
        Some((ip.norm_sqr() / norm).min(1.0))
    }

    /// `p * F` for one input, without dividing by the branch norm.
    pub fn weighted_fidelity(&self, info: &InfoQubit, correction: PauliCorrection) -> f64 {
        let v = correction.apply(self.image(info));
        let ip = info.a.conj() * v[0] + info.b.conj() * v[1];
        ip.norm_sqr() * self.scale * self.scale
    }

    pub fn mean_probability(&self) -> f64 {
        0.5 * self.frobenius_sqr() * self.scale * self.scale
    }

    /// Haar average of `p * F`: `(|tr(PM)|^2 + tr(M^+ M)) / 6`.
    pub fn mean_weighted_fidelity(&self, correction: PauliCorrection) -> f64 {
        (self.trace_with(correction).norm_sqr() + self.frobenius_sqr()) / 6.0
            * self.scale
            * self.scale
    }

    /// Normalized Bob state for `info`.
    pub fn state_for(&self, info: &InfoQubit) -> Result<Option<PureState>> {
        if self.is_zero() {
            return Ok(None);
        }
        PureState::from_unnormalized(vec![self.label], self.image(info).to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::mixed_basis;
    use crate::measure::measure_pair;
    use crate::state::tensor;

    fn c(x: f64) -> Amplitude {
        Amplitude::new(x, 0.0)
    }

    #[test]
    fn probe_map_matches_direct_simulation() {
        let chi = 0.37;
        let resource = GhzResource::new(chi).unwrap();
        let info = InfoQubit::new(Amplitude::new(0.6, 0.0), Amplitude::new(0.0, 0.8)).unwrap();
        let direct = tensor(&info.state(), &resource.state()).unwrap();
        let map = ProbeMap::initial(&resource);
        let basis = mixed_basis(3, 1, chi).unwrap();
        let outcomes = measure_pair(&direct, (0, 2), &basis).unwrap();
        for (k, o) in outcomes.iter().enumerate() {
            let r = map.project(&[0, 2], basis.vector(k)).unwrap();
            assert!((r.probability(&info) - o.probability).abs() < 1e-14);
            let s = r.state_for(&info).unwrap().unwrap();
            let ov = s.overlap(o.collapsed.as_ref().unwrap()).unwrap();
            assert!((ov - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn correctable_map_detected() {
        // a|00> - b|11> over (spare=2, bob=3)
        let z = c(0.0);
        let r = ProbeMap::from_vectors(vec![2, 3], vec![c(1.0), z, z, z], vec![z, z, z, c(-1.0)])
            .unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = r.bob_map(2, &[c(h), c(h)]).unwrap();
        let minus = r.bob_map(2, &[c(h), c(-h)]).unwrap();
        assert_eq!(plus.exact_correction(), Some(PauliCorrection::Z));
        assert_eq!(minus.exact_correction(), Some(PauliCorrection::I));
        assert_eq!(plus.best_correction(), PauliCorrection::Z);
        assert!((plus.mean_probability() - 0.5).abs() < 1e-15);
        let info = InfoQubit::real(0.6, 0.8).unwrap();
        assert!((plus.fidelity(&info, PauliCorrection::Z).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unbalanced_map_is_not_correctable() {
        let z = c(0.0);
        let (cc, ss) = (0.9f64, 0.1f64);
        let r =
            ProbeMap::from_vectors(vec![2, 3], vec![c(cc), z, z, z], vec![z, z, z, c(ss)]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = r.bob_map(2, &[c(h), c(h)]).unwrap();
        assert_eq!(plus.exact_correction(), None);
        assert_eq!(plus.best_correction(), PauliCorrection::I);
    }

    #[test]
    fn closed_form_average_matches_bloch_grid() {
        let m = BobMap {
            label: 3,
            m: [
                [c(0.7), Amplitude::new(0.1, 0.2)],
                [c(-0.3), Amplitude::new(0.0, 0.4)],
            ],
            scale: 0.8,
        };
        // midpoint rule in cos(theta), phi; the integrand is a low-degree polynomial
        let n = 400;
        let mut acc = 0.0;
        for i in 0..n {
            let u = -1.0 + (2.0 * i as f64 + 1.0) / n as f64;
            let theta = u.acos();
            for j in 0..n {
                let phi = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
                acc += m.weighted_fidelity(&InfoQubit::from_bloch(theta, phi), PauliCorrection::X);
            }
        }
        acc /= (n * n) as f64;
        assert!((acc - m.mean_weighted_fidelity(PauliCorrection::X)).abs() < 1e-5);
    }

    #[test]
    fn zero_branch_has_no_state() {
        let z = c(0.0);
        let r = ProbeMap::from_vectors(vec![2, 3], vec![z; 4], vec![z; 4]).unwrap();
        assert!(r.is_zero());
        let info = InfoQubit::real(1.0, 0.0).unwrap();
        assert!(r.state_for(&info).unwrap().is_none());
        assert_eq!(r.probability(&info), 0.0);
    }
}
