//! Projective measurements, Pauli corrections and fidelity on [`PureState`]s.

use serde::Serialize;

use crate::bases::{BellBasis, VnmBasis};
use crate::error::{Error, Result};
use crate::pauli::PauliCorrection;
use crate::state::{contract, norm_sqr, Amplitude, InfoQubit, PureState};

/// One outcome of a complete projective measurement. Outcomes that cannot
/// occur keep their slot with probability zero and no collapsed state.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasurementOutcome {
    pub outcome_index: usize,
    pub probability: f64,
    pub collapsed: Option<PureState>,
}

fn measure_with(
    state: &PureState,
    qubits: &[usize],
    vectors: &[&[Amplitude]],
) -> Result<Vec<MeasurementOutcome>> {
    vectors
        .iter()
        .enumerate()
        .map(|(outcome_index, bra)| {
            let (labels, residual) = contract(state.labels(), state.amplitudes(), qubits, bra)?;
            let probability = norm_sqr(&residual);
            let collapsed = PureState::from_unnormalized(labels, residual)?;
            Ok(MeasurementOutcome {
                outcome_index,
                probability: if collapsed.is_some() {
                    probability
                } else {
                    0.0
                },
                collapsed,
            })
        })
        .collect()
}

/// Measures the ordered pair `qubits` in `basis`; outcome `k` projects onto
/// `basis.vector(k)` with the first label as the left ket bit.
pub fn measure_pair(
    state: &PureState,
    qubits: (usize, usize),
    basis: &BellBasis,
) -> Result<Vec<MeasurementOutcome>> {
    basis.validate()?;
    if qubits.0 == qubits.1 {
        return Err(Error::DuplicateLabel(qubits.0));
    }
    let vectors: Vec<&[Amplitude]> = basis.vectors().iter().map(|v| &v[..]).collect();
    measure_with(state, &[qubits.0, qubits.1], &vectors)
}

pub fn measure_single(
    state: &PureState,
    qubit: usize,
    basis: &VnmBasis,
) -> Result<Vec<MeasurementOutcome>> {
    basis.validate()?;
    let vectors: Vec<&[Amplitude]> = basis.vectors().iter().map(|v| &v[..]).collect();
    measure_with(state, &[qubit], &vectors)
}

fn single_qubit(state: &PureState) -> Result<[Amplitude; 2]> {
    if state.num_qubits() != 1 {
        return Err(Error::WrongQubitCount {
            expected: 1,
            actual: state.num_qubits(),
        });
    }
    Ok([state.amplitude(0), state.amplitude(1)])
}

pub fn apply_pauli(state: &PureState, correction: PauliCorrection) -> Result<PureState> {
    let v = correction.apply(single_qubit(state)?);
    PureState::new(state.labels().to_vec(), v.to_vec())
}

/// `|<I|candidate>|^2`, insensitive to global phase.
pub fn fidelity(candidate: &PureState, target: &InfoQubit) -> Result<f64> {
    let v = single_qubit(candidate)?;
    let ip = target.a.conj() * v[0] + target.b.conj() * v[1];
    Ok(ip.norm_sqr().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{mixed_basis, vnm_basis, VnmKind};
    use crate::state::{make_ghz, tensor, GhzResource};
    use std::f64::consts::{FRAC_PI_4, PI};

    fn composite(a: f64, b: f64, chi: f64) -> PureState {
        let info = InfoQubit::real(a, b).unwrap();
        tensor(&info.state(), &make_ghz(GhzResource::new(chi).unwrap())).unwrap()
    }

    #[test]
    fn original_gbsm_probabilities() {
        let (a, b, chi) = (0.6f64, 0.8f64, 0.35f64);
        let psi = composite(a, b, chi);
        let out = measure_pair(&psi, (0, 1), &mixed_basis(1, 1, chi).unwrap()).unwrap();
        let (c, s) = (chi.cos(), chi.sin());
        let want = [
            a * a * c.powi(4) + b * b * s.powi(4),
            s * s * c * c,
            s * s * c * c,
            a * a * s.powi(4) + b * b * c.powi(4),
        ];
        for (o, w) in out.iter().zip(want) {
            assert!((o.probability - w).abs() < 1e-12);
            assert_eq!(o.collapsed.as_ref().unwrap().labels(), &[2, 3]);
        }
    }

    #[test]
    fn maximal_channel_gives_uniform_outcomes() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = composite(h, h, FRAC_PI_4);
        let out = measure_pair(&psi, (0, 1), &mixed_basis(1, 1, FRAC_PI_4).unwrap()).unwrap();
        for o in out {
            assert!((o.probability - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn product_state_outcomes_are_complete() {
        let s = tensor(
            &PureState::basis(vec![0, 1], 0).unwrap(),
            &PureState::basis(vec![2], 1).unwrap(),
        )
        .unwrap();
        let chi = 0.3;
        let out = measure_pair(&s, (0, 1), &mixed_basis(1, 1, chi).unwrap()).unwrap();
        let total: f64 = out.iter().map(|o| o.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((out[0].probability - chi.cos().powi(2)).abs() < 1e-12);
        assert_eq!(out[2].probability, 0.0);
        assert!(out[2].collapsed.is_none());
    }

    #[test]
    fn pair_measurement_errors() {
        let psi = composite(1.0, 0.0, 0.3);
        let basis = mixed_basis(1, 1, 0.3).unwrap();
        assert!(matches!(
            measure_pair(&psi, (0, 7), &basis),
            Err(Error::UnknownQubitLabel(7))
        ));
        let o = Amplitude::new(1.0, 0.0);
        let z = Amplitude::new(0.0, 0.0);
        let bad = BellBasis::from_vectors([[o, z, z, z]; 4]);
        assert!(matches!(
            measure_pair(&psi, (0, 1), &bad),
            Err(Error::BasisNotOrthonormal { .. })
        ));
    }

    #[test]
    fn plus_minus_on_correctable_pair() {
        // (a|00> + b|11>) on (spare, bob): outcome + leaves |I>, - leaves sigma_z|I>
        let info = InfoQubit::real(0.6, 0.8).unwrap();
        let s = PureState::new(
            vec![2, 3],
            vec![info.a, Amplitude::default(), Amplitude::default(), info.b],
        )
        .unwrap();
        let out = measure_single(&s, 2, &vnm_basis(VnmKind::Plain, 0.1).unwrap()).unwrap();
        assert!((out[0].probability - 0.5).abs() < 1e-12);
        assert!((out[1].probability - 0.5).abs() < 1e-12);
        let plus = out[0].collapsed.as_ref().unwrap();
        assert!((fidelity(plus, &info).unwrap() - 1.0).abs() < 1e-12);
        let minus = out[1].collapsed.as_ref().unwrap();
        let fixed = apply_pauli(minus, PauliCorrection::Z).unwrap();
        assert!((fidelity(&fixed, &info).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_qubit_measurements() {
        let zero = PureState::basis(vec![0], 0).unwrap();
        let out = measure_single(&zero, 0, &vnm_basis(VnmKind::Plain, 0.0).unwrap()).unwrap();
        assert!((out[0].probability - 0.5).abs() < 1e-12);
        assert!(out[0].collapsed.as_ref().unwrap().num_qubits() == 0);

        let chi = PI / 6.0;
        let g = vnm_basis(VnmKind::Generalized(1), chi).unwrap();
        let out = measure_single(&zero, 0, &g).unwrap();
        assert!((out[0].probability - 0.75).abs() < 1e-12);
        assert!((out[1].probability - 0.25).abs() < 1e-12);
    }

    #[test]
    fn pauli_corrections_restore_info() {
        let info = InfoQubit::real(0.6, 0.8).unwrap();
        let flipped = PureState::new(vec![3], vec![info.b, info.a]).unwrap();
        let fixed = apply_pauli(&flipped, PauliCorrection::X).unwrap();
        assert!((fidelity(&fixed, &info).unwrap() - 1.0).abs() < 1e-12);

        let s = info.state();
        let twice = apply_pauli(
            &apply_pauli(&s, PauliCorrection::ZX).unwrap(),
            PauliCorrection::ZX,
        )
        .unwrap();
        assert!((s.overlap(&twice).unwrap() - 1.0).abs() < 1e-12);
        assert!(apply_pauli(&composite(1.0, 0.0, 0.2), PauliCorrection::X).is_err());
    }

    #[test]
    fn fidelity_extremes() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let info = InfoQubit::real(h, h).unwrap();
        assert!((fidelity(&info.state(), &info).unwrap() - 1.0).abs() < 1e-12);
        let orth = PureState::new(
            vec![0],
            vec![Amplitude::new(h, 0.0), Amplitude::new(-h, 0.0)],
        )
        .unwrap();
        assert!(fidelity(&orth, &info).unwrap() < 1e-15);
        // sigma_z|I> against |I> has fidelity (|a|^2 - |b|^2)^2, zero for a = b
        let z = apply_pauli(&info.state(), PauliCorrection::Z).unwrap();
        assert!(fidelity(&z, &info).unwrap() < 1e-15);
    }
}
