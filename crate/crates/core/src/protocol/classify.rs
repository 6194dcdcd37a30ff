use crate::bases::{vnm_basis, VnmBasis, VnmKind};
use crate::error::{Error, Result};
use crate::pauli::PauliCorrection;
use crate::probe::ProbeMap;
use crate::state::{InfoQubit, PureState};

/// Verdict on a GBSM outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Bob's correction for the spare-qubit results `+` and `-`.
    Success {
        plus: PauliCorrection,
        minus: PauliCorrection,
    },
    Failure,
}

impl Classification {
    pub fn is_success(&self) -> bool {
        matches!(self, Self::Success { .. })
    }
}

/// Exact corrections for each outcome of `vnm` on the spare qubit.
pub(crate) fn vnm_corrections(
    residual: &ProbeMap,
    spare: usize,
    vnm: &VnmBasis,
) -> Result<[Option<PauliCorrection>; 2]> {
    let [v0, v1] = vnm.vectors();
    Ok([
        residual.bob_map(spare, v0)?.exact_correction(),
        residual.bob_map(spare, v1)?.exact_correction(),
    ])
}

/// Classifies the `(spare, bob)` residual of a GBSM outcome. Success requires
/// a Pauli for both sigma_x results that restores every input.
pub fn classify(residual: &ProbeMap, spare: usize) -> Result<Classification> {
    if residual.is_zero() {
        return Ok(Classification::Failure);
    }
    if !residual.labels().contains(&spare) {
        return Err(Error::UnknownQubitLabel(spare));
    }
    // chi is irrelevant for the plain basis
    let plain = vnm_basis(VnmKind::Plain, 0.0)?;
    Ok(match vnm_corrections(residual, spare, &plain)? {
        [Some(plus), Some(minus)] => Classification::Success { plus, minus },
        _ => Classification::Failure,
    })
}

/// The Pauli restoring `info` from Bob's collapsed qubit, found by direct
/// inner products. When several work (e.g. `b = 0`) the first of
/// I, Z, X, ZX is returned.
pub fn derive_correction(
    collapsed: &PureState,
    info: &InfoQubit,
) -> Result<Option<PauliCorrection>> {
    if collapsed.num_qubits() != 1 {
        return Err(Error::WrongQubitCount {
            expected: 1,
            actual: collapsed.num_qubits(),
        });
    }
    let v = [collapsed.amplitude(0), collapsed.amplitude(1)];
    Ok(PauliCorrection::ALL.into_iter().find(|p| {
        let w = p.apply(v);
        let ip = info.a.conj() * w[0] + info.b.conj() * w[1];
        (ip.norm() - 1.0).abs() <= 1e-10
    }))
}
