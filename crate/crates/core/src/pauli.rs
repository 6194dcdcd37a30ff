use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::state::Amplitude;

/// Bob's single-qubit correction. `ZX` is the product `sigma_z sigma_x`.
///
/// The four elements form the Klein four-group once global phases are
/// ignored, which is all a fidelity can see.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliCorrection {
    I,
    Z,
    X,
    ZX,
}

pub type Matrix2 = [[Amplitude; 2]; 2];

impl PauliCorrection {
    pub const ALL: [PauliCorrection; 4] = [Self::I, Self::Z, Self::X, Self::ZX];

    pub fn matrix(self) -> Matrix2 {
        let o = Amplitude::new(1.0, 0.0);
        let z = Amplitude::new(0.0, 0.0);
        match self {
            Self::I => [[o, z], [z, o]],
            Self::Z => [[o, z], [z, -o]],
            Self::X => [[z, o], [o, z]],
            Self::ZX => [[z, o], [-o, z]],
        }
    }

    pub fn apply(self, v: [Amplitude; 2]) -> [Amplitude; 2] {
        match self {
            Self::I => v,
            Self::Z => [v[0], -v[1]],
            Self::X => [v[1], v[0]],
            Self::ZX => [v[1], -v[0]],
        }
    }

    /// `self * other` modulo global phase.
    pub fn compose(self, other: Self) -> Self {
        let (sz, sx) = self.bits();
        let (oz, ox) = other.bits();
        Self::from_bits(sz ^ oz, sx ^ ox)
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Self::I => (false, false),
            Self::Z => (true, false),
            Self::X => (false, true),
            Self::ZX => (true, true),
        }
    }

    fn from_bits(z: bool, x: bool) -> Self {
        match (z, x) {
            (false, false) => Self::I,
            (true, false) => Self::Z,
            (false, true) => Self::X,
            (true, true) => Self::ZX,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::I => "I",
            Self::Z => "Z",
            Self::X => "X",
            Self::ZX => "ZX",
        }
    }
}

impl fmt::Display for PauliCorrection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PauliCorrection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" => Ok(Self::I),
            "Z" => Ok(Self::Z),
            "X" => Ok(Self::X),
            "ZX" | "XZ" => Ok(Self::ZX),
            other => Err(format!("unknown Pauli correction `{other}`")),
        }
    }
}

pub(crate) fn mat_mul(p: &Matrix2, m: &Matrix2) -> Matrix2 {
    let mut out = [[Amplitude::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = p[i][0] * m[0][j] + p[i][1] * m[1][j];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phase_equal(a: &Matrix2, b: &Matrix2) -> bool {
        // a = e^{i t} b for some t
        let tr: Amplitude = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| b[i][j].conj() * a[i][j])
            .sum();
        (tr.norm() - 2.0).abs() < 1e-12
    }

    #[test]
    fn compose_matches_matrix_product() {
        for p in PauliCorrection::ALL {
            for q in PauliCorrection::ALL {
                let prod = mat_mul(&p.matrix(), &q.matrix());
                assert!(phase_equal(&prod, &p.compose(q).matrix()), "{p} * {q}");
            }
        }
    }

    #[test]
    fn every_element_is_an_involution_up_to_phase() {
        for p in PauliCorrection::ALL {
            assert_eq!(p.compose(p), PauliCorrection::I);
            let sq = mat_mul(&p.matrix(), &p.matrix());
            assert!(phase_equal(&sq, &PauliCorrection::I.matrix()));
        }
    }

    #[test]
    fn apply_agrees_with_matrix() {
        let v = [Amplitude::new(0.3, 0.1), Amplitude::new(-0.2, 0.9)];
        for p in PauliCorrection::ALL {
            let m = p.matrix();
            let want = [
                m[0][0] * v[0] + m[0][1] * v[1],
                m[1][0] * v[0] + m[1][1] * v[1],
            ];
            assert_eq!(p.apply(v), want);
        }
    }

    #[test]
    fn parse_round_trip() {
        for p in PauliCorrection::ALL {
            assert_eq!(p.label().parse::<PauliCorrection>().unwrap(), p);
        }
        assert!("Y".parse::<PauliCorrection>().is_err());
    }
}
