//! Generalized Bell bases and single-qubit von Neumann bases.
//!
//! For exponent `r` and channel angle `chi` the Bell vectors are
//!
//! ```text
//! B(r,0) = N_r [ cos^r|00> + sin^r|11> ]
//! B(r,1) = N_r [ sin^r|00> - cos^r|11> ]
//! B(r,2) = N_r [ cos^r|01> + sin^r|10> ]
//! B(r,3) = N_r [ sin^r|01> - cos^r|10> ]
//! ```
//!
//! with `N_r = (cos^2r + sin^2r)^(-1/2)`. Sectors `k in {0,1}` and `k in {2,3}`
//! have disjoint support, so each sector may use its own exponent and the four
//! vectors stay orthonormal.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{checked_chi, Amplitude, INVARIANT_TOL};

/// `N_r`. Overflows to infinity for very large `r` at small `chi`; the
/// basis constructors never multiply by it directly.
pub fn normalization(r: u64, chi: f64) -> f64 {
    let (s, c) = chi.sin_cos();
    let (big, small) = if c >= s { (c, s) } else { (s, c) };
    let ratio = (small / big).powf(2.0 * r as f64);
    (big.powf(r as f64) * (1.0 + ratio).sqrt()).recip()
}

/// `(N_r cos^r chi, N_r sin^r chi)`, computed without forming `N_r`.
pub fn weights(r: u64, chi: f64) -> (f64, f64) {
    let (s, c) = chi.sin_cos();
    if s <= c {
        let u = (s / c).powf(r as f64);
        let d = u.hypot(1.0);
        (d.recip(), u / d)
    } else {
        let u = (c / s).powf(r as f64);
        let d = u.hypot(1.0);
        (u / d, d.recip())
    }
}

fn check_exponent(r: u64) -> Result<u64> {
    if r == 0 {
        return Err(Error::OutOfRange {
            what: "exponent r",
            value: 0.0,
            range: "r >= 1",
        });
    }
    Ok(r)
}

fn re(x: f64) -> Amplitude {
    Amplitude::new(x, 0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BellVector {
    pub r: u64,
    pub k: u8,
    pub chi: f64,
    pub amps: [Amplitude; 4],
}

pub fn bell_vector(r: u64, k: u8, chi: f64) -> Result<BellVector> {
    let r = check_exponent(r)?;
    let chi = checked_chi(chi)?;
    let (cw, sw) = weights(r, chi);
    let z = re(0.0);
    let amps = match k {
        0 => [re(cw), z, z, re(sw)],
        1 => [re(sw), z, z, re(-cw)],
        2 => [z, re(cw), re(sw), z],
        3 => [z, re(sw), re(-cw), z],
        _ => {
            return Err(Error::OutOfRange {
                what: "sector index k",
                value: f64::from(k),
                range: "0..=3",
            })
        }
    };
    Ok(BellVector { r, k, chi, amps })
}

/// Four two-qubit vectors used for a pair measurement. Bases built with
/// [`mixed_basis`] carry their exponents; [`BellBasis::from_vectors`] accepts
/// anything and leaves validation to the measurement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BellBasis {
    r_diag: u64,
    r_off: u64,
    chi: f64,
    vectors: [[Amplitude; 4]; 4],
}

pub fn mixed_basis(r_diag: u64, r_off: u64, chi: f64) -> Result<BellBasis> {
    let v = |r, k| bell_vector(r, k, chi).map(|b| b.amps);
    Ok(BellBasis {
        r_diag,
        r_off,
        chi: checked_chi(chi)?,
        vectors: [v(r_diag, 0)?, v(r_diag, 1)?, v(r_off, 2)?, v(r_off, 3)?],
    })
}

impl BellBasis {
    pub fn from_vectors(vectors: [[Amplitude; 4]; 4]) -> Self {
        Self {
            r_diag: 0,
            r_off: 0,
            chi: f64::NAN,
            vectors,
        }
    }

    pub fn exponents(&self) -> (u64, u64) {
        (self.r_diag, self.r_off)
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn vectors(&self) -> &[[Amplitude; 4]; 4] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &[Amplitude; 4] {
        &self.vectors[k]
    }

    pub fn gram_deviation(&self) -> f64 {
        gram_deviation(&self.vectors)
    }

    /// Largest entry of `sum_k |B_k><B_k| - 1`.
    pub fn completeness_deviation(&self) -> f64 {
        completeness_deviation(&self.vectors)
    }

    pub fn validate(&self) -> Result<()> {
        validate(&self.vectors)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VnmKind {
    /// Eigenbasis of sigma_x.
    Plain,
    /// `C(r,0) = N_r[cos^r|0> + sin^r|1>]`, `C(r,1) = N_r[sin^r|0> - cos^r|1>]`.
    Generalized(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VnmBasis {
    kind: VnmKind,
    chi: f64,
    vectors: [[Amplitude; 2]; 2],
}

pub fn vnm_basis(kind: VnmKind, chi: f64) -> Result<VnmBasis> {
    let chi = checked_chi(chi)?;
    let vectors = match kind {
        VnmKind::Plain => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            [[re(h), re(h)], [re(h), re(-h)]]
        }
        VnmKind::Generalized(r) => {
            let (cw, sw) = weights(check_exponent(r)?, chi);
            [[re(cw), re(sw)], [re(sw), re(-cw)]]
        }
    };
    Ok(VnmBasis { kind, chi, vectors })
}

impl VnmBasis {
    pub fn from_vectors(vectors: [[Amplitude; 2]; 2]) -> Self {
        Self {
            kind: VnmKind::Plain,
            chi: f64::NAN,
            vectors,
        }
    }

    pub fn kind(&self) -> VnmKind {
        self.kind
    }

    pub fn vectors(&self) -> &[[Amplitude; 2]; 2] {
        &self.vectors
    }

    pub fn gram_deviation(&self) -> f64 {
        gram_deviation(&self.vectors)
    }

    pub fn validate(&self) -> Result<()> {
        validate(&self.vectors)
    }
}

fn gram_deviation<const D: usize>(vectors: &[[Amplitude; D]]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate() {
            let g: Amplitude = u.iter().zip(v).map(|(x, y)| x.conj() * y).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - want).norm());
        }
    }
    worst
}

fn completeness_deviation<const D: usize>(vectors: &[[Amplitude; D]]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..D {
        for j in 0..D {
            let sum: Amplitude = vectors.iter().map(|v| v[i] * v[j].conj()).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((sum - want).norm());
        }
    }
    worst
}

fn validate<const D: usize>(vectors: &[[Amplitude; D]]) -> Result<()> {
    let deviation = gram_deviation(vectors);
    if deviation > INVARIANT_TOL || !deviation.is_finite() {
        return Err(Error::BasisNotOrthonormal { deviation });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

    #[test]
    fn normalization_values() {
        for chi in [0.0, 0.1, 0.5, FRAC_PI_4] {
            assert!((normalization(1, chi) - 1.0).abs() < 1e-15);
        }
        assert!((normalization(3, FRAC_PI_4) - 2.0).abs() < 1e-12);
        assert!((normalization(9, FRAC_PI_4) - 16.0).abs() < 1e-10);
    }

    #[test]
    fn normalization_is_at_least_one() {
        for r in [1, 2, 3, 9, 27] {
            for i in 0..=50 {
                let chi = FRAC_PI_4 * f64::from(i) / 50.0;
                let n = normalization(r, chi);
                assert!(n >= 1.0 - 1e-15);
                if r > 1 && i > 0 && i < 50 {
                    assert!(n > 1.0 + 1e-12, "r={r} chi={chi}");
                }
            }
        }
    }

    #[test]
    fn weights_agree_with_direct_formula() {
        for r in [1, 3, 9] {
            for chi in [0.05, 0.3, 0.7] {
                let n = normalization(r, chi);
                let (cw, sw) = weights(r, chi);
                assert!((cw - n * chi.cos().powi(r as i32)).abs() < 1e-13);
                assert!((sw - n * chi.sin().powi(r as i32)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn maximal_case_reduces_to_standard_bell_states() {
        let phi_plus = bell_vector(1, 0, FRAC_PI_4).unwrap();
        let want = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2];
        for (a, w) in phi_plus.amps.iter().zip(want) {
            assert!((a.re - w).abs() < 1e-15);
        }
        let singlet = bell_vector(1, 3, FRAC_PI_4).unwrap();
        let want = [0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0];
        for (a, w) in singlet.amps.iter().zip(want) {
            assert!((a.re - w).abs() < 1e-15);
        }
    }

    #[test]
    fn cubic_vector_at_pi_over_six() {
        let chi = PI / 6.0;
        let v = bell_vector(3, 1, chi).unwrap();
        let n3 = (27.0 / 64.0 + 1.0 / 64.0f64).powf(-0.5);
        assert!((v.amps[0].re - n3 * chi.sin().powi(3)).abs() < 1e-14);
        assert!((v.amps[3].re + n3 * chi.cos().powi(3)).abs() < 1e-14);
        assert_eq!(v.amps[1].re, 0.0);
        assert_eq!(v.amps[2].re, 0.0);
    }

    #[test]
    fn sector_supports_are_disjoint() {
        for k in 0..4u8 {
            let v = bell_vector(9, k, 0.4).unwrap();
            let support: Vec<usize> = (0..4).filter(|&i| v.amps[i].norm() > 0.0).collect();
            if k < 2 {
                assert!(support.iter().all(|i| *i == 0 || *i == 3));
            } else {
                assert!(support.iter().all(|i| *i == 1 || *i == 2));
            }
        }
    }

    #[test]
    fn bell_vector_errors() {
        assert!(bell_vector(0, 0, 0.3).is_err());
        assert!(bell_vector(1, 4, 0.3).is_err());
        assert!(bell_vector(1, 0, 1.0).is_err());
    }

    #[test]
    fn uniform_mixed_basis_is_plain_generalized_basis() {
        let b = mixed_basis(1, 1, 0.3).unwrap();
        for k in 0..4 {
            assert_eq!(b.vector(k), &bell_vector(1, k as u8, 0.3).unwrap().amps);
        }
    }

    #[test]
    fn mixed_basis_gram_and_completeness() {
        let b = mixed_basis(3, 1, PI / 6.0).unwrap();
        assert!(b.gram_deviation() < 1e-12);
        let b = mixed_basis(9, 3, 0.5).unwrap();
        assert!(b.completeness_deviation() < 1e-12);
    }

    #[test]
    fn mixed_basis_grid_is_orthonormal() {
        let exps = [1, 3, 9, 27];
        for &rd in &exps {
            for &ro in &exps {
                for i in 0..50 {
                    let chi = FRAC_PI_4 * f64::from(i) / 49.0;
                    let b = mixed_basis(rd, ro, chi).unwrap();
                    assert!(b.gram_deviation() < 1e-12, "({rd},{ro}) chi={chi}");
                }
            }
        }
    }

    #[test]
    fn bell_vectors_at_pi_over_four_ignore_exponent() {
        for r in [1, 3, 9, 27, 81] {
            for k in 0..4u8 {
                let v = bell_vector(r, k, FRAC_PI_4).unwrap();
                let w = bell_vector(1, k, FRAC_PI_4).unwrap();
                let ov: Amplitude = v.amps.iter().zip(&w.amps).map(|(x, y)| x.conj() * y).sum();
                assert!((ov.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn vnm_bases() {
        let plain = vnm_basis(VnmKind::Plain, 0.2).unwrap();
        assert!((plain.vectors()[1][1].re + FRAC_1_SQRT_2).abs() < 1e-15);
        let g = vnm_basis(VnmKind::Generalized(1), FRAC_PI_4).unwrap();
        for (u, v) in g.vectors().iter().zip(plain.vectors()) {
            for (x, y) in u.iter().zip(v) {
                assert!((x - y).norm() < 1e-15);
            }
        }
        let g3 = vnm_basis(VnmKind::Generalized(3), PI / 6.0).unwrap();
        let ip: Amplitude = g3.vectors()[0]
            .iter()
            .zip(&g3.vectors()[1])
            .map(|(x, y)| x.conj() * y)
            .sum();
        assert!(ip.norm() < 1e-12);
        assert!(vnm_basis(VnmKind::Generalized(0), 0.2).is_err());
    }

    #[test]
    fn custom_basis_fails_validation() {
        let o = Amplitude::new(1.0, 0.0);
        let z = Amplitude::new(0.0, 0.0);
        let b = BellBasis::from_vectors([[o, z, z, z], [o, z, z, z], [z, z, o, z], [z, z, z, o]]);
        assert!(matches!(
            b.validate(),
            Err(Error::BasisNotOrthonormal { .. })
        ));
    }
}
