//! Closed-form success probabilities, evaluated without the simulator.

pub mod reference;

use serde::Serialize;

use crate::error::{Error, Result};

/// Deepest attempt index with a closed form.
pub const MAX_CLOSED_FORM_DEPTH: usize = 3;

/// Smallest angle accepted by [`trig_identity_check`].
pub const MIN_CHI: f64 = 1e-3;

/// Bipartite concurrence `C = sin 2chi` of the channel.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct Concurrence(f64);

impl Concurrence {
    pub fn new(c: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::OutOfRange {
                what: "concurrence",
                value: c,
                range: "[0, 1]",
            });
        }
        Ok(Self(c))
    }

    pub fn from_chi(chi: f64) -> Result<Self> {
        let chi = crate::state::checked_chi(chi)?;
        Ok(Self((2.0 * chi).sin().clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn chi(self) -> f64 {
        0.5 * self.0.asin()
    }
}

fn depth_check(n: usize) -> Result<()> {
    if n > MAX_CLOSED_FORM_DEPTH {
        return Err(Error::UnsupportedDepth(n));
    }
    Ok(())
}

/// Cumulative success probability after attempts `0..=n`, as a polynomial
/// expression in `C`.
pub fn p_success(n: usize, c: Concurrence) -> Result<f64> {
    depth_check(n)?;
    let c = c.value();
    let d = 4.0 - 3.0 * c * c;
    let e = 4.0 * d * d - 3.0 * c.powi(6);
    let mut p = c * c / 2.0;
    if n >= 1 {
        p += c.powi(4) / 8.0 + c.powi(6) / (8.0 * d);
    }
    if n >= 2 {
        p += c.powi(6) / 32.0
            + c.powi(8) / (32.0 * d)
            + c.powi(12) / (32.0 * d.powi(3))
            + c.powi(18) / (32.0 * d.powi(3) * e);
    }
    if n >= 3 {
        p += reference::third_retry_terms(c).iter().sum::<f64>();
    }
    Ok(p)
}

/// The same cumulative probability written in `cos chi` and `sin chi`.
pub fn p_success_trig(n: usize, chi: f64) -> Result<f64> {
    depth_check(n)?;
    let chi = crate::state::checked_chi(chi)?;
    let mut p = 2.0 * (chi.sin() * chi.cos()).powi(2);
    for k in 1..=n {
        p += trig_increment(k, chi);
    }
    Ok(p)
}

fn trig_increment(n: usize, chi: f64) -> f64 {
    let (c, s) = (chi.cos(), chi.sin());
    let cs = c * s;
    let n3 = 1.0 / (c.powi(6) + s.powi(6));
    let n9 = 1.0 / (c.powi(18) + s.powi(18));
    let n27 = 1.0 / (c.powi(54) + s.powi(54));
    match n {
        1 => 2.0 * (c.powi(6) * s.powi(6) * n3 + cs.powi(4)),
        2 => {
            2.0 * (n3 * n3 * n9 * cs.powi(18)
                + n3.powi(3) * cs.powi(12)
                + n3 * cs.powi(8)
                + cs.powi(6))
        }
        3 => {
            2.0 * (cs.powi(8)
                + n3 * cs.powi(10)
                + n3.powi(3) * cs.powi(14)
                + n3.powi(5) * cs.powi(18)
                + n3 * n3 * n9 * n9 * n27 * cs.powi(54)
                + n3.powi(4) * n9 * cs.powi(24)
                + n3 * n3 * n9.powi(3) * cs.powi(36)
                + n3 * n3 * n9 * cs.powi(20))
        }
        _ => 0.0,
    }
}

/// `p_success(n) - p_success(n - 1)`.
pub fn increment(n: usize, c: Concurrence) -> Result<f64> {
    if n == 0 {
        return Err(Error::UnsupportedDepth(0));
    }
    Ok(p_success(n, c)? - p_success(n - 1, c)?)
}

/// The increment summed from the per-branch probabilities of attempt `n`.
pub fn increment_direct(n: usize, c: Concurrence) -> Result<f64> {
    depth_check(n)?;
    let chi = c.chi();
    Ok(match n {
        0 => return Err(Error::UnsupportedDepth(0)),
        1 => reference::retry_increment_after_0(chi) + reference::retry_increment_after_3(chi),
        2 => reference::second_retry_table()
            .iter()
            .filter(|row| row.unit)
            .map(|row| (row.probability)(1.0, 0.0, chi))
            .sum(),
        _ => trig_increment(3, chi),
    })
}

/// `(trig form, polynomial form)` of the cumulative probability after one
/// repetition.
pub fn trig_identity_check(chi: f64) -> Result<(f64, f64)> {
    if !(MIN_CHI..=std::f64::consts::FRAC_PI_4 + 1e-12).contains(&chi) {
        return Err(Error::OutOfRange {
            what: "chi",
            value: chi,
            range: "[1e-3, pi/4]",
        });
    }
    let (c, s) = (chi.cos(), chi.sin());
    let trig = 2.0 * c.powi(6) * s.powi(6) / (c.powi(6) + s.powi(6))
        + 2.0 * c.powi(4) * s.powi(4)
        + 2.0 * c * c * s * s;
    Ok((trig, p_success(1, Concurrence::from_chi(chi)?)?))
}

/// Fidelity `(2 + C) / 3` of standard teleportation over the same channel.
pub fn baseline_fidelity(c: Concurrence) -> f64 {
    (2.0 + c.value()) / 3.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuccessCurve {
    pub attempt: usize,
    /// `(C, probability)` pairs.
    pub samples: Vec<(f64, f64)>,
}

impl SuccessCurve {
    pub fn analytic(attempt: usize, grid: &[f64]) -> Result<Self> {
        let samples = grid
            .iter()
            .map(|&c| Ok((c, p_success(attempt, Concurrence::new(c)?)?)))
            .collect::<Result<_>>()?;
        Ok(Self { attempt, samples })
    }
}

/// `points` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..points)
            .map(|i| {
                if i + 1 == points {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (points - 1) as f64
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_6};

    fn conc(c: f64) -> Concurrence {
        Concurrence::new(c).unwrap()
    }

    #[test]
    fn maximal_channel_values() {
        for (n, want) in [0.5, 0.75, 0.875, 0.9375].into_iter().enumerate() {
            assert!((p_success(n, conc(1.0)).unwrap() - want).abs() < 1e-15);
        }
    }

    #[test]
    fn product_channel_never_succeeds() {
        for n in 0..=3 {
            assert_eq!(p_success(n, conc(0.0)).unwrap(), 0.0);
        }
        assert!(increment(2, conc(0.0)).unwrap().abs() < 1e-300);
    }

    #[test]
    fn depth_limit() {
        assert!(matches!(
            p_success(4, conc(0.5)),
            Err(Error::UnsupportedDepth(4))
        ));
        assert!(Concurrence::new(1.5).is_err());
    }

    #[test]
    fn polynomial_and_trig_forms_agree() {
        for i in 1..=100 {
            let chi = FRAC_PI_4 * i as f64 / 100.0;
            let c = Concurrence::from_chi(chi).unwrap();
            for n in 0..=3 {
                let a = p_success(n, c).unwrap();
                let b = p_success_trig(n, chi).unwrap();
                assert!((a - b).abs() < 1e-12, "n={n} chi={chi}");
            }
        }
    }

    #[test]
    fn increments_agree() {
        for c in linspace(0.01, 1.0, 50) {
            for n in 1..=3 {
                let a = increment(n, conc(c)).unwrap();
                let b = increment_direct(n, conc(c)).unwrap();
                assert!((a - b).abs() < 1e-12, "n={n} c={c}");
            }
        }
        let at_max = increment(1, conc(1.0)).unwrap();
        assert!((at_max - 0.25).abs() < 1e-15);
    }

    #[test]
    fn identity_check_examples() {
        let (t, p) = trig_identity_check(FRAC_PI_4).unwrap();
        assert!((t - 0.75).abs() < 1e-12 && (p - 0.75).abs() < 1e-12);
        let (t, p) = trig_identity_check(FRAC_PI_6).unwrap();
        assert!((t - p).abs() < 1e-12);
        let (t, p) = trig_identity_check(1e-3).unwrap();
        assert!(t < 1e-5 && p < 1e-5);
        assert!(trig_identity_check(1e-4).is_err());
    }

    #[test]
    fn baseline() {
        assert_eq!(baseline_fidelity(conc(1.0)), 1.0);
        assert!((baseline_fidelity(conc(0.0)) - 2.0 / 3.0).abs() < 1e-15);
        assert!((baseline_fidelity(conc(0.5)) - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn concurrence_round_trip() {
        for i in 0..=50 {
            let chi = MIN_CHI + (FRAC_PI_4 - MIN_CHI) * i as f64 / 50.0;
            let c = Concurrence::from_chi(chi).unwrap();
            assert!(((2.0 * c.chi()).sin() - c.value()).abs() < 1e-12);
        }
    }

    #[test]
    fn curves_are_ordered() {
        let grid = linspace(0.0, 1.0, 101);
        let curves: Vec<_> = (0..=3)
            .map(|n| SuccessCurve::analytic(n, &grid).unwrap())
            .collect();
        for w in curves.windows(2) {
            for (lo, hi) in w[0].samples.iter().zip(&w[1].samples) {
                assert!(hi.1 >= lo.1);
            }
        }
    }
}
