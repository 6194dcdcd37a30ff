use crate::bases::{bell_vector, mixed_basis, BellBasis};
use crate::error::{Error, Result};
use crate::probe::ProbeMap;
use crate::state::Amplitude;

use super::classify::classify;
use super::BOB;

/// Odd exponents up to this bound are always tried.
pub const SMALL_EXPONENT_SCAN: u64 = 27;

/// Picks the generalized Bell basis for measuring `pair` on `branch`.
///
/// The two sectors (`k = 0, 1` on `|00>, |11>` and `k = 2, 3` on
/// `|01>, |10>`) have disjoint support, so each sector's exponent is chosen
/// on its own: the smallest odd `r <= r_max` giving the most correctable
/// outcomes in that sector. At least two correctable outcomes overall are
/// required.
///
/// A correctable outcome gives both probe inputs the same branch weight.
/// That condition is a quadratic in `tan(chi)^r`, so besides a scan of small
/// exponents the search tries the integers next to its roots, which keeps
/// exponents like `3^12` reachable.
pub fn select_basis(
    branch: &ProbeMap,
    pair: (usize, usize),
    chi: f64,
    r_max: u64,
) -> Result<BellBasis> {
    let spare = residual_spare(branch, pair)?;
    let (r_diag, n_diag) = sector_exponent(branch, pair, spare, chi, 0, r_max)?;
    let (r_off, n_off) = sector_exponent(branch, pair, spare, chi, 1, r_max)?;
    if n_diag + n_off < 2 {
        return Err(Error::NoMatchedBasis { pair, r_max });
    }
    mixed_basis(r_diag, r_off, chi)
}

fn residual_spare(branch: &ProbeMap, pair: (usize, usize)) -> Result<usize> {
    for q in [pair.0, pair.1, BOB] {
        if !branch.labels().contains(&q) {
            return Err(Error::UnknownQubitLabel(q));
        }
    }
    if branch.labels().len() != 4 || pair.0 == pair.1 {
        return Err(Error::WrongQubitCount {
            expected: 4,
            actual: branch.labels().len(),
        });
    }
    Ok(*branch
        .labels()
        .iter()
        .find(|&&l| l != pair.0 && l != pair.1 && l != BOB)
        .expect("four distinct labels"))
}

fn unit(index: usize) -> [Amplitude; 4] {
    let mut v = [Amplitude::new(0.0, 0.0); 4];
    v[index] = Amplitude::new(1.0, 0.0);
    v
}

/// `(exponent, correctable outcomes)` for one sector.
fn sector_exponent(
    branch: &ProbeMap,
    pair: (usize, usize),
    spare: usize,
    chi: f64,
    sector: usize,
    r_max: u64,
) -> Result<(u64, usize)> {
    let (ket, flipped) = if sector == 0 { (0, 3) } else { (1, 2) };
    let qubits = [pair.0, pair.1];
    let a = branch.project(&qubits, &unit(ket))?;
    let b = branch.project(&qubits, &unit(flipped))?;

    let mut estimates = Vec::new();
    for plus in [true, false] {
        estimates.extend(equal_weight_exponents(&a, &b, branch.scale(), plus, chi));
    }
    let mut candidates: Vec<u64> = (1..=SMALL_EXPONENT_SCAN.min(r_max)).step_by(2).collect();
    for r in estimates {
        let lo = (r.floor() as i64 - 2).max(1) as u64;
        let hi = r.ceil() as u64 + 2;
        candidates.extend((lo..=hi).filter(|r| r % 2 == 1 && *r <= r_max));
    }
    candidates.sort_unstable();
    candidates.dedup();

    let ks = [2 * sector as u8, 2 * sector as u8 + 1];
    let mut best = (1, 0);
    for r in candidates {
        let mut count = 0;
        for k in ks {
            let v = bell_vector(r, k, chi)?;
            let residual = branch.project(&qubits, &v.amps)?;
            if classify(&residual, spare)?.is_success() {
                count += 1;
            }
        }
        if count > best.1 {
            best = (r, count);
            if count == ks.len() {
                break;
            }
        }
    }
    Ok(best)
}

/// Real exponents `r` at which `cos^r A + sin^r B` (`plus`) or
/// `sin^r A - cos^r B` has equal weight for both probe inputs. `A` and `B`
/// are the components of a branch along the two kets of one sector.
pub(crate) fn equal_weight_exponents(
    a: &ProbeMap,
    b: &ProbeMap,
    reference_scale: f64,
    plus: bool,
    chi: f64,
) -> Vec<f64> {
    let t = chi.tan();
    if !(t > 0.0 && t < 1.0 - 1e-15) || reference_scale == 0.0 {
        return Vec::new();
    }
    let sa = a.scale() / reference_scale;
    let sb = b.scale() / reference_scale;
    let nrm = |v: &[Amplitude], s: f64| v.iter().map(|x| x.norm_sqr()).sum::<f64>() * s * s;
    let dot = |u: &[Amplitude], v: &[Amplitude]| -> f64 {
        u.iter().zip(v).map(|(x, y)| (x.conj() * y).re).sum::<f64>() * sa * sb
    };
    let alpha = nrm(a.zero(), sa) - nrm(a.one(), sa);
    let beta = nrm(b.zero(), sb) - nrm(b.one(), sb);
    let gamma = dot(a.zero(), b.zero()) - dot(a.one(), b.one());
    // plus: beta u^2 + 2 gamma u + alpha = 0; minus: alpha u^2 - 2 gamma u + beta = 0
    let (q2, q1, q0) = if plus {
        (beta, 2.0 * gamma, alpha)
    } else {
        (alpha, -2.0 * gamma, beta)
    };
    let ln_t = t.ln();
    quadratic_roots(q2, q1, q0)
        .into_iter()
        .filter(|u| *u > 0.0 && u.is_finite())
        .map(|u| u.ln() / ln_t)
        .filter(|r| r.is_finite() && *r > 0.0 && *r < 1e12)
        .collect()
}

fn quadratic_roots(q2: f64, q1: f64, q0: f64) -> Vec<f64> {
    let size = q2.abs().max(q1.abs()).max(q0.abs());
    if size == 0.0 {
        return Vec::new();
    }
    let (q2, q1, q0) = (q2 / size, q1 / size, q0 / size);
    if q2.abs() < 1e-14 {
        return if q1.abs() < 1e-14 {
            Vec::new()
        } else {
            vec![-q0 / q1]
        };
    }
    let disc = q1 * q1 - 4.0 * q2 * q0;
    if disc < 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    let q = -0.5 * (q1 + q1.signum() * s);
    let mut roots = vec![q / q2];
    if q != 0.0 {
        roots.push(q0 / q);
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::decision_chi;
    use crate::state::GhzResource;

    #[test]
    fn original_measurement_uses_uniform_exponent() {
        for chi in [0.2, 0.5, decision_chi()] {
            let m = ProbeMap::initial(&GhzResource::new(chi).unwrap());
            let b = select_basis(&m, (0, 1), chi, 3u64.pow(13)).unwrap();
            assert_eq!(b.exponents(), (1, 1));
        }
    }

    #[test]
    fn maximal_channel_picks_smallest_exponents() {
        let chi = std::f64::consts::FRAC_PI_4;
        let m = ProbeMap::initial(&GhzResource::new(chi).unwrap());
        assert_eq!(
            select_basis(&m, (0, 1), chi, 27).unwrap().exponents(),
            (1, 1)
        );
    }

    #[test]
    fn bad_pairs_are_rejected() {
        let m = ProbeMap::initial(&GhzResource::new(0.3).unwrap());
        assert!(matches!(
            select_basis(&m, (0, 9), 0.3, 27),
            Err(Error::UnknownQubitLabel(9))
        ));
    }

    #[test]
    fn product_channel_has_no_matched_basis() {
        // chi = 0: every outcome keeps unequal weights for the two probes
        let m = ProbeMap::initial(&GhzResource::new(0.0).unwrap());
        assert!(matches!(
            select_basis(&m, (0, 1), 0.0, 27),
            Err(Error::NoMatchedBasis { .. })
        ));
    }

    #[test]
    fn quadratic_roots_cases() {
        let mut r = quadratic_roots(1.0, -3.0, 2.0);
        r.sort_by(f64::total_cmp);
        assert!((r[0] - 1.0).abs() < 1e-15 && (r[1] - 2.0).abs() < 1e-15);
        assert_eq!(quadratic_roots(0.0, 2.0, -1.0), vec![0.5]);
        assert!(quadratic_roots(1.0, 0.0, 1.0).is_empty());
        assert!(quadratic_roots(0.0, 0.0, 0.0).is_empty());
    }
}
