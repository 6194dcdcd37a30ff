use pqt::maf::{maf_row, quadrature_maf};
use pqt::protocol::{plan, ProtocolConfig, Termination};
use pqt::state::GhzResource;

// Frozen from the 72x144 Bloch quadrature; the per-leaf closed form and a
// 36x72 grid agree to 1e-13. Both values are rationals in C^2 = 16/25.
const MAF_C08_DEPTH1_PLAIN: f64 = 6646.0 / 8125.0;
const SUCCESS_C08_DEPTH1: f64 = 3144.0 / 8125.0;

#[test]
fn maf_regression_point() {
    let row = maf_row(0.8, 1, Termination::PlainVnm).unwrap();
    assert!(
        (row.maf - MAF_C08_DEPTH1_PLAIN).abs() < 1e-12,
        "{}",
        row.maf
    );
    assert!((row.maf_closed_form - MAF_C08_DEPTH1_PLAIN).abs() < 1e-12);
    assert!((row.success_prob - SUCCESS_C08_DEPTH1).abs() < 1e-12);
}

#[test]
fn maf_quadrature_is_converged() {
    let r = GhzResource::from_concurrence(0.8).unwrap();
    let p = plan(&r, &ProtocolConfig::new(1, Termination::PlainVnm)).unwrap();
    let coarse = quadrature_maf(&p, 36, 72);
    let fine = quadrature_maf(&p, 72, 144);
    assert!((coarse - fine).abs() < 1e-12);
}

#[test]
fn perfect_channel_success_series() {
    let r = GhzResource::from_concurrence(1.0).unwrap();
    for n in 0..5 {
        let cont = plan(&r, &ProtocolConfig::new(n, Termination::Continue)).unwrap();
        let matched = plan(&r, &ProtocolConfig::new(n, Termination::MatchedVnm)).unwrap();
        let gbsm = 1.0 - 0.5f64.powi(n as i32 + 1);
        assert!((cont.success_probability() - gbsm).abs() < 1e-12);
        assert!((matched.success_probability() - (1.0 - 0.5f64.powi(n as i32 + 2))).abs() < 1e-12);
    }
}
