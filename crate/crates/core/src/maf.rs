//! Maximal average fidelity: the protocol's expected fidelity averaged over
//! uniformly distributed pure inputs, with the best fixed Pauli per leaf.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::Result;
use crate::protocol::{plan, ProtocolConfig, ProtocolPlan, Termination};
use crate::state::{GhzResource, InfoQubit};

pub const DEFAULT_THETA_NODES: usize = 72;
pub const DEFAULT_PHI_NODES: usize = 144;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Product rule over the Bloch sphere: Gauss-Legendre in `cos theta`,
/// uniform in `phi`. Weights sum to one.
pub fn bloch_quadrature(n_theta: usize, n_phi: usize) -> Vec<(InfoQubit, f64)> {
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    for (x, w) in gauss_legendre(n_theta) {
        let theta = x.clamp(-1.0, 1.0).acos();
        for j in 0..n_phi {
            let phi = 2.0 * PI * j as f64 / n_phi as f64;
            nodes.push((InfoQubit::from_bloch(theta, phi), 0.5 * w / n_phi as f64));
        }
    }
    nodes
}

pub fn quadrature_maf(plan: &ProtocolPlan, n_theta: usize, n_phi: usize) -> f64 {
    bloch_quadrature(n_theta, n_phi)
        .iter()
        .map(|(info, w)| w * plan.fidelity_for(info))
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MafRow {
    pub c: f64,
    pub chi: f64,
    pub depth: usize,
    pub strategy: Termination,
    pub maf: f64,
    /// Same average from the per-leaf closed form.
    pub maf_closed_form: f64,
    pub success_prob: f64,
}

pub fn maf_row(c: f64, depth: usize, strategy: Termination) -> Result<MafRow> {
    let resource = GhzResource::from_concurrence(c)?;
    let p = plan(&resource, &ProtocolConfig::new(depth, strategy))?;
    Ok(MafRow {
        c,
        chi: resource.chi(),
        depth,
        strategy,
        maf: quadrature_maf(&p, DEFAULT_THETA_NODES, DEFAULT_PHI_NODES),
        maf_closed_form: p.mean_average_fidelity(),
        success_prob: p.success_probability(),
    })
}
