use std::collections::HashMap;

use crate::bases::{mixed_basis, vnm_basis, BellBasis, VnmBasis, VnmKind};
use crate::error::{Error, Result};
use crate::pauli::PauliCorrection;
use crate::probe::{BobMap, ProbeMap};
use crate::state::{max_qubits, Amplitude, GhzResource, InfoQubit};

use super::classify::{classify, Classification};
use super::select::{equal_weight_exponents, select_basis};
use super::{
    attempt_pair, decision_chi, BranchRecord, BranchStatus, OutcomeRecord, ProtocolConfig,
    ProtocolTrace, Termination,
};

/// Generalized VNM exponents always tried by [`Termination::MatchedVnm`].
const VNM_SCAN: u64 = 8;

/// A GBSM outcome in the plan.
#[derive(Clone, Debug)]
pub struct PlanNode {
    pub path: Vec<usize>,
    pub attempt: usize,
    pub pair: (usize, usize),
    pub spare: usize,
    pub exponents: (u64, u64),
    pub outcome: usize,
    pub success: bool,
    /// `(spare, bob)` residual at the actual angle.
    pub residual: ProbeMap,
    decision_residual: ProbeMap,
}

/// One spare-qubit result within a leaf.
#[derive(Clone, Debug)]
pub struct LeafPart {
    pub bob: BobMap,
    pub correction: PauliCorrection,
    pub unit: bool,
}

#[derive(Clone, Debug)]
pub struct PlanLeaf {
    pub path: Vec<usize>,
    pub attempt_count: usize,
    pub status: BranchStatus,
    /// Basis of the spare-qubit measurement; `None` for a reported failure.
    pub vnm: Option<VnmKind>,
    /// One part per spare result, or both implicit results for a reported failure.
    pub parts: Vec<LeafPart>,
    residual: Option<ProbeMap>,
}

impl PlanLeaf {
    pub fn is_unit(&self) -> bool {
        self.parts.iter().all(|p| p.unit)
    }

    pub fn correction(&self) -> Option<PauliCorrection> {
        match self.parts.as_slice() {
            [p] => Some(p.correction),
            _ => None,
        }
    }

    pub fn mean_probability(&self) -> f64 {
        self.parts.iter().map(|p| p.bob.mean_probability()).sum()
    }

    pub fn mean_weighted_fidelity(&self) -> f64 {
        self.parts
            .iter()
            .map(|p| p.bob.mean_weighted_fidelity(p.correction))
            .sum()
    }

    pub fn probability(&self, info: &InfoQubit) -> f64 {
        self.parts.iter().map(|p| p.bob.probability(info)).sum()
    }

    /// `p * F` for one input.
    pub fn weighted_fidelity(&self, info: &InfoQubit) -> f64 {
        self.parts
            .iter()
            .map(|p| p.bob.weighted_fidelity(info, p.correction))
            .sum()
    }

    fn record(&self, info: &InfoQubit) -> Result<BranchRecord> {
        let probability = self.probability(info);
        let bob_fidelity = if probability > f64::MIN_POSITIVE {
            (self.weighted_fidelity(info) / probability).min(1.0)
        } else if self.is_unit() {
            1.0
        } else {
            0.0
        };
        let collapsed = match (&self.residual, self.parts.as_slice()) {
            (Some(r), _) => r.state_for(info)?,
            (None, [p]) => p.bob.state_for(info)?,
            _ => None,
        };
        Ok(BranchRecord {
            path: self.path.clone(),
            attempt_count: self.attempt_count,
            probability,
            status: self.status,
            correction: self.correction(),
            bob_fidelity,
            unit_fidelity: self.is_unit(),
            collapsed,
        })
    }
}

/// What the sampler does after a GBSM outcome.
#[derive(Clone, Debug)]
pub(crate) enum Action {
    Next,
    Measure {
        vnm: VnmBasis,
        corrections: [PauliCorrection; 2],
        unit: [bool; 2],
        gbsm_success: bool,
    },
}

#[derive(Clone, Debug)]
pub(crate) struct Decision {
    pub pair: (usize, usize),
    pub spare: usize,
    pub basis: BellBasis,
    pub actions: Vec<Action>,
}

/// The full measurement tree for one channel angle, independent of the input.
#[derive(Clone, Debug)]
pub struct ProtocolPlan {
    pub chi: f64,
    pub config: ProtocolConfig,
    pub nodes: Vec<PlanNode>,
    pub leaves: Vec<PlanLeaf>,
    pub(crate) decisions: HashMap<Vec<usize>, Decision>,
}

impl ProtocolPlan {
    /// Success probability; the same for every input.
    pub fn success_probability(&self) -> f64 {
        self.leaves
            .iter()
            .flat_map(|l| &l.parts)
            .filter(|p| p.unit)
            .map(|p| p.bob.mean_probability())
            .sum()
    }

    /// Cumulative GBSM success after attempts `0..=n`.
    pub fn gbsm_success_by_attempt(&self) -> Vec<f64> {
        let mut per = vec![0.0; self.config.max_repetitions + 1];
        for n in self.nodes.iter().filter(|n| n.success) {
            per[n.attempt] += n.residual.mean_probability();
        }
        cumulative(per)
    }

    /// Average fidelity over Haar-random inputs, in closed form.
    pub fn mean_average_fidelity(&self) -> f64 {
        self.leaves
            .iter()
            .map(PlanLeaf::mean_weighted_fidelity)
            .sum()
    }

    /// Expected fidelity `sum p F` for one input.
    pub fn fidelity_for(&self, info: &InfoQubit) -> f64 {
        self.leaves.iter().map(|l| l.weighted_fidelity(info)).sum()
    }

    pub fn evaluate(&self, info: &InfoQubit) -> Result<ProtocolTrace> {
        let mut per = vec![0.0; self.config.max_repetitions + 1];
        let mut outcomes = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let probability = n.residual.probability(info);
            if n.success {
                per[n.attempt] += probability;
            }
            outcomes.push(OutcomeRecord {
                path: n.path.clone(),
                attempt: n.attempt,
                pair: n.pair,
                exponents: n.exponents,
                probability,
                success: n.success,
                residual: n.residual.state_for(info)?,
            });
        }
        let branches = self
            .leaves
            .iter()
            .map(|l| l.record(info))
            .collect::<Result<Vec<_>>>()?;
        let termination_success = self
            .leaves
            .iter()
            .filter(|l| l.status == BranchStatus::Terminated)
            .flat_map(|l| &l.parts)
            .filter(|p| p.unit)
            .map(|p| p.bob.probability(info))
            .sum();
        Ok(ProtocolTrace {
            branches,
            outcomes,
            per_attempt_success: cumulative(per),
            termination_success,
            chi: self.chi,
            a: info.a,
            b: info.b,
        })
    }
}

fn cumulative(mut v: Vec<f64>) -> Vec<f64> {
    for i in 1..v.len() {
        v[i] += v[i - 1];
    }
    v
}

/// Builds the measurement tree: bases, success labels, corrections and the
/// final spare-qubit measurement for every branch.
pub fn plan(resource: &GhzResource, config: &ProtocolConfig) -> Result<ProtocolPlan> {
    config.validate()?;
    if max_qubits() < 4 {
        return Err(Error::CapacityExceeded {
            requested: 4,
            max: max_qubits(),
        });
    }
    let chi = resource.chi();
    let dchi = decision_chi();
    let r_max = config.exponent_limit();
    let n = config.max_repetitions;
    let plain = vnm_basis(VnmKind::Plain, chi)?;

    let mut nodes = Vec::new();
    let mut leaves = Vec::new();
    let mut decisions = HashMap::new();
    let mut frontier = vec![(
        Vec::new(),
        ProbeMap::initial(&GhzResource::new(dchi)?),
        ProbeMap::initial(resource),
    )];

    for t in 0..=n {
        let (pair, spare) = attempt_pair(t);
        let qubits = [pair.0, pair.1];
        let mut next = Vec::new();
        for (path, ref_map, act_map) in frontier {
            let ref_basis = select_basis(&ref_map, pair, dchi, r_max)?;
            let (rd, ro) = ref_basis.exponents();
            let basis = mixed_basis(rd, ro, chi)?;
            let mut actions = Vec::with_capacity(4);
            for k in 0..4 {
                let decision_residual = ref_map.project(&qubits, ref_basis.vector(k))?;
                let residual = act_map.project(&qubits, basis.vector(k))?;
                let class = classify(&decision_residual, spare)?;
                let mut node_path = path.clone();
                node_path.push(k);
                let node = PlanNode {
                    path: node_path.clone(),
                    attempt: t,
                    pair,
                    spare,
                    exponents: (rd, ro),
                    outcome: k,
                    success: class.is_success(),
                    residual,
                    decision_residual,
                };
                match class {
                    Classification::Success { plus, minus } => {
                        let corrections = [plus, minus];
                        for (s, v) in plain.vectors().iter().enumerate() {
                            let mut leaf_path = node_path.clone();
                            leaf_path.push(s);
                            leaves.push(PlanLeaf {
                                path: leaf_path,
                                attempt_count: t + 1,
                                status: BranchStatus::Success,
                                vnm: Some(VnmKind::Plain),
                                parts: vec![LeafPart {
                                    bob: node.residual.bob_map(spare, v)?,
                                    correction: corrections[s],
                                    unit: true,
                                }],
                                residual: None,
                            });
                        }
                        actions.push(Action::Measure {
                            vnm: plain.clone(),
                            corrections,
                            unit: [true; 2],
                            gbsm_success: true,
                        });
                    }
                    Classification::Failure if t < n => {
                        next.push((
                            node_path,
                            ProbeMap::embed(pair, ref_basis.vector(k), &node.decision_residual),
                            ProbeMap::embed(pair, basis.vector(k), &node.residual),
                        ));
                        actions.push(Action::Next);
                    }
                    Classification::Failure => {
                        let choice = terminal_choice(&node, config.termination, chi)?;
                        actions.push(Action::Measure {
                            vnm: choice.vnm.clone(),
                            corrections: [choice.parts[0].correction, choice.parts[1].correction],
                            unit: [choice.parts[0].unit, choice.parts[1].unit],
                            gbsm_success: false,
                        });
                        leaves.extend(choice.into_leaves(&node, config.termination));
                    }
                }
                nodes.push(node);
            }
            decisions.insert(
                path,
                Decision {
                    pair,
                    spare,
                    basis,
                    actions,
                },
            );
        }
        frontier = next;
    }

    Ok(ProtocolPlan {
        chi,
        config: config.clone(),
        nodes,
        leaves,
        decisions,
    })
}

struct TerminalChoice {
    vnm: VnmBasis,
    parts: [LeafPart; 2],
}

impl TerminalChoice {
    fn into_leaves(self, node: &PlanNode, strategy: Termination) -> Vec<PlanLeaf> {
        if strategy == Termination::Continue {
            return vec![PlanLeaf {
                path: node.path.clone(),
                attempt_count: node.attempt + 1,
                status: BranchStatus::Failure,
                vnm: None,
                parts: self.parts.into(),
                residual: Some(node.residual.clone()),
            }];
        }
        let kind = self.vnm.kind();
        self.parts
            .into_iter()
            .enumerate()
            .map(|(s, part)| {
                let mut path = node.path.clone();
                path.push(s);
                PlanLeaf {
                    path,
                    attempt_count: node.attempt + 1,
                    status: BranchStatus::Terminated,
                    vnm: Some(kind),
                    parts: vec![part],
                    residual: None,
                }
            })
            .collect()
    }
}

fn parts_for(node: &PlanNode, kind: VnmKind, chi: f64, structural: bool) -> Result<[LeafPart; 2]> {
    let decision = vnm_basis(kind, decision_chi())?;
    let actual = vnm_basis(kind, chi)?;
    let part = |s: usize| -> Result<LeafPart> {
        let bob = node.residual.bob_map(node.spare, &actual.vectors()[s])?;
        let exact = if structural {
            node.decision_residual
                .bob_map(node.spare, &decision.vectors()[s])?
                .exact_correction()
        } else {
            None
        };
        Ok(match exact {
            Some(correction) => LeafPart {
                bob,
                correction,
                unit: true,
            },
            None => LeafPart {
                correction: bob.best_correction(),
                bob,
                unit: false,
            },
        })
    };
    Ok([part(0)?, part(1)?])
}

fn vnm_candidates(node: &PlanNode) -> Result<Vec<VnmKind>> {
    let unit2 = |i: usize| {
        let mut v = [Amplitude::new(0.0, 0.0); 2];
        v[i] = Amplitude::new(1.0, 0.0);
        v
    };
    let r = &node.decision_residual;
    let a = r.project(&[node.spare], &unit2(0))?;
    let b = r.project(&[node.spare], &unit2(1))?;
    let mut exps: Vec<u64> = (1..=VNM_SCAN).collect();
    for plus in [true, false] {
        for est in equal_weight_exponents(&a, &b, r.scale(), plus, decision_chi()) {
            let lo = (est.floor() as i64 - 1).max(1) as u64;
            exps.extend(lo..=est.ceil() as u64 + 1);
        }
    }
    exps.sort_unstable();
    exps.dedup();
    let mut kinds = vec![VnmKind::Plain];
    kinds.extend(exps.into_iter().map(VnmKind::Generalized));
    Ok(kinds)
}

fn terminal_choice(node: &PlanNode, strategy: Termination, chi: f64) -> Result<TerminalChoice> {
    let kind = match strategy {
        Termination::Continue | Termination::PlainVnm => VnmKind::Plain,
        Termination::MatchedVnm => {
            let mut best: Option<(VnmKind, f64, f64)> = None;
            for kind in vnm_candidates(node)? {
                let parts = parts_for(node, kind, chi, true)?;
                let unit_mass: f64 = parts
                    .iter()
                    .filter(|p| p.unit)
                    .map(|p| p.bob.mean_probability())
                    .sum();
                let fid: f64 = parts
                    .iter()
                    .map(|p| p.bob.mean_weighted_fidelity(p.correction))
                    .sum();
                let better = match best {
                    None => true,
                    Some((_, u, f)) => {
                        let tol = 1e-12 * u.max(unit_mass).max(f64::MIN_POSITIVE);
                        unit_mass > u + tol
                            || ((unit_mass - u).abs() <= tol && fid > f * (1.0 + 1e-12))
                    }
                };
                if better {
                    best = Some((kind, unit_mass, fid));
                }
            }
            best.map(|b| b.0).unwrap_or(VnmKind::Plain)
        }
    };
    let structural = strategy != Termination::Continue;
    Ok(TerminalChoice {
        vnm: vnm_basis(kind, chi)?,
        parts: parts_for(node, kind, chi, structural)?,
    })
}

/// Leaves produced by measuring the spare qubit of a failed final outcome.
/// [`Termination::Continue`] gives a single failure leaf.
pub fn terminate_with_vnm(
    node: &PlanNode,
    strategy: Termination,
    chi: f64,
) -> Result<Vec<PlanLeaf>> {
    Ok(terminal_choice(node, strategy, chi)?.into_leaves(node, strategy))
}

/// Exact enumeration of every branch for one input.
pub fn run_enumeration(
    info: &InfoQubit,
    resource: &GhzResource,
    config: &ProtocolConfig,
) -> Result<ProtocolTrace> {
    plan(resource, config)?.evaluate(info)
}
