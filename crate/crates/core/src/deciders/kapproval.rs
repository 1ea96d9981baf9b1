use super::Decision;
use crate::error::{Error, Result};
use crate::flow::{ArcId, FlowNetwork};
use crate::model::{Alternative, Instance, Ranking};
use crate::perturbation::{classify_kapproval, KApprovalType};

/// Flow network for k-approval with `ℓ` manipulators.
///
/// Nodes: source, sink, one node per manipulator and one per alternative
/// other than `c`. Manipulator `i` has `k - 1` approvals to hand out (its
/// first slot always goes to `c`), at most one per alternative, and
/// alternative `a` can absorb at most `λ_a` approvals before the worst
/// perturbation lets it overtake `c`.
#[derive(Debug, Clone)]
pub struct KApprovalNetwork {
    pub network: FlowNetwork,
    pub source: usize,
    pub sink: usize,
    /// `λ_a` per alternative; `None` for `c`.
    pub capacities: Vec<Option<i64>>,
    // (manipulator, alternative, arc)
    assignment_arcs: Vec<(usize, Alternative, ArcId)>,
}

fn lambdas(inst: &Instance, k: usize) -> Vec<Option<i64>> {
    let m = inst.m();
    let c = inst.c();
    (0..m)
        .map(Alternative)
        .map(|a| {
            if a == c {
                return None;
            }
            let (mut both, mut neither) = (0i64, 0i64);
            for (r, &delta) in inst.profile().rankings().iter().zip(inst.deltas()) {
                match classify_kapproval(r, delta, c, a, k) {
                    KApprovalType::Both => both += 1,
                    KApprovalType::Neither => neither += 1,
                    _ => {}
                }
            }
            Some(inst.manipulators() as i64 + neither - both)
        })
        .collect()
}

fn check_k(inst: &Instance, k: usize) -> Result<()> {
    if k == 0 || k >= inst.m() {
        return Err(Error::invalid(format!(
            "k-approval needs 1 ≤ k < m, got k = {k} with m = {}",
            inst.m()
        )));
    }
    Ok(())
}

/// Builds the network. Negative `λ_a` are clamped to zero capacity; the
/// decider rejects them before building.
pub fn kapproval_network(inst: &Instance, k: usize) -> Result<KApprovalNetwork> {
    check_k(inst, k)?;
    let m = inst.m();
    let l = inst.manipulators();
    let capacities = lambdas(inst, k);
    let source = 0;
    let sink = 1;
    let manip_node = |i: usize| 2 + i;
    let alt_node = |a: usize| 2 + l + a;
    let mut network = FlowNetwork::new(2 + l + m);
    let mut assignment_arcs = Vec::with_capacity(l * (m - 1));
    for i in 0..l {
        network.add_arc(source, manip_node(i), (k - 1) as u64)?;
        for (a, cap) in capacities.iter().enumerate() {
            if cap.is_some() {
                let id = network.add_arc(manip_node(i), alt_node(a), 1)?;
                assignment_arcs.push((i, Alternative(a), id));
            }
        }
    }
    for (a, cap) in capacities.iter().enumerate() {
        if let Some(cap) = cap {
            network.add_arc(alt_node(a), sink, (*cap).max(0) as u64)?;
        }
    }
    Ok(KApprovalNetwork {
        network,
        source,
        sink,
        capacities,
        assignment_arcs,
    })
}

/// Decider for k-approval with any number of manipulators.
pub fn decide_kapproval(inst: &Instance, k: usize) -> Result<Decision> {
    check_k(inst, k)?;
    let net = kapproval_network(inst, k)?;
    if net.capacities.iter().flatten().any(|&cap| cap < 0) {
        return Ok(Decision::no());
    }
    let l = inst.manipulators();
    let flow = net.network.max_flow(net.source, net.sink)?;
    if flow.value != (l * (k - 1)) as u64 {
        return Ok(Decision::no());
    }
    let m = inst.m();
    let c = inst.c();
    let mut approved = vec![vec![false; m]; l];
    for &(i, a, id) in &net.assignment_arcs {
        if flow.flow(id) == 1 {
            approved[i][a.0] = true;
        }
    }
    let witness = approved
        .iter()
        .map(|row| {
            let mut order = vec![c];
            order.extend((0..m).filter(|&a| row[a]).map(Alternative));
            order.extend((0..m).filter(|&a| a != c.0 && !row[a]).map(Alternative));
            Ranking::new(order).expect("a permutation")
        })
        .collect();
    Ok(Decision::Yes { witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deciders::decide_scoring;
    use crate::model::Profile;
    use crate::rules::{Rule, ScoringVector};

    #[test]
    fn negative_capacity_means_no() {
        // k = 1, P = {(c,a,b),(c,a,b)}, δ = (1,1): both ballots can swap c and a.
        let p = Profile::from_indices(&[&[2, 0, 1], &[2, 0, 1]]).unwrap();
        let i = Instance::new(p, Alternative(2), vec![1, 1], 1, Rule::Plurality).unwrap();
        let net = kapproval_network(&i, 1).unwrap();
        assert_eq!(net.capacities[0], Some(-1));
        assert!(!decide_kapproval(&i, 1).unwrap().is_yes());
    }

    #[test]
    fn witness_approves_c_and_respects_capacities() {
        let p = Profile::from_indices(&[&[0, 1, 2, 3], &[1, 0, 3, 2], &[2, 3, 1, 0]]).unwrap();
        let i = Instance::new(p, Alternative(2), vec![0, 0, 0], 2, Rule::KApproval(2)).unwrap();
        let d = decide_kapproval(&i, 2).unwrap();
        let w = d.witness().expect("c is already tied at the top");
        assert_eq!(w.len(), 2);
        assert!(w.iter().all(|r| r.at(1) == Alternative(2)));
        let mut ballots = i.profile().rankings().to_vec();
        ballots.extend(w.iter().cloned());
        assert!(crate::rules::winners(&ballots, &Rule::KApproval(2))
            .unwrap()
            .contains(&Alternative(2)));
    }

    #[test]
    fn plurality_agrees_with_scoring_decider() {
        let p = Profile::from_indices(&[&[0, 2, 1], &[2, 1, 0], &[1, 0, 2]]).unwrap();
        for c in 0..3 {
            for d in 0..=2 {
                let i = Instance::uniform(p.clone(), Alternative(c), d, 1, Rule::Plurality).unwrap();
                let via_flow = decide_kapproval(&i, 1).unwrap().is_yes();
                let via_scores = decide_scoring(&i, &ScoringVector::plurality(3).unwrap())
                    .unwrap()
                    .is_yes();
                assert_eq!(via_flow, via_scores, "c={c} δ={d}");
            }
        }
    }

    #[test]
    fn k_out_of_range() {
        let p = Profile::from_indices(&[&[0, 1, 2]]).unwrap();
        let i = Instance::new(p, Alternative(0), vec![0], 1, Rule::Plurality).unwrap();
        assert!(decide_kapproval(&i, 0).is_err());
        assert!(decide_kapproval(&i, 3).is_err());
    }
}
