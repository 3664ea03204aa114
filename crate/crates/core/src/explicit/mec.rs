use super::ExplicitMdp;
use crate::graph::Tarjan;

/// A maximal end component: nodes plus the choices that keep a run inside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mec {
    pub nodes: Vec<usize>,
    pub choices: Vec<usize>,
}

impl Mec {
    pub fn contains(&self, node: usize) -> bool {
        self.nodes.binary_search(&node).is_ok()
    }
}

pub fn mec_decomposition(mdp: &ExplicitMdp) -> Vec<Mec> {
    mec_decomposition_restricted(mdp, &vec![true; mdp.num_nodes()], &vec![true; mdp.num_choices()])
}

/// MECs of the sub-MDP given by `nodes` and `choices` (choices leaving the
/// node set are dropped first).
///
/// Iterative refinement: split the candidate set into SCCs, drop choices
/// that leave their SCC and nodes left without choices, and requeue every
/// SCC that lost something. Result sorted by smallest node.
pub fn mec_decomposition_restricted(mdp: &ExplicitMdp, nodes: &[bool], choices: &[bool]) -> Vec<Mec> {
    let total = mdp.num_nodes();
    let mut allowed = choices.to_vec();
    let mut member = vec![0u32; total];
    let mut stamp = 0u32;
    let mut tarjan = Tarjan::new(total);
    let mut result = Vec::new();

    let mut queue: Vec<Vec<usize>> = vec![(0..total).filter(|&v| nodes[v]).collect()];
    while let Some(mut set) = queue.pop() {
        stamp += 1;
        for &v in &set {
            member[v] = stamp;
        }
        // Prune choices leaving the set until every remaining node keeps one.
        let mut pruned = false;
        loop {
            let mut changed = false;
            set.retain(|&v| {
                let mut any = false;
                for k in mdp.choices(v) {
                    if allowed[k] && mdp.successors(k).iter().any(|&t| member[t] != stamp) {
                        allowed[k] = false;
                    }
                    any |= allowed[k];
                }
                if !any {
                    member[v] = 0;
                    changed = true;
                }
                any
            });
            if !changed {
                break;
            }
            pruned = true;
        }
        if set.is_empty() {
            continue;
        }
        let sccs = tarjan.run(set.iter().copied(), |v| {
            mdp.choices(v).filter(|&k| allowed[k]).flat_map(|k| mdp.successors(k).iter().copied()).collect::<Vec<_>>()
        });
        if sccs.len() == 1 && !pruned {
            let mut nodes = sccs.into_iter().next().unwrap();
            nodes.sort_unstable();
            let choices = nodes.iter().flat_map(|&v| mdp.choices(v).filter(|&k| allowed[k])).collect();
            result.push(Mec { nodes, choices });
        } else {
            queue.extend(sccs);
        }
    }
    result.sort_by_key(|m| m.nodes[0]);
    result
}

#[cfg(test)]
mod tests {
    use super::super::unfold;
    use super::*;
    use crate::model::{example_model, CmdpBuilder};

    #[test]
    fn single_self_loop() {
        let mut b = CmdpBuilder::new(0);
        let s = b.add_reload_state("s").unwrap();
        b.add_action(s, "x", 0, [(s, 1.0)]).unwrap();
        let x = unfold(&b.build()).unwrap();
        let mecs = mec_decomposition(&x);
        // (s, 0) loops on itself; the sink is its own MEC.
        assert_eq!(mecs.len(), 2);
        assert_eq!(mecs[0].nodes, vec![0]);
        assert_eq!(mecs[1].nodes, vec![x.sink()]);
    }

    #[test]
    fn example_has_s2_component() {
        let m = example_model();
        let x = unfold(&m).unwrap();
        let mecs = mec_decomposition(&x);
        let s2 = m.require_state("s2").unwrap();
        let s1 = m.require_state("s1").unwrap();
        let with_s2 = mecs.iter().find(|c| c.contains(x.node(s2, 19))).unwrap();
        assert!(with_s2.nodes.iter().all(|&v| x.decode(v).is_some_and(|(s, _)| s == s2)));
        // The s1/s5 cycle through the reload is an end component too.
        assert!(mecs.iter().any(|c| c.contains(x.node(s1, 19))));
        assert!(mecs.iter().any(|c| c.nodes == vec![x.sink()]));
    }
}
