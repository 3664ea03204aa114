//! Strongly connected components over implicit graphs.
//!
//! Iterative Tarjan. The scratch arrays are sized to the full node universe
//! once and only the touched entries are reset after each run, so repeated
//! calls on small subsets of a large graph stay cheap (MEC refinement relies
//! on this).

const UNVISITED: u32 = u32::MAX;

pub struct Tarjan {
    index: Vec<u32>,
    lowlink: Vec<u32>,
    on_stack: Vec<bool>,
}

impl Tarjan {
    pub fn new(universe: usize) -> Self {
        assert!(universe < UNVISITED as usize, "graph too large for 32-bit indices");
        Tarjan { index: vec![UNVISITED; universe], lowlink: vec![0; universe], on_stack: vec![false; universe] }
    }

    /// SCCs reachable from `roots`, in reverse topological order (sinks first).
    ///
    /// `succ` must only yield nodes the caller considers part of the graph;
    /// filtering happens there.
    pub fn run<R, F, I>(&mut self, roots: R, mut succ: F) -> Vec<Vec<usize>>
    where
        R: IntoIterator<Item = usize>,
        F: FnMut(usize) -> I,
        I: IntoIterator<Item = usize>,
    {
        let mut components = Vec::new();
        let mut touched = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut call: Vec<(usize, I::IntoIter)> = Vec::new();
        let mut counter: u32 = 0;

        for root in roots {
            if self.index[root] != UNVISITED {
                continue;
            }
            self.visit(root, &mut counter, &mut stack, &mut touched);
            call.push((root, succ(root).into_iter()));

            while let Some((v, iter)) = call.last_mut() {
                let v = *v;
                match iter.next() {
                    Some(w) => {
                        if self.index[w] == UNVISITED {
                            self.visit(w, &mut counter, &mut stack, &mut touched);
                            call.push((w, succ(w).into_iter()));
                        } else if self.on_stack[w] {
                            self.lowlink[v] = self.lowlink[v].min(self.index[w]);
                        }
                    }
                    None => {
                        call.pop();
                        if let Some((parent, _)) = call.last() {
                            let parent = *parent;
                            self.lowlink[parent] = self.lowlink[parent].min(self.lowlink[v]);
                        }
                        if self.lowlink[v] == self.index[v] {
                            let mut component = Vec::new();
                            loop {
                                let w = stack.pop().expect("tarjan stack underflow");
                                self.on_stack[w] = false;
                                component.push(w);
                                if w == v {
                                    break;
                                }
                            }
                            component.sort_unstable();
                            components.push(component);
                        }
                    }
                }
            }
        }

        for v in touched {
            self.index[v] = UNVISITED;
        }
        components
    }

    fn visit(&mut self, v: usize, counter: &mut u32, stack: &mut Vec<usize>, touched: &mut Vec<usize>) {
        self.index[v] = *counter;
        self.lowlink[v] = *counter;
        *counter += 1;
        stack.push(v);
        self.on_stack[v] = true;
        touched.push(v);
    }
}

/// All SCCs of a graph on `0..n`.
pub fn strongly_connected_components<F, I>(n: usize, succ: F) -> Vec<Vec<usize>>
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    Tarjan::new(n).run(0..n, succ)
}

/// Nodes reachable from `roots` (including the roots), as a membership mask.
pub fn reachable<F, I>(n: usize, roots: impl IntoIterator<Item = usize>, mut succ: F) -> Vec<bool>
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    let mut seen = vec![false; n];
    let mut queue: Vec<usize> = Vec::new();
    for r in roots {
        if !seen[r] {
            seen[r] = true;
            queue.push(r);
        }
    }
    while let Some(v) = queue.pop() {
        for w in succ(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push(w);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut c: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        c.sort();
        c
    }

    #[test]
    fn finds_cycles_and_singletons() {
        let adj = [vec![1], vec![2], vec![0, 3], vec![4], vec![3], vec![]];
        let sccs = strongly_connected_components(adj.len(), |v| adj[v].iter().copied());
        assert_eq!(sorted(sccs), vec![vec![0, 1, 2], vec![3, 4], vec![5]]);
    }

    #[test]
    fn sinks_come_first() {
        let adj = [vec![1], vec![2], vec![]];
        let sccs = strongly_connected_components(3, |v| adj[v].iter().copied());
        assert_eq!(sccs, vec![vec![2], vec![1], vec![0]]);
    }

    #[test]
    fn scratch_is_reset_between_runs() {
        let adj = [vec![1], vec![0], vec![2]];
        let mut t = Tarjan::new(3);
        let first = t.run([0], |v| adj[v].iter().copied());
        let second = t.run([0, 2], |v| adj[v].iter().copied());
        assert_eq!(first, vec![vec![0, 1]]);
        assert_eq!(sorted(second), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn deep_chain_does_not_overflow_the_call_stack() {
        let n = 200_000;
        let sccs = strongly_connected_components(n, |v| (v + 1 < n).then_some(v + 1));
        assert_eq!(sccs.len(), n);
    }

    #[test]
    fn reachability_mask() {
        let adj = [vec![1], vec![], vec![0]];
        assert_eq!(reachable(3, [0], |v| adj[v].iter().copied()), vec![true, true, false]);
    }
}
