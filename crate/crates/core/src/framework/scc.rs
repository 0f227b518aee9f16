use std::collections::BTreeSet;

use super::{ArgumentId, Framework};

/// Strongly connected components of the attack graph (Tarjan, iterative).
///
/// Components are returned sorted by their smallest member; each component is
/// a sorted set.
pub fn scc_decomposition(f: &Framework) -> Vec<BTreeSet<ArgumentId>> {
    const UNVISITED: u32 = u32::MAX;
    let n = f.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut next = 0u32;
    // (vertex, next edge offset)
    let mut work: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        work.push((root, 0));
        while let Some(&mut (v, ref mut edge)) = work.last_mut() {
            if *edge == 0 && index[v] == UNVISITED {
                index[v] = next;
                low[v] = next;
                next += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            let succ = f.targets_at(v);
            if let Some(&w) = succ.get(*edge) {
                *edge += 1;
                let w = w as usize;
                if index[w] == UNVISITED {
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = BTreeSet::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.insert(f.id_at(w));
                    if w == v {
                        break;
                    }
                }
                components.push(comp);
            }
        }
    }
    components.sort_by_key(|c: &BTreeSet<ArgumentId>| *c.first().unwrap());
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::tests::{f_ex, ids};
    use proptest::prelude::*;

    /// Pairwise reachability by repeated relaxation; independent of Tarjan.
    fn reach_oracle(f: &Framework) -> Vec<BTreeSet<ArgumentId>> {
        let n = f.len();
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for at in f.attacks() {
            reach[f.position(at.source).unwrap()][f.position(at.target).unwrap()] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if reach[i][k] && reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i] {
                continue;
            }
            let comp: BTreeSet<_> = (0..n)
                .filter(|&j| reach[i][j] && reach[j][i])
                .inspect(|&j| seen[j] = true)
                .map(|j| f.id_at(j))
                .collect();
            out.push(comp);
        }
        out
    }

    #[test]
    fn example_components() {
        assert_eq!(
            scc_decomposition(&f_ex()),
            vec![ids(&[0, 1, 2]), ids(&[3]), ids(&[4])]
        );
    }

    #[test]
    fn no_attacks_gives_singletons() {
        let f = Framework::from_pairs(4, &[]).unwrap();
        assert_eq!(scc_decomposition(&f).len(), 4);
    }

    #[test]
    fn two_cycle() {
        let f = Framework::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(scc_decomposition(&f), vec![ids(&[0, 1])]);
    }

    proptest! {
        #[test]
        fn agrees_with_reachability(n in 1u32..=10, pairs in proptest::collection::btree_set((0u32..10, 0u32..10), 0..40)) {
            let pairs: Vec<_> = pairs.into_iter().filter(|&(s, t)| s < n && t < n).collect();
            let f = Framework::from_pairs(n, &pairs).unwrap();
            prop_assert_eq!(scc_decomposition(&f), reach_oracle(&f));
        }
    }
}
