//! Partitions fed to the splitting pipeline.
//!
//! * [`hao_orlin_min_cut`]: global directed minimum cut with unit capacity per
//!   attack. The minimizing side becomes `a2`, so the minimized quantity is
//!   the number of attacks from `a2` into `a1` (the cut's `k`).
//! * [`balanced_cut`]: grows `a1` from a start argument along incoming
//!   attacks until it holds half of the arguments.
//! * [`brute_force_min_cut`]: exhaustive reference for small frameworks.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::framework::{cut::cross_attacks_unchecked, ArgumentId, Cut, Framework};

pub const BRUTE_FORCE_CUT_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum CutAlgorithm {
    #[default]
    HaoOrlin,
    Balanced,
}

impl fmt::Display for CutAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutAlgorithm::HaoOrlin => "ho",
            CutAlgorithm::Balanced => "bc",
        })
    }
}

impl FromStr for CutAlgorithm {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ho" | "hao-orlin" => Ok(CutAlgorithm::HaoOrlin),
            "bc" | "balanced" => Ok(CutAlgorithm::Balanced),
            _ => Err(format!("unknown cut algorithm {s:?} (expected ho or bc)")),
        }
    }
}

/// Which side of a balanced cut becomes `a1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// The grown set is `a1`.
    #[default]
    Literal,
    /// Whichever assignment gives the smaller `k`; the grown set on ties.
    MinimizeK,
}

impl FromStr for Orientation {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "literal" => Ok(Orientation::Literal),
            "minimize-k" => Ok(Orientation::MinimizeK),
            _ => Err(format!("unknown orientation {s:?} (expected literal or minimize-k)")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CutRequest {
    pub algorithm: CutAlgorithm,
    pub start: Option<ArgumentId>,
    pub orientation: Orientation,
}

pub fn compute_cut(f: &Framework, req: &CutRequest) -> Result<Cut> {
    match req.algorithm {
        CutAlgorithm::HaoOrlin => hao_orlin_min_cut(f),
        CutAlgorithm::Balanced => {
            let cut = balanced_cut(f, req.start)?;
            Ok(match req.orientation {
                Orientation::Literal => cut,
                Orientation::MinimizeK => {
                    let other = cut.swapped(f);
                    if other.k < cut.k {
                        other
                    } else {
                        cut
                    }
                }
            })
        }
    }
}

fn require_two(f: &Framework) -> Result<()> {
    if f.len() < 2 {
        return Err(Error::precondition(format!(
            "a cut needs at least two arguments, got {}",
            f.len()
        )));
    }
    Ok(())
}

/// Directed global minimum cut.
///
/// Runs the Hao-Orlin preflow-push scheme twice from the lowest argument: once
/// on the attack graph (sets containing it) and once on the reversed graph
/// (sets not containing it). Self-attacks never cross a cut and are ignored.
pub fn hao_orlin_min_cut(f: &Framework) -> Result<Cut> {
    require_two(f)?;
    let n = f.len();
    let arcs: Vec<(usize, usize)> = f
        .attacks()
        .iter()
        .filter(|at| !at.is_self_attack())
        .map(|at| (f.position(at.source).unwrap(), f.position(at.target).unwrap()))
        .collect();
    let reversed: Vec<(usize, usize)> = arcs.iter().map(|&(u, v)| (v, u)).collect();

    let (forward_value, forward_side) = HaoOrlin::new(n, &arcs).run();
    let (reverse_value, reverse_side) = HaoOrlin::new(n, &reversed).run();

    // Forward: source side X minimizes attacks X -> rest, so a2 = X.
    // Reverse: X minimizes attacks rest -> X, so a2 = rest and a1 = X.
    let a1_positions: Vec<usize> = if forward_value <= reverse_value {
        (0..n).filter(|&p| !forward_side[p]).collect()
    } else {
        (0..n).filter(|&p| reverse_side[p]).collect()
    };
    let a1: BTreeSet<ArgumentId> = a1_positions.into_iter().map(|p| f.id_at(p)).collect();
    let cut = cross_attacks_unchecked(f, &a1);
    debug_assert_eq!(cut.k, forward_value.min(reverse_value));
    Ok(cut)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum NodeState {
    Awake,
    Dormant,
    Source,
}

/// Minimum over node sets `X` containing node 0, `X != V`, of the number of
/// arcs leaving `X`.
///
/// Nodes leave the awake set `W` either by joining the source set (one per
/// sink selection) or by being put to sleep in a dormant layer when they can no
/// longer reach the sink: a label gap, or no residual arc into `W`. After each
/// max-preflow phase `(V \ W, W)` is a minimum cut separating the source set
/// from the current sink. When `W` runs empty the most recent dormant layer
/// wakes up.
struct HaoOrlin<'a> {
    n: usize,
    arcs: &'a [(usize, usize)],
    head: Vec<usize>,
    cap: Vec<u32>,
    adj: Vec<Vec<usize>>,
    label: Vec<usize>,
    excess: Vec<i64>,
    state: Vec<NodeState>,
    dormant: Vec<Vec<usize>>,
    count: Vec<usize>,
    active: Vec<usize>,
}

impl<'a> HaoOrlin<'a> {
    fn new(n: usize, arcs: &'a [(usize, usize)]) -> Self {
        let mut head = Vec::with_capacity(2 * arcs.len());
        let mut cap = Vec::with_capacity(2 * arcs.len());
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in arcs {
            adj[u].push(head.len());
            head.push(v);
            cap.push(1);
            adj[v].push(head.len());
            head.push(u);
            cap.push(0);
        }
        HaoOrlin {
            n,
            arcs,
            head,
            cap,
            adj,
            label: vec![0; n],
            excess: vec![0; n],
            state: vec![NodeState::Awake; n],
            dormant: Vec::new(),
            count: vec![0; 2 * n + 1],
            active: Vec::new(),
        }
    }

    fn run(mut self) -> (usize, Vec<bool>) {
        let n = self.n;
        let source = 0;
        self.state[source] = NodeState::Source;
        self.label[source] = n;
        self.count[0] = n - 1;
        self.saturate_out_of(source);

        let mut best = usize::MAX;
        let mut best_side = vec![false; n];
        let mut sink = self.select_sink().expect("at least two nodes");

        loop {
            self.discharge_all(sink);

            let value = self
                .arcs
                .iter()
                .filter(|&&(u, v)| {
                    self.state[u] != NodeState::Awake && self.state[v] == NodeState::Awake
                })
                .count();
            if value < best {
                best = value;
                for (p, side) in best_side.iter_mut().enumerate() {
                    *side = self.state[p] != NodeState::Awake;
                }
            }

            self.count[self.label[sink]] -= 1;
            self.state[sink] = NodeState::Source;
            self.label[sink] = n;
            self.saturate_out_of(sink);

            if !self.state.contains(&NodeState::Awake) {
                match self.dormant.pop() {
                    Some(layer) => {
                        for v in layer {
                            self.state[v] = NodeState::Awake;
                            self.count[self.label[v]] += 1;
                        }
                    }
                    None => break,
                }
            }
            sink = match self.select_sink() {
                Some(t) => t,
                None => break,
            };
            self.active = (0..n)
                .filter(|&v| v != sink && self.state[v] == NodeState::Awake && self.excess[v] > 0)
                .collect();
        }
        (best, best_side)
    }

    fn select_sink(&self) -> Option<usize> {
        (0..self.n)
            .filter(|&v| self.state[v] == NodeState::Awake)
            .min_by_key(|&v| (self.label[v], v))
    }

    /// Pushes all residual capacity out of a node that just joined the source
    /// set.
    fn saturate_out_of(&mut self, u: usize) {
        for i in 0..self.adj[u].len() {
            let e = self.adj[u][i];
            let v = self.head[e];
            let c = self.cap[e];
            if c == 0 || self.state[v] == NodeState::Source {
                continue;
            }
            self.cap[e] = 0;
            self.cap[e ^ 1] += c;
            self.excess[u] -= c as i64;
            self.excess[v] += c as i64;
            if self.state[v] == NodeState::Awake {
                self.active.push(v);
            }
        }
    }

    fn discharge_all(&mut self, sink: usize) {
        while let Some(v) = self.active.pop() {
            if v == sink || self.state[v] != NodeState::Awake || self.excess[v] <= 0 {
                continue;
            }
            self.discharge(v, sink);
        }
    }

    fn discharge(&mut self, v: usize, sink: usize) {
        while self.excess[v] > 0 && self.state[v] == NodeState::Awake {
            for i in 0..self.adj[v].len() {
                let e = self.adj[v][i];
                let w = self.head[e];
                if self.cap[e] == 0
                    || self.state[w] != NodeState::Awake
                    || self.label[v] != self.label[w] + 1
                {
                    continue;
                }
                let delta = (self.cap[e] as i64).min(self.excess[v]);
                self.cap[e] -= delta as u32;
                self.cap[e ^ 1] += delta as u32;
                self.excess[v] -= delta;
                self.excess[w] += delta;
                if w != sink && self.excess[w] == delta {
                    self.active.push(w);
                }
                if self.excess[v] == 0 {
                    break;
                }
            }
            if self.excess[v] > 0 {
                self.relabel(v);
            }
        }
    }

    fn relabel(&mut self, v: usize) {
        let d = self.label[v];
        if self.count[d] == 1 {
            // Gap: nothing at or above d can reach the sink.
            let layer: Vec<usize> = (0..self.n)
                .filter(|&w| self.state[w] == NodeState::Awake && self.label[w] >= d)
                .collect();
            self.put_to_sleep(layer);
            return;
        }
        let lowest = self.adj[v]
            .iter()
            .filter(|&&e| self.cap[e] > 0 && self.state[self.head[e]] == NodeState::Awake)
            .map(|&e| self.label[self.head[e]])
            .min();
        match lowest {
            None => self.put_to_sleep(vec![v]),
            Some(l) => {
                self.count[d] -= 1;
                self.label[v] = l + 1;
                self.count[l + 1] += 1;
            }
        }
    }

    fn put_to_sleep(&mut self, layer: Vec<usize>) {
        for &w in &layer {
            self.state[w] = NodeState::Dormant;
            self.count[self.label[w]] -= 1;
        }
        self.dormant.push(layer);
    }
}

/// Exhaustive minimum of the `a2 -> a1` attack count over every non-empty
/// proper `a2`. Ties go to the smallest `a2` as a sorted set.
pub fn brute_force_min_cut(f: &Framework) -> Result<Cut> {
    require_two(f)?;
    let n = f.len();
    if n > BRUTE_FORCE_CUT_LIMIT {
        return Err(Error::precondition(format!(
            "brute-force cut is limited to {BRUTE_FORCE_CUT_LIMIT} arguments, got {n}"
        )));
    }
    let arcs: Vec<(usize, usize)> = f
        .attacks()
        .iter()
        .map(|at| (f.position(at.source).unwrap(), f.position(at.target).unwrap()))
        .collect();
    let full = (1u32 << n) - 1;
    let mut best: Option<(usize, BTreeSet<ArgumentId>)> = None;
    for a2_mask in 1..full {
        let k = arcs
            .iter()
            .filter(|&&(s, t)| a2_mask >> s & 1 == 1 && a2_mask >> t & 1 == 0)
            .count();
        if best.as_ref().is_some_and(|(bk, _)| k > *bk) {
            continue;
        }
        let a2: BTreeSet<ArgumentId> = (0..n)
            .filter(|&p| a2_mask >> p & 1 == 1)
            .map(|p| f.id_at(p))
            .collect();
        let better = match &best {
            None => true,
            Some((bk, b2)) => k < *bk || (k == *bk && a2 < *b2),
        };
        if better {
            best = Some((k, a2));
        }
    }
    let (_, a2) = best.expect("at least one proper subset");
    let a1 = f
        .arguments()
        .iter()
        .copied()
        .filter(|a| !a2.contains(a))
        .collect();
    Ok(cross_attacks_unchecked(f, &a1))
}

/// Work counters for [`balanced_cut_with_stats`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BalancedCutStats {
    /// Attacks looked at while growing `a1`.
    pub attack_inspections: usize,
    /// Arguments looked at while searching for the next unvisited one.
    pub refill_probes: usize,
}

/// Grows `a1` from `start` (default: lowest id) to `ceil(|A| / 2)` arguments.
pub fn balanced_cut(f: &Framework, start: Option<ArgumentId>) -> Result<Cut> {
    Ok(balanced_cut_with_stats(f, start)?.0)
}

/// Round by round: the attackers of each frontier argument are added in
/// ascending id order while `a1` is below half the framework. A round that
/// adds nothing is followed by adding the lowest-id unvisited argument.
pub fn balanced_cut_with_stats(
    f: &Framework,
    start: Option<ArgumentId>,
) -> Result<(Cut, BalancedCutStats)> {
    require_two(f)?;
    let n = f.len();
    let start = match start {
        Some(a) => f.position(a).ok_or(Error::UnknownArgument(a))?,
        None => 0,
    };
    let target = n.div_ceil(2);
    let mut stats = BalancedCutStats::default();
    let mut visited = vec![false; n];
    let mut members = vec![start];
    visited[start] = true;
    let mut frontier = vec![start];
    let mut next_unvisited = 0;

    while members.len() < target {
        let mut next_round = Vec::new();
        'round: for &a in &frontier {
            for &i in f.attackers_at(a) {
                if members.len() >= target {
                    break 'round;
                }
                stats.attack_inspections += 1;
                let i = i as usize;
                if !visited[i] {
                    visited[i] = true;
                    members.push(i);
                    next_round.push(i);
                }
            }
        }
        if next_round.is_empty() && members.len() < target {
            while visited[next_unvisited] {
                stats.refill_probes += 1;
                next_unvisited += 1;
            }
            stats.refill_probes += 1;
            visited[next_unvisited] = true;
            members.push(next_unvisited);
            next_round.push(next_unvisited);
        }
        frontier = next_round;
    }
    let a1 = members.into_iter().map(|p| f.id_at(p)).collect();
    Ok((cross_attacks_unchecked(f, &a1), stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::tests::{f_ex, ids};
    use crate::framework::{cross_attacks, scc_decomposition};
    use crate::generator::{complete_framework, random_framework};

    #[test]
    fn example_min_cut_is_unidirectional() {
        let c = hao_orlin_min_cut(&f_ex()).unwrap();
        assert_eq!(c.k, 0);
        c.verify(&f_ex()).unwrap();
        assert_eq!(brute_force_min_cut(&f_ex()).unwrap().k, 0);
    }

    #[test]
    fn small_min_cuts() {
        let tri = Framework::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(hao_orlin_min_cut(&tri).unwrap().k, 1);
        assert_eq!(brute_force_min_cut(&tri).unwrap().k, 1);

        let empty = Framework::from_pairs(2, &[]).unwrap();
        assert_eq!(hao_orlin_min_cut(&empty).unwrap().k, 0);

        let cycle = Framework::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(brute_force_min_cut(&cycle).unwrap().k, 1);
        assert_eq!(hao_orlin_min_cut(&cycle).unwrap().k, 1);

        let k3 = complete_framework(3).unwrap();
        assert_eq!(brute_force_min_cut(&k3).unwrap().k, 2);
        assert_eq!(hao_orlin_min_cut(&k3).unwrap().k, 2);

        let one = Framework::from_pairs(1, &[]).unwrap();
        assert!(hao_orlin_min_cut(&one).is_err());
        assert!(balanced_cut(&one, None).is_err());
    }

    #[test]
    fn brute_force_tie_break() {
        // No attacks: every a2 gives k = 0; the smallest sorted set is {0}.
        let f = Framework::from_pairs(3, &[]).unwrap();
        let c = brute_force_min_cut(&f).unwrap();
        assert_eq!(c.a2, ids(&[0]));
        assert!(brute_force_min_cut(&Framework::from_pairs(17, &[]).unwrap()).is_err());
    }

    #[test]
    fn hao_orlin_matches_brute_force() {
        for seed in 0..300u64 {
            let n = 2 + (seed % 11) as u32;
            let m = (seed.wrapping_mul(2654435761) % (n as u64 * n as u64 + 1)) as usize;
            let f = random_framework(n, m, seed).unwrap();
            let ho = hao_orlin_min_cut(&f).unwrap();
            ho.verify(&f).unwrap();
            assert_eq!(ho.k, brute_force_min_cut(&f).unwrap().k, "seed {seed} n {n} m {m}");
            assert_eq!(ho.k == 0, scc_decomposition(&f).len() >= 2, "seed {seed}");
        }
    }

    #[test]
    fn balanced_examples() {
        let f = f_ex();
        assert_eq!(balanced_cut(&f, Some(ArgumentId(3))).unwrap().a1, ids(&[0, 3, 4]));
        assert_eq!(balanced_cut(&f, Some(ArgumentId(0))).unwrap().a1, ids(&[0, 2, 4]));
        let bare = Framework::from_pairs(4, &[]).unwrap();
        assert_eq!(balanced_cut(&bare, Some(ArgumentId(0))).unwrap().a1, ids(&[0, 1]));
        assert!(balanced_cut(&f, Some(ArgumentId(9))).is_err());
    }

    #[test]
    fn balanced_size_and_linear_work() {
        for seed in 0..100u64 {
            let n = 2 + (seed % 15) as u32;
            let m = (seed * 13 % (n as u64 * n as u64 + 1)) as usize;
            let f = random_framework(n, m, seed).unwrap();
            for &start in f.arguments() {
                let (c, stats) = balanced_cut_with_stats(&f, Some(start)).unwrap();
                assert_eq!(c.a1.len(), f.len().div_ceil(2));
                assert!(c.a1.contains(&start));
                assert!(stats.attack_inspections + stats.refill_probes <= f.attack_count() + f.len());
                assert_eq!(balanced_cut(&f, Some(start)).unwrap(), c);
            }
        }
    }

    #[test]
    fn minimize_k_orientation() {
        let f = f_ex();
        let req = CutRequest {
            algorithm: CutAlgorithm::Balanced,
            start: Some(ArgumentId(3)),
            orientation: Orientation::MinimizeK,
        };
        let c = compute_cut(&f, &req).unwrap();
        let literal = balanced_cut(&f, Some(ArgumentId(3))).unwrap();
        assert!(c.k <= literal.k);
        assert!(c.k <= literal.swapped(&f).k);
        // Dominance of the minimum cut over any sampled partition.
        let ho = hao_orlin_min_cut(&f).unwrap();
        assert!(ho.k <= cross_attacks(&f, &ids(&[1, 2])).unwrap().k);
    }
}
