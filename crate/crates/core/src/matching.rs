//! Exact maximum matching (Edmonds' blossom algorithm) and greedy
//! maximal matching. Instances are not bipartite — the dummy cluster
//! closes odd cycles — so bipartite algorithms do not apply.

use std::collections::VecDeque;

use crate::graph::CsrGraph;

const NONE: u32 = u32::MAX;

/// Greedy maximal matching in edge-list order. Returns `mate`.
pub fn greedy_maximal_matching(g: &CsrGraph) -> Vec<u32> {
    let mut mate = vec![NONE; g.n()];
    for (u, v) in g.edges() {
        if mate[u as usize] == NONE && mate[v as usize] == NONE {
            mate[u as usize] = v;
            mate[v as usize] = u;
        }
    }
    mate
}

struct Blossom<'a> {
    g: &'a CsrGraph,
    mate: Vec<u32>,
    parent: Vec<u32>,
    base: Vec<u32>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    on_path: Vec<bool>,
    queue: VecDeque<u32>,
}

impl<'a> Blossom<'a> {
    fn lca(&mut self, mut a: u32, mut b: u32) -> u32 {
        self.on_path.iter_mut().for_each(|x| *x = false);
        loop {
            a = self.base[a as usize];
            self.on_path[a as usize] = true;
            if self.mate[a as usize] == NONE {
                break;
            }
            a = self.parent[self.mate[a as usize] as usize];
        }
        loop {
            b = self.base[b as usize];
            if self.on_path[b as usize] {
                return b;
            }
            b = self.parent[self.mate[b as usize] as usize];
        }
    }

    fn mark_path(&mut self, mut v: u32, b: u32, mut child: u32) {
        while self.base[v as usize] != b {
            let m = self.mate[v as usize];
            self.in_blossom[self.base[v as usize] as usize] = true;
            self.in_blossom[self.base[m as usize] as usize] = true;
            self.parent[v as usize] = child;
            child = m;
            v = self.parent[m as usize];
        }
    }

    /// BFS for an augmenting path from `root`; returns its free endpoint.
    fn find_path(&mut self, root: u32) -> u32 {
        let n = self.g.n();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for i in 0..n {
            self.base[i] = i as u32;
        }
        self.used[root as usize] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in self.g.neighbors(v) {
                if self.base[v as usize] == self.base[to as usize] || self.mate[v as usize] == to {
                    continue;
                }
                let to_matched = self.mate[to as usize] != NONE;
                if to == root || (to_matched && self.parent[self.mate[to as usize] as usize] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i] as usize] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i as u32);
                            }
                        }
                    }
                } else if self.parent[to as usize] == NONE {
                    self.parent[to as usize] = v;
                    if !to_matched {
                        return to;
                    }
                    let next = self.mate[to as usize];
                    self.used[next as usize] = true;
                    self.queue.push_back(next);
                }
            }
        }
        NONE
    }
}

/// Maximum-cardinality matching; returns `mate` (`u32::MAX` = unmatched).
pub fn maximum_matching(g: &CsrGraph) -> Vec<u32> {
    let n = g.n();
    let mut b = Blossom {
        g,
        mate: greedy_maximal_matching(g),
        parent: vec![NONE; n],
        base: (0..n as u32).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
        on_path: vec![false; n],
        queue: VecDeque::new(),
    };
    for root in 0..n as u32 {
        if b.mate[root as usize] != NONE || g.neighbors(root).is_empty() {
            continue;
        }
        let mut v = b.find_path(root);
        while v != NONE {
            let pv = b.parent[v as usize];
            let ppv = b.mate[pv as usize];
            b.mate[v as usize] = pv;
            b.mate[pv as usize] = v;
            v = ppv;
        }
    }
    b.mate
}

pub fn matching_size(mate: &[u32]) -> usize {
    mate.iter().filter(|&&m| m != NONE).count() / 2
}

pub fn max_matching_size(g: &CsrGraph) -> usize {
    matching_size(&maximum_matching(g))
}

/// Whether `mate` is a symmetric matching using only edges of `g`.
pub fn is_valid_matching(g: &CsrGraph, mate: &[u32]) -> bool {
    mate.len() == g.n()
        && mate.iter().enumerate().all(|(u, &m)| m == NONE || (mate[m as usize] == u as u32 && g.has_edge(u as u32, m)))
}
