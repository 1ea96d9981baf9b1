//! Integral maximum flow (Dinic).

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: u64,
    rev: usize,
}

/// Directed network with non-negative integer capacities.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    adj: Vec<Vec<Arc>>,
    // (tail, index in adj[tail], original capacity) per user-added arc.
    arcs: Vec<(usize, usize, u64)>,
}

/// Identifier of an arc added with [`FlowNetwork::add_arc`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcId(usize);

/// Value of a maximum flow and the flow carried by every arc.
#[derive(Debug, Clone)]
pub struct MaxFlow {
    pub value: u64,
    flows: Vec<u64>,
}

impl MaxFlow {
    pub fn flow(&self, arc: ArcId) -> u64 {
        self.flows[arc.0]
    }
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            arcs: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: u64) -> Result<ArcId> {
        let n = self.adj.len();
        if from >= n || to >= n {
            return Err(Error::invalid(format!(
                "arc {from} -> {to} references a node outside 0..{n}"
            )));
        }
        let fwd = self.adj[from].len();
        let bwd = self.adj[to].len() + usize::from(from == to);
        self.adj[from].push(Arc { to, cap, rev: bwd });
        self.adj[to].push(Arc {
            to: from,
            cap: 0,
            rev: fwd,
        });
        self.arcs.push((from, fwd, cap));
        Ok(ArcId(self.arcs.len() - 1))
    }

    /// Maximum `source → sink` flow. The network itself is left untouched.
    pub fn max_flow(&self, source: usize, sink: usize) -> Result<MaxFlow> {
        let n = self.adj.len();
        if source >= n || sink >= n {
            return Err(Error::invalid("source or sink outside the network"));
        }
        if source == sink {
            return Err(Error::invalid("source and sink coincide"));
        }
        let mut residual = self.adj.clone();
        let mut value = 0u64;
        let mut level = vec![usize::MAX; n];
        let mut next = vec![0usize; n];
        while bfs_levels(&residual, source, sink, &mut level) {
            next.iter_mut().for_each(|x| *x = 0);
            loop {
                let pushed = augment(&mut residual, &level, &mut next, source, sink, u64::MAX);
                if pushed == 0 {
                    break;
                }
                value += pushed;
            }
        }
        let flows = self
            .arcs
            .iter()
            .map(|&(tail, idx, cap)| cap - residual[tail][idx].cap)
            .collect();
        Ok(MaxFlow { value, flows })
    }
}

/// Layers the residual graph; false once the sink is unreachable.
fn bfs_levels(g: &[Vec<Arc>], source: usize, sink: usize, level: &mut [usize]) -> bool {
    level.iter_mut().for_each(|l| *l = usize::MAX);
    level[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for arc in &g[u] {
            if arc.cap > 0 && level[arc.to] == usize::MAX {
                level[arc.to] = level[u] + 1;
                queue.push_back(arc.to);
            }
        }
    }
    level[sink] != usize::MAX
}

fn augment(
    g: &mut [Vec<Arc>],
    level: &[usize],
    next: &mut [usize],
    u: usize,
    sink: usize,
    limit: u64,
) -> u64 {
    if u == sink {
        return limit;
    }
    while next[u] < g[u].len() {
        let i = next[u];
        let Arc { to, cap, rev } = g[u][i];
        if cap > 0 && level[to] == level[u] + 1 {
            let pushed = augment(g, level, next, to, sink, limit.min(cap));
            if pushed > 0 {
                g[u][i].cap -= pushed;
                g[to][rev].cap += pushed;
                return pushed;
            }
        }
        next[u] += 1;
    }
    0
}
