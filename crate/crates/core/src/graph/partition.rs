//! Circuit-connected partition via block decomposition, and circuit
//! witnesses via vertex-disjoint augmenting paths.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{EdgeId, GraphError, LabelledGraph, VertexId};

/// Disjoint, covering edge classes, sorted by least edge id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgePartition {
    classes: Vec<BTreeSet<EdgeId>>,
}

impl EdgePartition {
    pub fn from_classes(mut classes: Vec<BTreeSet<EdgeId>>) -> Self {
        classes.retain(|c| !c.is_empty());
        classes.sort();
        Self { classes }
    }

    pub fn classes(&self) -> &[BTreeSet<EdgeId>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, e: &EdgeId) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(e))
    }

    pub fn iter(&self) -> impl Iterator<Item = &BTreeSet<EdgeId>> {
        self.classes.iter()
    }
}

const UNSET: usize = usize::MAX;

struct BlockSearch<'a> {
    adj: &'a [Vec<(usize, usize)>],
    disc: Vec<usize>,
    low: Vec<usize>,
    clock: usize,
    stack: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl BlockSearch<'_> {
    fn visit(&mut self, u: usize, parent_edge: usize) {
        self.disc[u] = self.clock;
        self.low[u] = self.clock;
        self.clock += 1;
        for &(w, e) in &self.adj[u] {
            if e == parent_edge {
                continue;
            }
            if self.disc[w] == UNSET {
                self.stack.push(e);
                self.visit(w, e);
                self.low[u] = self.low[u].min(self.low[w]);
                if self.low[w] >= self.disc[u] {
                    let mut block = Vec::new();
                    while let Some(top) = self.stack.pop() {
                        block.push(top);
                        if top == e {
                            break;
                        }
                    }
                    self.blocks.push(block);
                }
            } else if self.disc[w] < self.disc[u] {
                // back edge (or a parallel copy of the tree edge)
                self.stack.push(e);
                self.low[u] = self.low[u].min(self.disc[w]);
            }
        }
    }
}

/// Loops as singleton classes; every other class is the edge set of a block
/// of the loop-deleted graph.
pub fn circuit_partition(g: &LabelledGraph) -> EdgePartition {
    let index: BTreeMap<&VertexId, usize> = g.vertices().iter().enumerate().map(|(i, v)| (v, i)).collect();
    let edges: Vec<&super::Edge> = g.edges().collect();
    let mut classes = Vec::new();
    let mut adj = vec![Vec::new(); index.len()];
    for (k, e) in edges.iter().enumerate() {
        if e.is_loop() {
            classes.push(BTreeSet::from([e.id.clone()]));
        } else {
            let (a, b) = (index[&e.ends[0]], index[&e.ends[1]]);
            adj[a].push((b, k));
            adj[b].push((a, k));
        }
    }
    let mut search = BlockSearch {
        adj: &adj,
        disc: vec![UNSET; index.len()],
        low: vec![UNSET; index.len()],
        clock: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
    };
    for v in 0..index.len() {
        if search.disc[v] == UNSET {
            search.visit(v, UNSET);
        }
    }
    for block in search.blocks {
        classes.push(block.into_iter().map(|k| edges[k].id.clone()).collect());
    }
    EdgePartition::from_classes(classes)
}

/// Unit-capacity flow network with split vertices.
struct Network {
    heads: Vec<usize>,
    caps: Vec<i32>,
    tags: Vec<Option<usize>>,
    out: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Self { heads: Vec::new(), caps: Vec::new(), tags: Vec::new(), out: vec![Vec::new(); nodes] }
    }

    /// Adds `from -> to` with capacity 1 and its residual twin.
    fn arc(&mut self, from: usize, to: usize, tag: Option<usize>) {
        self.out[from].push(self.heads.len());
        self.heads.push(to);
        self.caps.push(1);
        self.tags.push(tag);
        self.out[to].push(self.heads.len());
        self.heads.push(from);
        self.caps.push(0);
        self.tags.push(None);
    }

    fn flows(&self, arc: usize) -> bool {
        arc.is_multiple_of(2) && self.caps[arc] == 0
    }

    fn augment(&mut self, source: usize, sink: usize) -> bool {
        let mut via = vec![UNSET; self.out.len()];
        let mut queue = VecDeque::from([source]);
        let mut seen = vec![false; self.out.len()];
        seen[source] = true;
        while let Some(x) = queue.pop_front() {
            for &a in &self.out[x] {
                let y = self.heads[a];
                if self.caps[a] > 0 && !seen[y] {
                    seen[y] = true;
                    via[y] = a;
                    queue.push_back(y);
                }
            }
        }
        if !seen[sink] {
            return false;
        }
        let mut y = sink;
        while y != source {
            let a = via[y];
            self.caps[a] -= 1;
            self.caps[a ^ 1] += 1;
            y = self.heads[a ^ 1];
        }
        true
    }
}

/// A circuit through `e` and `f`, listed in traversal order starting with `e`.
pub fn circuit_witness(g: &LabelledGraph, e: &EdgeId, f: &EdgeId) -> Result<Vec<EdgeId>, GraphError> {
    let not_found = || GraphError::WitnessNotFound(e.clone(), f.clone());
    let edge_e = g.edge(e).ok_or_else(|| GraphError::UnknownEdge(e.clone()))?;
    let edge_f = g.edge(f).ok_or_else(|| GraphError::UnknownEdge(f.clone()))?;
    let partition = circuit_partition(g);
    if e == f || partition.class_of(e) != partition.class_of(f) {
        return Err(not_found());
    }
    let class = &partition.classes()[partition.class_of(e).ok_or_else(not_found)?];

    let vertices: Vec<&VertexId> = class
        .iter()
        .flat_map(|id| g.edge(id).expect("class edge").ends.iter())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let idx = |v: &VertexId| vertices.iter().position(|w| *w == v).expect("class vertex");
    let n = vertices.len();
    let (source, sink) = (2 * n, 2 * n + 1);
    let mut net = Network::new(2 * n + 2);
    for i in 0..n {
        net.arc(2 * i, 2 * i + 1, None);
    }
    let others: Vec<&EdgeId> = class.iter().filter(|id| *id != e && *id != f).collect();
    for (k, id) in others.iter().enumerate() {
        let edge = g.edge(id).expect("class edge");
        let (p, q) = (idx(&edge.ends[0]), idx(&edge.ends[1]));
        net.arc(2 * p + 1, 2 * q, Some(k));
        net.arc(2 * q + 1, 2 * p, Some(k));
    }
    let [a, b] = [idx(&edge_e.ends[0]), idx(&edge_e.ends[1])];
    let [c, d] = [idx(&edge_f.ends[0]), idx(&edge_f.ends[1])];
    net.arc(source, 2 * a, None);
    net.arc(source, 2 * b, None);
    net.arc(2 * c + 1, sink, None);
    net.arc(2 * d + 1, sink, None);
    for _ in 0..2 {
        if !net.augment(source, sink) {
            return Err(not_found());
        }
    }

    // Follow each unit of flow from its start vertex to an endpoint of f.
    let trace = |start: usize| -> (Vec<EdgeId>, usize) {
        let mut path = Vec::new();
        let mut v = start;
        loop {
            let next =
                net.out[2 * v + 1].iter().copied().find(|&arc| net.flows(arc)).expect("flow leaves every used vertex");
            if net.heads[next] == sink {
                return (path, v);
            }
            path.push(others[net.tags[next].expect("edge arc")].clone());
            v = net.heads[next] / 2;
        }
    };
    let (from_a, _) = trace(a);
    let (from_b, _) = trace(b);

    // e: a -> b, then b ~> (end of f), f, then (a's end of f) ~> a reversed.
    let mut walk = vec![e.clone()];
    walk.extend(from_b);
    walk.push(f.clone());
    walk.extend(from_a.into_iter().rev());
    debug_assert!(is_circuit(g, &walk));
    Ok(walk)
}

/// True iff `walk` lists the edges of a closed walk that repeats no edge and
/// no vertex other than its start.
pub fn is_circuit(g: &LabelledGraph, walk: &[EdgeId]) -> bool {
    let Some(first) = walk.first().and_then(|id| g.edge(id)) else {
        return false;
    };
    let distinct: BTreeSet<&EdgeId> = walk.iter().collect();
    if distinct.len() != walk.len() {
        return false;
    }
    'start: for start in first.ends.iter() {
        let mut at = start;
        let mut visited = BTreeSet::from([start]);
        for (i, id) in walk.iter().enumerate() {
            let Some(edge) = g.edge(id) else {
                return false;
            };
            let Some(next) = edge.other_end(at) else {
                continue 'start;
            };
            let last = i + 1 == walk.len();
            if last {
                if next != start {
                    continue 'start;
                }
            } else if !visited.insert(next) {
                continue 'start;
            }
            at = next;
        }
        return true;
    }
    false
}
