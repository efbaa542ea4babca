//! Bounded breadth-first exploration of transition systems and the graph
//! algorithms shared by the semantic checks.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

/// Exploration bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of distinct states.
    pub max_states: usize,
    /// Maximum distance from a root at which states are expanded.
    pub max_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_states: 10_000,
            max_depth: 256,
        }
    }
}

/// A system whose states can be identified by a key and stepped.
pub trait TransitionSystem {
    /// A state.
    type State: Clone;
    /// Identity of a state; equal keys are merged.
    type Key: Ord + Clone;
    /// Edge annotation.
    type Label: Clone;

    /// The identity of a state.
    fn key(&self, s: &Self::State) -> Self::Key;
    /// All single-step successors with their labels.
    fn successors(&self, s: &Self::State) -> Vec<(Self::Label, Self::State)>;
}

/// A labelled edge between state indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge<L> {
    /// Source state.
    pub from: usize,
    /// Annotation.
    pub label: L,
    /// Target state.
    pub to: usize,
}

/// A finite explored transition graph.
#[derive(Clone, Debug)]
pub struct Graph<S, L> {
    /// States in discovery order.
    pub states: Vec<S>,
    /// Edges in discovery order.
    pub edges: Vec<Edge<L>>,
    /// Indices of the exploration roots, in the order given.
    pub roots: Vec<usize>,
    /// True iff a limit stopped the exploration.
    pub truncated: bool,
    out: Vec<Vec<usize>>,
    expanded: Vec<bool>,
}

/// Explores from the given roots breadth-first within the limits.
pub fn explore<T: TransitionSystem>(
    ts: &T,
    roots: Vec<T::State>,
    limits: Limits,
) -> Graph<T::State, T::Label> {
    let mut g = Graph {
        states: Vec::new(),
        edges: Vec::new(),
        roots: Vec::new(),
        truncated: false,
        out: Vec::new(),
        expanded: Vec::new(),
    };
    let mut index: BTreeMap<T::Key, usize> = BTreeMap::new();
    let mut depth: Vec<usize> = Vec::new();
    let mut queue = VecDeque::new();
    for r in roots {
        let k = ts.key(&r);
        let i = match index.get(&k) {
            Some(&i) => i,
            None => {
                let i = g.push_state(r);
                depth.push(0);
                index.insert(k, i);
                queue.push_back(i);
                i
            }
        };
        g.roots.push(i);
    }
    while let Some(i) = queue.pop_front() {
        let succ = ts.successors(&g.states[i]);
        if depth[i] >= limits.max_depth {
            if !succ.is_empty() {
                g.truncated = true;
            }
            continue;
        }
        g.expanded[i] = true;
        for (label, s2) in succ {
            let k = ts.key(&s2);
            let j = match index.get(&k) {
                Some(&j) => j,
                None => {
                    if g.states.len() >= limits.max_states {
                        g.truncated = true;
                        continue;
                    }
                    let j = g.push_state(s2);
                    depth.push(depth[i] + 1);
                    index.insert(k, j);
                    queue.push_back(j);
                    j
                }
            };
            g.out[i].push(g.edges.len());
            g.edges.push(Edge {
                from: i,
                label,
                to: j,
            });
        }
    }
    g
}

impl<S, L> Graph<S, L> {
    fn push_state(&mut self, s: S) -> usize {
        self.states.push(s);
        self.out.push(Vec::new());
        self.expanded.push(false);
        self.states.len() - 1
    }

    /// The first root.
    pub fn root(&self) -> usize {
        self.roots.first().copied().unwrap_or(0)
    }

    /// Number of states.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    /// True when the graph has no state.
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Outgoing edges of a state.
    pub fn out_edges(&self, i: usize) -> impl Iterator<Item = &Edge<L>> + '_ {
        self.out[i].iter().map(move |&e| &self.edges[e])
    }

    /// Distinct successor indices of a state.
    pub fn successors(&self, i: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.out_edges(i).map(|e| e.to).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// True when the state was expanded and has no outgoing edge.
    pub fn is_terminal(&self, i: usize) -> bool {
        self.expanded[i] && self.out[i].is_empty()
    }

    /// True when the state's successors were computed.
    pub fn is_expanded(&self, i: usize) -> bool {
        self.expanded[i]
    }

    /// States reachable from the given ones, including them.
    pub fn reachable(&self, from: &[usize]) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut stack: Vec<usize> = from.to_vec();
        while let Some(i) = stack.pop() {
            if seen.contains(i) {
                continue;
            }
            seen.insert(i);
            for e in self.out_edges(i) {
                if !seen.contains(e.to) {
                    stack.push(e.to);
                }
            }
        }
        seen
    }

    fn digraph(&self) -> DiGraph<(), ()> {
        let mut g = DiGraph::with_capacity(self.len(), self.edges.len());
        for _ in 0..self.len() {
            g.add_node(());
        }
        for e in &self.edges {
            g.add_edge(NodeIndex::new(e.from), NodeIndex::new(e.to), ());
        }
        g
    }

    /// Strongly connected components, sinks first.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        tarjan_scc(&self.digraph())
            .into_iter()
            .map(|c| c.into_iter().map(|n| n.index()).collect())
            .collect()
    }

    /// For every state, the set of states on a cycle (a non-trivial
    /// component or a self-loop).
    pub fn cyclic_states(&self) -> FixedBitSet {
        let mut cyc = FixedBitSet::with_capacity(self.len());
        for comp in self.sccs() {
            let looped = comp.len() > 1
                || comp
                    .first()
                    .is_some_and(|&i| self.out_edges(i).any(|e| e.to == i));
            if looped {
                for i in comp {
                    cyc.insert(i);
                }
            }
        }
        cyc
    }

    /// True when a cycle is reachable from one of the given states.
    pub fn cycle_reachable(&self, from: &[usize]) -> bool {
        let reach = self.reachable(from);
        let cyc = self.cyclic_states();
        reach.intersection(&cyc).next().is_some()
    }

    /// True when the graph has no cycle.
    pub fn is_acyclic(&self) -> bool {
        self.cyclic_states().is_clear()
    }

    /// Reflexive-transitive reachability sets of all states.
    pub fn reach_sets(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        let mut sets: Vec<FixedBitSet> = alloc::vec![FixedBitSet::new(); n];
        let mut comp_of = alloc::vec![usize::MAX; n];
        for (ci, comp) in self.sccs().into_iter().enumerate() {
            for &i in &comp {
                comp_of[i] = ci;
            }
            let mut acc = FixedBitSet::with_capacity(n);
            for &i in &comp {
                acc.insert(i);
            }
            for &i in &comp {
                for e in self.out_edges(i) {
                    if comp_of[e.to] != ci {
                        acc.union_with(&sets[e.to]);
                    }
                }
            }
            for &i in &comp {
                sets[i] = acc.clone();
            }
        }
        sets
    }

    /// Shortest path, as edge indices, from `from` to a state satisfying
    /// `goal` that uses at least `min_len` edges.
    pub fn shortest_path(
        &self,
        from: usize,
        min_len: usize,
        goal: impl Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        let width = min_len + 1;
        let node = |s: usize, k: usize| s * width + k;
        let mut parent: Vec<Option<(usize, usize)>> = alloc::vec![None; self.len() * width];
        let mut seen = FixedBitSet::with_capacity(self.len() * width);
        let mut queue = VecDeque::new();
        seen.insert(node(from, 0));
        queue.push_back((from, 0usize));
        while let Some((s, k)) = queue.pop_front() {
            if k == min_len && goal(s) {
                let mut path = Vec::new();
                let mut cur = node(s, k);
                while let Some((prev, edge)) = parent[cur] {
                    path.push(edge);
                    cur = prev;
                }
                path.reverse();
                return Some(path);
            }
            for &ei in &self.out[s] {
                let t = self.edges[ei].to;
                let k2 = (k + 1).min(min_len);
                let id = node(t, k2);
                if !seen.contains(id) {
                    seen.insert(id);
                    parent[id] = Some((node(s, k), ei));
                    queue.push_back((t, k2));
                }
            }
        }
        None
    }

    /// Renders the graph in Graphviz DOT syntax.
    pub fn to_dot(&self, state: impl Fn(&S) -> String, edge: impl Fn(&L) -> String) -> String {
        let mut out = String::from("digraph states {\n  node [shape=box, fontname=monospace];\n");
        for (i, s) in self.states.iter().enumerate() {
            let shape = if self.roots.contains(&i) {
                ", penwidth=2"
            } else {
                ""
            };
            let _ = writeln!(out, "  s{i} [label=\"{}\"{shape}];", escape(&state(s)));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  s{} -> s{} [label=\"{}\"];",
                e.from,
                e.to,
                escape(&edge(&e.label))
            );
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}
