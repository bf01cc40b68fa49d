//! Directed multigraphs, admissible words and finite irreducibility.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no edges")]
    NoEdges,
    #[error("edge {edge} references unknown vertex {vertex}")]
    UnknownVertex { edge: String, vertex: usize },
    #[error("unknown edge id {0}")]
    UnknownEdge(usize),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    /// Initial vertex `i(e)`.
    pub from: usize,
    /// Terminal vertex `t(e)`.
    pub to: usize,
}

/// A finite directed multigraph. Edge ids are indices into [`Self::edges`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedMultigraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    /// `outgoing[v]`: edges with initial vertex `v`, ascending.
    outgoing: Vec<Vec<usize>>,
    /// `incoming[v]`: edges with terminal vertex `v`, ascending.
    incoming: Vec<Vec<usize>>,
}

impl DirectedMultigraph {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if edges.is_empty() {
            return Err(GraphError::NoEdges);
        }
        let mut seen = BTreeSet::new();
        for name in vertices.iter().chain(edges.iter().map(|e| &e.name)) {
            if !seen.insert(name.as_str()) {
                return Err(GraphError::DuplicateName(name.clone()));
            }
        }
        let nv = vertices.len();
        let mut outgoing = vec![Vec::new(); nv];
        let mut incoming = vec![Vec::new(); nv];
        for (id, e) in edges.iter().enumerate() {
            for v in [e.from, e.to] {
                if v >= nv {
                    return Err(GraphError::UnknownVertex {
                        edge: e.name.clone(),
                        vertex: v,
                    });
                }
            }
            outgoing[e.from].push(id);
            incoming[e.to].push(id);
        }
        Ok(Self {
            vertices,
            edges,
            outgoing,
            incoming,
        })
    }

    /// Single vertex with `n` loops named `e0, e1, ...`.
    pub fn full_shift(n: usize) -> Self {
        let edges = (0..n)
            .map(|k| Edge {
                name: format!("e{k}"),
                from: 0,
                to: 0,
            })
            .collect();
        Self::new(vec!["v".to_string()], edges).expect("full shift needs at least one edge")
    }

    /// Builds a graph from `(from, to)` pairs with generated names.
    pub fn from_pairs(n_vertices: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let vertices = (0..n_vertices).map(|v| format!("v{v}")).collect();
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(k, &(from, to))| Edge {
                name: format!("e{k}"),
                from,
                to,
            })
            .collect();
        Self::new(vertices, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Result<&Edge, GraphError> {
        self.edges.get(id).ok_or(GraphError::UnknownEdge(id))
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_id(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn outgoing(&self, v: usize) -> &[usize] {
        &self.outgoing[v]
    }

    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    /// Edges that may follow `e` in a path, i.e. those starting at `t(e)`.
    pub fn successors(&self, e: usize) -> &[usize] {
        &self.outgoing[self.edges[e].to]
    }

    /// `A(ee') = 1` iff `t(e) = i(e')`.
    pub fn admissible(&self, e: usize, e_next: usize) -> Result<bool, GraphError> {
        Ok(self.edge(e)?.to == self.edge(e_next)?.from)
    }

    pub fn is_path(&self, edges: &[usize]) -> bool {
        edges.iter().all(|&e| e < self.edges.len())
            && edges
                .windows(2)
                .all(|w| self.edges[w[0]].to == self.edges[w[1]].from)
    }

    /// Streams all admissible words of length `n` in lexicographic edge order.
    pub fn enumerate_words(&self, n: usize) -> WordIter<'_> {
        WordIter::new(self, n)
    }

    /// Searches, for every ordered edge pair `(e, e')`, a shortest connecting
    /// word `w` (length `1..=max_len`) such that `e w e'` is a path.
    pub fn finite_irreducibility(&self, max_len: usize) -> IrreducibilityReport {
        let ne = self.edges.len();
        let mut witnesses = BTreeSet::new();
        let mut failing = Vec::new();
        for e in 0..ne {
            let paths = self.shortest_words_from(self.edges[e].to, max_len);
            for e2 in 0..ne {
                match &paths[self.edges[e2].from] {
                    Some(w) => {
                        witnesses.insert(w.clone());
                    }
                    None => failing.push((e, e2)),
                }
            }
        }
        IrreducibilityReport {
            irreducible: failing.is_empty(),
            max_len,
            witnesses: witnesses.into_iter().map(Word).collect(),
            failing,
        }
    }

    /// Breadth-first search over non-empty words starting at vertex `start`;
    /// entry `v` is a shortest (then lexicographically smallest) word ending at `v`.
    fn shortest_words_from(&self, start: usize, max_len: usize) -> Vec<Option<Vec<usize>>> {
        let nv = self.vertices.len();
        let mut best: Vec<Option<Vec<usize>>> = vec![None; nv];
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        let mut expanded = vec![false; nv];
        for &e in &self.outgoing[start] {
            queue.push_back(vec![e]);
        }
        while let Some(w) = queue.pop_front() {
            if w.len() > max_len {
                break;
            }
            let end = self.edges[*w.last().unwrap()].to;
            if best[end].is_none() {
                best[end] = Some(w.clone());
            }
            if expanded[end] {
                continue;
            }
            expanded[end] = true;
            for &e in &self.outgoing[end] {
                let mut next = w.clone();
                next.push(e);
                queue.push_back(next);
            }
        }
        best
    }

    /// Strongly connected components (Tarjan), each listed in ascending order.
    pub fn vertex_components(adjacent: &[Vec<usize>]) -> Vec<Vec<usize>> {
        struct State<'a> {
            adj: &'a [Vec<usize>],
            index: Vec<Option<usize>>,
            low: Vec<usize>,
            on_stack: Vec<bool>,
            stack: Vec<usize>,
            next: usize,
            out: Vec<Vec<usize>>,
        }
        fn visit(s: &mut State<'_>, v: usize) {
            s.index[v] = Some(s.next);
            s.low[v] = s.next;
            s.next += 1;
            s.stack.push(v);
            s.on_stack[v] = true;
            for i in 0..s.adj[v].len() {
                let w = s.adj[v][i];
                match s.index[w] {
                    None => {
                        visit(s, w);
                        s.low[v] = s.low[v].min(s.low[w]);
                    }
                    Some(iw) if s.on_stack[w] => s.low[v] = s.low[v].min(iw),
                    _ => {}
                }
            }
            if Some(s.low[v]) == s.index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = s.stack.pop().unwrap();
                    s.on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                s.out.push(comp);
            }
        }
        let n = adjacent.len();
        let mut s = State {
            adj: adjacent,
            index: vec![None; n],
            low: vec![0; n],
            on_stack: vec![false; n],
            stack: Vec::new(),
            next: 0,
            out: Vec::new(),
        };
        for v in 0..n {
            if s.index[v].is_none() {
                visit(&mut s, v);
            }
        }
        s.out
    }
}

/// A non-empty finite sequence of edge ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn edges(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when the word can be repeated: `t(w_k) = i(w_1)`.
    pub fn is_cycle(&self, g: &DirectedMultigraph) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&a), Some(&b)) => g.edges()[b].to == g.edges()[a].from,
            _ => false,
        }
    }
}

/// Depth-first word stream; holds one partial word, never the whole set.
pub struct WordIter<'g> {
    graph: &'g DirectedMultigraph,
    len: usize,
    /// `stack[d]` = index into the candidate list at depth `d`.
    cursor: Vec<usize>,
    current: Vec<usize>,
    started: bool,
    done: bool,
}

impl<'g> WordIter<'g> {
    fn new(graph: &'g DirectedMultigraph, len: usize) -> Self {
        Self {
            graph,
            len,
            cursor: Vec::with_capacity(len),
            current: Vec::with_capacity(len),
            started: false,
            done: len == 0,
        }
    }

    fn candidate(&self, depth: usize, k: usize) -> Option<usize> {
        if depth == 0 {
            (k < self.graph.edge_count()).then_some(k)
        } else {
            self.graph.successors(self.current[depth - 1]).get(k).copied()
        }
    }

    /// Extends the current prefix to full length using first candidates,
    /// backtracking when a branch dies. Returns false when exhausted.
    fn descend(&mut self) -> bool {
        while self.current.len() < self.len {
            let depth = self.current.len();
            match self.candidate(depth, 0) {
                Some(e) => {
                    self.cursor.push(0);
                    self.current.push(e);
                }
                None => {
                    if !self.advance() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Moves to the next sibling at the deepest level that has one.
    fn advance(&mut self) -> bool {
        while let Some(k) = self.cursor.pop() {
            self.current.pop();
            let depth = self.cursor.len();
            if let Some(e) = self.candidate(depth, k + 1) {
                self.cursor.push(k + 1);
                self.current.push(e);
                return true;
            }
        }
        false
    }
}

impl Iterator for WordIter<'_> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let ok = if self.started {
            self.advance() && self.descend()
        } else {
            self.started = true;
            self.descend()
        };
        if ok {
            Some(Word(self.current.clone()))
        } else {
            self.done = true;
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibilityReport {
    pub irreducible: bool,
    pub max_len: usize,
    /// Deduplicated shortest connecting words, the witness set `F`.
    pub witnesses: Vec<Word>,
    /// Ordered pairs that no word of length `<= max_len` connects.
    pub failing: Vec<(usize, usize)>,
}
