//! Graphs and their cycle codes.
//!
//! Vertices are numbered `1..=vertex_count`. Edges are identified by their
//! 0-based position in the edge list; edge index `i` is the printed label
//! `e{i+1}` and column `i` of every code matrix.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// A connected simple undirected graph with an ordered edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<Edge>,
    // adjacency[v] = (edge index, neighbour), ascending edge index
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Validates and builds a graph. Edge ids follow list order.
    pub fn new(vertex_count: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Graph("graph needs at least one vertex".into()));
        }
        let mut adjacency = vec![Vec::new(); vertex_count + 1];
        let mut edges = Vec::with_capacity(edge_list.len());
        for (idx, &(u, v)) in edge_list.iter().enumerate() {
            for x in [u, v] {
                if x == 0 || x > vertex_count {
                    return Err(Error::Graph(format!(
                        "edge e{} endpoint {x} outside 1..={vertex_count}",
                        idx + 1
                    )));
                }
            }
            if u == v {
                return Err(Error::Graph(format!("edge e{} is a self-loop at {u}", idx + 1)));
            }
            if adjacency[u].iter().any(|&(_, w)| w == v) {
                return Err(Error::Graph(format!(
                    "edge e{} duplicates an earlier edge between {u} and {v}",
                    idx + 1
                )));
            }
            adjacency[u].push((idx, v));
            adjacency[v].push((idx, u));
            edges.push(Edge { u, v });
        }
        let g = Self {
            vertex_count,
            edges,
            adjacency,
        };
        let reached = g.bfs_order(1).len();
        if reached != vertex_count {
            return Err(Error::Graph(format!(
                "graph is disconnected ({reached} of {vertex_count} vertices reachable from 1)"
            )));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, idx: usize) -> Edge {
        self.edges[idx]
    }

    /// `(edge index, neighbour)` pairs at `v`, ascending by edge index.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    fn bfs_order(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.vertex_count + 1];
        let mut order = vec![root];
        seen[root] = true;
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &(_, y) in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    order.push(y);
                }
            }
        }
        order
    }

    /// Vertices of odd degree in the subgraph selected by `edges`, ascending.
    pub fn odd_vertices(&self, edges: &BitVector) -> Vec<usize> {
        let mut odd = vec![false; self.vertex_count + 1];
        for i in edges.support() {
            let e = self.edges[i];
            odd[e.u] ^= true;
            odd[e.v] ^= true;
        }
        (1..=self.vertex_count).filter(|&v| odd[v]).collect()
    }

    /// True when every vertex has even degree in the selected subgraph.
    pub fn is_even_subgraph(&self, edges: &BitVector) -> bool {
        self.odd_vertices(edges).is_empty()
    }

    /// BFS hop distances from `source` (index 0 unused, `usize::MAX` unreachable).
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        self.shortest_path_tree(source).0
    }

    /// BFS from `source`: hop distances and the edge used to reach each vertex.
    ///
    /// Neighbours are scanned in ascending edge order, so ties are resolved
    /// deterministically.
    pub fn shortest_path_tree(&self, source: usize) -> (Vec<usize>, Vec<Option<usize>>) {
        let mut dist = vec![usize::MAX; self.vertex_count + 1];
        let mut via = vec![None; self.vertex_count + 1];
        let mut queue = VecDeque::from([source]);
        dist[source] = 0;
        while let Some(x) = queue.pop_front() {
            for &(e, y) in &self.adjacency[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    via[y] = Some(e);
                    queue.push_back(y);
                }
            }
        }
        (dist, via)
    }

    /// Largest BFS eccentricity.
    pub fn diameter(&self) -> usize {
        (1..=self.vertex_count)
            .map(|v| {
                self.distances_from(v)[1..]
                    .iter()
                    .copied()
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// Length of the shortest cycle, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for root in 1..=self.vertex_count {
            let (dist, via) = self.shortest_path_tree(root);
            for (idx, e) in self.edges.iter().enumerate() {
                if via[e.u] == Some(idx) || via[e.v] == Some(idx) {
                    continue;
                }
                let len = dist[e.u] + dist[e.v] + 1;
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
        best
    }
}

/// Complete graph on `q` vertices with edges `(1,2),(1,3),…,(1,q),(2,3),…`.
pub fn complete_graph(q: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    for u in 1..=q {
        for v in u + 1..=q {
            edges.push((u, v));
        }
    }
    Graph::new(q, &edges)
}

/// Cycle on `n` vertices: `(1,2),(2,3),…,(n,1)`.
pub fn cycle_graph(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
    Graph::new(n, &edges)
}

/// Wheel with hub `1` and a rim cycle on vertices `2..=rim+1`.
pub fn wheel_graph(rim: usize) -> Result<Graph> {
    let mut edges: Vec<_> = (2..=rim + 1).map(|v| (1, v)).collect();
    edges.extend((0..rim).map(|i| (i + 2, (i + 1) % rim + 2)));
    Graph::new(rim + 1, &edges)
}

/// A spanning tree and its complementary chords.
///
/// `tree_edges` is kept in the order that defines parity-check rows;
/// `chords` is ascending and defines generator rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    tree_edges: Vec<usize>,
    chords: Vec<usize>,
}

impl SpanningTree {
    /// Breadth-first tree from vertex 1, scanning neighbours in ascending
    /// edge order. Tree edges are returned ascending.
    pub fn bfs(g: &Graph) -> Self {
        let (_, via) = g.shortest_path_tree(1);
        let mut in_tree = vec![false; g.edge_count()];
        for e in via.into_iter().flatten() {
            in_tree[e] = true;
        }
        Self::from_membership(&in_tree, None)
    }

    /// Uses the given edge indices as the tree, preserving their order as
    /// the parity-check row order.
    pub fn from_edges(g: &Graph, tree_edges: &[usize]) -> Result<Self> {
        let need = g.vertex_count() - 1;
        if tree_edges.len() != need {
            return Err(Error::Graph(format!(
                "spanning tree needs {need} edges, got {}",
                tree_edges.len()
            )));
        }
        let mut in_tree = vec![false; g.edge_count()];
        let mut parent: Vec<usize> = (0..=g.vertex_count()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &e in tree_edges {
            if e >= g.edge_count() {
                return Err(Error::Graph(format!("tree edge e{} does not exist", e + 1)));
            }
            if in_tree[e] {
                return Err(Error::Graph(format!("tree edge e{} listed twice", e + 1)));
            }
            in_tree[e] = true;
            let Edge { u, v } = g.edge(e);
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return Err(Error::Graph(format!("tree edge e{} closes a cycle", e + 1)));
            }
            parent[ru] = rv;
        }
        Ok(Self::from_membership(&in_tree, Some(tree_edges.to_vec())))
    }

    fn from_membership(in_tree: &[bool], order: Option<Vec<usize>>) -> Self {
        let chords = (0..in_tree.len()).filter(|&e| !in_tree[e]).collect();
        let tree_edges =
            order.unwrap_or_else(|| (0..in_tree.len()).filter(|&e| in_tree[e]).collect());
        Self { tree_edges, chords }
    }

    pub fn tree_edges(&self) -> &[usize] {
        &self.tree_edges
    }

    pub fn chords(&self) -> &[usize] {
        &self.chords
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.tree_edges.contains(&edge)
    }
}

/// Tree rooted at vertex 1: parent vertex, parent edge and depth per vertex.
struct RootedTree {
    parent: Vec<usize>,
    parent_edge: Vec<usize>,
    depth: Vec<usize>,
}

impl RootedTree {
    fn new(g: &Graph, t: &SpanningTree) -> Self {
        let n = g.vertex_count();
        let mut tree_adj = vec![Vec::new(); n + 1];
        for &e in t.tree_edges() {
            let Edge { u, v } = g.edge(e);
            tree_adj[u].push((e, v));
            tree_adj[v].push((e, u));
        }
        let mut parent = vec![0; n + 1];
        let mut parent_edge = vec![usize::MAX; n + 1];
        let mut depth = vec![usize::MAX; n + 1];
        depth[1] = 0;
        let mut queue = VecDeque::from([1]);
        while let Some(x) = queue.pop_front() {
            for &(e, y) in &tree_adj[x] {
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    parent[y] = x;
                    parent_edge[y] = e;
                    queue.push_back(y);
                }
            }
        }
        Self {
            parent,
            parent_edge,
            depth,
        }
    }

    fn path_edges(&self, mut a: usize, mut b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while a != b {
            if self.depth[a] >= self.depth[b] {
                out.push(self.parent_edge[a]);
                a = self.parent[a];
            } else {
                out.push(self.parent_edge[b]);
                b = self.parent[b];
            }
        }
        out
    }

    fn is_descendant(&self, mut x: usize, ancestor: usize) -> bool {
        loop {
            if x == ancestor {
                return true;
            }
            if self.depth[x] == 0 {
                return false;
            }
            x = self.parent[x];
        }
    }
}

/// Generator matrix: one row per chord (ascending), marking the chord and
/// the tree path between its endpoints.
pub fn fundamental_circuit_matrix(g: &Graph, t: &SpanningTree) -> BitMatrix {
    let rooted = RootedTree::new(g, t);
    let rows = t
        .chords()
        .iter()
        .map(|&c| {
            let Edge { u, v } = g.edge(c);
            let mut row = BitVector::zeros(g.edge_count());
            row.set(c, true);
            for e in rooted.path_edges(u, v) {
                row.set(e, true);
            }
            row
        })
        .collect();
    BitMatrix::from_rows(g.edge_count(), rows).expect("rows sized to edge count")
}

/// Parity-check matrix: one row per tree edge (in tree order), marking the
/// edges that cross the cut left by deleting that tree edge.
pub fn fundamental_cutset_matrix(g: &Graph, t: &SpanningTree) -> BitMatrix {
    let rooted = RootedTree::new(g, t);
    let rows = t
        .tree_edges()
        .iter()
        .map(|&te| {
            let Edge { u, v } = g.edge(te);
            let child = if rooted.parent_edge[u] == te { u } else { v };
            let side: Vec<bool> = (0..=g.vertex_count())
                .map(|x| x != 0 && rooted.is_descendant(x, child))
                .collect();
            BitVector::from_bits(g.edges().iter().map(|e| (side[e.u] != side[e.v]) as u8))
        })
        .collect();
    BitMatrix::from_rows(g.edge_count(), rows).expect("rows sized to edge count")
}

/// The cycle code of a graph together with the matrices that define it.
#[derive(Debug, Clone)]
pub struct GraphicalCode {
    graph: Graph,
    tree: SpanningTree,
    generator: BitMatrix,
    parity_check: BitMatrix,
    k: usize,
    d: usize,
}

impl GraphicalCode {
    /// Builds the code using the breadth-first spanning tree.
    pub fn new(graph: Graph) -> Result<Self> {
        let tree = SpanningTree::bfs(&graph);
        Self::with_tree(graph, tree)
    }

    /// Builds the code using an explicit spanning tree.
    pub fn with_tree(graph: Graph, tree: SpanningTree) -> Result<Self> {
        let n_len = graph.edge_count();
        let k = n_len + 1 - graph.vertex_count();
        if k == 0 {
            return Err(Error::Acyclic);
        }
        let d = graph.girth().ok_or(Error::Acyclic)?;
        let generator = fundamental_circuit_matrix(&graph, &tree);
        let parity_check = fundamental_cutset_matrix(&graph, &tree);

        if !generator.mul(&parity_check.transpose())?.is_zero() {
            return Err(Error::Invariant(
                "circuit and cut-set matrices are not orthogonal".into(),
            ));
        }
        if generator.rank() != k || parity_check.rank() != n_len - k {
            return Err(Error::Invariant(format!(
                "rank check failed: generator {} (want {k}), parity check {} (want {})",
                generator.rank(),
                parity_check.rank(),
                n_len - k
            )));
        }
        Ok(Self {
            graph,
            tree,
            generator,
            parity_check,
            k,
            d,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn tree(&self) -> &SpanningTree {
        &self.tree
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    /// Code length: the number of edges.
    pub fn n_len(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Minimum distance, equal to the girth.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Message bits per block, `n_len - k = vertex_count - 1`.
    pub fn p(&self) -> usize {
        self.n_len() - self.k
    }

    pub fn syndrome(&self, x: &BitVector) -> Result<BitVector> {
        self.parity_check.mul_vec(x)
    }
}

/// Cycle code of `g` with the breadth-first tree.
pub fn build_code(g: Graph) -> Result<GraphicalCode> {
    GraphicalCode::new(g)
}
