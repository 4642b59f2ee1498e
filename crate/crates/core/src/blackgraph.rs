//! Black graphs of alternating diagrams, their spanning trees and signed
//! fundamental circuits.

use std::collections::VecDeque;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braidlang::{BraidWord, Sigma};
use crate::linalg::IntMatrix;

#[derive(Error, Debug)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("edge {edge} references vertex {vertex}, but there are only {count} vertices")]
    VertexOutOfRange { edge: usize, vertex: usize, count: usize },
    #[error("edge {0} is a self-loop")]
    SelfLoop(usize),
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("wheel needs at least 2 sides with positive lengths, got {0:?}")]
    BadWheel(Vec<u32>),
    #[error("braid `{0}` is not a cyclic product of blocks σ₁σ₂^-q (q >= 1) with at least 2 blocks")]
    UnsupportedBraid(String),
    #[error("edge set is not a spanning tree")]
    NotSpanningTree,
    #[error("cannot read graph file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed graph file: {0}")]
    Malformed(#[from] serde_json::Error),
}

/// Connected loop-free multigraph with an orientation recorded on each edge.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct BlackGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

/// On-disk form: `{"vertices": n, "edges": [[tail, head], ...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphFile> for BlackGraph {
    type Error = GraphError;
    fn try_from(f: GraphFile) -> Result<Self, GraphError> {
        BlackGraph::new(f.vertices, f.edges.into_iter().map(|[t, h]| (t, h)).collect())
    }
}

impl From<BlackGraph> for GraphFile {
    fn from(g: BlackGraph) -> Self {
        GraphFile { vertices: g.vertex_count, edges: g.edges.iter().map(|&(t, h)| [t, h]).collect() }
    }
}

impl BlackGraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::NoVertices);
        }
        for (i, &(t, h)) in edges.iter().enumerate() {
            for v in [t, h] {
                if v >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { edge: i, vertex: v, count: vertex_count });
                }
            }
            if t == h {
                return Err(GraphError::SelfLoop(i));
            }
        }
        let g = Self { vertex_count, edges };
        let components = g.component_count();
        if components != 1 {
            return Err(GraphError::Disconnected(components));
        }
        Ok(g)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let file: GraphFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphFile::from(self.clone())).expect("graph serializes")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// First Betti number `|E| - |V| + 1`.
    pub fn betti(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    /// Same graph with the listed edges reversed.
    pub fn reorient(&self, flip: &[usize]) -> Self {
        let mut edges = self.edges.clone();
        for &e in flip {
            let (t, h) = edges[e];
            edges[e] = (h, t);
        }
        Self { vertex_count: self.vertex_count, edges }
    }

    /// Incidence matrix, `|V| x |E|`: `+1` at the head, `-1` at the tail.
    pub fn incidence(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.vertex_count, self.edges.len());
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            m[(t, e)] -= 1;
            m[(h, e)] += 1;
        }
        m
    }

    /// Incident `(edge, neighbor)` pairs per vertex, in input edge order.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            adj[t].push((e, h));
            adj[h].push((e, t));
        }
        adj
    }

    fn component_count(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut count = 0;
        for s in 0..self.vertex_count {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(_, u) in &adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
        }
        count
    }
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<BlackGraph, GraphError> {
    BlackGraph::from_json(&fs::read_to_string(path)?)
}

/// Hub joined by a spoke to each of `k` corners, side `i` of the polygon
/// subdivided into `q_i` edges.
///
/// Vertex 0 is the hub and vertices `1..=k` are the corners. Spokes come
/// first (hub → corner), then the sides in order, each oriented from corner
/// `i` towards corner `i+1`.
pub fn wheel_graph(q: &[u32]) -> Result<BlackGraph, GraphError> {
    let k = q.len();
    if k < 2 || q.iter().any(|&x| x == 0) {
        return Err(GraphError::BadWheel(q.to_vec()));
    }
    let corner = |i: usize| 1 + (i % k);
    let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (0, corner(i))).collect();
    let mut next = k + 1;
    for (i, &qi) in q.iter().enumerate() {
        let mut prev = corner(i);
        for _ in 1..qi {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, corner(i + 1)));
    }
    BlackGraph::new(next, edges)
}

/// Block exponents `q_i` when `w` is, up to rotation, `∏ σ₁σ₂^{-q_i}` with
/// every `q_i >= 1` and at least two blocks.
pub fn braid_blocks(w: &BraidWord) -> Result<Vec<u32>, GraphError> {
    let unsupported = || GraphError::UnsupportedBraid(w.to_string());
    let runs = w.runs();
    let start = runs.iter().position(|&(g, _)| g == Sigma::One).ok_or_else(unsupported)?;
    let mut rotated = runs[start..].to_vec();
    rotated.extend_from_slice(&runs[..start]);
    // Merge a σ₂ run split by the rotation point.
    let mut merged: Vec<(Sigma, i64)> = Vec::new();
    for (g, k) in rotated {
        match merged.last_mut() {
            Some((pg, pk)) if *pg == g && (*pk < 0) == (k < 0) => *pk += k,
            _ => merged.push((g, k)),
        }
    }
    if merged.len() % 2 != 0 || merged.len() < 4 {
        return Err(unsupported());
    }
    merged
        .chunks(2)
        .map(|pair| match pair {
            [(Sigma::One, 1), (Sigma::Two, e)] if *e < 0 => Ok((-e) as u32),
            _ => Err(unsupported()),
        })
        .collect()
}

pub fn black_graph_of_braid(w: &BraidWord) -> Result<BlackGraph, GraphError> {
    wheel_graph(&braid_blocks(w)?)
}

/// Spanning tree as a membership mask over the edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpanningTree {
    in_tree: Vec<bool>,
}

impl SpanningTree {
    /// Validates an arbitrary edge subset.
    pub fn from_edges(g: &BlackGraph, tree_edges: &[usize]) -> Result<Self, GraphError> {
        let mut in_tree = vec![false; g.edge_count()];
        let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &e in tree_edges {
            if e >= in_tree.len() || in_tree[e] {
                return Err(GraphError::NotSpanningTree);
            }
            let (t, h) = g.edges()[e];
            let (rt, rh) = (find(&mut parent, t), find(&mut parent, h));
            if rt == rh {
                return Err(GraphError::NotSpanningTree);
            }
            parent[rt] = rh;
            in_tree[e] = true;
        }
        if tree_edges.len() + 1 != g.vertex_count() {
            return Err(GraphError::NotSpanningTree);
        }
        Ok(Self { in_tree })
    }

    pub fn contains(&self, e: usize) -> bool {
        self.in_tree[e]
    }

    pub fn edges(&self) -> Vec<usize> {
        (0..self.in_tree.len()).filter(|&e| self.in_tree[e]).collect()
    }

    pub fn non_tree_edges(&self) -> Vec<usize> {
        (0..self.in_tree.len()).filter(|&e| !self.in_tree[e]).collect()
    }
}

/// Breadth-first tree from vertex 0, scanning incident edges in input order.
pub fn spanning_tree(g: &BlackGraph) -> SpanningTree {
    let adj = g.adjacency();
    let mut in_tree = vec![false; g.edge_count()];
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &(e, u) in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                in_tree[e] = true;
                queue.push_back(u);
            }
        }
    }
    SpanningTree { in_tree }
}

/// Signed fundamental circuits: row `i` is the circuit of the `i`-th non-tree
/// edge, traversed in that edge's direction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CircuitMatrix {
    /// Non-tree edge indices `e_1..e_b`, in input order.
    pub non_tree: Vec<usize>,
    /// `b x |E|` with entries in `{-1, 0, 1}`.
    pub rows: IntMatrix,
}

pub fn circuit_matrix(g: &BlackGraph, tree: &SpanningTree) -> CircuitMatrix {
    // Root the tree at vertex 0: parent edge and depth per vertex.
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &(e, u) in &adj[v] {
            if tree.contains(e) && !seen[u] {
                seen[u] = true;
                parent[u] = Some((e, v));
                depth[u] = depth[v] + 1;
                queue.push_back(u);
            }
        }
    }

    let non_tree = tree.non_tree_edges();
    let mut rows = IntMatrix::zeros(non_tree.len(), g.edge_count());
    for (i, &e) in non_tree.iter().enumerate() {
        let (tail, head) = g.edges()[e];
        rows[(i, e)] = 1;
        // Walk head -> ... -> tail through the tree. Steps leaving `x` towards
        // its parent come from the head side; steps arriving at `y` from its
        // parent come from the tail side.
        let (mut x, mut y) = (head, tail);
        while x != y {
            if depth[x] >= depth[y] {
                let (pe, px) = parent[x].expect("non-root vertex has a parent");
                rows[(i, pe)] += if g.edges()[pe].0 == x { 1 } else { -1 };
                x = px;
            } else {
                let (pe, py) = parent[y].expect("non-root vertex has a parent");
                rows[(i, pe)] += if g.edges()[pe].0 == py { 1 } else { -1 };
                y = py;
            }
        }
    }
    CircuitMatrix { non_tree, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braidlang::{family_braid, parse_braid, FamilyKind};

    fn hopf() -> BlackGraph {
        BlackGraph::from_json(r#"{"vertices": 2, "edges": [[0, 1], [0, 1]]}"#).unwrap()
    }

    fn assert_cycles(g: &BlackGraph, n: &CircuitMatrix) {
        let flow = &n.rows * &g.incidence().transpose();
        assert!(flow.to_rows().iter().flatten().all(|&x| x == 0));
        for (i, &e) in n.non_tree.iter().enumerate() {
            assert_eq!(n.rows[(i, e)], 1);
        }
    }

    #[test]
    fn loads_small_graphs() {
        let g = hopf();
        assert_eq!((g.vertex_count(), g.edge_count(), g.betti()), (2, 2, 1));
        let t = BlackGraph::from_json(r#"{"vertices": 2, "edges": [[0, 1]]}"#).unwrap();
        assert_eq!(t.betti(), 0);
        assert_eq!(BlackGraph::from_json(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(matches!(
            BlackGraph::from_json(r#"{"vertices": 3, "edges": [[0, 1]]}"#),
            Err(GraphError::Disconnected(2))
        ));
        assert!(matches!(
            BlackGraph::from_json(r#"{"vertices": 2, "edges": [[0, 1], [1, 1]]}"#),
            Err(GraphError::SelfLoop(1))
        ));
        assert!(matches!(
            BlackGraph::from_json(r#"{"vertices": 2, "edges": [[0, 2]]}"#),
            Err(GraphError::VertexOutOfRange { .. })
        ));
        assert!(matches!(
            BlackGraph::from_json(r#"{"vertices": 2, "edges": [[0, 1]], "name": "x"}"#),
            Err(GraphError::Malformed(_))
        ));
        assert!(matches!(BlackGraph::from_json("{"), Err(GraphError::Malformed(_))));
        assert!(matches!(
            BlackGraph::from_json(r#"{"vertices": 0, "edges": []}"#),
            Err(GraphError::NoVertices)
        ));
    }

    #[test]
    fn wheel_counts() {
        let g = wheel_graph(&[2, 4]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.betti()), (7, 8, 2));
        let g = wheel_graph(&[1, 1, 1]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.betti()), (4, 6, 3));
        assert!(matches!(wheel_graph(&[3]), Err(GraphError::BadWheel(_))));
        assert!(matches!(wheel_graph(&[3, 0]), Err(GraphError::BadWheel(_))));
    }

    #[test]
    fn braid_shapes() {
        let w = family_braid(FamilyKind::Even, &[1, 2]).unwrap();
        assert_eq!(braid_blocks(&w).unwrap(), vec![2, 4]);
        assert_eq!(black_graph_of_braid(&w).unwrap(), wheel_graph(&[2, 4]).unwrap());
        let w = family_braid(FamilyKind::Odd, &[2, 0, 1]).unwrap();
        assert_eq!(braid_blocks(&w).unwrap(), vec![5, 1, 3]);
        // rotations are accepted
        assert_eq!(braid_blocks(&parse_braid("2^-1 1 2^-2 1 2^-3").unwrap()).unwrap(), vec![2, 4]);
        for bad in ["1 -2", "1 2 1 2", "1 1 -2 1 -2", "", "-2 -2", "1 -2 -1 -2"] {
            let w = parse_braid(bad).unwrap();
            assert!(matches!(braid_blocks(&w), Err(GraphError::UnsupportedBraid(_))), "{bad}");
        }
    }

    #[test]
    fn trees() {
        let t = BlackGraph::new(3, vec![(0, 1), (2, 1)]).unwrap();
        assert_eq!(spanning_tree(&t).edges(), vec![0, 1]);

        let g = wheel_graph(&[2, 4]).unwrap();
        let tree = spanning_tree(&g);
        assert_eq!(tree.edges().len(), 6);
        let cut = tree.non_tree_edges();
        assert_eq!(cut.len(), 2);
        // one rim edge per side: side 0 is edges 2..4, side 1 is edges 4..8
        assert!((2..4).contains(&cut[0]) && (4..8).contains(&cut[1]));

        assert_eq!(spanning_tree(&hopf()).edges(), vec![0]);
        assert!(SpanningTree::from_edges(&hopf(), &[0, 1]).is_err());
        assert!(SpanningTree::from_edges(&hopf(), &[1]).is_ok());
    }

    #[test]
    fn circuits_of_examples() {
        let g = hopf();
        let n = circuit_matrix(&g, &spanning_tree(&g));
        assert_eq!(n.rows.to_rows(), vec![vec![-1, 1]]);
        assert_cycles(&g, &n);
        let flipped = g.reorient(&[0]);
        let n = circuit_matrix(&flipped, &spanning_tree(&flipped));
        assert_eq!(n.rows.to_rows(), vec![vec![1, 1]]);

        // Rows of the (2,4) wheel overlap exactly on the two spokes.
        let g = wheel_graph(&[2, 4]).unwrap();
        let n = circuit_matrix(&g, &spanning_tree(&g));
        assert_cycles(&g, &n);
        let shared: Vec<usize> =
            (0..g.edge_count()).filter(|&e| n.rows[(0, e)] != 0 && n.rows[(1, e)] != 0).collect();
        assert_eq!(shared, vec![0, 1]);

        let g = wheel_graph(&[1, 1, 1]).unwrap();
        let n = circuit_matrix(&g, &spanning_tree(&g));
        assert_cycles(&g, &n);
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            let shared: Vec<usize> =
                (0..g.edge_count()).filter(|&e| n.rows[(i, e)] != 0 && n.rows[(j, e)] != 0).collect();
            assert_eq!(shared.len(), 1);
            assert!(shared[0] < 3, "shared edge is a spoke");
        }
    }
}
