//! Representation graphs for `A ⊆ B·B`.
//!
//! Each `a ∈ A` gets exactly one edge between `b₁` and `b₂` for a chosen factorization
//! `a = b₁b₂`. In [`GraphMode::TwoClass`] the endpoints live in two disjoint
//! copies of `B` (vertex `i` on the left, `|B| + j` on the right), so squares
//! are ordinary edges. In [`GraphMode::OneClass`] there is a single copy and
//! squares become self-loops, which never count towards cycles.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::productset::{BaseSet, Element, IndexPair, Member};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphMode {
    /// `G(A, B·B)`: two copies of `B`, bipartite, `2|B|` vertices.
    TwoClass,
    /// `G′(A, B·B)`: one copy of `B`, self-loops allowed, `|B|` vertices.
    OneClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("value {0} has no factor pair over the base set")]
    NoRepresentation(String),
    #[error("factor pair {pair:?} does not multiply to {value}")]
    BadRepresentation { value: String, pair: IndexPair },
    #[error("choice {choice} is out of range for value {value} ({available} pairs)")]
    BadChoice {
        value: String,
        choice: usize,
        available: usize,
    },
    #[error("expected {expected} representation choices, got {got}")]
    ChoiceLength { expected: usize, got: usize },
    #[error("self-loops only exist in the one-class graph")]
    TwoClassHasNoLoops,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxEdge<T> {
    /// Vertex id of `b₁`.
    pub left: usize,
    /// Vertex id of `b₂`.
    pub right: usize,
    pub value: T,
    pub pair: IndexPair,
}

impl<T> AuxEdge<T> {
    pub fn is_loop(&self) -> bool {
        self.left == self.right
    }
}

/// A cycle as a closed vertex walk (first vertex not repeated at the end) and
/// the edge indices traversed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeBoundReport {
    pub mode: GraphMode,
    pub vertices: usize,
    pub edges: usize,
    pub self_loops: usize,
    pub components: usize,
    /// No cycle once self-loops are removed.
    pub acyclic: bool,
    /// `non-loop edges <= vertices - components`; equivalent to `acyclic`.
    pub forest_bound_holds: bool,
    /// `non-loop edges <= vertices - 1`.
    pub tree_bound_holds: bool,
}

#[derive(Debug, Clone)]
pub struct AuxGraph<T> {
    mode: GraphMode,
    base: BaseSet<T>,
    edges: Vec<AuxEdge<T>>,
}

/// Number of distinct representation assignments (saturating).
pub fn representation_count<T>(members: &[Member<T>]) -> u128 {
    members
        .iter()
        .fold(1u128, |acc, m| acc.saturating_mul(m.pairs.len() as u128))
}

/// Every choice vector `c` with `c[k] < members[k].pairs.len()`, in
/// lexicographic order starting from the canonical all-zero choice.
pub struct Assignments {
    radices: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl Assignments {
    pub fn new<T>(members: &[Member<T>]) -> Self {
        let radices: Vec<usize> = members.iter().map(|m| m.pairs.len()).collect();
        let next = radices.iter().all(|&r| r > 0).then(|| vec![0; radices.len()]);
        Assignments { radices, next }
    }
}

impl Iterator for Assignments {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for k in (0..succ.len()).rev() {
            succ[k] += 1;
            if succ[k] < self.radices[k] {
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(current)
    }
}

/// Canonical graph: each value uses its factor pair with the smallest `b₁`
/// (then smallest `b₂`).
pub fn build_aux_graph<T: Element>(
    base: &BaseSet<T>,
    members: &[Member<T>],
    mode: GraphMode,
) -> Result<AuxGraph<T>, GraphError> {
    let canonical = vec![0; members.len()];
    build_aux_graph_with(base, members, mode, &canonical)
}

/// Graph using factor pair `choice[k]` for `members[k]`.
pub fn build_aux_graph_with<T: Element>(
    base: &BaseSet<T>,
    members: &[Member<T>],
    mode: GraphMode,
    choice: &[usize],
) -> Result<AuxGraph<T>, GraphError> {
    if choice.len() != members.len() {
        return Err(GraphError::ChoiceLength {
            expected: members.len(),
            got: choice.len(),
        });
    }
    let b = base.as_slice();
    let n = b.len();
    let mut edges = Vec::with_capacity(members.len());
    for (m, &c) in members.iter().zip(choice) {
        if m.pairs.is_empty() {
            return Err(GraphError::NoRepresentation(alloc::format!("{}", m.value)));
        }
        let &(i, j) = m.pairs.get(c).ok_or_else(|| GraphError::BadChoice {
            value: alloc::format!("{}", m.value),
            choice: c,
            available: m.pairs.len(),
        })?;
        let bad = || GraphError::BadRepresentation {
            value: alloc::format!("{}", m.value),
            pair: (i, j),
        };
        if i >= n || j >= n {
            return Err(bad());
        }
        if b[i].checked_product(&b[j]).as_ref() != Some(&m.value) {
            return Err(bad());
        }
        let (left, right) = match mode {
            GraphMode::OneClass => (i, j),
            GraphMode::TwoClass => (i, n + j),
        };
        edges.push(AuxEdge {
            left,
            right,
            value: m.value.clone(),
            pair: (i, j),
        });
    }
    Ok(AuxGraph {
        mode,
        base: base.clone(),
        edges,
    })
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// `false` if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            core::cmp::Ordering::Less => self.parent[ra] = rb,
            core::cmp::Ordering::Greater => self.parent[rb] = ra,
            core::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

impl<T: Element> AuxGraph<T> {
    pub fn mode(&self) -> GraphMode {
        self.mode
    }

    pub fn base(&self) -> &BaseSet<T> {
        &self.base
    }

    pub fn vertex_count(&self) -> usize {
        match self.mode {
            GraphMode::OneClass => self.base.len(),
            GraphMode::TwoClass => 2 * self.base.len(),
        }
    }

    pub fn edges(&self) -> &[AuxEdge<T>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The base-set element a vertex is a copy of.
    pub fn vertex_element(&self, vertex: usize) -> &T {
        &self.base.as_slice()[vertex % self.base.len()]
    }

    /// Some cycle of length >= 2 among non-loop edges, if any. Two distinct
    /// edges joining the same pair of vertices form a 2-cycle.
    pub fn find_cycle(&self) -> Option<Cycle> {
        let n = self.vertex_count();
        let mut dsu = DisjointSets::new(n);
        // forest adjacency: (neighbour, edge index)
        let mut forest: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (k, e) in self.edges.iter().enumerate() {
            if e.is_loop() {
                continue;
            }
            if dsu.union(e.left, e.right) {
                forest[e.left].push((e.right, k));
                forest[e.right].push((e.left, k));
                continue;
            }
            let (vertices, mut edges) = forest_path(&forest, e.left, e.right);
            edges.push(k);
            return Some(Cycle { vertices, edges });
        }
        None
    }

    pub fn count_self_loops(&self) -> Result<usize, GraphError> {
        match self.mode {
            GraphMode::TwoClass => Err(GraphError::TwoClassHasNoLoops),
            GraphMode::OneClass => Ok(self.edges.iter().filter(|e| e.is_loop()).count()),
        }
    }

    /// Values represented by self-loops (squares `b·b`).
    pub fn self_loop_values(&self) -> Vec<&T> {
        self.edges
            .iter()
            .filter(|e| e.is_loop())
            .map(|e| &e.value)
            .collect()
    }

    /// Connected components, isolated vertices included.
    pub fn components(&self) -> usize {
        let n = self.vertex_count();
        let mut dsu = DisjointSets::new(n);
        let merges = self
            .edges
            .iter()
            .filter(|e| dsu.union(e.left, e.right))
            .count();
        n - merges
    }

    pub fn edge_bound_report(&self) -> EdgeBoundReport {
        let vertices = self.vertex_count();
        let self_loops = self.edges.iter().filter(|e| e.is_loop()).count();
        let non_loop = self.edges.len() - self_loops;
        let components = self.components();
        EdgeBoundReport {
            mode: self.mode,
            vertices,
            edges: self.edges.len(),
            self_loops,
            components,
            acyclic: self.find_cycle().is_none(),
            forest_bound_holds: non_loop + components <= vertices,
            tree_bound_holds: non_loop < vertices.max(1),
        }
    }
}

/// Vertices and edge indices of the unique forest path `from → to`.
fn forest_path(forest: &[Vec<(usize, usize)>], from: usize, to: usize) -> (Vec<usize>, Vec<usize>) {
    let mut came_from: Vec<Option<(usize, usize)>> = vec![None; forest.len()];
    let mut seen = vec![false; forest.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &(w, k) in &forest[v] {
            if !seen[w] {
                seen[w] = true;
                came_from[w] = Some((v, k));
                queue.push_back(w);
            }
        }
    }
    let mut vertices = vec![to];
    let mut edges = Vec::new();
    let mut cur = to;
    while let Some((prev, k)) = came_from[cur] {
        vertices.push(prev);
        edges.push(k);
        cur = prev;
    }
    vertices.reverse();
    edges.reverse();
    (vertices, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::productset::{build_product_set, sequence_members};
    use crate::sequences::is_fibonacci;

    fn fib_members(b: &[u64]) -> (BaseSet<u64>, Vec<Member<u64>>) {
        let base = BaseSet::from_u64s(b).unwrap();
        let ps = build_product_set(&base).unwrap();
        let members = sequence_members(&ps, is_fibonacci);
        (base, members)
    }

    fn member(value: u64, pairs: &[IndexPair]) -> Member<u64> {
        Member {
            value,
            index: 0,
            pairs: pairs.to_vec(),
        }
    }

    #[test]
    fn fibonacci_graph_on_sharp_set() {
        let (base, members) = fib_members(&[1, 2, 3, 5, 8]);
        let g = build_aux_graph(&base, &members, GraphMode::OneClass).unwrap();
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.count_self_loops().unwrap(), 1);
        assert_eq!(g.self_loop_values(), [&1]);
        assert!(g.find_cycle().is_none());
        let report = g.edge_bound_report();
        assert_eq!((report.edges, report.vertices), (5, 5));
        assert!(report.acyclic && report.forest_bound_holds && report.tree_bound_holds);
    }

    #[test]
    fn squares_give_loops() {
        let (base, members) = fib_members(&[1]);
        let g = build_aux_graph(&base, &members, GraphMode::OneClass).unwrap();
        assert_eq!(g.count_self_loops().unwrap(), 1);

        let (base, members) = fib_members(&[1, 12]);
        assert_eq!(members.iter().map(|m| m.value).collect::<Vec<_>>(), [1, 144]);
        let g = build_aux_graph(&base, &members, GraphMode::OneClass).unwrap();
        assert_eq!(g.count_self_loops().unwrap(), 2);
        let report = g.edge_bound_report();
        assert_eq!((report.edges, report.vertices, report.self_loops), (2, 2, 2));
    }

    #[test]
    fn two_class_has_no_loops() {
        let base = BaseSet::from_u64s(&[2, 3]).unwrap();
        let g = build_aux_graph(&base, &[member(6, &[(0, 1)])], GraphMode::TwoClass).unwrap();
        assert_eq!(g.edges()[0].left, 0);
        assert_eq!(g.edges()[0].right, 3);
        assert_eq!(*g.vertex_element(3), 3);
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.count_self_loops(), Err(GraphError::TwoClassHasNoLoops));

        let g = build_aux_graph(&base, &[member(6, &[(0, 1)])], GraphMode::OneClass).unwrap();
        assert_eq!(g.count_self_loops().unwrap(), 0);

        // a square in the two-class graph joins the two copies of one element
        let g = build_aux_graph(&base, &[member(4, &[(0, 0)])], GraphMode::TwoClass).unwrap();
        assert!(!g.edges()[0].is_loop());
    }

    #[test]
    fn cycles() {
        let base = BaseSet::from_u64s(&[2, 3, 5]).unwrap();
        let path = [member(6, &[(0, 1)]), member(15, &[(1, 2)])];
        let g = build_aux_graph(&base, &path, GraphMode::OneClass).unwrap();
        assert!(g.find_cycle().is_none());

        let triangle = [
            member(6, &[(0, 1)]),
            member(15, &[(1, 2)]),
            member(10, &[(0, 2)]),
        ];
        let g = build_aux_graph(&base, &triangle, GraphMode::OneClass).unwrap();
        let c = g.find_cycle().unwrap();
        assert_eq!(c.vertices.len(), 3);
        assert_eq!(c.edges.len(), 3);
        let r = g.edge_bound_report();
        assert!(!r.acyclic && !r.forest_bound_holds);
    }

    #[test]
    fn parallel_edges_are_a_two_cycle() {
        // a star around 6 is a tree
        let base = BaseSet::from_u64s(&[1, 2, 3, 6]).unwrap();
        let members = [member(6, &[(0, 3)]), member(12, &[(1, 3)]), member(18, &[(2, 3)])];
        let g = build_aux_graph(&base, &members, GraphMode::OneClass).unwrap();
        assert!(g.find_cycle().is_none());

        let base = BaseSet::from_u64s(&[2, 3]).unwrap();
        let dup = [member(6, &[(0, 1)]), member(6, &[(0, 1)])];
        let g = build_aux_graph(&base, &dup, GraphMode::TwoClass).unwrap();
        let c = g.find_cycle().unwrap();
        assert_eq!(c.vertices, [0, 3]);
        assert_eq!(c.edges, [0, 1]);
    }

    #[test]
    fn invalid_inputs() {
        let base = BaseSet::from_u64s(&[2, 3]).unwrap();
        assert!(matches!(
            build_aux_graph(&base, &[member(6, &[])], GraphMode::OneClass),
            Err(GraphError::NoRepresentation(_))
        ));
        assert!(matches!(
            build_aux_graph(&base, &[member(7, &[(0, 1)])], GraphMode::OneClass),
            Err(GraphError::BadRepresentation { .. })
        ));
        assert!(matches!(
            build_aux_graph_with(&base, &[member(6, &[(0, 1)])], GraphMode::OneClass, &[1]),
            Err(GraphError::BadChoice { .. })
        ));
        assert!(matches!(
            build_aux_graph_with(&base, &[member(6, &[(0, 1)])], GraphMode::OneClass, &[]),
            Err(GraphError::ChoiceLength { .. })
        ));
    }

    #[test]
    fn assignment_enumeration() {
        let members = [member(6, &[(0, 3), (1, 2)]), member(1, &[(0, 0)]), member(12, &[(0, 5), (1, 4), (2, 3)])];
        let all: Vec<_> = Assignments::new(&members).collect();
        assert_eq!(all.len() as u128, representation_count(&members));
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], [0, 0, 0]);
        assert_eq!(all[5], [1, 0, 2]);
    }

    #[test]
    fn canonical_choice_is_smallest_pair() {
        let (base, members) = fib_members(&[1, 2, 3, 4, 6, 8, 12]);
        let g = build_aux_graph(&base, &members, GraphMode::OneClass).unwrap();
        let e8 = g.edges().iter().find(|e| e.value == 8).unwrap();
        // 8 = 1*8 = 2*4; canonical picks 1*8
        assert_eq!((*g.vertex_element(e8.left), *g.vertex_element(e8.right)), (1, 8));
    }
}
