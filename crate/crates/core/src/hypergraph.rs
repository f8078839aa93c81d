//! Weighted hypergraphs over users and the structural queries used by the
//! lower bound and the planner: connectivity, walks, partial and induced
//! subhypergraphs, degrees, cuts, min-cut and quasi-tree detection.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count accepted by the exhaustive min-cut search.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 24;

/// A user, numbered from 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

pub type VertexSet = BTreeSet<VertexId>;

/// Shorthand for building a vertex set from raw ids.
pub fn vset<I: IntoIterator<Item = u32>>(ids: I) -> VertexSet {
    ids.into_iter().map(VertexId).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub vertices: VertexSet,
    pub weight: u64,
}

/// Hypergraph with edges keyed by vertex set.
///
/// Adding an edge whose vertex set already exists sums the weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    vertices: VertexSet,
    edges: BTreeMap<VertexSet, u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkKind {
    Invalid,
    Walk,
    Path,
    Cycle,
    LoosePath,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WalkStep {
    Vertex(VertexId),
    Edge(VertexSet),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub separator: VertexSet,
    pub crossing_edges: Vec<Edge>,
    pub weight: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinCutMethod {
    Disconnected,
    QuasiTreeScan,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinCut {
    pub capacity: u64,
    pub witness: VertexSet,
    pub method: MinCutMethod,
}

/// The three-way split of the edge set induced by a separator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePartition {
    pub crossing: Vec<Edge>,
    pub inside: Vec<Edge>,
    pub outside: Vec<Edge>,
}

impl EdgePartition {
    pub fn weights(&self) -> (u64, u64, u64) {
        let w = |es: &[Edge]| es.iter().map(|e| e.weight).sum();
        (w(&self.crossing), w(&self.inside), w(&self.outside))
    }
}

impl Hypergraph {
    /// Build a hypergraph. Every edge needs at least two vertices, all of
    /// them in `vertices`, and a positive weight.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = VertexId>,
        E: IntoIterator<Item = (VertexSet, u64)>,
    {
        let vertices: VertexSet = vertices.into_iter().collect();
        if vertices.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let mut h = Hypergraph {
            vertices,
            edges: BTreeMap::new(),
        };
        for (e, w) in edges {
            h.add_edge(e, w)?;
        }
        Ok(h)
    }

    /// Hypergraph on users `1..=num_users`.
    pub fn with_users<E>(num_users: u32, edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = (VertexSet, u64)>,
    {
        Self::new((1..=num_users).map(VertexId), edges)
    }

    pub fn add_edge(&mut self, vertices: VertexSet, weight: u64) -> Result<()> {
        if vertices.len() < 2 {
            return Err(Error::InvalidEdge(format!(
                "{:?} has fewer than two vertices",
                vertices
            )));
        }
        if weight == 0 {
            return Err(Error::InvalidEdge(format!(
                "{:?} has zero weight",
                vertices
            )));
        }
        if let Some(v) = vertices.iter().find(|v| !self.vertices.contains(v)) {
            return Err(Error::UnknownVertex(*v));
        }
        *self.edges.entry(vertices).or_insert(0) += weight;
        Ok(())
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic vertex-set order.
    pub fn edges(&self) -> impl Iterator<Item = (&VertexSet, u64)> + '_ {
        self.edges.iter().map(|(e, &w)| (e, w))
    }

    pub fn edge_list(&self) -> Vec<Edge> {
        self.edges
            .iter()
            .map(|(e, &w)| Edge {
                vertices: e.clone(),
                weight: w,
            })
            .collect()
    }

    pub fn weight(&self, e: &VertexSet) -> Option<u64> {
        self.edges.get(e).copied()
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.values().sum()
    }

    pub fn min_edge_weight(&self) -> Option<u64> {
        self.edges.values().copied().min()
    }

    /// Copy without the edge `e` (no-op when absent).
    pub fn without_edge(&self, e: &VertexSet) -> Hypergraph {
        let mut h = self.clone();
        h.edges.remove(e);
        h
    }

    /// H[v]: the edges incident to `v`.
    pub fn incident(&self, v: VertexId) -> BTreeSet<&VertexSet> {
        self.edges.keys().filter(|e| e.contains(&v)).collect()
    }

    fn check_subset(&self, vsub: &VertexSet) -> Result<()> {
        if vsub.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        match vsub.iter().find(|v| !self.vertices.contains(v)) {
            Some(v) => Err(Error::UnknownVertex(*v)),
            None => Ok(()),
        }
    }

    fn check_separator(&self, x: &VertexSet) -> Result<()> {
        self.check_subset(x)?;
        if x.len() == self.vertices.len() {
            return Err(Error::NotProperSubset);
        }
        Ok(())
    }

    /// Connected components, each as a vertex set, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let index: BTreeMap<VertexId, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut uf = UnionFind::new(self.vertices.len());
        for e in self.edges.keys() {
            let mut it = e.iter();
            let first = index[it.next().expect("edge has vertices")];
            for v in it {
                uf.union(first, index[v]);
            }
        }
        let mut groups: BTreeMap<usize, VertexSet> = BTreeMap::new();
        for (&v, &i) in &index {
            groups.entry(uf.find(i)).or_default().insert(v);
        }
        let mut comps: Vec<VertexSet> = groups.into_values().collect();
        comps.sort_by_key(|c| *c.iter().next().expect("nonempty component"));
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Connected, and every single-edge removal disconnects it.
    pub fn is_quasi_tree(&self) -> bool {
        self.is_connected()
            && self
                .edges
                .keys()
                .all(|e| !self.without_edge(e).is_connected())
    }

    /// Label an alternating vertex/edge sequence with the strongest kind
    /// that applies. A lone vertex is a trivial walk.
    pub fn classify_walk(&self, seq: &[WalkStep]) -> WalkKind {
        if seq.is_empty() || seq.len().is_multiple_of(2) {
            return WalkKind::Invalid;
        }
        let mut vs: Vec<VertexId> = Vec::new();
        let mut es: Vec<&VertexSet> = Vec::new();
        for (i, step) in seq.iter().enumerate() {
            match (i % 2, step) {
                (0, WalkStep::Vertex(v)) => vs.push(*v),
                (1, WalkStep::Edge(e)) => es.push(e),
                _ => return WalkKind::Invalid,
            }
        }
        if vs.iter().any(|v| !self.vertices.contains(v)) {
            return WalkKind::Invalid;
        }
        for (i, e) in es.iter().enumerate() {
            if !self.edges.contains_key(*e) || !e.contains(&vs[i]) || !e.contains(&vs[i + 1]) {
                return WalkKind::Invalid;
            }
        }
        let n = es.len();
        if n == 0 {
            return WalkKind::Walk;
        }
        let edges_distinct = es.iter().collect::<BTreeSet<_>>().len() == n;
        let distinct = |xs: &[VertexId]| xs.iter().collect::<BTreeSet<_>>().len() == xs.len();
        if !edges_distinct {
            return WalkKind::Walk;
        }
        if vs[0] == vs[n] {
            return if n >= 2 && distinct(&vs[..n]) {
                WalkKind::Cycle
            } else {
                WalkKind::Walk
            };
        }
        if !distinct(&vs) {
            return WalkKind::Walk;
        }
        let loose = (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let common: VertexSet = es[i].intersection(es[j]).copied().collect();
                if j == i + 1 {
                    common.len() == 1 && common.contains(&vs[i + 1])
                } else {
                    common.is_empty()
                }
            })
        });
        if loose {
            WalkKind::LoosePath
        } else {
            WalkKind::Path
        }
    }

    /// The largest partial hypergraph on `vsub`: edges entirely inside it.
    pub fn largest_partial(&self, vsub: &VertexSet) -> Result<Hypergraph> {
        self.check_subset(vsub)?;
        Ok(Hypergraph {
            vertices: vsub.clone(),
            edges: self
                .edges
                .iter()
                .filter(|(e, _)| e.is_subset(vsub))
                .map(|(e, &w)| (e.clone(), w))
                .collect(),
        })
    }

    /// Subhypergraph induced by `vsub`: every edge is intersected with `vsub`,
    /// intersections with fewer than two vertices are dropped and collisions
    /// merge by summing weights.
    pub fn induced(&self, vsub: &VertexSet) -> Result<Hypergraph> {
        self.check_subset(vsub)?;
        let mut edges: BTreeMap<VertexSet, u64> = BTreeMap::new();
        for (e, &w) in &self.edges {
            let inter: VertexSet = e.intersection(vsub).copied().collect();
            if inter.len() >= 2 {
                *edges.entry(inter).or_insert(0) += w;
            }
        }
        Ok(Hypergraph {
            vertices: vsub.clone(),
            edges,
        })
    }

    /// (degree, weighted degree) of `v`.
    pub fn degree(&self, v: VertexId) -> Result<(usize, u64)> {
        if !self.vertices.contains(&v) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(self
            .edges
            .iter()
            .filter(|(e, _)| e.contains(&v))
            .fold((0, 0), |(d, wd), (_, &w)| (d + 1, wd + w)))
    }

    pub fn cut(&self, x: &VertexSet) -> Result<Cut> {
        self.check_separator(x)?;
        let crossing: Vec<Edge> = self
            .edges
            .iter()
            .filter(|(e, _)| crosses(e, x))
            .map(|(e, &w)| Edge {
                vertices: e.clone(),
                weight: w,
            })
            .collect();
        Ok(Cut {
            separator: x.clone(),
            weight: crossing.iter().map(|e| e.weight).sum(),
            crossing_edges: crossing,
        })
    }

    /// Split the edges into those crossing `x`, those inside `x` and those
    /// inside its complement.
    pub fn partition_edges(&self, x: &VertexSet) -> Result<EdgePartition> {
        self.check_separator(x)?;
        let mut part = EdgePartition {
            crossing: Vec::new(),
            inside: Vec::new(),
            outside: Vec::new(),
        };
        for (e, &w) in &self.edges {
            let edge = Edge {
                vertices: e.clone(),
                weight: w,
            };
            if e.is_subset(x) {
                part.inside.push(edge);
            } else if e.is_disjoint(x) {
                part.outside.push(edge);
            } else {
                part.crossing.push(edge);
            }
        }
        Ok(part)
    }

    /// Min-cut capacity with a witness separator.
    ///
    /// Disconnected inputs return 0 with a component as witness; quasi-trees
    /// use the single scan over edge weights; anything else is searched
    /// exhaustively, which is limited to [`BRUTE_FORCE_MAX_VERTICES`].
    pub fn min_cut(&self) -> Result<MinCut> {
        if self.vertices.len() < 2 {
            return Err(Error::TooFewVertices {
                needed: 2,
                found: self.vertices.len(),
            });
        }
        let comps = self.components();
        if comps.len() > 1 {
            return Ok(MinCut {
                capacity: 0,
                witness: comps.into_iter().next().expect("component"),
                method: MinCutMethod::Disconnected,
            });
        }
        if self.is_quasi_tree() {
            return self.min_cut_quasi_tree();
        }
        self.min_cut_brute_force()
    }

    /// Exhaustive search over separators containing the smallest vertex.
    pub fn min_cut_brute_force(&self) -> Result<MinCut> {
        let n = self.vertices.len();
        if n < 2 {
            return Err(Error::TooFewVertices {
                needed: 2,
                found: n,
            });
        }
        if n > BRUTE_FORCE_MAX_VERTICES {
            return Err(Error::TooLargeForBruteForce {
                limit: BRUTE_FORCE_MAX_VERTICES,
                found: n,
            });
        }
        let order: Vec<VertexId> = self.vertices.iter().copied().collect();
        let index: BTreeMap<VertexId, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let masks: Vec<(u32, u64)> = self
            .edges
            .iter()
            .map(|(e, &w)| (e.iter().fold(0u32, |m, v| m | 1 << index[v]), w))
            .collect();
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut best: Option<(u64, u32)> = None;
        for rest in 0..(1u32 << (n - 1)) {
            let x = 1 | (rest << 1);
            if x == full {
                continue;
            }
            let w: u64 = masks
                .iter()
                .filter(|(m, _)| m & x != 0 && m & !x & full != 0)
                .map(|&(_, w)| w)
                .sum();
            if best.is_none_or(|(b, _)| w < b) {
                best = Some((w, x));
            }
        }
        let (capacity, x) = best.expect("at least one separator when n >= 2");
        Ok(MinCut {
            capacity,
            witness: order
                .iter()
                .enumerate()
                .filter(|(i, _)| x & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect(),
            method: MinCutMethod::BruteForce,
        })
    }

    /// Single scan for quasi-trees: every edge is itself a cut, so the
    /// lightest edge is a min-cut.
    pub fn min_cut_quasi_tree(&self) -> Result<MinCut> {
        if !self.is_quasi_tree() {
            return Err(Error::NotQuasiTree);
        }
        let Some((e, w)) = self
            .edges
            .iter()
            .min_by_key(|(e, &w)| (w, (*e).clone()))
            .map(|(e, &w)| (e.clone(), w))
        else {
            return Err(Error::TooFewVertices {
                needed: 2,
                found: self.vertices.len(),
            });
        };
        let rest = self.without_edge(&e);
        let first = *e.iter().next().expect("edge has vertices");
        let witness = rest
            .components()
            .into_iter()
            .find(|c| c.contains(&first))
            .expect("vertex belongs to a component");
        Ok(MinCut {
            capacity: w,
            witness,
            method: MinCutMethod::QuasiTreeScan,
        })
    }
}

fn crosses(e: &VertexSet, x: &VertexSet) -> bool {
    !e.is_disjoint(x) && !e.is_subset(x)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Six users, five unit edges.
    fn fig1() -> Hypergraph {
        Hypergraph::with_users(
            6,
            [
                (vset([1, 4]), 1),
                (vset([1, 2, 3]), 1),
                (vset([2, 3]), 1),
                (vset([4, 5]), 1),
                (vset([3, 5, 6]), 1),
            ],
        )
        .unwrap()
    }

    fn fig2() -> Hypergraph {
        fig1().without_edge(&vset([1, 2, 3]))
    }

    fn bfs_connected(h: &Hypergraph) -> bool {
        let start = *h.vertices().iter().next().unwrap();
        let mut seen = VertexSet::from([start]);
        let mut frontier = vec![start];
        while let Some(v) = frontier.pop() {
            for (e, _) in h.edges() {
                if e.contains(&v) {
                    for u in e {
                        if seen.insert(*u) {
                            frontier.push(*u);
                        }
                    }
                }
            }
        }
        seen.len() == h.num_vertices()
    }

    #[test]
    fn duplicate_edges_merge() {
        let h = Hypergraph::with_users(3, [(vset([1, 2]), 2), (vset([2, 1]), 3)]).unwrap();
        assert_eq!(h.num_edges(), 1);
        assert_eq!(h.weight(&vset([1, 2])), Some(5));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            Hypergraph::with_users(3, [(vset([1]), 1)]),
            Err(Error::InvalidEdge(_))
        ));
        assert!(matches!(
            Hypergraph::with_users(3, [(vset([1, 4]), 1)]),
            Err(Error::UnknownVertex(VertexId(4)))
        ));
        assert!(matches!(
            Hypergraph::with_users(3, [(vset([1, 2]), 0)]),
            Err(Error::InvalidEdge(_))
        ));
    }

    #[test]
    fn connectivity() {
        assert!(fig1().is_connected());
        assert!(!Hypergraph::with_users(3, []).unwrap().is_connected());
        assert!(Hypergraph::with_users(1, []).unwrap().is_connected());
        let cut_off = fig2().without_edge(&vset([1, 4]));
        assert_eq!(cut_off.is_connected(), bfs_connected(&cut_off));
        assert!(!cut_off.is_connected());
    }

    #[test]
    fn walks() {
        let h = fig1();
        let cyc = [
            WalkStep::Vertex(VertexId(2)),
            WalkStep::Edge(vset([2, 3])),
            WalkStep::Vertex(VertexId(3)),
            WalkStep::Edge(vset([1, 2, 3])),
            WalkStep::Vertex(VertexId(2)),
        ];
        assert_eq!(h.classify_walk(&cyc), WalkKind::Cycle);
        let loose = [
            WalkStep::Vertex(VertexId(1)),
            WalkStep::Edge(vset([1, 4])),
            WalkStep::Vertex(VertexId(4)),
            WalkStep::Edge(vset([4, 5])),
            WalkStep::Vertex(VertexId(5)),
        ];
        assert_eq!(h.classify_walk(&loose), WalkKind::LoosePath);
        let bad = [
            WalkStep::Vertex(VertexId(1)),
            WalkStep::Edge(vset([2, 3])),
            WalkStep::Vertex(VertexId(2)),
        ];
        assert_eq!(h.classify_walk(&bad), WalkKind::Invalid);
        // {1,2,3} is used twice
        let p = [
            WalkStep::Vertex(VertexId(2)),
            WalkStep::Edge(vset([1, 2, 3])),
            WalkStep::Vertex(VertexId(3)),
            WalkStep::Edge(vset([2, 3])),
            WalkStep::Vertex(VertexId(2)),
            WalkStep::Edge(vset([1, 2, 3])),
            WalkStep::Vertex(VertexId(1)),
        ];
        assert_eq!(h.classify_walk(&p), WalkKind::Walk);
        let not_loose = [
            WalkStep::Vertex(VertexId(1)),
            WalkStep::Edge(vset([1, 2, 3])),
            WalkStep::Vertex(VertexId(2)),
            WalkStep::Edge(vset([2, 3])),
            WalkStep::Vertex(VertexId(3)),
        ];
        assert_eq!(h.classify_walk(&not_loose), WalkKind::Path);
        let missing_edge = [
            WalkStep::Vertex(VertexId(1)),
            WalkStep::Edge(vset([1, 2])),
            WalkStep::Vertex(VertexId(2)),
        ];
        assert_eq!(h.classify_walk(&missing_edge), WalkKind::Invalid);
        assert_eq!(
            h.classify_walk(&[WalkStep::Vertex(VertexId(1))]),
            WalkKind::Walk
        );
    }

    #[test]
    fn partial_and_induced() {
        let h = fig1();
        let p = h.largest_partial(&vset([1, 2, 3])).unwrap();
        assert_eq!(
            p.edges().map(|(e, _)| e.clone()).collect::<Vec<_>>(),
            vec![vset([1, 2, 3]), vset([2, 3])]
        );
        assert_eq!(h.largest_partial(h.vertices()).unwrap(), h);
        let p = h.largest_partial(&vset([4, 5])).unwrap();
        assert_eq!(
            p.edge_list(),
            vec![Edge {
                vertices: vset([4, 5]),
                weight: 1
            }]
        );

        let ind = h.induced(&vset([2, 3, 6])).unwrap();
        assert_eq!(ind.weight(&vset([2, 3])), Some(2));
        assert_eq!(ind.weight(&vset([3, 6])), Some(1));
        assert_eq!(ind.num_edges(), 2);
        assert_eq!(h.induced(h.vertices()).unwrap(), h);
        let ind = h.induced(&vset([1, 2, 4])).unwrap();
        assert_eq!(ind.weight(&vset([1, 2])), Some(1));
        assert_eq!(ind.weight(&vset([1, 4])), Some(1));
        assert_eq!(ind.num_edges(), 2);

        assert_eq!(h.induced(&VertexSet::new()), Err(Error::EmptyVertexSet));
        assert_eq!(
            h.largest_partial(&VertexSet::new()),
            Err(Error::EmptyVertexSet)
        );
    }

    #[test]
    fn degrees() {
        let h = fig1();
        assert_eq!(h.degree(VertexId(1)).unwrap(), (2, 2));
        assert_eq!(h.degree(VertexId(3)).unwrap(), (3, 3));
        let iso = Hypergraph::with_users(3, [(vset([1, 2]), 4)]).unwrap();
        assert_eq!(iso.degree(VertexId(3)).unwrap(), (0, 0));
        assert_eq!(
            h.degree(VertexId(9)),
            Err(Error::UnknownVertex(VertexId(9)))
        );
    }

    #[test]
    fn cuts() {
        let h = fig1();
        let c = h.cut(&vset([4, 5, 6])).unwrap();
        assert_eq!(c.weight, 2);
        assert_eq!(
            c.crossing_edges
                .iter()
                .map(|e| e.vertices.clone())
                .collect::<Vec<_>>(),
            vec![vset([1, 4]), vset([3, 5, 6])]
        );
        assert_eq!(h.cut(&vset([1, 2, 3])).unwrap().weight, 2);
        assert_eq!(h.cut(&vset([6])).unwrap().weight, 1);
        assert_eq!(h.cut(&VertexSet::new()), Err(Error::EmptyVertexSet));
        assert_eq!(h.cut(h.vertices()), Err(Error::NotProperSubset));
    }

    #[test]
    fn min_cuts() {
        let h = fig1();
        let mc = h.min_cut().unwrap();
        assert_eq!(mc.capacity, 1);
        assert_eq!(mc.method, MinCutMethod::BruteForce);
        assert_eq!(h.cut(&mc.witness).unwrap().weight, 1);

        let q = fig2();
        let fast = q.min_cut_quasi_tree().unwrap();
        let brute = q.min_cut_brute_force().unwrap();
        assert_eq!(fast.capacity, 1);
        assert_eq!(brute.capacity, 1);
        assert_eq!(q.cut(&fast.witness).unwrap().weight, 1);

        let d = Hypergraph::with_users(4, [(vset([1, 2]), 3), (vset([3, 4]), 1)]).unwrap();
        let mc = d.min_cut().unwrap();
        assert_eq!(mc.capacity, 0);
        assert_eq!(mc.witness, vset([1, 2]));
        assert_eq!(d.min_cut_brute_force().unwrap().capacity, 0);

        assert!(matches!(
            Hypergraph::with_users(1, []).unwrap().min_cut(),
            Err(Error::TooFewVertices { .. })
        ));
        assert_eq!(h.min_cut_quasi_tree(), Err(Error::NotQuasiTree));
    }

    #[test]
    fn brute_force_limit() {
        // 26 users on a cycle of pairs: connected, not a quasi-tree
        let n = 26;
        let edges = (1..=n).map(|i| (vset([i, i % n + 1]), 1));
        let h = Hypergraph::with_users(n, edges).unwrap();
        assert!(matches!(
            h.min_cut(),
            Err(Error::TooLargeForBruteForce { .. })
        ));
        // a long path is a quasi-tree, so the scan still answers
        let path = Hypergraph::with_users(n, (1..n).map(|i| (vset([i, i + 1]), 2))).unwrap();
        assert_eq!(path.min_cut().unwrap().capacity, 2);
    }

    #[test]
    fn quasi_trees() {
        assert!(!fig1().is_quasi_tree());
        assert!(fig2().is_quasi_tree());
        let h = Hypergraph::with_users(4, [(vset([1, 2, 3]), 1), (vset([1, 2, 4]), 1)]).unwrap();
        assert!(h.is_quasi_tree());
        let cyc = [
            WalkStep::Vertex(VertexId(1)),
            WalkStep::Edge(vset([1, 2, 3])),
            WalkStep::Vertex(VertexId(2)),
            WalkStep::Edge(vset([1, 2, 4])),
            WalkStep::Vertex(VertexId(1)),
        ];
        assert_eq!(h.classify_walk(&cyc), WalkKind::Cycle);
    }

    #[test]
    fn edge_partition_fig1() {
        let h = fig1();
        let part = h.partition_edges(&vset([4, 5, 6])).unwrap();
        assert_eq!(part.weights(), (2, 1, 2));
        let part = h.partition_edges(&vset([6])).unwrap();
        assert!(part.inside.is_empty());
    }
}
