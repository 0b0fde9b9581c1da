//! Finite `(d+1)`-uniform hypergraphs, their connected components and
//! Berge-cycle structure.
//!
//! Vertices are dense ids `0..n`. Edges are stored as sorted `(d+1)`-tuples in
//! colexicographic order, which is also the rank order used by the sampler,
//! so a freshly sampled hypergraph needs no re-sorting.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("d must be at least 1, got {0}")]
    InvalidD(usize),
    #[error("vertex count {0} does not fit in 32-bit vertex ids")]
    TooManyVertices(usize),
    #[error("edge {index} has {found} vertices, expected {expected}")]
    WrongArity { index: usize, expected: usize, found: usize },
    #[error("edge {index} repeats vertex {vertex}")]
    RepeatedVertex { index: usize, vertex: Vertex },
    #[error("edge {index} uses vertex {vertex}, outside 0..{n}")]
    VertexOutOfRange { index: usize, vertex: Vertex, n: usize },
    #[error("edge {index} duplicates edge {first}")]
    DuplicateEdge { index: usize, first: usize },
}

/// Colexicographic order on sorted tuples: compare largest elements first.
pub fn colex_cmp(a: &[Vertex], b: &[Vertex]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// Immutable `(d+1)`-uniform hypergraph with a vertex-to-edge incidence index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    d: usize,
    n: usize,
    /// flat edge storage, stride `d + 1`, colex order
    edges: Vec<Vertex>,
    inc_offsets: Vec<usize>,
    inc_edges: Vec<u32>,
}

impl Hypergraph {
    /// Validates and canonically orders an edge list. Vertices inside an edge
    /// may be given in any order.
    pub fn build<I, E>(d: usize, n: usize, edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: AsRef<[Vertex]>,
    {
        if d == 0 {
            return Err(HypergraphError::InvalidD(d));
        }
        if n > u32::MAX as usize {
            return Err(HypergraphError::TooManyVertices(n));
        }
        let k = d + 1;
        let mut tuples: Vec<(Vec<Vertex>, usize)> = Vec::new();
        for (index, e) in edges.into_iter().enumerate() {
            let e = e.as_ref();
            if e.len() != k {
                return Err(HypergraphError::WrongArity { index, expected: k, found: e.len() });
            }
            let mut sorted = e.to_vec();
            sorted.sort_unstable();
            if let Some(&v) = sorted.iter().find(|&&v| v as usize >= n) {
                return Err(HypergraphError::VertexOutOfRange { index, vertex: v, n });
            }
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(HypergraphError::RepeatedVertex { index, vertex: w[0] });
            }
            tuples.push((sorted, index));
        }
        tuples.sort_by(|a, b| colex_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
        for w in tuples.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(HypergraphError::DuplicateEdge { index: w[1].1, first: w[0].1 });
            }
        }
        let flat = tuples.into_iter().flat_map(|(e, _)| e).collect();
        Ok(Self::from_colex_unchecked(d, n, flat))
    }

    /// Builds from flat storage already sorted, distinct and in colex order.
    pub(crate) fn from_colex_unchecked(d: usize, n: usize, edges: Vec<Vertex>) -> Self {
        let k = d + 1;
        debug_assert_eq!(edges.len() % k, 0);
        debug_assert!(edges
            .chunks_exact(k)
            .zip(edges.chunks_exact(k).skip(1))
            .all(|(a, b)| colex_cmp(a, b) == Ordering::Less));
        let mut inc_offsets = vec![0usize; n + 1];
        for &v in &edges {
            inc_offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            inc_offsets[i + 1] += inc_offsets[i];
        }
        let mut fill = inc_offsets.clone();
        let mut inc_edges = vec![0u32; edges.len()];
        for (j, e) in edges.chunks_exact(k).enumerate() {
            for &v in e {
                inc_edges[fill[v as usize]] = j as u32;
                fill[v as usize] += 1;
            }
        }
        Self { d, n, edges, inc_offsets, inc_edges }
    }

    /// Hypergraph with no edges.
    pub fn empty(d: usize, n: usize) -> Self {
        assert!(d >= 1);
        Self::from_colex_unchecked(d, n, Vec::new())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of vertices per edge, `d + 1`.
    pub fn arity(&self) -> usize {
        self.d + 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len() / (self.d + 1)
    }

    pub fn edge(&self, j: usize) -> &[Vertex] {
        let k = self.d + 1;
        &self.edges[j * k..(j + 1) * k]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[Vertex]> + '_ {
        self.edges.chunks_exact(self.d + 1)
    }

    /// Indices of the edges containing `v`, ascending.
    pub fn incident(&self, v: Vertex) -> &[u32] {
        let v = v as usize;
        &self.inc_edges[self.inc_offsets[v]..self.inc_offsets[v + 1]]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incident(v).len()
    }

    /// Whether the given vertex set (any order, any length) is an edge.
    pub fn has_edge(&self, vertices: &[Vertex]) -> bool {
        if vertices.len() != self.d + 1 {
            return false;
        }
        let mut key = vertices.to_vec();
        key.sort_unstable();
        if key.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        // search the shorter incidence list
        let Some(&pivot) = key.iter().min_by_key(|&&v| {
            if (v as usize) < self.n {
                self.degree(v)
            } else {
                0
            }
        }) else {
            return false;
        };
        if pivot as usize >= self.n || key.iter().any(|&v| v as usize >= self.n) {
            return false;
        }
        self.incident(pivot).iter().any(|&j| self.edge(j as usize) == key.as_slice())
    }

    /// Edge index by binary search over the colex order.
    pub fn edge_index(&self, sorted: &[Vertex]) -> Option<usize> {
        let m = self.edge_count();
        let (mut lo, mut hi) = (0, m);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match colex_cmp(self.edge(mid), sorted) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Neighbours of `v` (vertices sharing an edge with it), deduplicated.
    pub fn neighbours(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self
            .incident(v)
            .iter()
            .flat_map(|&j| self.edge(j as usize).iter().copied())
            .filter(|&w| w != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Sub-hypergraph spanned by the given edges, relabelled onto `0..k` in
    /// increasing order of original id. Returns the hypergraph and the map
    /// from new to original ids.
    pub fn edge_induced(&self, edge_ids: &[u32]) -> (Hypergraph, Vec<Vertex>) {
        let mut verts: Vec<Vertex> = edge_ids
            .iter()
            .flat_map(|&j| self.edge(j as usize).iter().copied())
            .collect();
        verts.sort_unstable();
        verts.dedup();
        let sub = self.relabelled(&verts, edge_ids);
        (sub, verts)
    }

    /// Sub-hypergraph induced on a vertex set (all edges inside it).
    pub fn vertex_induced(&self, vertices: &[Vertex]) -> (Hypergraph, Vec<Vertex>) {
        let mut verts = vertices.to_vec();
        verts.sort_unstable();
        verts.dedup();
        let mut inside = std::collections::HashSet::new();
        for &v in &verts {
            inside.insert(v);
        }
        let mut edge_ids: Vec<u32> = verts
            .iter()
            .flat_map(|&v| self.incident(v).iter().copied())
            .filter(|&j| self.edge(j as usize).iter().all(|w| inside.contains(w)))
            .collect();
        edge_ids.sort_unstable();
        edge_ids.dedup();
        let sub = self.relabelled(&verts, &edge_ids);
        (sub, verts)
    }

    fn relabelled(&self, verts: &[Vertex], edge_ids: &[u32]) -> Hypergraph {
        let local = |v: Vertex| verts.binary_search(&v).expect("vertex in set") as Vertex;
        let edges: Vec<Vec<Vertex>> = edge_ids
            .iter()
            .map(|&j| self.edge(j as usize).iter().map(|&v| local(v)).collect())
            .collect();
        Hypergraph::build(self.d, verts.len(), edges).expect("relabelling preserves validity")
    }

    /// Image under a vertex permutation `perm[old] = new`.
    pub fn permuted(&self, perm: &[Vertex]) -> Hypergraph {
        assert_eq!(perm.len(), self.n);
        let edges: Vec<Vec<Vertex>> = self
            .edges()
            .map(|e| e.iter().map(|&v| perm[v as usize]).collect())
            .collect();
        Hypergraph::build(self.d, self.n, edges).expect("permutation preserves validity")
    }

    /// Disjoint union, the second operand's vertices shifted past the first.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Hypergraph {
        assert_eq!(self.d, other.d);
        let shift = self.n as Vertex;
        let edges: Vec<Vec<Vertex>> = self
            .edges()
            .map(|e| e.to_vec())
            .chain(other.edges().map(|e| e.iter().map(|&v| v + shift).collect()))
            .collect();
        Hypergraph::build(self.d, self.n + other.n, edges).expect("union of valid hypergraphs")
    }

    /// BFS distances from `source` in the shared-edge metric.
    pub fn distances_from(&self, source: Vertex) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        dist[source as usize] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize].unwrap();
            for &j in self.incident(u) {
                for &w in self.edge(j as usize) {
                    if dist[w as usize].is_none() {
                        dist[w as usize] = Some(du + 1);
                        queue.push_back(w);
                    }
                }
            }
        }
        dist
    }

    /// Vertices at distance at most `radius` from `center`, in BFS order, with
    /// their distances.
    pub fn ball(&self, center: Vertex, radius: u32) -> Vec<(Vertex, u32)> {
        let mut seen = std::collections::HashMap::new();
        seen.insert(center, 0u32);
        let mut order = vec![(center, 0u32)];
        let mut head = 0;
        while head < order.len() {
            let (u, du) = order[head];
            head += 1;
            if du == radius {
                continue;
            }
            for &j in self.incident(u) {
                for &w in self.edge(j as usize) {
                    if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(w) {
                        slot.insert(du + 1);
                        order.push((w, du + 1));
                    }
                }
            }
        }
        order
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Hypergraph")
            .field("d", &self.d)
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentKind {
    IsolatedVertex,
    /// Connected and Berge-acyclic with `order` edges.
    Butterfly { order: usize },
    Unicyclic,
    Multicyclic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub vertex_count: usize,
    pub edge_count: usize,
    /// `E·d − V + 1`
    pub excess: i64,
    pub kind: ComponentKind,
    pub min_vertex: Vertex,
}

impl ComponentSummary {
    /// Butterfly order, with isolated vertices counting as order 0.
    pub fn butterfly_order(&self) -> Option<usize> {
        match self.kind {
            ComponentKind::IsolatedVertex => Some(0),
            ComponentKind::Butterfly { order } => Some(order),
            _ => None,
        }
    }
}

/// Partition of the vertex set into connected components, numbered by
/// increasing minimum vertex id.
#[derive(Debug, Clone)]
pub struct ComponentMap {
    assignment: Vec<u32>,
    summaries: Vec<ComponentSummary>,
    vertex_offsets: Vec<usize>,
    vertices: Vec<Vertex>,
    edge_offsets: Vec<usize>,
    edge_ids: Vec<u32>,
    largest: Option<usize>,
}

impl ComponentMap {
    pub fn len(&self) -> usize {
        self.summaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summaries.is_empty()
    }

    pub fn component_of(&self, v: Vertex) -> usize {
        self.assignment[v as usize] as usize
    }

    pub fn summaries(&self) -> &[ComponentSummary] {
        &self.summaries
    }

    pub fn summary(&self, c: usize) -> &ComponentSummary {
        &self.summaries[c]
    }

    pub fn vertices_of(&self, c: usize) -> &[Vertex] {
        &self.vertices[self.vertex_offsets[c]..self.vertex_offsets[c + 1]]
    }

    pub fn edges_of(&self, c: usize) -> &[u32] {
        &self.edge_ids[self.edge_offsets[c]..self.edge_offsets[c + 1]]
    }

    /// A maximal-size component; ties go to the smallest minimum vertex.
    pub fn largest(&self) -> Option<usize> {
        self.largest
    }

    pub fn max_size(&self) -> usize {
        self.largest.map_or(0, |c| self.summaries[c].vertex_count)
    }

    /// Every component of maximal size.
    pub fn maximal_components(&self) -> Vec<usize> {
        let m = self.max_size();
        (0..self.len()).filter(|&c| self.summaries[c].vertex_count == m).collect()
    }
}

struct Dsu {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Returns false if already joined.
    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (ra, rb) = if self.rank[ra as usize] < self.rank[rb as usize] { (rb, ra) } else { (ra, rb) };
        self.parent[rb as usize] = ra;
        if self.rank[ra as usize] == self.rank[rb as usize] {
            self.rank[ra as usize] += 1;
        }
        true
    }
}

fn classify(vertex_count: usize, edge_count: usize, excess: i64) -> ComponentKind {
    match excess {
        0 if edge_count == 0 => ComponentKind::IsolatedVertex,
        0 => ComponentKind::Butterfly { order: edge_count },
        1 => ComponentKind::Unicyclic,
        e => {
            debug_assert!(e >= 2, "negative excess {e} on {vertex_count} vertices");
            ComponentKind::Multicyclic
        }
    }
}

/// Connected components by union-find over edge co-membership.
pub fn components(h: &Hypergraph) -> ComponentMap {
    let n = h.n();
    let mut dsu = Dsu::new(n);
    for e in h.edges() {
        for w in e.windows(2) {
            dsu.union(w[0], w[1]);
        }
    }
    let mut id_of_root = vec![u32::MAX; n];
    let mut assignment = vec![0u32; n];
    let mut count = 0u32;
    for v in 0..n as u32 {
        let r = dsu.find(v) as usize;
        if id_of_root[r] == u32::MAX {
            id_of_root[r] = count;
            count += 1;
        }
        assignment[v as usize] = id_of_root[r];
    }
    let c = count as usize;

    let mut vertex_offsets = vec![0usize; c + 1];
    for &a in &assignment {
        vertex_offsets[a as usize + 1] += 1;
    }
    let mut edge_offsets = vec![0usize; c + 1];
    for e in h.edges() {
        edge_offsets[assignment[e[0] as usize] as usize + 1] += 1;
    }
    for i in 0..c {
        vertex_offsets[i + 1] += vertex_offsets[i];
        edge_offsets[i + 1] += edge_offsets[i];
    }
    let mut vertices = vec![0; n];
    let mut fill = vertex_offsets.clone();
    for v in 0..n {
        let a = assignment[v] as usize;
        vertices[fill[a]] = v as Vertex;
        fill[a] += 1;
    }
    let mut edge_ids = vec![0; h.edge_count()];
    let mut fill = edge_offsets.clone();
    for (j, e) in h.edges().enumerate() {
        let a = assignment[e[0] as usize] as usize;
        edge_ids[fill[a]] = j as u32;
        fill[a] += 1;
    }

    let d = h.d() as i64;
    let mut summaries = Vec::with_capacity(c);
    for i in 0..c {
        let vc = vertex_offsets[i + 1] - vertex_offsets[i];
        let ec = edge_offsets[i + 1] - edge_offsets[i];
        let excess = ec as i64 * d - vc as i64 + 1;
        summaries.push(ComponentSummary {
            vertex_count: vc,
            edge_count: ec,
            excess,
            kind: classify(vc, ec, excess),
            min_vertex: vertices[vertex_offsets[i]],
        });
    }

    let mut largest: Option<usize> = None;
    for (i, s) in summaries.iter().enumerate() {
        if largest.is_none_or(|b| s.vertex_count > summaries[b].vertex_count) {
            largest = Some(i);
        }
    }

    let map = ComponentMap { assignment, summaries, vertex_offsets, vertices, edge_offsets, edge_ids, largest };
    if cfg!(debug_assertions) {
        let cyclic = cyclic_components(h, &map);
        for (i, s) in map.summaries.iter().enumerate() {
            assert_eq!(s.excess == 0, !cyclic[i], "excess and incidence forest disagree on component {i}");
        }
    }
    map
}

/// Per component: does its incidence graph contain a cycle.
fn cyclic_components(h: &Hypergraph, map: &ComponentMap) -> Vec<bool> {
    let n = h.n();
    let mut dsu = Dsu::new(n + h.edge_count());
    let mut cyclic = vec![false; map.len()];
    for (j, e) in h.edges().enumerate() {
        let node = (n + j) as u32;
        for &v in e {
            if !dsu.union(v, node) {
                cyclic[map.component_of(v)] = true;
            }
        }
    }
    cyclic
}

/// Whether the incidence graph is a forest.
pub fn berge_acyclic(h: &Hypergraph) -> bool {
    let n = h.n();
    let mut dsu = Dsu::new(n + h.edge_count());
    for (j, e) in h.edges().enumerate() {
        for &v in e {
            if !dsu.union(v, (n + j) as u32) {
                return false;
            }
        }
    }
    true
}

/// Connected in the shared-edge sense; the empty hypergraph counts as connected.
pub fn is_connected(h: &Hypergraph) -> bool {
    h.n() == 0 || components(h).len() == 1
}

/// Number of vertices outside a largest component.
pub fn mu(h: &Hypergraph) -> usize {
    h.n() - components(h).max_size()
}

pub fn degree(h: &Hypergraph, v: Vertex) -> usize {
    h.degree(v)
}

/// Largest `|B(v, r)|` over all vertices.
pub fn max_ball_size(h: &Hypergraph, r: u32) -> usize {
    (0..h.n() as Vertex).map(|v| h.ball(v, r).len()).max().unwrap_or(0)
}

/// Isomorphism by backtracking with degree pruning: returns `map[v1] = v2`.
/// Exponential in the worst case; meant for small structures.
pub fn find_isomorphism(h1: &Hypergraph, h2: &Hypergraph) -> Option<Vec<Vertex>> {
    find_isomorphism_fixing(h1, h2, &[])
}

/// As [`find_isomorphism`], with some vertex pairs required to correspond.
pub fn find_isomorphism_fixing(h1: &Hypergraph, h2: &Hypergraph, fixed: &[(Vertex, Vertex)]) -> Option<Vec<Vertex>> {
    if h1.d() != h2.d() || h1.n() != h2.n() || h1.edge_count() != h2.edge_count() {
        return None;
    }
    let n = h1.n();
    let mut deg1: Vec<usize> = (0..n as Vertex).map(|v| h1.degree(v)).collect();
    let mut deg2: Vec<usize> = (0..n as Vertex).map(|v| h2.degree(v)).collect();
    let (s1, s2) = (deg1.clone(), deg2.clone());
    deg1.sort_unstable();
    deg2.sort_unstable();
    if deg1 != deg2 {
        return None;
    }
    let mut map = vec![Vertex::MAX; n];
    let mut used = vec![false; n];
    for &(a, b) in fixed {
        if s1[a as usize] != s2[b as usize] || (map[a as usize] != Vertex::MAX && map[a as usize] != b) || (used[b as usize] && map[a as usize] != b) {
            return None;
        }
        map[a as usize] = b;
        used[b as usize] = true;
    }
    // assign high-degree vertices first for earlier pruning
    let mut order: Vec<Vertex> = (0..n as Vertex).filter(|&v| map[v as usize] == Vertex::MAX).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(s1[v as usize]));
    let mut image = vec![0; h1.arity()];
    // an edge is checked once all its vertices are mapped
    let consistent = |map: &[Vertex], v: Vertex, image: &mut Vec<Vertex>| {
        h1.incident(v).iter().all(|&j| {
            let e = h1.edge(j as usize);
            if e.iter().any(|&w| map[w as usize] == Vertex::MAX) {
                return true;
            }
            for (slot, &w) in image.iter_mut().zip(e) {
                *slot = map[w as usize];
            }
            h2.has_edge(image)
        })
    };
    for &(a, _) in fixed {
        if !consistent(&map, a, &mut image) {
            return None;
        }
    }
    fn go(
        i: usize,
        order: &[Vertex],
        map: &mut Vec<Vertex>,
        used: &mut Vec<bool>,
        s1: &[usize],
        s2: &[usize],
        image: &mut Vec<Vertex>,
        consistent: &dyn Fn(&[Vertex], Vertex, &mut Vec<Vertex>) -> bool,
    ) -> bool {
        let Some(&v) = order.get(i) else { return true };
        for w in 0..map.len() {
            if used[w] || s2[w] != s1[v as usize] {
                continue;
            }
            map[v as usize] = w as Vertex;
            used[w] = true;
            if consistent(map, v, image) && go(i + 1, order, map, used, s1, s2, image, consistent) {
                return true;
            }
            map[v as usize] = Vertex::MAX;
            used[w] = false;
        }
        false
    }
    // equal edge counts plus every H1 edge mapping to an H2 edge makes the
    // bijection an isomorphism
    if go(0, &order, &mut map, &mut used, &s1, &s2, &mut image, &consistent) {
        Some(map)
    } else {
        None
    }
}

pub fn isomorphic(h1: &Hypergraph, h2: &Hypergraph) -> bool {
    find_isomorphism(h1, h2).is_some()
}

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: HypergraphError },
}

/// Reads the `d n m` edge-list format. Blank lines and `#` comments are
/// skipped.
pub fn read_edgelist<R: BufRead>(reader: R) -> Result<Hypergraph, EdgeListError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges: Vec<Vec<Vertex>> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::new();
    let mut last_line = 0;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        match header {
            None => {
                if fields.len() != 3 {
                    return Err(EdgeListError::Syntax {
                        line: line_no,
                        message: format!("header must be \"d n m\", got {} fields", fields.len()),
                    });
                }
                let parse = |s: &str, what: &str| {
                    s.parse::<usize>().map_err(|_| EdgeListError::Syntax {
                        line: line_no,
                        message: format!("invalid {what} {s:?}"),
                    })
                };
                let d = parse(fields[0], "d")?;
                let n = parse(fields[1], "n")?;
                let m = parse(fields[2], "m")?;
                if d == 0 {
                    return Err(EdgeListError::Invalid { line: line_no, source: HypergraphError::InvalidD(0) });
                }
                header = Some((d, n, m));
            }
            Some((d, _, m)) => {
                if edges.len() == m {
                    return Err(EdgeListError::Syntax {
                        line: line_no,
                        message: format!("more than the declared {m} edges"),
                    });
                }
                if fields.len() != d + 1 {
                    return Err(EdgeListError::Syntax {
                        line: line_no,
                        message: format!("expected {} vertex ids, found {}", d + 1, fields.len()),
                    });
                }
                let mut e = Vec::with_capacity(d + 1);
                for f in fields {
                    e.push(f.parse::<Vertex>().map_err(|_| EdgeListError::Syntax {
                        line: line_no,
                        message: format!("invalid vertex id {f:?}"),
                    })?);
                }
                edges.push(e);
                edge_lines.push(line_no);
            }
        }
    }
    let Some((d, n, m)) = header else {
        return Err(EdgeListError::Syntax { line: last_line.max(1), message: "missing header".into() });
    };
    if edges.len() != m {
        return Err(EdgeListError::Syntax {
            line: last_line,
            message: format!("declared {m} edges, found {}", edges.len()),
        });
    }
    Hypergraph::build(d, n, edges).map_err(|source| {
        let index = match &source {
            HypergraphError::WrongArity { index, .. }
            | HypergraphError::RepeatedVertex { index, .. }
            | HypergraphError::VertexOutOfRange { index, .. }
            | HypergraphError::DuplicateEdge { index, .. } => Some(*index),
            _ => None,
        };
        let line = index.map_or(1, |i| edge_lines[i]);
        EdgeListError::Invalid { line, source }
    })
}

/// Writes the canonical (colex-ordered) edge list.
pub fn write_edgelist<W: Write>(h: &Hypergraph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {} {}", h.d(), h.n(), h.edge_count())?;
    let mut line = String::new();
    for e in h.edges() {
        line.clear();
        for (i, v) in e.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&v.to_string());
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn to_edgelist_string(h: &Hypergraph) -> String {
    let mut buf = Vec::new();
    write_edgelist(h, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}
