//! Exact structural statistics of a hypergraph: butterfly components by
//! type, minimal marked-butterfly copies, unicyclic cores, the events `D_l`
//! and `D̃_l`, and low-degree vertices near cycles.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::butterfly::{canonical_type, combinations, marked_type, TypeCatalog};
use crate::hypercore::{components, ComponentKind, ComponentMap, Hypergraph, Vertex};

pub const SCHEMA_VERSION: u32 = 1;

/// Cores with more vertices than this are reported as [`LARGE_CORE`].
pub const MAX_CORE_VERTICES: usize = 12;
pub const LARGE_CORE: &str = "large-core";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusConfig {
    pub l_max: usize,
    pub vstar_max: usize,
    pub k_small: usize,
}

impl Default for CensusConfig {
    fn default() -> Self {
        Self { l_max: 3, vstar_max: 2, k_small: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeInfo {
    pub order: usize,
    pub vstar: usize,
    pub automorphisms: u64,
    pub labelled_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub schema_version: u32,
    pub d: usize,
    pub n: usize,
    pub edge_count: usize,
    pub config: CensusConfig,
    pub component_count: u64,
    /// butterfly components (isolated vertices are order 0) by hex type code
    pub butterfly_components: BTreeMap<String, u64>,
    pub butterfly_components_by_order: Vec<u64>,
    /// butterfly components of order above `l_max`
    pub larger_butterflies: u64,
    /// minimal marked copies by hex marked-type code
    pub marked_copies: BTreeMap<String, u64>,
    /// unicyclic components by hex core signature (or `large-core`)
    pub unicyclic: BTreeMap<String, u64>,
    pub unicyclic_count: u64,
    pub multicyclic_count: u64,
    pub mu: u64,
    pub connected: bool,
    pub min_degree: Option<u64>,
    /// vertices of degree at most `k_small`
    pub small_degree_count: u64,
    /// `D_l` for `l = 0..=l_max`
    pub d_l: Vec<bool>,
    pub tilde_d_l: Vec<bool>,
    pub butterfly_types: BTreeMap<String, TypeInfo>,
    pub marked_types: BTreeMap<String, TypeInfo>,
}

/// Full census with a freshly built type catalog.
pub fn census(h: &Hypergraph, config: CensusConfig) -> CensusReport {
    let catalog = TypeCatalog::new(h.d(), config.l_max, config.vstar_max);
    census_with(h, config, &catalog)
}

/// Census against a prebuilt catalog (must match `d`, `l_max`, `vstar_max`).
pub fn census_with(h: &Hypergraph, config: CensusConfig, catalog: &TypeCatalog) -> CensusReport {
    assert_eq!(catalog.d, h.d());
    assert!(catalog.l_max >= config.l_max && catalog.vstar_max >= config.vstar_max);
    let map = components(h);

    let mut butterfly_components: BTreeMap<String, u64> = catalog
        .types()
        .iter()
        .filter(|t| t.order <= config.l_max)
        .map(|t| (t.hex_code(), 0))
        .collect();
    let mut by_order = vec![0u64; config.l_max + 1];
    let mut larger = 0;
    let mut unicyclic: BTreeMap<String, u64> = BTreeMap::new();
    let (mut uni, mut multi) = (0, 0);
    for c in 0..map.len() {
        let s = map.summary(c);
        match s.kind {
            ComponentKind::IsolatedVertex | ComponentKind::Butterfly { .. } => {
                let order = s.edge_count;
                if order > config.l_max {
                    larger += 1;
                    continue;
                }
                by_order[order] += 1;
                let t = component_type_code(h, &map, c);
                *butterfly_components.get_mut(&hex::encode(t)).expect("catalog covers all orders ≤ l_max") += 1;
            }
            ComponentKind::Unicyclic => {
                uni += 1;
                let key = match core_signature(h, map.edges_of(c)) {
                    CoreSignature::Code(code) => hex::encode(code),
                    CoreSignature::Large => LARGE_CORE.to_string(),
                };
                *unicyclic.entry(key).or_default() += 1;
            }
            ComponentKind::Multicyclic => multi += 1,
        }
    }

    let counts = marked_copy_counts(h, config.l_max, config.vstar_max, catalog);
    let marked_copies = catalog
        .marked_types()
        .iter()
        .zip(&counts)
        .filter(|(t, _)| t.order() <= config.l_max && t.vstar() <= config.vstar_max)
        .map(|(t, &c)| (t.hex_code(), c))
        .collect();

    let info = |order, vstar, a: u128, c: u128| TypeInfo {
        order,
        vstar,
        automorphisms: a as u64,
        labelled_count: c as u64,
    };
    let butterfly_types = catalog
        .types()
        .iter()
        .filter(|t| t.order <= config.l_max)
        .map(|t| (t.hex_code(), info(t.order, 0, t.automorphisms, t.labelled_count)))
        .collect();
    let marked_types = catalog
        .marked_types()
        .iter()
        .filter(|t| t.order() <= config.l_max && t.vstar() <= config.vstar_max)
        .map(|t| (t.hex_code(), info(t.order(), t.vstar(), t.automorphisms, t.labelled_count)))
        .collect();

    let degrees = (0..h.n() as Vertex).map(|v| h.degree(v) as u64);
    CensusReport {
        schema_version: SCHEMA_VERSION,
        d: h.d(),
        n: h.n(),
        edge_count: h.edge_count(),
        config,
        component_count: map.len() as u64,
        butterfly_components,
        butterfly_components_by_order: by_order,
        larger_butterflies: larger,
        marked_copies,
        unicyclic,
        unicyclic_count: uni,
        multicyclic_count: multi,
        mu: (h.n() - map.max_size()) as u64,
        connected: h.n() == 0 || map.len() == 1,
        min_degree: degrees.clone().min(),
        small_degree_count: degrees.filter(|&g| g <= config.k_small as u64).count() as u64,
        d_l: (0..=config.l_max).map(|l| d_l_on(&map, l)).collect(),
        tilde_d_l: (0..=config.l_max).map(|l| tilde_d_l_on(&map, l)).collect(),
        butterfly_types,
        marked_types,
    }
}

/// Canonical code of a butterfly component.
pub fn component_type_code(h: &Hypergraph, map: &ComponentMap, c: usize) -> Vec<u8> {
    let sub = if map.summary(c).edge_count == 0 {
        Hypergraph::empty(h.d(), 1)
    } else {
        h.edge_induced(map.edges_of(c)).0
    };
    canonical_type(&sub).expect("excess-0 component is a butterfly").code
}

/// `D_0` is connectivity; for `l ≥ 1`, some maximal component leaves only
/// butterflies of order `< l` outside it.
pub fn d_l(h: &Hypergraph, l: usize) -> bool {
    d_l_on(&components(h), l)
}

/// `A ∨ B`: no component is an order-`l` butterfly, or a maximal component
/// is one and every other component is a butterfly of order `< l`.
pub fn tilde_d_l(h: &Hypergraph, l: usize) -> bool {
    tilde_d_l_on(&components(h), l)
}

fn small_butterfly(map: &ComponentMap, c: usize, l: usize) -> bool {
    map.summary(c).butterfly_order().is_some_and(|o| o < l)
}

pub fn d_l_on(map: &ComponentMap, l: usize) -> bool {
    if l == 0 {
        return map.len() <= 1;
    }
    let bad: Vec<usize> = (0..map.len()).filter(|&c| !small_butterfly(map, c, l)).collect();
    let max = map.max_size();
    match bad.as_slice() {
        [] => true,
        [c] => map.summary(*c).vertex_count == max,
        _ => false,
    }
}

pub fn tilde_d_l_on(map: &ComponentMap, l: usize) -> bool {
    let is_order_l = |c: usize| map.summary(c).butterfly_order() == Some(l);
    let order_l: Vec<usize> = (0..map.len()).filter(|&c| is_order_l(c)).collect();
    if order_l.is_empty() {
        return true;
    }
    let max = map.max_size();
    order_l.iter().any(|&c| {
        map.summary(c).vertex_count == max
            && (0..map.len()).all(|o| o == c || small_butterfly(map, o, l))
    })
}

/// Minimal marked-copy counts, one per catalog marked type (catalog order).
///
/// A copy is an edge set `F` spanning a butterfly of order `≤ l_max` plus a
/// marked set `M` of vertices whose degree in `H` equals their degree in
/// `F`, such that `(F, M)` is minimal. Each `F` is generated from its
/// smallest candidate vertex, whose whole star `F` must contain.
pub fn marked_copy_counts(h: &Hypergraph, l_max: usize, vstar_max: usize, catalog: &TypeCatalog) -> Vec<u64> {
    let mut counts = vec![0u64; catalog.marked_types().len()];
    if vstar_max == 0 {
        return counts;
    }
    for m in 0..h.n() as Vertex {
        let deg = h.degree(m);
        if deg > l_max {
            continue;
        }
        if deg == 0 {
            let code = marked_type(&Hypergraph::empty(h.d(), 1), &[0]).expect("single vertex").code;
            if let Some(i) = catalog.marked_index(&code) {
                counts[i] += 1;
            }
            continue;
        }
        let mut search = CopySearch::new(h, m, l_max);
        if !search.seed() {
            continue;
        }
        search.run(&mut |edges| {
            record_copies(h, edges, m, vstar_max, catalog, &mut counts);
        });
    }
    counts
}

fn record_copies(h: &Hypergraph, edges: &[u32], anchor: Vertex, vstar_max: usize, catalog: &TypeCatalog, counts: &mut [u64]) {
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    let (sub, verts) = h.edge_induced(&sorted);
    let candidates: Vec<Vertex> = (0..sub.n() as Vertex)
        .filter(|&v| sub.degree(v) == h.degree(verts[v as usize]))
        .collect();
    if verts[candidates[0] as usize] != anchor {
        return;
    }
    for k in 1..=vstar_max.min(candidates.len()) {
        for pick in combinations(candidates.len(), k) {
            let marked: Vec<Vertex> = pick.iter().map(|&i| candidates[i as usize]).collect();
            let t = marked_type(&sub, &marked).expect("copy is a butterfly");
            if t.minimal {
                if let Some(i) = catalog.marked_index(&t.code) {
                    counts[i] += 1;
                }
            }
        }
    }
}

/// Enumerates each connected Berge-acyclic edge set of size `≤ l_max`
/// containing the star of `anchor` exactly once, by include/exclude
/// branching over frontier edges.
struct CopySearch<'a> {
    h: &'a Hypergraph,
    anchor: Vertex,
    l_max: usize,
    chosen: Vec<u32>,
    in_set: HashSet<u32>,
    /// multiplicity of each vertex in the chosen edges
    covered: std::collections::HashMap<Vertex, usize>,
    banned: HashSet<u32>,
}

impl<'a> CopySearch<'a> {
    fn new(h: &'a Hypergraph, anchor: Vertex, l_max: usize) -> Self {
        Self {
            h,
            anchor,
            l_max,
            chosen: Vec::new(),
            in_set: HashSet::new(),
            covered: Default::default(),
            banned: HashSet::new(),
        }
    }

    fn shared(&self, j: u32) -> usize {
        self.h.edge(j as usize).iter().filter(|v| self.covered.contains_key(v)).count()
    }

    fn push(&mut self, j: u32) {
        self.chosen.push(j);
        self.in_set.insert(j);
        for &v in self.h.edge(j as usize) {
            *self.covered.entry(v).or_default() += 1;
        }
    }

    fn pop(&mut self) {
        let j = self.chosen.pop().expect("non-empty");
        self.in_set.remove(&j);
        for &v in self.h.edge(j as usize) {
            let c = self.covered.get_mut(&v).expect("covered");
            *c -= 1;
            if *c == 0 {
                self.covered.remove(&v);
            }
        }
    }

    /// Adds the anchor's star; false if it already holds a cycle.
    fn seed(&mut self) -> bool {
        let star: Vec<u32> = self.h.incident(self.anchor).to_vec();
        for j in star {
            if self.shared(j) > 1 {
                return false;
            }
            self.push(j);
        }
        self.chosen.len() <= self.l_max
    }

    /// Smallest undecided frontier edge that keeps the set acyclic.
    fn next_frontier(&self) -> Option<u32> {
        let mut best: Option<u32> = None;
        for &v in self.covered.keys() {
            for &j in self.h.incident(v) {
                if self.in_set.contains(&j) || self.banned.contains(&j) || best.is_some_and(|b| b <= j) {
                    continue;
                }
                if self.shared(j) == 1 {
                    best = Some(j);
                }
            }
        }
        best
    }

    fn run(&mut self, report: &mut dyn FnMut(&[u32])) {
        if self.chosen.len() == self.l_max {
            report(&self.chosen);
            return;
        }
        let Some(j) = self.next_frontier() else {
            report(&self.chosen);
            return;
        };
        self.push(j);
        self.run(report);
        self.pop();
        self.banned.insert(j);
        self.run(report);
        self.banned.remove(&j);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoreSignature {
    /// minimal edge-list encoding of the core, one byte per vertex id
    Code(Vec<u8>),
    Large,
}

/// Edges remaining after repeatedly deleting leaf edges (edges with at most
/// one vertex shared with another remaining edge).
pub fn two_core(h: &Hypergraph, edge_ids: &[u32]) -> Vec<u32> {
    let mut alive: Vec<u32> = edge_ids.to_vec();
    let mut deg: std::collections::HashMap<Vertex, usize> = Default::default();
    for &j in &alive {
        for &v in h.edge(j as usize) {
            *deg.entry(v).or_default() += 1;
        }
    }
    loop {
        let before = alive.len();
        let mut keep = Vec::with_capacity(alive.len());
        for &j in &alive {
            let shared = h.edge(j as usize).iter().filter(|v| deg[v] > 1).count();
            if shared <= 1 {
                for &v in h.edge(j as usize) {
                    *deg.get_mut(&v).expect("counted") -= 1;
                }
            } else {
                keep.push(j);
            }
        }
        alive = keep;
        if alive.len() == before {
            return alive;
        }
    }
}

/// Canonical signature of the 2-core of a unicyclic component.
///
/// The core is a single Berge cycle `u_0 e_0 u_1 e_1 … u_{k-1} e_{k-1}`.
/// Each of the `2k` starting points and directions induces a labelling
/// (junction, then the edge's private vertices, then the next junction, …);
/// the signature is the smallest resulting sorted edge list.
pub fn core_signature(h: &Hypergraph, component_edges: &[u32]) -> CoreSignature {
    let core = two_core(h, component_edges);
    let mut deg: std::collections::HashMap<Vertex, usize> = Default::default();
    for &j in &core {
        for &v in h.edge(j as usize) {
            *deg.entry(v).or_default() += 1;
        }
    }
    if deg.len() > MAX_CORE_VERTICES {
        return CoreSignature::Large;
    }
    assert!(core.len() >= 2, "unicyclic component has a cycle");
    // walk the cycle once to get the alternating order
    let junction = |j: u32| -> Vec<Vertex> { h.edge(j as usize).iter().copied().filter(|v| deg[v] == 2).collect() };
    let start_edge = core[0];
    let js = junction(start_edge);
    debug_assert_eq!(js.len(), 2);
    let mut junctions = vec![js[0]];
    let mut cycle_edges = vec![start_edge];
    let mut at = js[1];
    let mut via = start_edge;
    while at != junctions[0] {
        junctions.push(at);
        let next = *core
            .iter()
            .find(|&&j| j != via && h.edge(j as usize).contains(&at))
            .expect("cycle continues");
        cycle_edges.push(next);
        at = *junction(next).iter().find(|&&w| w != at).expect("two junctions per cycle edge");
        via = next;
    }
    let k = cycle_edges.len();
    // junctions[i] is shared by cycle_edges[i-1] and cycle_edges[i]
    let mut best: Option<Vec<u8>> = None;
    for start in 0..k {
        for dir in [false, true] {
            let mut label: std::collections::HashMap<Vertex, u8> = Default::default();
            let mut next_label = 0u8;
            let mut seq_edges = Vec::with_capacity(k);
            for step in 0..k {
                let (u, e) = if !dir {
                    (junctions[(start + step) % k], cycle_edges[(start + step) % k])
                } else {
                    let i = (start + k - step) % k;
                    (junctions[i], cycle_edges[(i + k - 1) % k])
                };
                label.entry(u).or_insert_with(|| {
                    next_label += 1;
                    next_label - 1
                });
                for &w in h.edge(e as usize) {
                    if deg[&w] == 1 {
                        label.insert(w, next_label);
                        next_label += 1;
                    }
                }
                seq_edges.push(e);
            }
            let mut edges: Vec<Vec<u8>> = seq_edges
                .iter()
                .map(|&e| {
                    let mut x: Vec<u8> = h.edge(e as usize).iter().map(|v| label[v]).collect();
                    x.sort_unstable();
                    x
                })
                .collect();
            edges.sort_unstable();
            let code = edges.concat();
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
    }
    CoreSignature::Code(best.expect("at least one labelling"))
}

/// Vertices lying on some Berge cycle: those joined to an edge by a
/// non-bridge link of the incidence graph.
pub fn cycle_vertices(h: &Hypergraph) -> Vec<bool> {
    let n = h.n();
    let total = n + h.edge_count();
    let neighbours = |x: usize| -> Vec<usize> {
        if x < n {
            h.incident(x as Vertex).iter().map(|&j| n + j as usize).collect()
        } else {
            h.edge(x - n).iter().map(|&v| v as usize).collect()
        }
    };
    let mut disc = vec![usize::MAX; total];
    let mut low = vec![0usize; total];
    let mut time = 0;
    for root in 0..total {
        if disc[root] != usize::MAX {
            continue;
        }
        // iterative Tarjan: (node, parent, neighbour list, next index)
        let mut stack: Vec<(usize, usize, Vec<usize>, usize)> = vec![(root, usize::MAX, neighbours(root), 0)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        while let Some(frame) = stack.last_mut() {
            let (u, parent) = (frame.0, frame.1);
            if frame.3 < frame.2.len() {
                let w = frame.2[frame.3];
                frame.3 += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    let nb = neighbours(w);
                    stack.push((w, u, nb, 0));
                } else {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(pf) = stack.last() {
                    let p = pf.0;
                    low[p] = low[p].min(low[u]);
                }
            }
        }
    }
    // every link joins an ancestor a to a descendant b; it is a bridge iff
    // b's subtree has no way back to a or above
    (0..n)
        .map(|v| {
            h.incident(v as Vertex).iter().any(|&j| {
                let e = n + j as usize;
                let (a, b) = if disc[v] < disc[e] { (v, e) } else { (e, v) };
                low[b] <= disc[a]
            })
        })
        .collect()
}

/// Vertices of degree `≤ k` within distance `radius` of a Berge cycle.
pub fn small_degree_near_cycle(h: &Hypergraph, k: usize, radius: u32) -> usize {
    let on_cycle = cycle_vertices(h);
    let mut dist = vec![u32::MAX; h.n()];
    let mut queue = VecDeque::new();
    for (v, &c) in on_cycle.iter().enumerate() {
        if c {
            dist[v] = 0;
            queue.push_back(v as Vertex);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        if du == radius {
            continue;
        }
        for &j in h.incident(u) {
            for &w in h.edge(j as usize) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = du + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    (0..h.n()).filter(|&v| dist[v] != u32::MAX && h.degree(v as Vertex) <= k).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::butterfly::enumerate_marked_types;

    fn hg(d: usize, n: usize, edges: &[&[Vertex]]) -> Hypergraph {
        Hypergraph::build(d, n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn single_edge_plus_isolated_vertex() {
        let h = hg(2, 4, &[&[0, 1, 2]]);
        let r = census(&h, CensusConfig { l_max: 2, vstar_max: 1, k_small: 0 });
        assert_eq!(r.butterfly_components_by_order, vec![1, 1, 0]);
        let single = crate::butterfly::enumerate_types(2, 1)[0].hex_code();
        assert_eq!(r.butterfly_components[&single], 1);
        assert_eq!(r.mu, 1);
        assert!(r.d_l[1]);
        assert!(!r.connected);
    }

    #[test]
    fn marked_copies_on_a_path() {
        let h = hg(1, 4, &[&[0, 1], &[1, 2], &[2, 3]]);
        let r = census(&h, CensusConfig { l_max: 1, vstar_max: 2, k_small: 1 });
        let both = enumerate_marked_types(1, 1, 2, true)[0].hex_code();
        let one = enumerate_marked_types(1, 1, 1, true)[0].hex_code();
        assert_eq!(r.marked_copies[&both], 0);
        assert_eq!(r.marked_copies[&one], 2);
    }

    #[test]
    fn empty_hypergraph() {
        let r = census(&Hypergraph::empty(1, 5), CensusConfig::default());
        assert_eq!(r.butterfly_components_by_order[0], 5);
        assert_eq!(r.component_count, 5);
        assert!(!r.connected);
        assert_eq!(r.mu, 4);
        // every isolated vertex is a 1-marked order-0 copy
        let iso = enumerate_marked_types(1, 0, 1, true)[0].hex_code();
        assert_eq!(r.marked_copies[&iso], 5);
    }

    #[test]
    fn d_l_examples() {
        let path = hg(1, 3, &[&[0, 1], &[1, 2]]);
        for l in 0..4 {
            assert!(d_l(&path, l));
            assert!(tilde_d_l(&path, l));
        }
        let giant_plus_two = hg(1, 6, &[&[0, 1], &[1, 2], &[2, 3]]);
        assert!(d_l(&giant_plus_two, 1));
        assert!(!d_l(&giant_plus_two, 0));
        assert!(tilde_d_l(&giant_plus_two, 1));
        for l in 1..3 {
            // two disjoint stars of order l (d = 1)
            let mut edges = Vec::new();
            for c in [0, l as Vertex + 1] {
                for i in 1..=l as Vertex {
                    edges.push(vec![c, c + i]);
                }
            }
            let two = Hypergraph::build(1, 2 * (l + 1), edges).unwrap();
            assert!(!d_l(&two, l));
            assert!(!tilde_d_l(&two, l));
        }
    }

    #[test]
    fn small_degree_examples() {
        let path = hg(1, 4, &[&[0, 1], &[1, 2], &[2, 3]]);
        assert_eq!(small_degree_near_cycle(&path, 5, 5), 0);
        let tri_pendant = hg(1, 4, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3]]);
        assert_eq!(small_degree_near_cycle(&tri_pendant, 1, 1), 1);
        assert_eq!(small_degree_near_cycle(&tri_pendant, 1, 0), 0);
        let k4 = hg(1, 4, &[&[0, 1], &[0, 2], &[0, 3], &[1, 2], &[1, 3], &[2, 3]]);
        assert_eq!(small_degree_near_cycle(&k4, 1, 3), 0);
        assert_eq!(small_degree_near_cycle(&k4, 3, 0), 4);
        let two_shared = hg(2, 5, &[&[0, 1, 2], &[0, 1, 3], &[3, 4, 2]]);
        assert_eq!(cycle_vertices(&two_shared).iter().filter(|&&c| c).count(), 4);
    }

    #[test]
    fn core_signatures() {
        let tri_tail = hg(1, 5, &[&[0, 1], &[1, 2], &[0, 2], &[2, 3], &[3, 4]]);
        let map = components(&tri_tail);
        let a = core_signature(&tri_tail, map.edges_of(0));
        let tri = hg(1, 3, &[&[0, 1], &[1, 2], &[0, 2]]);
        let b = core_signature(&tri, components(&tri).edges_of(0));
        assert_eq!(a, b);
        let square = hg(1, 4, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]]);
        assert_ne!(a, core_signature(&square, components(&square).edges_of(0)));
        let double = hg(2, 4, &[&[0, 1, 2], &[0, 1, 3]]);
        assert_eq!(two_core(&double, &[0, 1]).len(), 2);
        assert!(matches!(core_signature(&double, &[0, 1]), CoreSignature::Code(_)));
    }
}
