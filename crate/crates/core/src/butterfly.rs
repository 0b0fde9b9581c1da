//! Butterflies (connected Berge-acyclic uniform hypergraphs): canonical
//! codes, automorphism and labelled counts, type enumeration, marked
//! variants, rooted `(r, s)`-values and subhypergraph density.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::Ratio;
use thiserror::Error;

use crate::hypercore::{berge_acyclic, is_connected, Hypergraph, Vertex};
use crate::num::factorial_u128;

/// Largest butterfly order the type tables are built for by default.
pub const DEFAULT_L_MAX: usize = 4;

/// Largest vertex count for which `v!` (and so every count here) fits in 128 bits.
pub const MAX_VERTICES: usize = 34;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ButterflyError {
    #[error("hypergraph is not connected")]
    Disconnected,
    #[error("hypergraph has a Berge cycle")]
    Cyclic,
    #[error("{0} vertices exceed the supported maximum for this operation")]
    TooLarge(usize),
    #[error("hypergraph has no edges")]
    NoEdges,
    #[error("marked vertex {0} out of range")]
    MarkOutOfRange(Vertex),
    #[error("marked vertex {0} listed twice")]
    RepeatedMark(Vertex),
}

const TAG_VERTEX: u8 = b'V';
const TAG_MARKED: u8 = b'M';
const TAG_EDGE: u8 = b'E';
const TAG_CLOSE: u8 = b')';

/// Incidence graph: nodes `0..n` are vertices, `n..n+m` edges.
fn incidence_adjacency(h: &Hypergraph) -> Vec<Vec<usize>> {
    let n = h.n();
    let mut adj = vec![Vec::new(); n + h.edge_count()];
    for (j, e) in h.edges().enumerate() {
        for &v in e {
            adj[v as usize].push(n + j);
            adj[n + j].push(v as usize);
        }
    }
    adj
}

/// One or two central nodes of a tree, by repeated leaf removal.
fn tree_centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let total = adj.len();
    if total <= 2 {
        return (0..total).collect();
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..total).filter(|&i| deg[i] <= 1).collect();
    let mut remaining = total;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &u in &layer {
            for &w in &adj[u] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

/// AHU encoding of the subtree at `node` plus its automorphism count.
fn encode(adj: &[Vec<usize>], n: usize, node: usize, parent: usize, marked: &[bool]) -> (Vec<u8>, u128) {
    let tag = if node >= n {
        TAG_EDGE
    } else if marked[node] {
        TAG_MARKED
    } else {
        TAG_VERTEX
    };
    let mut children: Vec<(Vec<u8>, u128)> = adj[node]
        .iter()
        .filter(|&&c| c != parent)
        .map(|&c| encode(adj, n, c, node, marked))
        .collect();
    children.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut code = vec![tag];
    let mut aut: u128 = 1;
    let mut run = 0u64;
    for (i, (c, a)) in children.iter().enumerate() {
        run = if i > 0 && children[i - 1].0 == *c { run + 1 } else { 1 };
        aut = aut * a * run as u128;
        code.extend_from_slice(c);
    }
    code.push(TAG_CLOSE);
    (code, aut)
}

fn check_butterfly(h: &Hypergraph) -> Result<(), ButterflyError> {
    if h.n() > MAX_VERTICES {
        return Err(ButterflyError::TooLarge(h.n()));
    }
    if h.n() == 0 || !is_connected(h) {
        return Err(ButterflyError::Disconnected);
    }
    if !berge_acyclic(h) {
        return Err(ButterflyError::Cyclic);
    }
    Ok(())
}

fn canonical_code(h: &Hypergraph, marked: &[bool]) -> (Vec<u8>, u128) {
    let adj = incidence_adjacency(h);
    tree_centers(&adj)
        .into_iter()
        .map(|c| encode(&adj, h.n(), c, usize::MAX, marked))
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("non-empty tree has a center")
}

/// Isomorphism class of a butterfly of order `l` on `v = 1 + l·d` vertices.
#[derive(Debug, Clone)]
pub struct ButterflyType {
    pub d: usize,
    pub order: usize,
    pub code: Vec<u8>,
    /// size of the automorphism group
    pub automorphisms: u128,
    /// number of copies on a fixed labelled vertex set of size `v`, `v!/a`
    pub labelled_count: u128,
    pub representative: Hypergraph,
}

impl ButterflyType {
    pub fn vertex_count(&self) -> usize {
        1 + self.order * self.d
    }

    pub fn hex_code(&self) -> String {
        hex::encode(&self.code)
    }

    /// `c / v! = 1 / a`
    pub fn inverse_automorphisms(&self) -> f64 {
        1.0 / self.automorphisms as f64
    }
}

impl PartialEq for ButterflyType {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.code == other.code
    }
}

impl Eq for ButterflyType {}

/// Canonical type of a butterfly given as a whole hypergraph.
pub fn canonical_type(h: &Hypergraph) -> Result<ButterflyType, ButterflyError> {
    check_butterfly(h)?;
    let (code, automorphisms) = canonical_code(h, &vec![false; h.n()]);
    let vfact = factorial_u128(h.n() as u64).expect("bounded by MAX_VERTICES");
    debug_assert_eq!(vfact % automorphisms, 0);
    Ok(ButterflyType {
        d: h.d(),
        order: h.edge_count(),
        code,
        automorphisms,
        labelled_count: vfact / automorphisms,
        representative: h.clone(),
    })
}

/// Butterfly with distinguished vertices, up to isomorphisms preserving the
/// marked set.
#[derive(Debug, Clone)]
pub struct MarkedButterflyType {
    pub base: ButterflyType,
    /// marked vertices in the labelling of `base.representative`
    pub marked: Vec<Vertex>,
    pub code: Vec<u8>,
    pub automorphisms: u128,
    /// `v! / a`, the labelled count `c(l, v*, γ)`
    pub labelled_count: u128,
    pub minimal: bool,
}

impl MarkedButterflyType {
    pub fn vstar(&self) -> usize {
        self.marked.len()
    }

    pub fn order(&self) -> usize {
        self.base.order
    }

    pub fn hex_code(&self) -> String {
        hex::encode(&self.code)
    }
}

impl PartialEq for MarkedButterflyType {
    fn eq(&self, other: &Self) -> bool {
        self.base.d == other.base.d && self.code == other.code
    }
}

impl Eq for MarkedButterflyType {}

/// Leaf edges: edges with at most one vertex lying in another edge.
pub fn leaf_edges(h: &Hypergraph) -> Vec<usize> {
    (0..h.edge_count())
        .filter(|&j| h.edge(j).iter().filter(|&&v| h.degree(v) > 1).count() <= 1)
        .collect()
}

/// Every leaf edge carries a marked vertex that lies in no other edge.
pub fn is_minimal_marking(h: &Hypergraph, marked: &[bool]) -> bool {
    leaf_edges(h)
        .into_iter()
        .all(|j| h.edge(j).iter().any(|&v| marked[v as usize] && h.degree(v) == 1))
}

pub fn marked_type(h: &Hypergraph, marked: &[Vertex]) -> Result<MarkedButterflyType, ButterflyError> {
    let base = canonical_type(h)?;
    let mut flags = vec![false; h.n()];
    for &m in marked {
        let slot = flags.get_mut(m as usize).ok_or(ButterflyError::MarkOutOfRange(m))?;
        if *slot {
            return Err(ButterflyError::RepeatedMark(m));
        }
        *slot = true;
    }
    let (code, automorphisms) = canonical_code(h, &flags);
    let vfact = factorial_u128(h.n() as u64).expect("bounded by MAX_VERTICES");
    let mut marked = marked.to_vec();
    marked.sort_unstable();
    Ok(MarkedButterflyType {
        minimal: is_minimal_marking(h, &flags),
        base,
        marked,
        code,
        automorphisms,
        labelled_count: vfact / automorphisms,
    })
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| i as Vertex).collect());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { break };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

fn single_vertex(d: usize) -> Hypergraph {
    Hypergraph::empty(d, 1)
}

/// Every isomorphism class of butterflies of order `l`, sorted by code.
pub fn enumerate_types(d: usize, l: usize) -> Vec<ButterflyType> {
    assert!(d >= 1);
    assert!(l * d < MAX_VERTICES, "order {l} too large for d = {d}");
    let mut reps = vec![single_vertex(d)];
    for _ in 0..l {
        let mut next: BTreeMap<Vec<u8>, Hypergraph> = BTreeMap::new();
        for h in &reps {
            let n = h.n() as Vertex;
            let fresh: Vec<Vertex> = (n..n + d as Vertex).collect();
            for x in 0..n {
                let mut new_edge = vec![x];
                new_edge.extend_from_slice(&fresh);
                let edges: Vec<Vec<Vertex>> = h.edges().map(<[Vertex]>::to_vec).chain([new_edge]).collect();
                let g = Hypergraph::build(d, h.n() + d, edges).expect("attachment keeps edges valid");
                let (code, _) = canonical_code(&g, &vec![false; g.n()]);
                next.entry(code).or_insert(g);
            }
        }
        reps = next.into_values().collect();
    }
    let mut types: Vec<ButterflyType> = reps
        .iter()
        .map(|h| canonical_type(h).expect("constructed as a butterfly"))
        .collect();
    types.sort_by(|a, b| a.code.cmp(&b.code));
    types
}

/// Marked types of order `l` with `vstar` marked vertices, sorted by code.
pub fn enumerate_marked_types(d: usize, l: usize, vstar: usize, minimal_only: bool) -> Vec<MarkedButterflyType> {
    let v = 1 + l * d;
    let mut found: BTreeMap<Vec<u8>, MarkedButterflyType> = BTreeMap::new();
    for t in enumerate_types(d, l) {
        for subset in combinations(v, vstar) {
            let m = marked_type(&t.representative, &subset).expect("valid marking");
            if minimal_only && !m.minimal {
                continue;
            }
            found.entry(m.code.clone()).or_insert(m);
        }
    }
    found.into_values().collect()
}

/// Type tables for orders `0..=l_max` and marked types up to `vstar_max`
/// marked vertices, indexed by code.
#[derive(Debug, Clone)]
pub struct TypeCatalog {
    pub d: usize,
    pub l_max: usize,
    pub vstar_max: usize,
    types: Vec<ButterflyType>,
    by_code: HashMap<Vec<u8>, usize>,
    marked: Vec<MarkedButterflyType>,
    marked_by_code: HashMap<Vec<u8>, usize>,
}

impl TypeCatalog {
    pub fn new(d: usize, l_max: usize, vstar_max: usize) -> Self {
        let types: Vec<ButterflyType> = (0..=l_max).flat_map(|l| enumerate_types(d, l)).collect();
        let mut marked = Vec::new();
        for l in 0..=l_max {
            for vstar in 1..=vstar_max.min(1 + l * d) {
                marked.extend(enumerate_marked_types(d, l, vstar, true));
            }
        }
        let by_code = types.iter().enumerate().map(|(i, t)| (t.code.clone(), i)).collect();
        let marked_by_code = marked.iter().enumerate().map(|(i, t)| (t.code.clone(), i)).collect();
        Self { d, l_max, vstar_max, types, by_code, marked, marked_by_code }
    }

    pub fn types(&self) -> &[ButterflyType] {
        &self.types
    }

    pub fn types_of_order(&self, l: usize) -> impl Iterator<Item = &ButterflyType> {
        self.types.iter().filter(move |t| t.order == l)
    }

    pub fn type_index(&self, code: &[u8]) -> Option<usize> {
        self.by_code.get(code).copied()
    }

    /// Minimal marked types with `1 ≤ v* ≤ vstar_max`.
    pub fn marked_types(&self) -> &[MarkedButterflyType] {
        &self.marked
    }

    pub fn marked_index(&self, code: &[u8]) -> Option<usize> {
        self.marked_by_code.get(code).copied()
    }
}

/// Maximum of `|E'| / |V'|` over sub-hypergraphs with at least one edge.
/// Brute force over vertex subsets, so `n ≤ 20`.
pub fn max_subdensity(h: &Hypergraph) -> Result<Ratio<u64>, ButterflyError> {
    if h.edge_count() == 0 {
        return Err(ButterflyError::NoEdges);
    }
    if h.n() > 20 {
        return Err(ButterflyError::TooLarge(h.n()));
    }
    let edge_masks: Vec<u32> = h.edges().map(|e| e.iter().fold(0u32, |m, &v| m | 1 << v)).collect();
    let mut best = Ratio::new(0u64, 1);
    for mask in 1u32..(1u32 << h.n()) {
        let inside = edge_masks.iter().filter(|&&em| em & !mask == 0).count() as u64;
        if inside > 0 {
            best = best.max(Ratio::new(inside, mask.count_ones() as u64));
        }
    }
    Ok(best)
}

/// Exponent `1/ρ` of the appearance threshold `n^{-1/ρ}`.
pub fn appearance_threshold(h: &Hypergraph) -> Result<Ratio<u64>, ButterflyError> {
    Ok(max_subdensity(h)?.recip())
}

/// Distinct copies of `h` on its own labelled vertex set, by enumerating all
/// vertex permutations. Limited to 10 vertices.
pub fn count_labelled_copies(h: &Hypergraph) -> Result<u128, ButterflyError> {
    let n = h.n();
    if n > 10 {
        return Err(ButterflyError::TooLarge(n));
    }
    let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
    let mut seen: HashSet<Vec<Vertex>> = HashSet::new();
    let mut image = |perm: &[Vertex]| {
        let mut edges: Vec<Vec<Vertex>> = h
            .edges()
            .map(|e| {
                let mut x: Vec<Vertex> = e.iter().map(|&v| perm[v as usize]).collect();
                x.sort_unstable();
                x
            })
            .collect();
        edges.sort_unstable();
        seen.insert(edges.concat());
    };
    // Heap's algorithm
    let mut c = vec![0usize; n];
    image(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            image(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(seen.len() as u128)
}

/// Count cap value meaning "more than `s`".
pub const MANY: u8 = u8::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValueId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PatternId(pub u32);

/// An `(r, s)`-value at depth ≥ 1: for each pattern occurring, the number of
/// edges at the root realising it, in `1..=s` or [`MANY`]. Depth 0 has no
/// entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Value {
    pub depth: u32,
    pub entries: Vec<(PatternId, u8)>,
}

/// Interner for values and patterns at a fixed `d` and cap `s`.
#[derive(Debug, Clone)]
pub struct ValueTable {
    d: usize,
    s: u8,
    patterns: Vec<Vec<ValueId>>,
    pattern_ids: HashMap<Vec<ValueId>, PatternId>,
    values: Vec<Value>,
    value_ids: HashMap<Value, ValueId>,
    codes: Vec<Option<Vec<u8>>>,
}

impl ValueTable {
    pub fn new(d: usize, s: u8) -> Self {
        assert!(d >= 1);
        assert!((1..MANY).contains(&s), "cap must be in 1..255");
        let mut t = Self {
            d,
            s,
            patterns: Vec::new(),
            pattern_ids: HashMap::new(),
            values: Vec::new(),
            value_ids: HashMap::new(),
            codes: Vec::new(),
        };
        t.intern_value(Value { depth: 0, entries: Vec::new() });
        t
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn s(&self) -> u8 {
        self.s
    }

    /// The unique depth-0 value.
    pub fn trivial(&self) -> ValueId {
        ValueId(0)
    }

    pub fn value_count(&self) -> usize {
        self.values.len()
    }

    pub fn pattern_count(&self) -> usize {
        self.patterns.len()
    }

    pub fn value(&self, id: ValueId) -> &Value {
        &self.values[id.0 as usize]
    }

    pub fn pattern(&self, id: PatternId) -> &[ValueId] {
        &self.patterns[id.0 as usize]
    }

    /// Caps a raw count at `s`.
    pub fn cap(&self, count: u64) -> u8 {
        if count > self.s as u64 {
            MANY
        } else {
            count as u8
        }
    }

    /// Interns the multiset of `d` child values.
    pub fn intern_pattern(&mut self, mut children: Vec<ValueId>) -> PatternId {
        assert_eq!(children.len(), self.d, "a pattern has exactly d children");
        children.sort_unstable();
        if let Some(&id) = self.pattern_ids.get(&children) {
            return id;
        }
        let id = PatternId(self.patterns.len() as u32);
        self.patterns.push(children.clone());
        self.pattern_ids.insert(children, id);
        id
    }

    /// Interns a value; zero counts are dropped and entries sorted.
    pub fn intern_value(&mut self, mut value: Value) -> ValueId {
        value.entries.retain(|&(_, c)| c != 0);
        value.entries.sort_unstable();
        if let Some(&id) = self.value_ids.get(&value) {
            return id;
        }
        let id = ValueId(self.values.len() as u32);
        self.values.push(value.clone());
        self.value_ids.insert(value, id);
        self.codes.push(None);
        id
    }

    pub fn lookup_value(&self, value: &Value) -> Option<ValueId> {
        self.value_ids.get(value).copied()
    }

    /// Table-independent canonical byte code of a value.
    pub fn code(&mut self, id: ValueId) -> Vec<u8> {
        if let Some(c) = &self.codes[id.0 as usize] {
            return c.clone();
        }
        let value = self.values[id.0 as usize].clone();
        let code = if value.depth == 0 {
            vec![b'.']
        } else {
            let mut parts: Vec<Vec<u8>> = Vec::new();
            for &(p, count) in &value.entries {
                let mut children: Vec<Vec<u8>> = self.patterns[p.0 as usize].clone().into_iter().map(|c| self.code(c)).collect();
                children.sort_unstable();
                let mut part = vec![b'('];
                for c in children {
                    part.extend(c);
                }
                part.push(b')');
                if count == MANY {
                    part.push(b'M');
                } else {
                    part.extend(count.to_string().bytes());
                }
                parts.push(part);
            }
            parts.sort_unstable();
            let mut code = vec![b'['];
            for p in parts {
                code.extend(p);
            }
            code.push(b']');
            code
        };
        self.codes[id.0 as usize] = Some(code.clone());
        code
    }

    pub fn hex_code(&mut self, id: ValueId) -> String {
        hex::encode(self.code(id))
    }

    /// Total edges at the root if no count is capped.
    pub fn root_edges(&self, id: ValueId) -> Option<u64> {
        self.value(id)
            .entries
            .iter()
            .try_fold(0u64, |acc, &(_, c)| (c != MANY).then_some(acc + c as u64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootedValue {
    Value(ValueId),
    /// the ball around the root contains a Berge cycle
    Cyclic,
}

/// `(r, s)`-value of `root` in `h`, with `s` and `d` taken from the table.
pub fn rooted_value(h: &Hypergraph, root: Vertex, r: u32, table: &mut ValueTable) -> RootedValue {
    assert_eq!(h.d(), table.d(), "table built for another d");
    let ball: Vec<Vertex> = h.ball(root, r).into_iter().map(|(v, _)| v).collect();
    let (sub, verts) = h.vertex_induced(&ball);
    if !berge_acyclic(&sub) {
        return RootedValue::Cyclic;
    }
    let local_root = verts.binary_search(&root).expect("root in its ball") as Vertex;
    RootedValue::Value(value_below(&sub, local_root, None, r, table))
}

/// Value of the rooted butterfly hanging from `u`, ignoring `parent`.
pub fn value_below(h: &Hypergraph, u: Vertex, parent: Option<u32>, depth: u32, table: &mut ValueTable) -> ValueId {
    if depth == 0 {
        return table.trivial();
    }
    let mut counts: BTreeMap<PatternId, u64> = BTreeMap::new();
    for &j in h.incident(u) {
        if Some(j) == parent {
            continue;
        }
        let children: Vec<ValueId> = h
            .edge(j as usize)
            .iter()
            .filter(|&&w| w != u)
            .map(|&w| value_below(h, w, Some(j), depth - 1, table))
            .collect();
        *counts.entry(table.intern_pattern(children)).or_default() += 1;
    }
    let entries = counts.into_iter().map(|(p, c)| (p, table.cap(c))).collect();
    table.intern_value(Value { depth, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::isomorphic;

    fn hg(d: usize, n: usize, edges: &[&[Vertex]]) -> Hypergraph {
        Hypergraph::build(d, n, edges.iter().copied()).unwrap()
    }

    /// Automorphisms by brute force over all permutations.
    fn brute_automorphisms(h: &Hypergraph) -> u128 {
        let n = h.n();
        let mut count = 0;
        let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
        fn rec(i: usize, perm: &mut Vec<Vertex>, h: &Hypergraph, count: &mut u128) {
            if i == perm.len() {
                if h.permuted(perm) == *h {
                    *count += 1;
                }
                return;
            }
            for j in i..perm.len() {
                perm.swap(i, j);
                rec(i + 1, perm, h, count);
                perm.swap(i, j);
            }
        }
        rec(0, &mut perm, h, &mut count);
        count
    }

    #[test]
    fn canonical_type_examples() {
        let path = hg(1, 3, &[&[0, 1], &[1, 2]]);
        let t = canonical_type(&path).unwrap();
        assert_eq!((t.automorphisms, t.labelled_count), (2, 3));
        assert_eq!(brute_automorphisms(&path), 2);
        assert_eq!(count_labelled_copies(&path).unwrap(), 3);

        let bow = hg(2, 5, &[&[0, 1, 2], &[0, 3, 4]]);
        let t = canonical_type(&bow).unwrap();
        assert_eq!((t.automorphisms, t.labelled_count), (8, 15));
        assert_eq!(brute_automorphisms(&bow), 8);
        assert_eq!(count_labelled_copies(&bow).unwrap(), 15);

        let t = canonical_type(&Hypergraph::empty(3, 1)).unwrap();
        assert_eq!((t.order, t.automorphisms, t.labelled_count), (0, 1, 1));

        let tri = hg(1, 3, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(canonical_type(&tri).unwrap_err(), ButterflyError::Cyclic);
        assert_eq!(canonical_type(&Hypergraph::empty(1, 2)).unwrap_err(), ButterflyError::Disconnected);
    }

    #[test]
    fn type_counts() {
        assert_eq!(enumerate_types(1, 2).len(), 1);
        assert_eq!(enumerate_types(2, 2).len(), 1);
        assert_eq!(enumerate_types(1, 3).len(), 2);
        assert_eq!(enumerate_types(1, 4).len(), 3);
        assert_eq!(enumerate_types(1, 0).len(), 1);
    }

    /// Labelled butterflies of order `l` on `1 + l·d` vertices, by checking
    /// every `l`-subset of potential edges.
    fn labelled_butterflies(d: usize, l: usize) -> u128 {
        let v = 1 + l * d;
        let potential = combinations(v, d + 1);
        combinations(potential.len(), l)
            .into_iter()
            .filter(|pick| {
                let edges: Vec<&[Vertex]> = pick.iter().map(|&i| potential[i as usize].as_slice()).collect();
                let h = Hypergraph::build(d, v, edges).unwrap();
                is_connected(&h) && berge_acyclic(&h)
            })
            .count() as u128
    }

    #[test]
    fn labelled_sums_match_exhaustive_generation() {
        for (d, l) in [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2), (3, 1), (3, 2)] {
            let total: u128 = enumerate_types(d, l).iter().map(|t| t.labelled_count).sum();
            assert_eq!(total, labelled_butterflies(d, l), "d={d} l={l}");
        }
    }

    #[test]
    fn automorphisms_times_labelled_is_factorial() {
        for d in 1..=3 {
            for l in 0..=3 {
                for t in enumerate_types(d, l) {
                    let v = t.vertex_count() as u64;
                    assert_eq!(t.automorphisms * t.labelled_count, factorial_u128(v).unwrap());
                    if v <= 7 {
                        assert_eq!(t.automorphisms, brute_automorphisms(&t.representative));
                    }
                }
            }
        }
    }

    #[test]
    fn distinct_codes_are_non_isomorphic() {
        for (d, l) in [(1, 4), (1, 5), (2, 3), (3, 2)] {
            let types = enumerate_types(d, l);
            for (i, a) in types.iter().enumerate() {
                for b in &types[i + 1..] {
                    assert!(!isomorphic(&a.representative, &b.representative));
                }
            }
        }
    }

    #[test]
    fn marked_examples() {
        let both = enumerate_marked_types(1, 1, 2, false);
        assert_eq!(both.len(), 1);
        assert_eq!(both[0].labelled_count, 1);
        let one = enumerate_marked_types(1, 1, 1, false);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].labelled_count, 2);
        let path = hg(1, 3, &[&[0, 1], &[1, 2]]);
        assert!(!marked_type(&path, &[1]).unwrap().minimal);
        assert!(marked_type(&path, &[0, 2]).unwrap().minimal);
        assert_eq!(marked_type(&path, &[3]).unwrap_err(), ButterflyError::MarkOutOfRange(3));
        // a marked vertex is distinguishable from an unmarked one
        let a = marked_type(&path, &[0]).unwrap();
        let b = marked_type(&path, &[1]).unwrap();
        assert_ne!(a.code, b.code);
        assert_eq!(a.code, marked_type(&path, &[2]).unwrap().code);
    }

    #[test]
    fn marked_labelled_counts_match_orbits() {
        // number of (labelled copy, marking) pairs for a type equals
        // c · C(v, v*) summed over markings
        for (d, l, vstar) in [(1, 2, 1), (1, 3, 2), (2, 2, 2), (1, 3, 4)] {
            let v = 1 + l * d;
            let marked: u128 = enumerate_marked_types(d, l, vstar, false).iter().map(|m| m.labelled_count).sum();
            let plain: u128 = enumerate_types(d, l).iter().map(|t| t.labelled_count).sum();
            assert_eq!(marked, plain * combinations(v, vstar).len() as u128);
        }
    }

    #[test]
    fn subdensity_examples() {
        let e = hg(2, 3, &[&[0, 1, 2]]);
        assert_eq!(max_subdensity(&e).unwrap(), Ratio::new(1, 3));
        assert_eq!(appearance_threshold(&e).unwrap(), Ratio::new(3, 1));
        let tri = hg(1, 3, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(max_subdensity(&tri).unwrap(), Ratio::new(1, 1));
        for (d, l) in [(1, 3), (2, 2), (3, 2)] {
            for t in enumerate_types(d, l) {
                assert_eq!(max_subdensity(&t.representative).unwrap(), Ratio::new(l as u64, 1 + (l * d) as u64));
            }
        }
        assert_eq!(max_subdensity(&Hypergraph::empty(1, 3)).unwrap_err(), ButterflyError::NoEdges);
    }

    #[test]
    fn labelled_copies_examples() {
        assert_eq!(count_labelled_copies(&hg(2, 3, &[&[0, 1, 2]])).unwrap(), 1);
        assert_eq!(count_labelled_copies(&hg(1, 3, &[&[0, 1], &[0, 2], &[1, 2]])).unwrap(), 1);
        assert_eq!(count_labelled_copies(&hg(1, 4, &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]])).unwrap(), 3);
    }

    #[test]
    fn rooted_value_examples() {
        let mut t = ValueTable::new(1, 2);
        let iso = Hypergraph::empty(1, 1);
        let RootedValue::Value(v) = rooted_value(&iso, 0, 3, &mut t) else { panic!() };
        assert!(t.value(v).entries.is_empty());
        assert_eq!(t.value(v).depth, 3);

        let star = hg(1, 5, &[&[0, 1], &[0, 2], &[0, 3], &[0, 4]]);
        let RootedValue::Value(v) = rooted_value(&star, 0, 1, &mut t) else { panic!() };
        assert_eq!(t.value(v).entries.len(), 1);
        assert_eq!(t.value(v).entries[0].1, MANY);

        let path = hg(1, 3, &[&[0, 1], &[1, 2]]);
        let RootedValue::Value(v) = rooted_value(&path, 1, 1, &mut t) else { panic!() };
        let entries = t.value(v).entries.clone();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].1, 2);
        assert_eq!(t.pattern(entries[0].0), &[t.trivial()]);
        assert_eq!(t.code(v), b"[(.)2]".to_vec());

        let tri = hg(1, 3, &[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(rooted_value(&tri, 0, 1, &mut t), RootedValue::Cyclic);
    }

    #[test]
    fn codes_do_not_depend_on_interning_order() {
        let path = hg(1, 4, &[&[0, 1], &[1, 2], &[2, 3]]);
        let mut a = ValueTable::new(1, 2);
        let mut b = ValueTable::new(1, 2);
        let star = hg(1, 4, &[&[0, 1], &[0, 2], &[0, 3]]);
        let RootedValue::Value(_) = rooted_value(&star, 1, 2, &mut b) else { panic!() };
        let RootedValue::Value(x) = rooted_value(&path, 1, 2, &mut a) else { panic!() };
        let RootedValue::Value(y) = rooted_value(&path, 1, 2, &mut b) else { panic!() };
        assert_eq!(a.code(x), b.code(y));
    }
}
