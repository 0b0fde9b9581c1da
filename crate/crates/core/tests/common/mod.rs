//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the canonical-form or copy-search code it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use hyperlab::butterfly::TypeCatalog;
use hyperlab::census::CensusReport;
use hyperlab::rng::SplitMix64;
use hyperlab::{Hypergraph, Vertex};

/// Smallest (sorted edges, sorted marks) over all relabellings of `0..v`.
pub type Canon = (Vec<Vec<Vertex>>, Vec<Vertex>);

fn permutations(v: usize) -> Vec<Vec<Vertex>> {
    fn rec(cur: &mut Vec<Vertex>, used: &mut [bool], out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i as Vertex);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; v], &mut out);
    out
}

pub struct Oracle {
    perms: HashMap<usize, Vec<Vec<Vertex>>>,
    memo: HashMap<Canon, Canon>,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::new()
    }
}

impl Oracle {
    pub fn new() -> Self {
        Self { perms: HashMap::new(), memo: HashMap::new() }
    }

    /// Canonical form of a structure on vertices `0..v`.
    pub fn canon(&mut self, v: usize, edges: &[Vec<Vertex>], marks: &[Vertex]) -> Canon {
        let mut key_edges: Vec<Vec<Vertex>> = edges
            .iter()
            .map(|e| {
                let mut e = e.clone();
                e.sort_unstable();
                e
            })
            .collect();
        key_edges.sort();
        let mut key_marks = marks.to_vec();
        key_marks.sort_unstable();
        let key = (key_edges, key_marks);
        if let Some(c) = self.memo.get(&key) {
            return c.clone();
        }
        let perms = self.perms.entry(v).or_insert_with(|| permutations(v));
        let mut best: Option<Canon> = None;
        for p in perms.iter() {
            let mut es: Vec<Vec<Vertex>> = key
                .0
                .iter()
                .map(|e| {
                    let mut e: Vec<Vertex> = e.iter().map(|&x| p[x as usize]).collect();
                    e.sort_unstable();
                    e
                })
                .collect();
            es.sort();
            let mut ms: Vec<Vertex> = key.1.iter().map(|&x| p[x as usize]).collect();
            ms.sort_unstable();
            let cand = (es, ms);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        let best = best.expect("at least one permutation");
        self.memo.insert(key, best.clone());
        best
    }

    /// Canonical form of the sub-structure spanned by `edge_ids`, relabelled
    /// onto `0..v` in increasing vertex order.
    pub fn canon_of(&mut self, h: &Hypergraph, edge_ids: &[usize], marks: &[Vertex]) -> Canon {
        let mut verts: Vec<Vertex> = edge_ids.iter().flat_map(|&j| h.edge(j).iter().copied()).collect();
        verts.extend_from_slice(marks);
        verts.sort_unstable();
        verts.dedup();
        let idx = |x: Vertex| verts.binary_search(&x).expect("vertex of the structure") as Vertex;
        let edges: Vec<Vec<Vertex>> = edge_ids.iter().map(|&j| h.edge(j).iter().map(|&x| idx(x)).collect()).collect();
        let marks: Vec<Vertex> = marks.iter().map(|&x| idx(x)).collect();
        self.canon(verts.len(), &edges, &marks)
    }
}

fn subsets_up_to(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == k {
            return;
        }
        for j in start..m {
            cur.push(j);
            rec(j + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Vertex set, per-vertex degree inside `f`, and whether `f` is a butterfly
/// (connected, with `1 + |f| d` vertices).
fn spanned(h: &Hypergraph, f: &[usize]) -> (Vec<Vertex>, HashMap<Vertex, usize>, bool) {
    let mut deg: HashMap<Vertex, usize> = HashMap::new();
    for &j in f {
        for &v in h.edge(j) {
            *deg.entry(v).or_default() += 1;
        }
    }
    let mut verts: Vec<Vertex> = deg.keys().copied().collect();
    verts.sort_unstable();
    if verts.len() != 1 + f.len() * h.d() {
        return (verts, deg, false);
    }
    // connectivity over edges by repeated sweeps
    let mut reached = vec![false; f.len()];
    reached[0] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..f.len() {
            if reached[a] {
                continue;
            }
            if (0..f.len()).any(|b| reached[b] && h.edge(f[a]).iter().any(|v| h.edge(f[b]).contains(v))) {
                reached[a] = true;
                changed = true;
            }
        }
    }
    let ok = reached.iter().all(|&r| r);
    (verts, deg, ok)
}

/// Butterfly components by canonical form: closed butterfly edge sets of
/// size `1..=l_max`, and isolated vertices.
pub fn butterfly_components(oracle: &mut Oracle, h: &Hypergraph, l_max: usize) -> BTreeMap<Canon, u64> {
    let mut out = BTreeMap::new();
    let isolated = (0..h.n() as Vertex).filter(|&v| h.degree(v) == 0).count() as u64;
    if isolated > 0 {
        out.insert(oracle.canon(1, &[], &[]), isolated);
    }
    for f in subsets_up_to(h.edge_count(), l_max) {
        let (verts, _, ok) = spanned(h, &f);
        if !ok {
            continue;
        }
        let closed = verts.iter().all(|&v| h.incident(v).iter().all(|&j| f.contains(&(j as usize))));
        if closed {
            *out.entry(oracle.canon_of(h, &f, &[])).or_default() += 1;
        }
    }
    out
}

/// Minimal marked copies by canonical form: butterfly edge sets of size
/// `1..=l_max` with `1..=vstar_max` marked vertices whose degree in `h`
/// equals their degree in the copy, every leaf edge holding a marked vertex
/// of copy-degree 1; plus isolated vertices marked alone.
pub fn marked_copies(oracle: &mut Oracle, h: &Hypergraph, l_max: usize, vstar_max: usize) -> BTreeMap<Canon, u64> {
    let mut out = BTreeMap::new();
    let isolated = (0..h.n() as Vertex).filter(|&v| h.degree(v) == 0).count() as u64;
    if isolated > 0 && vstar_max >= 1 {
        out.insert(oracle.canon(1, &[], &[0]), isolated);
    }
    for f in subsets_up_to(h.edge_count(), l_max) {
        let (verts, deg, ok) = spanned(h, &f);
        if !ok {
            continue;
        }
        let leaves: Vec<usize> =
            f.iter().copied().filter(|&j| h.edge(j).iter().filter(|v| deg[v] > 1).count() <= 1).collect();
        let eligible: Vec<Vertex> = verts.iter().copied().filter(|v| h.degree(*v) == deg[v]).collect();
        for marks in subsets_up_to(eligible.len(), vstar_max) {
            let marks: Vec<Vertex> = marks.iter().map(|&i| eligible[i]).collect();
            let minimal = leaves.iter().all(|&j| h.edge(j).iter().any(|v| marks.contains(v) && deg[v] == 1));
            if minimal {
                *out.entry(oracle.canon_of(h, &f, &marks)).or_default() += 1;
            }
        }
    }
    out
}

/// Census butterfly counts re-keyed by oracle canonical form (zeros dropped).
pub fn census_butterflies(oracle: &mut Oracle, report: &CensusReport, catalog: &TypeCatalog) -> BTreeMap<Canon, u64> {
    let mut out = BTreeMap::new();
    for t in catalog.types() {
        let Some(&count) = report.butterfly_components.get(&t.hex_code()) else { continue };
        if count > 0 {
            let r = &t.representative;
            let edges: Vec<Vec<Vertex>> = r.edges().map(|e| e.to_vec()).collect();
            out.insert(oracle.canon(r.n(), &edges, &[]), count);
        }
    }
    out
}

/// Census marked-copy counts re-keyed by oracle canonical form.
pub fn census_marked(oracle: &mut Oracle, report: &CensusReport, catalog: &TypeCatalog) -> BTreeMap<Canon, u64> {
    let mut out = BTreeMap::new();
    for t in catalog.marked_types() {
        let Some(&count) = report.marked_copies.get(&t.hex_code()) else { continue };
        if count > 0 {
            let r = &t.base.representative;
            let edges: Vec<Vec<Vertex>> = r.edges().map(|e| e.to_vec()).collect();
            out.insert(oracle.canon(r.n(), &edges, &t.marked), count);
        }
    }
    out
}

/// A small random hypergraph with a mix of component shapes.
pub fn random_small(rng: &mut SplitMix64, d: usize, n: usize) -> Hypergraph {
    let potential = hyperlab::sampler::potential_edges(n, d).expect("small") as f64;
    // about 0.4 to 1.1 edges per vertex-degree unit
    let target = n as f64 * (0.4 + 0.7 * rng.next_open01()) / (d + 1) as f64;
    let p = (target / potential).min(1.0);
    hyperlab::sampler::sample_with(d, n, p, rng).expect("valid parameters")
}
