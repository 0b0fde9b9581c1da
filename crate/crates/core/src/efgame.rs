//! Ehrenfeucht–Fraïssé games on finite hypergraphs.
//!
//! In each round Spoiler picks a fresh vertex in either structure and
//! Duplicator answers with a fresh vertex in the other. Duplicator survives
//! a position if the picks form a partial isomorphism: for every set of
//! `d+1` pick indices, the left vertices form an edge iff the right ones do.
//! The distance variant also requires equal distances between all
//! corresponding picks (unreachable pairs compare as equal infinities).
//!
//! Repeated picks are never useful to Spoiler, so the game with fresh picks
//! decides the same equivalence as quantifier depth `k` sentences.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::fo::Formula;
use crate::hypercore::{find_isomorphism_fixing, isomorphic, Hypergraph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EfError {
    #[error("structures have different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
    #[error("state cap exceeded: more than {0} memoised positions")]
    StateCap(usize),
    #[error("time limit of {0:?} exceeded")]
    TimeLimit(Duration),
    #[error("invalid premarked pairs: {0}")]
    Premarked(String),
}

/// Resource limits for one solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EfConfig {
    pub max_states: usize,
    pub time_limit: Option<Duration>,
}

impl Default for EfConfig {
    fn default() -> Self {
        Self { max_states: 5_000_000, time_limit: None }
    }
}

/// A position: the two structures, the picks so far and the rounds left.
#[derive(Debug, Clone)]
pub struct GameState<'a> {
    pub left: &'a Hypergraph,
    pub right: &'a Hypergraph,
    pub picks: Vec<(Vertex, Vertex)>,
    pub rounds: u32,
}

struct Solver<'a> {
    h1: &'a Hypergraph,
    h2: &'a Hypergraph,
    dist: Option<(Vec<Vec<Option<u32>>>, Vec<Vec<Option<u32>>>)>,
    picks: Vec<(Vertex, Vertex)>,
    idx1: Vec<Option<usize>>,
    idx2: Vec<Option<usize>>,
    memo: HashMap<(Vec<(Vertex, Vertex)>, u32), bool>,
    config: EfConfig,
    started: Instant,
}

fn all_distances(h: &Hypergraph) -> Vec<Vec<Option<u32>>> {
    (0..h.n() as Vertex).map(|v| h.distances_from(v)).collect()
}

impl<'a> Solver<'a> {
    fn new(h1: &'a Hypergraph, h2: &'a Hypergraph, distance: bool, config: EfConfig) -> Result<Self, EfError> {
        if h1.d() != h2.d() {
            return Err(EfError::DimensionMismatch(h1.d(), h2.d()));
        }
        Ok(Self {
            h1,
            h2,
            dist: distance.then(|| (all_distances(h1), all_distances(h2))),
            picks: Vec::new(),
            idx1: vec![None; h1.n()],
            idx2: vec![None; h2.n()],
            memo: HashMap::new(),
            config,
            started: Instant::now(),
        })
    }

    /// Whether adding `(a, b)` keeps the picks a partial isomorphism.
    fn compatible(&self, a: Vertex, b: Vertex) -> bool {
        let check = |h: &Hypergraph, other: &Hypergraph, v: Vertex, w: Vertex, idx: &[Option<usize>], swap: bool| {
            h.incident(v).iter().all(|&j| {
                let mut image = Vec::with_capacity(h.arity());
                for &u in h.edge(j as usize) {
                    if u == v {
                        image.push(w);
                    } else if let Some(i) = idx[u as usize] {
                        let p = self.picks[i];
                        image.push(if swap { p.0 } else { p.1 });
                    } else {
                        return true;
                    }
                }
                other.has_edge(&image)
            })
        };
        if !check(self.h1, self.h2, a, b, &self.idx1, false) || !check(self.h2, self.h1, b, a, &self.idx2, true) {
            return false;
        }
        if let Some((d1, d2)) = &self.dist {
            if self.picks.iter().any(|&(x, y)| d1[a as usize][x as usize] != d2[b as usize][y as usize]) {
                return false;
            }
        }
        true
    }

    fn push(&mut self, a: Vertex, b: Vertex) {
        self.idx1[a as usize] = Some(self.picks.len());
        self.idx2[b as usize] = Some(self.picks.len());
        self.picks.push((a, b));
    }

    fn pop(&mut self) {
        let (a, b) = self.picks.pop().expect("pop after push");
        self.idx1[a as usize] = None;
        self.idx2[b as usize] = None;
    }

    fn fresh1(&self) -> Vec<Vertex> {
        (0..self.h1.n() as Vertex).filter(|&v| self.idx1[v as usize].is_none()).collect()
    }

    fn fresh2(&self) -> Vec<Vertex> {
        (0..self.h2.n() as Vertex).filter(|&v| self.idx2[v as usize].is_none()).collect()
    }

    /// Duplicator wins from the current (consistent) position with `r` rounds.
    fn duplicator(&mut self, r: u32) -> Result<bool, EfError> {
        if r == 0 {
            return Ok(true);
        }
        let mut key = self.picks.clone();
        key.sort_unstable();
        let key = (key, r);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        if self.memo.len() >= self.config.max_states {
            return Err(EfError::StateCap(self.config.max_states));
        }
        if let Some(limit) = self.config.time_limit {
            if self.memo.len().is_multiple_of(1024) && self.started.elapsed() > limit {
                return Err(EfError::TimeLimit(limit));
            }
        }
        let value = self.spoiler_move(r)?.is_none();
        self.memo.insert(key, value);
        Ok(value)
    }

    /// A winning Spoiler move `(pick on the left?, vertex)`, if one exists.
    fn spoiler_move(&mut self, r: u32) -> Result<Option<(bool, Vertex)>, EfError> {
        let (f1, f2) = (self.fresh1(), self.fresh2());
        for &a in &f1 {
            if !self.has_answer(true, a, &f2, r)? {
                return Ok(Some((true, a)));
            }
        }
        for &b in &f2 {
            if !self.has_answer(false, b, &f1, r)? {
                return Ok(Some((false, b)));
            }
        }
        Ok(None)
    }

    fn has_answer(&mut self, left: bool, v: Vertex, answers: &[Vertex], r: u32) -> Result<bool, EfError> {
        for &w in answers {
            let (a, b) = if left { (v, w) } else { (w, v) };
            if !self.compatible(a, b) {
                continue;
            }
            self.push(a, b);
            let ok = self.duplicator(r - 1);
            self.pop();
            if ok? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn var(i: usize) -> String {
        format!("x{}", i + 1)
    }

    /// Formula over `x1..xt` true at the left picks and false at the right
    /// ones, for a position Spoiler wins with `r` rounds. The last pick may
    /// be incompatible, in which case an atom already separates.
    fn separate(&mut self, r: u32) -> Result<Formula, EfError> {
        let t = self.picks.len();
        if t > 0 {
            let (a, b) = self.picks[t - 1];
            self.pop();
            let ok = self.compatible(a, b);
            self.push(a, b);
            if !ok {
                return Ok(self.atom_difference());
            }
        }
        let (left, v) = self.spoiler_move(r)?.expect("position is a Spoiler win");
        let z = Self::var(t);
        let mut parts = Vec::new();
        if left {
            // ∃z: for every answer b, z behaves unlike b
            for w in 0..self.h2.n() as Vertex {
                parts.push(match self.idx2[w as usize] {
                    Some(i) => Formula::not(Formula::eq(z.clone(), Self::var(i))),
                    None => {
                        self.push(v, w);
                        let f = self.separate(r - 1);
                        self.pop();
                        f?
                    }
                });
            }
            Ok(Formula::exists(z, Formula::and_all(parts)))
        } else {
            for w in 0..self.h1.n() as Vertex {
                parts.push(match self.idx1[w as usize] {
                    Some(i) => Formula::not(Formula::eq(z.clone(), Self::var(i))),
                    None => {
                        self.push(w, v);
                        let f = self.separate(r - 1);
                        self.pop();
                        negate(f?)
                    }
                });
            }
            Ok(negate(Formula::exists(z, Formula::and_all(parts))))
        }
    }

    /// An atom on the picks that is true on the left and false on the right
    /// (or its negation); exists when the last pick broke the isomorphism.
    fn atom_difference(&self) -> Formula {
        let t = self.picks.len();
        let (a, b) = self.picks[t - 1];
        let scan = |h: &Hypergraph, v: Vertex, idx: &[Option<usize>], other: &Hypergraph, left: bool| {
            for &j in h.incident(v) {
                let ids: Option<Vec<usize>> = h.edge(j as usize).iter().map(|&u| idx[u as usize]).collect();
                let Some(ids) = ids else { continue };
                let image: Vec<Vertex> =
                    ids.iter().map(|&i| if left { self.picks[i].1 } else { self.picks[i].0 }).collect();
                if !other.has_edge(&image) {
                    return Some(ids);
                }
            }
            None
        };
        if let Some(ids) = scan(self.h1, a, &self.idx1, self.h2, true) {
            return Formula::Edge(ids.into_iter().map(Self::var).collect());
        }
        if let Some(ids) = scan(self.h2, b, &self.idx2, self.h1, false) {
            return Formula::not(Formula::Edge(ids.into_iter().map(Self::var).collect()));
        }
        unreachable!("incompatible pick without a separating atom (distance variant has no formulas)")
    }
}

fn negate(f: Formula) -> Formula {
    match f {
        Formula::Not(g) => *g,
        g => Formula::not(g),
    }
}

fn check_premarked(h1: &Hypergraph, h2: &Hypergraph, pairs: &[(Vertex, Vertex)]) -> Result<(), EfError> {
    let mut seen1 = vec![false; h1.n()];
    let mut seen2 = vec![false; h2.n()];
    for &(a, b) in pairs {
        if a as usize >= h1.n() || b as usize >= h2.n() {
            return Err(EfError::Premarked(format!("pair ({a}, {b}) out of range")));
        }
        if std::mem::replace(&mut seen1[a as usize], true) || std::mem::replace(&mut seen2[b as usize], true) {
            return Err(EfError::Premarked(format!("vertex repeated in pair ({a}, {b})")));
        }
    }
    Ok(())
}

/// Value of the game as actually played, with no size convention: Spoiler
/// can only move while a fresh vertex remains in some structure.
pub fn game_value(
    h1: &Hypergraph,
    h2: &Hypergraph,
    k: u32,
    premarked: &[(Vertex, Vertex)],
    distance: bool,
    config: EfConfig,
) -> Result<bool, EfError> {
    check_premarked(h1, h2, premarked)?;
    let mut solver = Solver::new(h1, h2, distance, config)?;
    for &(a, b) in premarked {
        if !solver.compatible(a, b) {
            return Ok(false);
        }
        solver.push(a, b);
    }
    // the game cannot outlast the vertex supply
    let cap = (h1.n() + h2.n()) as u32;
    solver.duplicator(k.min(cap))
}

/// Whether Duplicator wins `EHF(h1, h2; k)`. If `k` exceeds the smaller
/// vertex count, Duplicator wins iff the structures are isomorphic.
pub fn duplicator_wins(h1: &Hypergraph, h2: &Hypergraph, k: u32) -> Result<bool, EfError> {
    duplicator_wins_with(h1, h2, k, EfConfig::default())
}

pub fn duplicator_wins_with(h1: &Hypergraph, h2: &Hypergraph, k: u32, config: EfConfig) -> Result<bool, EfError> {
    if h1.d() != h2.d() {
        return Err(EfError::DimensionMismatch(h1.d(), h2.d()));
    }
    if k as usize > h1.n().min(h2.n()) {
        return Ok(isomorphic(h1, h2));
    }
    game_value(h1, h2, k, &[], false, config)
}

/// The distance game started from `premarked` pairs.
pub fn duplicator_wins_distance(
    h1: &Hypergraph,
    h2: &Hypergraph,
    k: u32,
    premarked: &[(Vertex, Vertex)],
) -> Result<bool, EfError> {
    duplicator_wins_distance_with(h1, h2, k, premarked, EfConfig::default())
}

pub fn duplicator_wins_distance_with(
    h1: &Hypergraph,
    h2: &Hypergraph,
    k: u32,
    premarked: &[(Vertex, Vertex)],
    config: EfConfig,
) -> Result<bool, EfError> {
    check_premarked(h1, h2, premarked)?;
    if h1.d() != h2.d() {
        return Err(EfError::DimensionMismatch(h1.d(), h2.d()));
    }
    if k as usize + premarked.len() > h1.n().min(h2.n()) {
        // isomorphisms preserve distances, so this is the full-size case
        return Ok(h1.n() == h2.n() && find_isomorphism_fixing(h1, h2, premarked).is_some());
    }
    game_value(h1, h2, k, premarked, true, config)
}

/// A sentence of quantifier depth at most `k` true in `h1` and false in
/// `h2`, or `None` when Duplicator wins.
pub fn distinguishing_formula(h1: &Hypergraph, h2: &Hypergraph, k: u32) -> Result<Option<Formula>, EfError> {
    distinguishing_formula_with(h1, h2, k, EfConfig::default())
}

pub fn distinguishing_formula_with(
    h1: &Hypergraph,
    h2: &Hypergraph,
    k: u32,
    config: EfConfig,
) -> Result<Option<Formula>, EfError> {
    if duplicator_wins_with(h1, h2, k, config)? {
        return Ok(None);
    }
    let mut solver = Solver::new(h1, h2, false, config)?;
    let r = k.min((h1.n() + h2.n()) as u32);
    if solver.duplicator(r)? {
        unreachable!("size convention disagrees with the played game");
    }
    Ok(Some(solver.separate(r)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo::evaluate_sentence;

    fn graph(n: usize, edges: &[[u32; 2]]) -> Hypergraph {
        Hypergraph::build(1, n, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    fn assert_separates(h1: &Hypergraph, h2: &Hypergraph, k: u32) -> Formula {
        let f = distinguishing_formula(h1, h2, k).unwrap().expect("spoiler wins");
        assert!(f.quantifier_depth() <= k as usize, "{f}");
        assert!(f.is_sentence());
        assert!(evaluate_sentence(h1, &f).unwrap());
        assert!(!evaluate_sentence(h2, &f).unwrap());
        f
    }

    #[test]
    fn identical_structures() {
        let h = graph(4, &[[0, 1], [1, 2], [2, 3]]);
        for k in 0..6 {
            assert!(duplicator_wins(&h, &h, k).unwrap());
            assert_eq!(distinguishing_formula(&h, &h, k).unwrap(), None);
        }
    }

    #[test]
    fn isolated_vertices() {
        let (a, b) = (Hypergraph::empty(1, 2), Hypergraph::empty(1, 3));
        assert!(duplicator_wins(&a, &b, 2).unwrap());
        assert!(!duplicator_wins(&a, &b, 3).unwrap());
        assert!(!game_value(&a, &b, 3, &[], false, EfConfig::default()).unwrap());
        let f = assert_separates(&b, &a, 3);
        assert_eq!(f.quantifier_depth(), 3);
    }

    #[test]
    fn edge_against_no_edge() {
        let (e, none) = (graph(2, &[[0, 1]]), graph(2, &[]));
        assert!(!duplicator_wins(&e, &none, 2).unwrap());
        assert!(duplicator_wins(&e, &none, 1).unwrap());
        let f = assert_separates(&e, &none, 2);
        assert_eq!(f.quantifier_depth(), 2);
        assert_separates(&none, &e, 2);
    }

    #[test]
    fn size_convention_matches_play() {
        let graphs = [
            graph(3, &[[0, 1], [1, 2]]),
            graph(3, &[[0, 1], [1, 2], [0, 2]]),
            graph(3, &[[0, 2]]),
            graph(4, &[[0, 1], [2, 3]]),
        ];
        for a in &graphs {
            for b in &graphs {
                for k in 0..6 {
                    let played = game_value(a, b, k, &[], false, EfConfig::default()).unwrap();
                    assert_eq!(duplicator_wins(a, b, k).unwrap(), played);
                }
            }
        }
    }

    #[test]
    fn distance_variant() {
        let path = graph(5, &[[0, 1], [1, 2], [2, 3], [3, 4]]);
        assert!(duplicator_wins_distance(&path, &path, 2, &[(2, 2)]).unwrap());
        // an end and the centre have different eccentricities
        assert!(!duplicator_wins_distance(&path, &path, 0, &[(0, 2), (4, 3)]).unwrap());
        assert!(duplicator_wins_distance(&path, &path, 0, &[(0, 2), (2, 4)]).unwrap());
        assert!(duplicator_wins_distance(&path, &path, 0, &[(0, 2)]).unwrap());
        assert!(!duplicator_wins_distance(&path, &path, 1, &[(0, 2)]).unwrap());
        let star = graph(4, &[[0, 1], [0, 2], [0, 3]]);
        let p4 = graph(4, &[[0, 1], [1, 2], [2, 3]]);
        // the star centre has three neighbours; Spoiler needs one round to
        // pick a vertex at distance 2 from the path's inner vertex
        assert!(!duplicator_wins_distance(&star, &p4, 1, &[(0, 1)]).unwrap());
        assert!(duplicator_wins_distance(&star, &p4, 0, &[(0, 1)]).unwrap());
        assert!(duplicator_wins(&star, &p4, 1).unwrap());
        assert!(matches!(
            duplicator_wins_distance(&star, &p4, 1, &[(0, 1), (0, 2)]),
            Err(EfError::Premarked(_))
        ));
    }

    #[test]
    fn state_cap_is_an_error() {
        let a = graph(6, &[[0, 1], [1, 2], [2, 3], [3, 4], [4, 5], [5, 0]]);
        let b = graph(6, &[[0, 1], [1, 2], [2, 0], [3, 4], [4, 5], [5, 3]]);
        let config = EfConfig { max_states: 3, time_limit: None };
        assert_eq!(duplicator_wins_with(&a, &b, 4, config), Err(EfError::StateCap(3)));
        assert!(!duplicator_wins(&a, &b, 4).unwrap());
        assert_separates(&a, &b, 4);
    }

    #[test]
    fn hypergraph_game() {
        let a = Hypergraph::build(2, 5, vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap();
        let b = Hypergraph::build(2, 5, vec![vec![0, 1, 2], vec![1, 3, 4]]).unwrap();
        assert!(duplicator_wins(&a, &b, 5).unwrap());
        let c = Hypergraph::build(2, 5, vec![vec![0, 1, 2], vec![0, 3, 4], vec![1, 2, 3]]).unwrap();
        // two edges sharing a pair of vertices need four pebbles
        assert!(duplicator_wins(&a, &c, 3).unwrap());
        assert!(!duplicator_wins(&a, &c, 4).unwrap());
        assert_separates(&c, &a, 4);
        assert_separates(&a, &c, 4);
        assert!(matches!(duplicator_wins(&a, &graph(2, &[]), 1), Err(EfError::DimensionMismatch(2, 1))));
    }
}
