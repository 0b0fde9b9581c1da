//! The Poisson butterfly process `B(r, μ)` and exact distributions of
//! `(r, s)`-values of its root.
//!
//! In `B(r, μ)` every vertex of generation `< r` receives a Poisson(μ)
//! number of new edges, each on `d` fresh vertices. An edge's pattern is the
//! multiset of its `d` children's values, so by Poisson thinning the number
//! of root edges with pattern `Γ` is Poisson(`p_Γ μ`), independently over
//! `Γ`. Lower levels are tabulated explicitly; the root level is kept in
//! product form so its (often huge) support never has to be materialised.

use std::collections::{BTreeMap, HashMap};

use rand_distr::{Distribution, Poisson};
use thiserror::Error;

use crate::butterfly::{rooted_value, PatternId, RootedValue, Value, ValueId, ValueTable, MANY};
use crate::hypercore::{Hypergraph, Vertex};
use crate::num::{poisson_capped, Real};
use crate::rng::SplitMix64;

/// Default bound on explicitly tabulated values or patterns per level.
pub const DEFAULT_STATE_CAP: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BranchingError {
    #[error("state space too large: {states} states at depth {depth} (cap {cap})")]
    StateSpaceOverflow { depth: u32, states: u128, cap: usize },
    #[error("mean {0} must be finite and non-negative")]
    InvalidMean(f64),
    #[error("cap s must be in 1..255, got {0}")]
    InvalidCap(u32),
}

/// One draw of `B(r, μ)` as a hypergraph rooted at vertex 0.
pub fn sample_process(d: usize, r: u32, mu: f64, rng: &mut SplitMix64) -> Result<Hypergraph, BranchingError> {
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(BranchingError::InvalidMean(mu));
    }
    let poisson = (mu > 0.0).then(|| Poisson::new(mu).expect("positive finite mean"));
    let mut edges: Vec<Vec<Vertex>> = Vec::new();
    let mut frontier: Vec<Vertex> = vec![0];
    let mut next_id: Vertex = 1;
    for _ in 0..r {
        let mut next = Vec::new();
        for &u in &frontier {
            let k = poisson.as_ref().map_or(0, |p| p.sample(rng) as u64);
            for _ in 0..k {
                let mut e = vec![u];
                for _ in 0..d {
                    e.push(next_id);
                    next.push(next_id);
                    next_id += 1;
                }
                edges.push(e);
            }
        }
        frontier = next;
    }
    Ok(Hypergraph::build(d, next_id as usize, edges).expect("fresh vertices make valid edges"))
}

/// Exact law of the root's `(r, s)`-value in `B(r, μ)`.
#[derive(Debug, Clone)]
pub struct ValueDistribution<T> {
    pub d: usize,
    pub r: u32,
    pub s: u8,
    pub mu: T,
    table: ValueTable,
    /// patterns of root edges with their probabilities
    root_patterns: Vec<(PatternId, T)>,
    /// capped Poisson law of the count of each root pattern: `0..=s`, then MANY
    root_counts: Vec<Vec<T>>,
    pattern_slot: HashMap<PatternId, usize>,
}

fn count_index(count: u8, s: u8) -> usize {
    if count == MANY {
        s as usize + 1
    } else {
        count as usize
    }
}

/// Multisets of `d` values drawn i.i.d. from `level`, with their
/// probabilities `d!/Π m_i! · Π p_i^{m_i}`.
fn pattern_law<T: Real>(level: &[(ValueId, T)], d: usize, table: &mut ValueTable) -> Vec<(PatternId, T)> {
    let mut out = Vec::new();
    let mut pick: Vec<usize> = Vec::with_capacity(d);
    fn rec<T: Real>(
        start: usize,
        d: usize,
        level: &[(ValueId, T)],
        pick: &mut Vec<usize>,
        table: &mut ValueTable,
        out: &mut Vec<(PatternId, T)>,
    ) {
        if pick.len() == d {
            let mut prob = T::one();
            let mut run = 0u64;
            for (i, &j) in pick.iter().enumerate() {
                run = if i > 0 && pick[i - 1] == j { run + 1 } else { 1 };
                // multinomial factor built incrementally: (i+1)/run
                prob = prob * level[j].1 * T::of_u64(i as u64 + 1) / T::of_u64(run);
            }
            let id = table.intern_pattern(pick.iter().map(|&j| level[j].0).collect());
            out.push((id, prob));
            return;
        }
        for j in start..level.len() {
            pick.push(j);
            rec(j, d, level, pick, table, out);
            pick.pop();
        }
    }
    rec(0, d, level, &mut pick, table, &mut out);
    out
}

fn multiset_count(items: usize, d: usize) -> u128 {
    // C(items + d − 1, d)
    crate::num::binomial_u128((items + d).saturating_sub(1) as u64, d as u64).unwrap_or(u128::MAX)
}

impl<T: Real> ValueDistribution<T> {
    /// Builds the distribution; lower levels must fit in `DEFAULT_STATE_CAP`.
    pub fn exact(d: usize, r: u32, s: u8, mu: T) -> Result<Self, BranchingError> {
        Self::exact_with_cap(d, r, s, mu, DEFAULT_STATE_CAP)
    }

    pub fn exact_with_cap(d: usize, r: u32, s: u8, mu: T, cap: usize) -> Result<Self, BranchingError> {
        if !(mu >= T::zero() && mu.is_finite()) {
            return Err(BranchingError::InvalidMean(mu.to_f64().unwrap_or(f64::NAN)));
        }
        if s == 0 || s == MANY {
            return Err(BranchingError::InvalidCap(s as u32));
        }
        let mut table = ValueTable::new(d, s);
        let mut level: Vec<(ValueId, T)> = vec![(table.trivial(), T::one())];
        let mut root_patterns = Vec::new();
        for depth in 1..=r {
            let states = multiset_count(level.len(), d);
            if states > cap as u128 {
                return Err(BranchingError::StateSpaceOverflow { depth, states, cap });
            }
            let patterns = pattern_law(&level, d, &mut table);
            if depth == r {
                root_patterns = patterns;
                break;
            }
            level = Self::tabulate(&patterns, depth, s, mu, cap, &mut table)?;
        }
        let root_counts = root_patterns
            .iter()
            .map(|&(_, pg)| poisson_capped(pg * mu, s as u64))
            .collect();
        let pattern_slot = root_patterns.iter().enumerate().map(|(i, &(p, _))| (p, i)).collect();
        Ok(Self { d, r, s, mu, table, root_patterns, root_counts, pattern_slot })
    }

    /// Explicit value law at `depth` from its pattern law.
    fn tabulate(
        patterns: &[(PatternId, T)],
        depth: u32,
        s: u8,
        mu: T,
        cap: usize,
        table: &mut ValueTable,
    ) -> Result<Vec<(ValueId, T)>, BranchingError> {
        let laws: Vec<Vec<T>> = patterns.iter().map(|&(_, pg)| poisson_capped(pg * mu, s as u64)).collect();
        let states = laws
            .iter()
            .map(|law| law.iter().filter(|&&q| q > T::zero()).count() as u128)
            .try_fold(1u128, |a, b| a.checked_mul(b))
            .unwrap_or(u128::MAX);
        if states > cap as u128 {
            return Err(BranchingError::StateSpaceOverflow { depth, states, cap });
        }
        let mut out = Vec::new();
        let mut entries = Vec::with_capacity(patterns.len());
        fn rec<T: Real>(
            i: usize,
            prob: T,
            patterns: &[(PatternId, T)],
            laws: &[Vec<T>],
            depth: u32,
            s: u8,
            entries: &mut Vec<(PatternId, u8)>,
            table: &mut ValueTable,
            out: &mut Vec<(ValueId, T)>,
        ) {
            if i == patterns.len() {
                let id = table.intern_value(Value { depth, entries: entries.clone() });
                out.push((id, prob));
                return;
            }
            for (k, &q) in laws[i].iter().enumerate() {
                if q <= T::zero() {
                    continue;
                }
                if k == 0 {
                    rec(i + 1, prob * q, patterns, laws, depth, s, entries, table, out);
                    continue;
                }
                let count = if k > s as usize { MANY } else { k as u8 };
                entries.push((patterns[i].0, count));
                rec(i + 1, prob * q, patterns, laws, depth, s, entries, table, out);
                entries.pop();
            }
        }
        rec(0, T::one(), patterns, &laws, depth, s, &mut entries, table, &mut out);
        Ok(out)
    }

    pub fn table(&self) -> &ValueTable {
        &self.table
    }

    pub fn table_mut(&mut self) -> &mut ValueTable {
        &mut self.table
    }

    /// Root patterns and their probabilities `p_Γ`.
    pub fn root_patterns(&self) -> &[(PatternId, T)] {
        &self.root_patterns
    }

    /// Probability of a depth-`r` value (zero for anything else).
    pub fn probability(&self, id: ValueId) -> T {
        let value = self.table.value(id);
        if value.depth != self.r {
            return T::zero();
        }
        if self.r == 0 {
            return T::one();
        }
        let mut counts = vec![0u8; self.root_patterns.len()];
        for &(p, c) in &value.entries {
            match self.pattern_slot.get(&p) {
                Some(&slot) => counts[slot] = c,
                None => return T::zero(),
            }
        }
        counts
            .iter()
            .zip(&self.root_counts)
            .map(|(&c, law)| law[count_index(c, self.s)])
            .fold(T::one(), |a, b| a * b)
    }

    /// Number of depth-`r` values of positive probability.
    pub fn support_size(&self) -> u128 {
        self.root_counts
            .iter()
            .map(|law| law.iter().filter(|&&q| q > T::zero()).count() as u128)
            .try_fold(1u128, |a, b| a.checked_mul(b))
            .unwrap_or(u128::MAX)
    }

    /// Sum of all probabilities: by direct enumeration when the support has
    /// at most `DEFAULT_STATE_CAP` values, otherwise as the product of the
    /// per-pattern sums.
    pub fn total_mass(&self) -> T {
        if self.support_size() > DEFAULT_STATE_CAP as u128 {
            return self.root_counts.iter().map(|law| law.iter().copied().sum::<T>()).fold(T::one(), |a, b| a * b);
        }
        fn rec<T: Real>(i: usize, prob: T, laws: &[Vec<T>]) -> T {
            if i == laws.len() {
                return prob;
            }
            laws[i].iter().filter(|&&q| q > T::zero()).map(|&q| rec(i + 1, prob * q, laws)).sum()
        }
        rec(0, T::one(), &self.root_counts)
    }

    /// The whole support with probabilities, if it has at most `limit` values.
    pub fn enumerate(&mut self, limit: usize) -> Result<Vec<(ValueId, T)>, BranchingError> {
        if self.r == 0 {
            return Ok(vec![(self.table.trivial(), T::one())]);
        }
        let patterns = self.root_patterns.clone();
        Self::tabulate(&patterns, self.r, self.s, self.mu, limit, &mut self.table)
    }

    /// Probabilities keyed by hex value code.
    pub fn to_hex_map(&mut self, limit: usize) -> Result<BTreeMap<String, f64>, BranchingError> {
        let support = self.enumerate(limit)?;
        Ok(support
            .into_iter()
            .map(|(id, p)| (self.table.hex_code(id), p.to_f64().unwrap_or(f64::NAN)))
            .collect())
    }
}

/// Empirical value frequencies over sampled roots.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValueTally {
    pub counts: BTreeMap<ValueId, u64>,
    pub cyclic: u64,
    pub total: u64,
}

impl ValueTally {
    pub fn add(&mut self, v: RootedValue) {
        self.total += 1;
        match v {
            RootedValue::Value(id) => *self.counts.entry(id).or_default() += 1,
            RootedValue::Cyclic => self.cyclic += 1,
        }
    }
}

/// Total variation between a tally and the exact law; cyclic roots count
/// as mass the exact law never produces.
pub fn tally_distance<T: Real>(tally: &ValueTally, dist: &ValueDistribution<T>) -> T {
    if tally.total == 0 {
        return T::zero();
    }
    let total = T::of_u64(tally.total);
    let mut diff = T::zero();
    let mut covered = T::zero();
    for (&id, &c) in &tally.counts {
        let p = dist.probability(id);
        covered = covered + p;
        diff = diff + (T::of_u64(c) / total - p).abs();
    }
    let unseen = (T::one() - covered).max(T::zero());
    let half = T::of(0.5);
    (half * (diff + unseen + T::of_u64(tally.cyclic) / total)).min(T::one())
}

/// Value tally of `roots` uniformly chosen vertices (with replacement).
pub fn tally_roots<T: Real>(h: &Hypergraph, dist: &mut ValueDistribution<T>, roots: usize, rng: &mut SplitMix64) -> ValueTally {
    let mut tally = ValueTally::default();
    if h.n() == 0 {
        return tally;
    }
    let r = dist.r;
    for _ in 0..roots {
        let v = rng.below(h.n() as u64) as Vertex;
        tally.add(rooted_value(h, v, r, dist.table_mut()));
    }
    tally
}

/// Total variation between the empirical `(r, s)`-values of sampled roots
/// of `h` and the exact law of `B(r, μ)`.
pub fn local_limit_distance<T: Real>(
    h: &Hypergraph,
    dist: &mut ValueDistribution<T>,
    roots: usize,
    seed: u64,
) -> T {
    let mut rng = SplitMix64::new(seed);
    let tally = tally_roots(h, dist, roots, &mut rng);
    tally_distance(&tally, dist)
}
