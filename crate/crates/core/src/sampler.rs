//! Exact sampling of the binomial random hypergraph `G^{d+1}(n, p)`.
//!
//! Potential edges are identified with their colex rank in `0..C(n, d+1)`.
//! Present ranks are visited by geometric gap skipping, so the work is
//! proportional to the number of sampled edges rather than to `C(n, d+1)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypercore::{Hypergraph, Vertex};
use crate::num::binomial_u128;
use crate::rng::SplitMix64;

/// Ranks must stay below this bound.
pub const RANK_LIMIT: u128 = 1 << 127;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("d must be at least 1, got {0}")]
    InvalidD(usize),
    #[error("edge probability {0} is not in [0, 1]")]
    InvalidProbability(f64),
    #[error("C({n}, {k}) potential edges do not fit below 2^127")]
    TooManyPotentialEdges { n: usize, k: usize },
    #[error("vertex count {0} does not fit in 32-bit vertex ids")]
    TooManyVertices(usize),
    #[error("rank {rank} out of range for C({n}, {k}) = {total}")]
    RankOutOfRange { rank: u128, n: usize, k: usize, total: u128 },
    #[error("edge must be {k} strictly increasing vertices below {n}")]
    InvalidEdge { n: usize, k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub d: usize,
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl SampleSpec {
    pub fn new(d: usize, n: usize, p: f64, seed: u64) -> Self {
        Self { d, n, p, seed }
    }

    pub fn validate(&self) -> Result<u128, SamplerError> {
        if self.d == 0 {
            return Err(SamplerError::InvalidD(self.d));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(SamplerError::InvalidProbability(self.p));
        }
        if self.n > u32::MAX as usize {
            return Err(SamplerError::TooManyVertices(self.n));
        }
        potential_edges(self.n, self.d)
    }
}

/// `C(n, d+1)`, rejected at `2^127` and above.
pub fn potential_edges(n: usize, d: usize) -> Result<u128, SamplerError> {
    let k = d + 1;
    match binomial_u128(n as u64, k as u64) {
        Some(total) if total < RANK_LIMIT => Ok(total),
        _ => Err(SamplerError::TooManyPotentialEdges { n, k }),
    }
}

/// `C(c, i)` for the unranking search; `None` means "larger than any rank".
fn binom(c: u64, i: u64) -> Option<u128> {
    if i > c {
        return Some(0);
    }
    // small cases in u64: i factors below 2^(64/i) cannot overflow
    if i <= 4 && c < [u64::MAX, u64::MAX, 1 << 32, 1 << 21, 1 << 16][i as usize] {
        let num: u64 = (0..i).map(|j| c - j).product();
        return Some((num / [1, 1, 2, 6, 24][i as usize]) as u128);
    }
    let mut acc: u128 = 1;
    for j in 0..i {
        match acc.checked_mul((c - j) as u128) {
            Some(x) => acc = x / (j + 1) as u128,
            None => return binomial_u128(c, i).filter(|&b| b < RANK_LIMIT),
        }
    }
    Some(acc)
}

/// Colex rank of a strictly increasing `(d+1)`-subset of `0..n`.
pub fn rank(edge: &[Vertex], n: usize, d: usize) -> Result<u128, SamplerError> {
    let k = d + 1;
    let valid = edge.len() == k
        && edge.windows(2).all(|w| w[0] < w[1])
        && edge.last().is_some_and(|&v| (v as usize) < n);
    if !valid {
        return Err(SamplerError::InvalidEdge { n, k });
    }
    potential_edges(n, d)?;
    Ok(edge
        .iter()
        .enumerate()
        .map(|(i, &v)| binom(v as u64, i as u64 + 1).expect("bounded by C(n, d+1)"))
        .sum())
}

/// Inverse of [`rank`].
pub fn unrank(r: u128, n: usize, d: usize) -> Result<Vec<Vertex>, SamplerError> {
    let total = potential_edges(n, d)?;
    if r >= total {
        return Err(SamplerError::RankOutOfRange { rank: r, n, k: d + 1, total });
    }
    let mut edge = vec![0; d + 1];
    unrank_into(r, n, &mut edge);
    Ok(edge)
}

fn unrank_into(mut r: u128, n: usize, out: &mut [Vertex]) {
    let k = out.len();
    let mut upper = n as u64; // exclusive bound for the next element
    for i in (1..=k as u64).rev() {
        // largest c < upper with C(c, i) <= r
        let fits = |c: u64| binom(c, i).is_some_and(|b| b <= r);
        let (mut lo, mut hi) = (i - 1, upper - 1);
        // C(c, i) ~ (c - (i-1)/2)^i / i!, so start from a narrow window
        // around that root and widen only if it does not bracket the answer
        let x = r as f64;
        let guess = match i {
            1 => x,
            2 => (2.0 * x).sqrt() + 0.5,
            3 => (6.0 * x).cbrt() + 1.0,
            4 => (24.0 * x).sqrt().sqrt() + 1.5,
            _ => f64::NAN,
        };
        if guess.is_finite() {
            let g = (guess as u64).clamp(lo, hi);
            let (a, b) = (g.saturating_sub(2).max(lo), (g + 2).min(hi));
            if fits(a) && (b == hi || !fits(b + 1)) {
                (lo, hi) = (a, b);
            }
        }
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if fits(mid) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        out[i as usize - 1] = lo as Vertex;
        r -= binom(lo, i).expect("accepted by the search");
        upper = lo;
    }
}

/// Samples `G^{d+1}(n, p)` with the generator seeded by `spec.seed`.
pub fn sample(spec: &SampleSpec) -> Result<Hypergraph, SamplerError> {
    sample_with(spec.d, spec.n, spec.p, &mut SplitMix64::new(spec.seed))
}

/// Samples with an explicit generator.
pub fn sample_with(d: usize, n: usize, p: f64, rng: &mut SplitMix64) -> Result<Hypergraph, SamplerError> {
    let total = SampleSpec::new(d, n, p, 0).validate()?;
    let k = d + 1;
    let mut flat: Vec<Vertex> = Vec::new();
    let mut edge = vec![0; k];
    if p == 0.0 || total == 0 {
        return Ok(Hypergraph::from_colex_unchecked(d, n, flat));
    }
    if p == 1.0 {
        flat.reserve(total as usize * k);
        for r in 0..total {
            unrank_into(r, n, &mut edge);
            flat.extend_from_slice(&edge);
        }
        return Ok(Hypergraph::from_colex_unchecked(d, n, flat));
    }
    let expected = total as f64 * p;
    flat.reserve(((expected + 4.0 * expected.sqrt() + 8.0) as usize).min(1 << 26) * k);
    let log_q = (-p).ln_1p();
    let mut pos: u128 = 0;
    loop {
        let u = rng.next_open01();
        let gap = (u.ln() / log_q).floor();
        let remaining = total - pos;
        if !(gap < remaining as f64) {
            break;
        }
        let gap = gap as u128;
        if gap >= remaining {
            break;
        }
        pos += gap;
        unrank_into(pos, n, &mut edge);
        flat.extend_from_slice(&edge);
        pos += 1;
        if pos >= total {
            break;
        }
    }
    Ok(Hypergraph::from_colex_unchecked(d, n, flat))
}

/// `C(n, d+1) · p`.
pub fn expected_edge_count(spec: &SampleSpec) -> Result<f64, SamplerError> {
    let total = spec.validate()?;
    Ok(total as f64 * spec.p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_core::RngCore;

    #[test]
    fn unrank_examples() {
        assert_eq!(unrank(0, 4, 1).unwrap(), vec![0, 1]);
        assert_eq!(unrank(2, 4, 1).unwrap(), vec![1, 2]);
        assert!(matches!(unrank(6, 4, 1), Err(SamplerError::RankOutOfRange { .. })));
    }

    #[test]
    fn unrank_agrees_with_plain_search_at_large_n() {
        // reference: binary search on exact binomials, element by element
        let reference = |mut r: u128, n: u64, k: u64| -> Vec<Vertex> {
            let mut out = vec![0; k as usize];
            let mut upper = n;
            for i in (1..=k).rev() {
                let (mut lo, mut hi) = (i - 1, upper - 1);
                while lo < hi {
                    let mid = lo + (hi - lo).div_ceil(2);
                    if binomial_u128(mid, i).unwrap() <= r {
                        lo = mid;
                    } else {
                        hi = mid - 1;
                    }
                }
                out[i as usize - 1] = lo as Vertex;
                r -= binomial_u128(lo, i).unwrap();
                upper = lo;
            }
            out
        };
        let mut rng = SplitMix64::new(31);
        for (n, d) in [(1usize << 21, 2usize), (3_000_000, 1), (70_000, 3), (5000, 5), (1 << 17, 3)] {
            let total = potential_edges(n, d).unwrap();
            for r in [0, 1, total - 1, total / 2].into_iter().chain((0..500).map(|_| {
                (((rng.next_u64() as u128) << 64) | rng.next_u64() as u128) % total
            })) {
                let e = unrank(r, n, d).unwrap();
                assert_eq!(e, reference(r, n as u64, d as u64 + 1), "rank {r}");
                assert_eq!(rank(&e, n, d).unwrap(), r);
            }
        }
    }

    #[test]
    fn colex_list_for_n4() {
        // oracle: all pairs sorted by (max, min)
        let mut pairs: Vec<Vec<u32>> = (0..4u32).flat_map(|b| (0..b).map(move |a| vec![a, b])).collect();
        pairs.sort_by_key(|e| (e[1], e[0]));
        for (r, e) in pairs.iter().enumerate() {
            assert_eq!(&unrank(r as u128, 4, 1).unwrap(), e);
            assert_eq!(rank(e, 4, 1).unwrap(), r as u128);
        }
    }

    #[test]
    fn large_ranks_round_trip() {
        let n = 1_000_000;
        let total = potential_edges(n, 4).unwrap();
        for r in [0, 1, total / 3, total - 1] {
            let e = unrank(r, n, 4).unwrap();
            assert_eq!(rank(&e, n, 4).unwrap(), r);
        }
        assert!(potential_edges(1 << 30, 6).is_err());
    }

    #[test]
    fn degenerate_probabilities() {
        let g = sample(&SampleSpec::new(2, 5, 0.0, 1)).unwrap();
        assert_eq!(g.edge_count(), 0);
        let g = sample(&SampleSpec::new(2, 5, 1.0, 1)).unwrap();
        assert_eq!(g.edge_count(), 10);
        assert!(sample(&SampleSpec::new(2, 5, 1.5, 1)).is_err());
        assert!(sample(&SampleSpec::new(1, 1, 0.5, 1)).unwrap().edge_count() == 0);
    }

    #[test]
    fn expected_counts() {
        let e = expected_edge_count(&SampleSpec::new(2, 5, 0.1, 0)).unwrap();
        assert!((e - 1.0).abs() < 1e-12);
        assert_eq!(expected_edge_count(&SampleSpec::new(2, 5, 0.0, 0)).unwrap(), 0.0);
    }

    #[test]
    fn deterministic() {
        let spec = SampleSpec::new(2, 200, 0.001, 99);
        assert_eq!(sample(&spec).unwrap(), sample(&spec).unwrap());
    }
}
