//! Closed-form asymptotics: regime classification of edge-probability
//! families, first moments, Poisson means, limiting probabilities of `D_l`
//! and the bounds on `μ`.
//!
//! Everything numeric is generic over [`Real`]; `f64` is the usual choice.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::butterfly::{enumerate_marked_types, enumerate_types, ButterflyType, MarkedButterflyType};
use crate::num::{factorial_u128, poisson_pmf, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PredictError {
    #[error("custom families cannot be classified")]
    Custom,
    #[error("n = {0} is too small (need n >= 3 for log log n)")]
    NTooSmall(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot parse family {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("no limit is determined: {0}")]
    Unclassified(String),
}

/// Parametric edge probability `p(n)`.
#[derive(Clone)]
pub enum EdgeProbabilityFamily<T> {
    /// `c · n^{-α}`
    PowerLaw { d: usize, c: T, alpha: T },
    /// `c · n^{-(1+ld)/l}`
    ButterflyWindow { d: usize, l: usize, c: T },
    /// `λ · n^{-d}`
    DoubleJump { d: usize, lambda: T },
    /// `c · log n / n^d`
    LogWindow { d: usize, c: T },
    /// `(d!/v*) · (log n + l·log log n + c) / n^d`
    FineWindow { d: usize, vstar: usize, l: usize, c: T },
    /// Evaluable but never classified.
    Custom { d: usize, name: String, eval: Arc<dyn Fn(u64) -> T + Send + Sync> },
}

impl<T: Real> fmt::Debug for EdgeProbabilityFamily<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: Real> fmt::Display for EdgeProbabilityFamily<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PowerLaw { d, c, alpha } => write!(f, "powerlaw:d={d},c={c},alpha={alpha}"),
            Self::ButterflyWindow { d, l, c } => write!(f, "butterflywindow:d={d},l={l},c={c}"),
            Self::DoubleJump { d, lambda } => write!(f, "doublejump:d={d},lambda={lambda}"),
            Self::LogWindow { d, c } => write!(f, "logwindow:d={d},c={c}"),
            Self::FineWindow { d, vstar, l, c } => write!(f, "finewindow:d={d},vstar={vstar},l={l},c={c}"),
            Self::Custom { d, name, .. } => write!(f, "custom:d={d},name={name}"),
        }
    }
}

impl<T: Real> PartialEq for EdgeProbabilityFamily<T> {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Custom { eval: a, .. }, Self::Custom { eval: b, .. }) => Arc::ptr_eq(a, b),
            (Self::Custom { .. }, _) | (_, Self::Custom { .. }) => false,
            _ => self.to_string() == other.to_string(),
        }
    }
}

fn d_factorial<T: Real>(d: usize) -> T {
    T::of_u128(factorial_u128(d as u64).expect("d is small"))
}

fn ln_ln<T: Real>(n: u64) -> Result<T, PredictError> {
    if n < 3 {
        return Err(PredictError::NTooSmall(n));
    }
    Ok(T::of_u64(n).ln().ln())
}

/// Relative closeness for boundary detection on real parameters.
fn near<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= T::of(1e-12) * a.abs().max(b.abs()).max(T::one())
}

impl<T: Real> EdgeProbabilityFamily<T> {
    pub fn d(&self) -> usize {
        match self {
            Self::PowerLaw { d, .. }
            | Self::ButterflyWindow { d, .. }
            | Self::DoubleJump { d, .. }
            | Self::LogWindow { d, .. }
            | Self::FineWindow { d, .. }
            | Self::Custom { d, .. } => *d,
        }
    }

    pub fn custom(d: usize, name: &str, eval: impl Fn(u64) -> T + Send + Sync + 'static) -> Self {
        Self::Custom { d, name: name.to_string(), eval: Arc::new(eval) }
    }

    pub fn validate(&self) -> Result<(), PredictError> {
        let bad = |m: &str| Err(PredictError::InvalidParameter(m.to_string()));
        if self.d() == 0 {
            return bad("d must be at least 1");
        }
        let positive = |x: T| x > T::zero() && x.is_finite();
        match self {
            Self::PowerLaw { c, alpha, .. } if !positive(*c) || !positive(*alpha) => bad("c and alpha must be positive"),
            Self::ButterflyWindow { l: 0, .. } => bad("butterfly window needs l >= 1"),
            Self::ButterflyWindow { c, .. } if !positive(*c) => bad("c must be positive"),
            Self::DoubleJump { lambda, .. } if !positive(*lambda) => bad("lambda must be positive"),
            Self::LogWindow { c, .. } if !positive(*c) => bad("c must be positive"),
            Self::FineWindow { vstar: 0, .. } => bad("vstar must be at least 1"),
            Self::FineWindow { c, .. } if !c.is_finite() => bad("c must be finite"),
            _ => Ok(()),
        }
    }

    /// Unclamped closed form.
    fn raw(&self, n: u64) -> Result<T, PredictError> {
        let nn = T::of_u64(n);
        let nd = |d: usize| nn.powi(d as i32);
        Ok(match self {
            Self::PowerLaw { c, alpha, .. } => *c * nn.powf(-*alpha),
            Self::ButterflyWindow { d, l, c } => *c * nn.powf(-T::of((1 + l * d) as f64 / *l as f64)),
            Self::DoubleJump { d, lambda } => *lambda / nd(*d),
            Self::LogWindow { d, c } => *c * nn.ln() / nd(*d),
            Self::FineWindow { d, vstar, l, c } => {
                let inner = nn.ln() + T::of_u64(*l as u64) * ln_ln::<T>(n)? + *c;
                d_factorial::<T>(*d) / T::of_u64(*vstar as u64) * inner / nd(*d)
            }
            Self::Custom { eval, .. } => eval(n),
        })
    }

    /// `p(n)` clamped to `[0, 1]`.
    pub fn p(&self, n: u64) -> Result<T, PredictError> {
        let x = self.raw(n)?;
        Ok(if x.is_nan() { T::zero() } else { x.max(T::zero()).min(T::one()) })
    }

    /// Copy with one named parameter replaced (used by sweeps).
    pub fn with_param(&self, key: &str, value: f64) -> Result<Self, PredictError> {
        let mut out = self.clone();
        let as_int = |v: f64| -> Result<usize, PredictError> {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(PredictError::InvalidParameter(format!("{key} must be a non-negative integer")))
            }
        };
        let unknown = || PredictError::InvalidParameter(format!("{key:?} is not a parameter of {self}"));
        match (&mut out, key) {
            (Self::PowerLaw { d, .. }, "d")
            | (Self::ButterflyWindow { d, .. }, "d")
            | (Self::DoubleJump { d, .. }, "d")
            | (Self::LogWindow { d, .. }, "d")
            | (Self::FineWindow { d, .. }, "d") => *d = as_int(value)?,
            (Self::PowerLaw { c, .. }, "c")
            | (Self::ButterflyWindow { c, .. }, "c")
            | (Self::LogWindow { c, .. }, "c")
            | (Self::FineWindow { c, .. }, "c") => *c = T::of(value),
            (Self::PowerLaw { alpha, .. }, "alpha") => *alpha = T::of(value),
            (Self::DoubleJump { lambda, .. }, "lambda") => *lambda = T::of(value),
            (Self::ButterflyWindow { l, .. }, "l") | (Self::FineWindow { l, .. }, "l") => *l = as_int(value)?,
            (Self::FineWindow { vstar, .. }, "vstar") => *vstar = as_int(value)?,
            _ => return Err(unknown()),
        }
        out.validate()?;
        Ok(out)
    }
}

impl<T: Real> FromStr for EdgeProbabilityFamily<T> {
    type Err = PredictError;

    /// Parses `name:key=value,...`, e.g. `finewindow:d=1,vstar=2,l=1,c=0.0`.
    /// Short names: `pl`, `bw`, `dj`, `lw`, `fw`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: String| PredictError::Parse { input: s.to_string(), reason };
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params: Vec<(String, f64)> = Vec::new();
        for kv in rest.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| fail(format!("expected key=value, got {kv:?}")))?;
            let v: f64 = v.trim().parse().map_err(|_| fail(format!("{:?} is not a number", v.trim())))?;
            let k = k.trim().to_ascii_lowercase();
            if params.iter().any(|(q, _)| *q == k) {
                return Err(fail(format!("{k} given twice")));
            }
            params.push((k, v));
        }
        let name = name.trim().to_ascii_lowercase();
        let keys: &[&str] = match name.as_str() {
            "powerlaw" | "pl" => &["d", "c", "alpha"],
            "butterflywindow" | "bw" => &["d", "l", "c"],
            "doublejump" | "dj" => &["d", "lambda"],
            "logwindow" | "lw" => &["d", "c"],
            "finewindow" | "fw" => &["d", "vstar", "l", "c"],
            _ => return Err(fail(format!("unknown family {name:?}"))),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !keys.contains(&k.as_str())) {
            return Err(fail(format!("unexpected parameter {k:?}")));
        }
        let get = |k: &str| {
            params
                .iter()
                .find(|(q, _)| q == k)
                .map(|&(_, v)| v)
                .ok_or_else(|| fail(format!("missing parameter {k}")))
        };
        let int = |k: &str| -> Result<usize, PredictError> {
            let v = get(k)?;
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(fail(format!("{k} must be a non-negative integer")))
            }
        };
        let real = |k: &str| get(k).map(T::of);
        let family = match keys[1] {
            "c" => match keys.len() {
                3 => Self::PowerLaw { d: int("d")?, c: real("c")?, alpha: real("alpha")? },
                _ => Self::LogWindow { d: int("d")?, c: real("c")? },
            },
            "l" => Self::ButterflyWindow { d: int("d")?, l: int("l")?, c: real("c")? },
            "lambda" => Self::DoubleJump { d: int("d")?, lambda: real("lambda")? },
            _ => Self::FineWindow { d: int("d")?, vstar: int("vstar")?, l: int("l")?, c: real("c")? },
        };
        family.validate().map_err(|e| fail(e.to_string()))?;
        Ok(family)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawKind {
    ZeroOne,
    Convergence,
    Unclassified,
}

/// Clauses of the Big-Bang (`p ≪ n^{-d}`), Double-Jump and Big-Crunch
/// (`p ~ C log n / n^d`) classifications.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum Clause {
    /// `p ≪ n^{-(d+1)}`
    BbNoEdges,
    /// `n^{-(1+ld)/l} ≪ p ≪ n^{-(1+(l+1)d)/(l+1)}`
    BbBetween { l: usize },
    /// `n^{-(d+ε)} ≪ p ≪ n^{-d}` for every ε (not reached by the parametric families)
    BbBeforeDoubleJump,
    /// `p ~ c · n^{-(1+ld)/l}`
    BbThreshold { l: usize },
    /// `p ~ λ n^{-d}`
    DoubleJump,
    /// `n^{-d} ≪ p ≪ log n · n^{-d}` (not reached by the parametric families)
    BcBelowWindow,
    /// `log n · n^{-d} ≪ p ≪ n^{-d+ε}` (not reached by the parametric families)
    BcBeyondWindow,
    /// `p ~ C log n / n^d` with `C > d!`
    BcAboveConnectivity,
    /// `p ~ C log n / n^d` with `d!/(v*+1) < C < d!/v*`
    BcBetweenMarked { vstar: usize },
    /// `p ~ (d!/v*) log n / n^d`, `ω → l`, `c(n) → c`
    BcFineThreshold { vstar: usize, l: usize },
    /// `p ≫ n^{-d+ε}` for some ε: outside both ranges
    AboveBc,
    Unclassified { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regime {
    #[serde(flatten)]
    pub clause: Clause,
    pub law: LawKind,
}

impl Regime {
    fn of(clause: Clause) -> Self {
        let law = match &clause {
            Clause::BbNoEdges
            | Clause::BbBetween { .. }
            | Clause::BbBeforeDoubleJump
            | Clause::BcBelowWindow
            | Clause::BcBeyondWindow
            | Clause::BcAboveConnectivity
            | Clause::BcBetweenMarked { .. } => LawKind::ZeroOne,
            Clause::BbThreshold { .. } | Clause::DoubleJump | Clause::BcFineThreshold { .. } => LawKind::Convergence,
            Clause::AboveBc | Clause::Unclassified { .. } => LawKind::Unclassified,
        };
        Self { clause, law }
    }
}

/// Butterfly threshold exponent `(1 + ld)/l`.
fn bb_exponent(d: usize, l: usize) -> f64 {
    (1 + l * d) as f64 / l as f64
}

/// The `l` with `α = (1+ld)/l`, or the `l` with `α` strictly between the
/// exponents of orders `l+1` and `l`, for `d < α < d + 1`.
fn locate_power(d: usize, alpha: f64) -> Result<usize, usize> {
    let l_guess = (1.0 / (alpha - d as f64)).round().max(1.0) as usize;
    for l in l_guess.saturating_sub(1).max(1)..=l_guess + 1 {
        if near(alpha, bb_exponent(d, l)) {
            return Ok(l);
        }
    }
    // (1+ld)/l > α > (1+(l+1)d)/(l+1)  ⇔  l < 1/(α-d) < l+1
    Err((1.0 / (alpha - d as f64)).floor() as usize)
}

pub fn classify<T: Real>(family: &EdgeProbabilityFamily<T>) -> Result<Regime, PredictError> {
    use EdgeProbabilityFamily as F;
    family.validate()?;
    let d = family.d();
    let dfact = factorial_u128(d as u64).expect("small d") as f64;
    let clause = match family {
        F::Custom { .. } => return Err(PredictError::Custom),
        F::PowerLaw { alpha, .. } => {
            let alpha = alpha.to_f64().expect("finite");
            let df = d as f64;
            if near(alpha, df) {
                Clause::DoubleJump
            } else if alpha < df {
                Clause::AboveBc
            } else if near(alpha, df + 1.0) {
                Clause::BbThreshold { l: 1 }
            } else if alpha > df + 1.0 {
                Clause::BbNoEdges
            } else {
                match locate_power(d, alpha) {
                    Ok(l) => Clause::BbThreshold { l },
                    Err(l) => Clause::BbBetween { l },
                }
            }
        }
        F::ButterflyWindow { l, .. } => Clause::BbThreshold { l: *l },
        F::DoubleJump { .. } => Clause::DoubleJump,
        F::LogWindow { c, .. } => {
            let c = c.to_f64().expect("finite");
            if near(c, dfact) {
                Clause::Unclassified {
                    reason: format!("C = d! is a boundary value; it coincides with finewindow:d={d},vstar=1,l=0,c=0"),
                }
            } else if c > dfact {
                Clause::BcAboveConnectivity
            } else {
                // d!/(v*+1) < C < d!/v*  ⇔  v* = floor(d!/C)
                let ratio = dfact / c;
                let vstar = ratio.round() as usize;
                if vstar >= 1 && near(c, dfact / vstar as f64) {
                    Clause::Unclassified {
                        reason: format!(
                            "C = d!/{vstar} is a boundary value; it coincides with finewindow:d={d},vstar={vstar},l=0,c=0"
                        ),
                    }
                } else {
                    Clause::BcBetweenMarked { vstar: ratio.floor() as usize }
                }
            }
        }
        F::FineWindow { vstar, l, .. } => Clause::BcFineThreshold { vstar: *vstar, l: *l },
    };
    Ok(Regime::of(clause))
}

/// `ω(n) = (v*·n^d·p/d! − log n) / log log n`.
pub fn omega_of<T: Real>(family: &EdgeProbabilityFamily<T>, vstar: usize, n: u64) -> Result<T, PredictError> {
    let ll = ln_ln::<T>(n)?;
    if let EdgeProbabilityFamily::FineWindow { vstar: v, l, c, .. } = family {
        if *v == vstar {
            return Ok(T::of_u64(*l as u64) + *c / ll);
        }
    }
    let d = family.d();
    let nn = T::of_u64(n);
    let scaled = T::of_u64(vstar as u64) * nn.powi(d as i32) * family.p(n)? / d_factorial::<T>(d);
    Ok((scaled - nn.ln()) / ll)
}

/// `c_l(n) = (n^d (1+ld)/d!) p(n) − log n − l log log n`.
pub fn c_l_of<T: Real>(family: &EdgeProbabilityFamily<T>, l: usize, n: u64) -> Result<T, PredictError> {
    let ll = ln_ln::<T>(n)?;
    let d = family.d();
    let v = 1 + l * d;
    if let EdgeProbabilityFamily::FineWindow { vstar, l: fl, c, .. } = family {
        if *vstar == v && *fl == l {
            return Ok(*c);
        }
    }
    let nn = T::of_u64(n);
    let scaled = T::of_u64(v as u64) * nn.powi(d as i32) * family.p(n)? / d_factorial::<T>(d);
    Ok(scaled - nn.ln() - T::of_u64(l as u64) * ll)
}

/// `c^δ(l) (n^v / v!) p^l exp(−p v n^d / d!)`, evaluated in log space.
pub fn expected_butterfly_components<T: Real>(t: &ButterflyType, n: u64, p: T) -> T {
    let (d, l) = (t.d, t.order);
    let v = 1 + l * d;
    if l > 0 && p <= T::zero() {
        return T::zero();
    }
    let nn = T::of_u64(n);
    let log = T::of_u64(v as u64) * nn.ln() - T::of_u128(t.automorphisms).ln()
        + T::of_u64(l as u64) * if l > 0 { p.ln() } else { T::zero() }
        - p * T::of_u64(v as u64) * nn.powi(d as i32) / d_factorial::<T>(d);
    log.exp()
}

/// `(c(l,v*,γ)/v!) n^v p^l (1−p)^{v* n^d / d!}`.
pub fn expected_marked_copies<T: Real>(t: &MarkedButterflyType, n: u64, p: T) -> T {
    let (d, l, vstar) = (t.base.d, t.order(), t.vstar());
    let v = 1 + l * d;
    if (l > 0 && p <= T::zero()) || (vstar > 0 && p >= T::one()) {
        return T::zero();
    }
    let nn = T::of_u64(n);
    let exponent = T::of_u64(vstar as u64) * nn.powi(d as i32) / d_factorial::<T>(d);
    let log = T::of_u64(v as u64) * nn.ln() - T::of_u128(t.automorphisms).ln()
        + T::of_u64(l as u64) * if l > 0 { p.ln() } else { T::zero() }
        + exponent * (-p).ln_1p();
    log.exp()
}

/// Poisson mean of components of type `t` at `p ~ c n^{-(1+ld)/l}`:
/// `(c_i/v!) c^l = c^l / a_i`.
pub fn bb_lambda<T: Real>(t: &ButterflyType, c: T) -> T {
    c.powi(t.order as i32) / T::of_u128(t.automorphisms)
}

/// Poisson mean of minimal marked copies of `t` on the fine window:
/// `(c_i/v!) (d!/v*)^l e^{−c}`.
pub fn bc_lambda<T: Real>(t: &MarkedButterflyType, c: T) -> T {
    let ratio = d_factorial::<T>(t.base.d) / T::of_u64(t.vstar() as u64);
    ratio.powi(t.order() as i32) * (-c).exp() / T::of_u128(t.automorphisms)
}

/// The alternative mean `c_i d! / (v! v) e^{−c}` stated alongside the limit
/// of `P(D_l)`; it agrees with [`bc_lambda`] for fully marked types when
/// `l ≤ 1` and differs otherwise.
pub fn bc_lambda_alt<T: Real>(t: &MarkedButterflyType, c: T) -> T {
    let v = T::of_u64((1 + t.order() * t.base.d) as u64);
    d_factorial::<T>(t.base.d) / v * (-c).exp() / T::of_u128(t.automorphisms)
}

/// `Π e^{−λ_i} λ_i^{m_i} / m_i!`.
pub fn sigma_m_limit<T: Real>(lambdas: &[T], m: &[u64]) -> T {
    assert_eq!(lambdas.len(), m.len(), "one count per mean");
    lambdas.iter().zip(m).map(|(&l, &k)| poisson_pmf(l, k)).fold(T::one(), |a, b| a * b)
}

/// Fully marked types of order `l` (all `1 + ld` vertices marked).
pub fn fully_marked_types(d: usize, l: usize) -> Vec<MarkedButterflyType> {
    enumerate_marked_types(d, l, 1 + l * d, true)
}

/// `lim P(D_l)` for a parametric family.
pub fn prob_dl_limit<T: Real>(d: usize, l: usize, family: &EdgeProbabilityFamily<T>) -> Result<T, PredictError> {
    use EdgeProbabilityFamily as F;
    family.validate()?;
    if family.d() != d {
        return Err(PredictError::InvalidParameter(format!("family has d = {}, asked for d = {d}", family.d())));
    }
    let one = Ok(T::one());
    let zero = Ok(T::zero());
    let threshold_bb = |c: T| -> Result<T, PredictError> {
        let total: T = enumerate_types(d, l).iter().map(|t| bb_lambda(t, c)).sum();
        Ok((-total).exp())
    };
    let threshold_bc = |c: T| -> Result<T, PredictError> {
        let total: T = fully_marked_types(d, l).iter().map(|t| bc_lambda(t, c)).sum();
        Ok((-total).exp())
    };
    let df = d as f64;
    match family {
        F::Custom { .. } => Err(PredictError::Custom),
        F::PowerLaw { c, alpha, .. } => {
            let alpha = alpha.to_f64().expect("finite");
            if alpha < df && !near(alpha, df) {
                return one;
            }
            if l == 0 {
                return zero;
            }
            let t = bb_exponent(d, l);
            if near(alpha, t) {
                threshold_bb(*c)
            } else if alpha > t {
                one
            } else {
                zero
            }
        }
        F::ButterflyWindow { l: fl, c, .. } => {
            if l == 0 || *fl > l {
                zero
            } else if *fl == l {
                threshold_bb(*c)
            } else {
                one
            }
        }
        F::DoubleJump { .. } => zero,
        F::LogWindow { c, .. } => {
            // c_l = ((1+ld) C/d! − 1) log n − l log log n
            let coef = (1 + l * d) as f64 * c.to_f64().expect("finite") / factorial_u128(d as u64).unwrap() as f64;
            if near(coef, 1.0) {
                if l == 0 {
                    threshold_bc(T::zero())
                } else {
                    zero
                }
            } else if coef > 1.0 {
                one
            } else {
                zero
            }
        }
        F::FineWindow { vstar, l: fl, c, .. } => {
            let v = 1 + l * d;
            if v > *vstar {
                one
            } else if v < *vstar {
                zero
            } else if *fl > l {
                one
            } else if *fl < l {
                zero
            } else {
                threshold_bc(*c)
            }
        }
    }
}

/// Cutoffs `(n^{d/(1+ld)} (log n)^{−1−ld}, n^{ld/(1+ld)} (log n)^{−l/(1+ld)})`.
/// When `c_l → −∞`, `μ` a.a.s. exceeds anything well below the first; when
/// `c_l → +∞`, it stays below anything well above the second.
pub fn mu_bounds<T: Real>(d: usize, l: usize, n: T) -> Result<(T, T), PredictError> {
    if !(n >= T::of(3.0)) {
        return Err(PredictError::NTooSmall(n.to_u64().unwrap_or(0)));
    }
    let v = T::of_u64((1 + l * d) as u64);
    let (dd, ll) = (T::of_u64(d as u64), T::of_u64(l as u64));
    let ln_n = n.ln();
    let lower = (dd / v * ln_n).exp() * ln_n.powf(-(T::one() + ll * dd));
    let upper = (ll * dd / v * ln_n).exp() * ln_n.powf(-ll / v);
    Ok((lower, upper))
}

/// `d! log n / n^d`, the connectivity threshold.
pub fn connectivity_threshold<T: Real>(d: usize) -> EdgeProbabilityFamily<T> {
    EdgeProbabilityFamily::LogWindow { d, c: d_factorial(d) }
}

/// Named Poisson means for a threshold family: component types for a
/// butterfly window, minimal marked types for a fine window. Keys are hex
/// type codes.
pub fn poisson_means<T: Real>(family: &EdgeProbabilityFamily<T>) -> Result<Vec<(String, T)>, PredictError> {
    family.validate()?;
    match family {
        EdgeProbabilityFamily::ButterflyWindow { d, l, c } => {
            Ok(enumerate_types(*d, *l).iter().map(|t| (t.hex_code(), bb_lambda(t, *c))).collect())
        }
        EdgeProbabilityFamily::PowerLaw { d, c, alpha } => match classify(family)?.clause {
            Clause::BbThreshold { l } => {
                let _ = alpha;
                Ok(enumerate_types(*d, l).iter().map(|t| (t.hex_code(), bb_lambda(t, *c))).collect())
            }
            other => Err(PredictError::Unclassified(format!("no Poisson means off a threshold ({other:?})"))),
        },
        EdgeProbabilityFamily::FineWindow { d, vstar, l, c } => Ok(enumerate_marked_types(*d, *l, *vstar, true)
            .iter()
            .map(|t| (t.hex_code(), bc_lambda(t, *c)))
            .collect()),
        EdgeProbabilityFamily::Custom { .. } => Err(PredictError::Custom),
        _ => Err(PredictError::Unclassified(format!("{family} is not a threshold family"))),
    }
}
