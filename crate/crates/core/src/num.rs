//! Scalar abstraction shared by the numeric modules.
//!
//! Everything that evaluates a closed form (predictions, Poisson masses,
//! branching-process distributions) is written against [`Real`] so it runs on
//! `f32` and `f64` alike. Exact quantities (densities) use `Ratio<u64>`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar usable by the prediction and statistics code.
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }

    fn of_u64(x: u64) -> Self {
        Self::from_u64(x).expect("u64 is representable")
    }

    fn of_u128(x: u128) -> Self {
        Self::from_u128(x).expect("u128 is representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `ln(k!)`, exact summation for small `k`, Stirling series above.
pub fn ln_factorial<T: Real>(k: u64) -> T {
    if k < 64 {
        let mut acc = T::zero();
        for i in 2..=k {
            acc = acc + T::of_u64(i).ln();
        }
        return acc;
    }
    let x = T::of_u64(k);
    let half = T::of(0.5);
    let tau = T::of(2.0) * T::PI();
    (x + half) * x.ln() - x + half * tau.ln() + (T::of(12.0) * x).recip()
        - (T::of(360.0) * x * x * x).recip()
}

/// `k!` as an exact integer, `None` on overflow.
pub fn factorial_u128(k: u64) -> Option<u128> {
    (2..=k as u128).try_fold(1u128, |acc, i| acc.checked_mul(i))
}

/// Binomial coefficient in 128 bits, `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        let num = (n - i) as u128;
        let den = (i + 1) as u128;
        let g = gcd(acc, den);
        let (a, dd) = (acc / g, den / g);
        let g2 = gcd(num, dd);
        let (nn, dd) = (num / g2, dd / g2);
        debug_assert_eq!(dd, 1);
        acc = a.checked_mul(nn)?;
    }
    Some(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Poisson probability mass `e^{-λ} λ^k / k!`, computed in log space.
pub fn poisson_pmf<T: Real>(lambda: T, k: u64) -> T {
    if lambda <= T::zero() {
        return if k == 0 { T::one() } else { T::zero() };
    }
    (T::of_u64(k) * lambda.ln() - lambda - ln_factorial::<T>(k)).exp()
}

/// Upper tail `P(X > k)` for `X ~ Poisson(λ)`, summed directly so small
/// tails keep full relative precision.
pub fn poisson_upper_tail<T: Real>(lambda: T, k: u64) -> T {
    if lambda <= T::zero() {
        return T::zero();
    }
    let mut j = k + 1;
    let mut term = poisson_pmf(lambda, j);
    let mut acc = T::zero();
    // terms increase up to the mode, then decay geometrically
    loop {
        acc = acc + term;
        j += 1;
        let next = term * lambda / T::of_u64(j);
        if T::of_u64(j) > lambda && next <= acc * T::epsilon() {
            break;
        }
        if j > k + 100_000 {
            break;
        }
        term = next;
    }
    acc.min(T::one())
}

/// Poisson law capped at `cap`: entries `0..=cap` are exact masses and the
/// final entry carries `P(X > cap)`.
pub fn poisson_capped<T: Real>(lambda: T, cap: u64) -> Vec<T> {
    let mut out: Vec<T> = (0..=cap).map(|k| poisson_pmf(lambda, k)).collect();
    out.push(poisson_upper_tail(lambda, cap));
    out
}
