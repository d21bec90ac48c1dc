//! Capacity upper bound for the binary causal-adversary channel.
//!
//! For a flip budget `p` and babble fraction `pbar <= p`, the babble-and-push
//! attack caps the rate at `alpha (1 - H(pbar / alpha))` with
//! `alpha = 1 - 4 (p - pbar)`. The bound is the minimum over `pbar in [0, p]`,
//! and that minimum has a closed form: writing the stationarity condition in
//! `a = (1 - 4p + 3x) / x` gives `(a - 1)(a^3 - 11a^2 - 5a - 1) = 0`, whose
//! only admissible root is the real root `a0` of the cubic. The minimiser is
//! `min{p, (1 - 4p) / (a0 - 3)}` and the curve leaves `1 - H(p)` at
//! `p = 1 / (a0 + 1)`.
//!
//! Also here: Plotkin's bound and an exhaustive `A(n, d)` search used to
//! check it.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// One point of the bound comparison curves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundPoint<T> {
    pub p: T,
    /// Optimal babble fraction.
    pub pbar_star: T,
    /// `alpha(p, pbar_star)`, reported as 0 once `p >= 1/4`.
    pub alpha: T,
    /// The causal-adversary upper bound.
    pub c_upper: T,
    /// BSC capacity `1 - H(p)`.
    pub bsc: T,
    /// Gilbert-Varshamov rate `1 - H(2p)`, zero once `2p >= 1/2`.
    pub gv: T,
}

fn check_unit<T: Real>(name: &'static str, x: T, hi: f64, range: &'static str) -> Result<()> {
    if x >= T::zero() && x <= T::lit(hi) {
        Ok(())
    } else {
        Err(Error::out_of_range(name, x.to_f64().unwrap_or(f64::NAN), range))
    }
}

/// `H(x)` with the `0 log 0 = 0` convention; assumes `x` in `[0, 1]`.
pub(crate) fn entropy_bits<T: Real>(x: T) -> T {
    let term = |q: T| if q <= T::zero() { T::zero() } else { -q * q.log2() };
    term(x) + term(T::one() - x)
}

/// Binary entropy in bits.
pub fn binary_entropy<T: Real>(x: T) -> Result<T> {
    check_unit("x", x, 1.0, "[0, 1]")?;
    Ok(entropy_bits(x))
}

fn check_pair<T: Real>(p: T, pbar: T) -> Result<()> {
    check_unit("p", p, 0.25, "[0, 1/4]")?;
    if pbar < T::zero() || pbar > p {
        return Err(Error::out_of_range(
            "pbar",
            pbar.to_f64().unwrap_or(f64::NAN),
            "[0, p]",
        ));
    }
    Ok(())
}

/// `alpha(p, pbar) = 1 - 4 (p - pbar)`, the normalised length left to the
/// babble phase.
pub fn alpha<T: Real>(p: T, pbar: T) -> Result<T> {
    check_pair(p, pbar)?;
    Ok(T::one() - T::lit(4.0) * (p - pbar))
}

/// The objective `alpha (1 - H(pbar / alpha))` at a given babble fraction.
///
/// At `alpha = 0` (only reachable as `p = 1/4, pbar = 0`) the value is 0 by
/// continuity.
pub fn bound_at<T: Real>(p: T, pbar: T) -> Result<T> {
    let a = alpha(p, pbar)?;
    if a <= T::zero() {
        return Ok(T::zero());
    }
    let ratio = (pbar / a).min(T::one());
    Ok(a * (T::one() - entropy_bits(ratio)))
}

/// Derivative of the objective with respect to the babble fraction `x`,
/// `4 + log2(x (1 - 4p + 3x)^3 / (1 - 4p + 4x)^4)`.
///
/// Returns `-inf` at `x = 0`.
pub fn objective_derivative<T: Real>(p: T, x: T) -> Result<T> {
    if !(p >= T::zero() && p < T::lit(0.25)) {
        return Err(Error::out_of_range(
            "p",
            p.to_f64().unwrap_or(f64::NAN),
            "[0, 1/4)",
        ));
    }
    if x < T::zero() || x > p {
        return Err(Error::out_of_range(
            "x",
            x.to_f64().unwrap_or(f64::NAN),
            "(0, p]",
        ));
    }
    if x == T::zero() {
        return Ok(T::neg_infinity());
    }
    let base = T::one() - T::lit(4.0) * p;
    let three = T::lit(3.0);
    let four = T::lit(4.0);
    Ok(four + x.log2() + three * (base + three * x).log2() - four * (base + four * x).log2())
}

/// Real root of `a^3 - 11a^2 - 5a - 1`, about 11.4445.
pub fn a0_constant<T: Real>() -> T {
    let s = T::lit(24.0) * T::lit(33.0).sqrt();
    let c = T::lit(1592.0);
    (T::lit(11.0) + (c + s).cbrt() + (c - s).cbrt()) / T::lit(3.0)
}

/// `1 / (a0 + 1)`: below this budget the bound coincides with `1 - H(p)`.
pub fn bsc_departure_threshold<T: Real>() -> T {
    T::one() / (a0_constant::<T>() + T::one())
}

/// Minimising babble fraction, `min{p, (1 - 4p) / (a0 - 3)}`.
pub fn optimal_pbar<T: Real>(p: T) -> Result<T> {
    check_unit("p", p, 0.25, "[0, 1/4]")?;
    let interior = (T::one() - T::lit(4.0) * p) / (a0_constant::<T>() - T::lit(3.0));
    Ok(p.min(interior).max(T::zero()))
}

/// Upper bound on the capacity at flip fraction `p in [0, 1/2]`.
pub fn capacity_upper<T: Real>(p: T) -> Result<T> {
    check_unit("p", p, 0.5, "[0, 1/2]")?;
    if p >= T::lit(0.25) {
        return Ok(T::zero());
    }
    bound_at(p, optimal_pbar(p)?)
}

pub fn bound_point<T: Real>(p: T) -> Result<BoundPoint<T>> {
    check_unit("p", p, 0.5, "[0, 1/2]")?;
    let (pbar_star, alpha_star) = if p >= T::lit(0.25) {
        (T::zero(), T::zero())
    } else {
        let pb = optimal_pbar(p)?;
        (pb, alpha(p, pb)?)
    };
    Ok(BoundPoint {
        p,
        pbar_star,
        alpha: alpha_star,
        c_upper: capacity_upper(p)?,
        bsc: T::one() - entropy_bits(p),
        gv: if p >= T::lit(0.25) {
            T::zero()
        } else {
            T::one() - entropy_bits(T::lit(2.0) * p)
        },
    })
}

/// One [`BoundPoint`] per grid value.
pub fn bound_curve<T: Real>(p_grid: &[T]) -> Result<Vec<BoundPoint<T>>> {
    p_grid.iter().map(|&p| bound_point(p)).collect()
}

/// Plotkin's bound: a binary code of length `n` and minimum distance
/// `d > n/2` has at most `floor(2d / (2d - n))` codewords.
pub fn plotkin_max(n: usize, d: usize) -> Result<usize> {
    if 2 * d <= n {
        return Err(Error::PlotkinInapplicable { n, d });
    }
    Ok(2 * d / (2 * d - n))
}

/// Largest block length accepted by [`brute_force_a`].
pub const BRUTE_FORCE_MAX_N: usize = 12;

/// Exact `A(n, d)`, the largest binary code of length `n` with minimum
/// distance at least `d`, by maximum-clique search.
///
/// Codes are translated to contain the zero word and permuted so the second
/// codeword is `1^w 0^(n-w)`; the remaining codewords form a clique in the
/// distance->=d graph restricted to words compatible with both. Fast for the
/// Plotkin range `d > n/2`; small `d` at `n` near the limit can take long.
pub fn brute_force_a(n: usize, d: usize) -> Result<usize> {
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge(format!(
            "n = {n} exceeds {BRUTE_FORCE_MAX_N}"
        )));
    }
    if d <= 1 {
        return Ok(1 << n);
    }
    if d > n {
        return Ok(1);
    }
    let size = 1usize << n;
    let adj: Vec<Bitset> = (0..size)
        .map(|v| Bitset::from_fn(size, |w| ((v ^ w) as u32).count_ones() as usize >= d))
        .collect();
    let mut search = CliqueSearch { adj: &adj, best: 0 };
    let mut best_total: usize = 1;
    for w in d..=n {
        let second = (1usize << w) - 1;
        let cand = adj[0].and(&adj[second]);
        search.best = best_total.saturating_sub(2);
        search.expand(cand, 0);
        best_total = best_total.max(search.best + 2);
    }
    Ok(best_total)
}

#[derive(Clone)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn from_fn(size: usize, f: impl Fn(usize) -> bool) -> Self {
        let mut words = vec![0u64; size.div_ceil(64)];
        for i in (0..size).filter(|&i| f(i)) {
            words[i / 64] |= 1 << (i % 64);
        }
        Bitset(words)
    }

    fn and(&self, other: &Bitset) -> Bitset {
        Bitset(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not_in_place(&mut self, other: &Bitset) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }
}

struct CliqueSearch<'a> {
    adj: &'a [Bitset],
    best: usize,
}

impl CliqueSearch<'_> {
    /// Greedy colouring: vertices in colour order with their colour numbers.
    fn colour_sort(&self, p: &Bitset) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut uncoloured = p.clone();
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut q = uncoloured.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                uncoloured.remove(v);
                q.and_not_in_place(&self.adj[v]);
                out.push((v, colour));
            }
        }
        out
    }

    fn expand(&mut self, mut p: Bitset, depth: usize) {
        let order = self.colour_sort(&p);
        for &(v, colour) in order.iter().rev() {
            if depth + colour <= self.best {
                return;
            }
            let next = p.and(&self.adj[v]);
            if next.is_empty() {
                self.best = self.best.max(depth + 1);
            } else {
                self.expand(next, depth + 1);
            }
            p.remove(v);
        }
    }
}
