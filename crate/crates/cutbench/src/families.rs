//! Instance families and their closed-form quantities.
//!
//! Two families carry the benchmark. Subset intersection graphs
//! `J(m, m/2, b)` put one vertex on every (m/2)-subset of an m-element
//! ground set and join subsets sharing exactly `b` elements; they are the
//! worst known inputs for SDP hyperplane rounding. The `q3t` series of
//! strongly regular graphs `(n, k, λ, μ) = (4(3t+1), 3(t+1), 2, t+1)` has
//! second eigenvalue exactly `−k/3`, which pins both the SDP optimum and
//! the rounding ratio. Perturbed-weight variants keep a topology and
//! redraw weights as `1 + σZ`.
//!
//! Counting formulas are evaluated in exact 128-bit integer arithmetic and
//! return an explicit overflow error beyond that range; log-space variants
//! for asymptotic work live in the `qaoa` module.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::Stream;

/// Default cap on generated vertex counts.
pub const DEFAULT_VERTEX_BUDGET: usize = 10_000;

/// Exact binomial coefficient, or an overflow error.
pub fn binom(a: u64, c: u64) -> Result<u128> {
    if c > a {
        return Ok(0);
    }
    let c = c.min(a - c);
    let mut res: u128 = 1;
    for i in 1..=c {
        // The running product stays divisible by i at every step.
        res = res
            .checked_mul((a - c + i) as u128)
            .ok_or_else(|| Error::Overflow(format!("C({a}, {c}) exceeds 128 bits")))?
            / i as u128;
    }
    Ok(res)
}

/// Natural log of a binomial coefficient, for ranges where [`binom`] overflows.
pub fn ln_binom(a: u64, c: u64) -> f64 {
    if c > a {
        return f64::NEG_INFINITY;
    }
    let c = c.min(a - c);
    (1..=c)
        .map(|i| (((a - c + i) as f64) / i as f64).ln())
        .sum()
}

/// Parameters `(m, b)` of the subset intersection graph `J(m, m/2, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KarloffParams {
    m: u64,
    b: u64,
}

impl KarloffParams {
    pub fn new(m: u64, b: u64) -> Result<KarloffParams> {
        if m < 2 || !m.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "m must be even and at least 2, got {m}"
            )));
        }
        if b > m / 2 {
            return Err(Error::InvalidArgument(format!(
                "overlap b = {b} exceeds subset size m/2 = {}",
                m / 2
            )));
        }
        Ok(KarloffParams { m, b })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// Overlap fraction r = b/m.
    pub fn r(&self) -> f64 {
        self.b as f64 / self.m as f64
    }

    /// True when `b < m/4`, the range where the cut and ratio formulas hold.
    pub fn in_formula_domain(&self) -> bool {
        4 * self.b < self.m
    }

    fn require_formula_domain(&self) -> Result<()> {
        if self.in_formula_domain() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "b = {} is outside b < m/4 = {}, where the closed forms are unproven",
                self.b,
                self.m as f64 / 4.0
            )))
        }
    }
}

/// All (m/2)-subsets of `0..m` as bitmasks, in lexicographic order of their
/// sorted element lists. This ordering is the stable vertex numbering for
/// every generated instance.
pub(crate) fn half_subsets(m: u64) -> Vec<u64> {
    let half = (m / 2) as usize;
    let mut current: Vec<u64> = (0..half as u64).collect();
    let mut out = Vec::new();
    loop {
        out.push(current.iter().fold(0u64, |acc, &e| acc | (1 << e)));
        // Advance to the next combination in lexicographic order.
        let mut i = half;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != m - (half - i) as u64 {
                break;
            }
        }
        current[i] += 1;
        for j in i + 1..half {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Generates `J(m, m/2, b)` under the default vertex budget.
pub fn karloff_generate(p: KarloffParams) -> Result<Graph> {
    karloff_generate_with_budget(p, DEFAULT_VERTEX_BUDGET)
}

/// Generates `J(m, m/2, b)`: one vertex per (m/2)-subset, edges between
/// subsets intersecting in exactly `b` elements.
pub fn karloff_generate_with_budget(p: KarloffParams, budget: usize) -> Result<Graph> {
    let n = binom(p.m, p.m / 2)?;
    if n > budget as u128 {
        return Err(Error::Budget(format!(
            "J({}, {}, {}) has {n} vertices, over the budget of {budget}",
            p.m,
            p.m / 2,
            p.b
        )));
    }
    let masks = half_subsets(p.m);
    let mut edges = Vec::new();
    for i in 0..masks.len() {
        for j in i + 1..masks.len() {
            if (masks[i] & masks[j]).count_ones() as u64 == p.b {
                edges.push((i, j, 1.0));
            }
        }
    }
    Graph::new(masks.len(), edges)
}

/// Common degree of `J(m, m/2, b)`: `C(m/2, b)²`.
pub fn karloff_degree(p: KarloffParams) -> Result<u128> {
    let c = binom(p.m / 2, p.b)?;
    c.checked_mul(c)
        .ok_or_else(|| Error::Overflow("degree exceeds 128 bits".into()))
}

/// Edge count of `J(m, m/2, b)`.
pub fn karloff_edge_count(p: KarloffParams) -> Result<u128> {
    let n = binom(p.m, p.m / 2)?;
    let d = karloff_degree(p)?;
    (n / 2)
        .checked_mul(d)
        .ok_or_else(|| Error::Overflow("edge count exceeds 128 bits".into()))
}

fn binom_signed(a: u64, c: i128) -> Result<u128> {
    if c < 0 || c > a as i128 {
        return Ok(0);
    }
    binom(a, c as u64)
}

/// Number of common neighbors shared by the endpoints of every edge of
/// `J(m, m/2, b)`:
/// `Σ_k C(b,k) · C(m/2−b, b−k)² · C(b, m/2−2b+k)`.
pub fn karloff_common_neighbors(p: KarloffParams) -> Result<u128> {
    let half = p.m / 2;
    let mut total: u128 = 0;
    for k in 0..=p.b {
        // Vanishing factors short-circuit before any big binomial is built,
        // so the triangle-free regime (all terms zero) never overflows.
        let tail = binom_signed(p.b, half as i128 - 2 * p.b as i128 + k as i128)?;
        if tail == 0 {
            continue;
        }
        let middle = binom_signed(half - p.b, (p.b - k) as i128)?;
        if middle == 0 {
            continue;
        }
        let term = binom(p.b, k)?
            .checked_mul(middle)
            .and_then(|x| x.checked_mul(middle))
            .and_then(|x| x.checked_mul(tail))
            .ok_or_else(|| Error::Overflow("common-neighbor count exceeds 128 bits".into()))?;
        total = total
            .checked_add(term)
            .ok_or_else(|| Error::Overflow("common-neighbor count exceeds 128 bits".into()))?;
    }
    Ok(total)
}

/// Log-space common-neighbor count for parameter ranges beyond exact range.
pub fn karloff_common_neighbors_approx(p: KarloffParams) -> f64 {
    let half = p.m / 2;
    let mut total = 0.0f64;
    for k in 0..=p.b {
        let tail_idx = half as i128 - 2 * p.b as i128 + k as i128;
        if tail_idx < 0 || tail_idx > p.b as i128 || p.b - k > half - p.b {
            continue;
        }
        let ln_term = ln_binom(p.b, k)
            + 2.0 * ln_binom(half - p.b, p.b - k)
            + ln_binom(p.b, tail_idx as u64);
        total += ln_term.exp();
    }
    total
}

/// Exact maximum cut of `J(m, m/2, b)` for `b < m/4`:
/// `(n/2) · C(m/2,b)² · (1 − 2b/m)`, always an integer.
pub fn karloff_maxcut(p: KarloffParams) -> Result<u128> {
    p.require_formula_domain()?;
    let n = binom(p.m, p.m / 2)?;
    let d = karloff_degree(p)?;
    let num = (n / 2)
        .checked_mul(d)
        .and_then(|x| x.checked_mul((p.m - 2 * p.b) as u128))
        .ok_or_else(|| Error::Overflow("max-cut formula exceeds 128 bits".into()))?;
    if num % p.m as u128 != 0 {
        return Err(Error::Inconsistency(
            "max-cut formula did not divide exactly".into(),
        ));
    }
    Ok(num / p.m as u128)
}

/// Hyperplane-rounding ratio of `J(m, m/2, b)` with the optimal embedding.
#[derive(Debug, Clone, Copy)]
pub struct GwRatio {
    /// Angle between adjacent embedding vectors, `arccos(4b/m − 1)`.
    pub theta: f64,
    /// `(θ/π) / (1 − 2b/m)`.
    pub ratio: f64,
}

pub fn karloff_gw_ratio(p: KarloffParams) -> Result<GwRatio> {
    p.require_formula_domain()?;
    if p.b == 0 {
        // Antipodal embedding: every edge is cut with probability 1.
        return Ok(GwRatio {
            theta: std::f64::consts::PI,
            ratio: 1.0,
        });
    }
    let cos_theta = 4.0 * p.b as f64 / p.m as f64 - 1.0;
    let theta = cos_theta.acos();
    Ok(GwRatio {
        theta,
        ratio: theta / std::f64::consts::PI / (1.0 - 2.0 * p.b as f64 / p.m as f64),
    })
}

/// Minimizes `f(θ) = (2/π)·θ/(1−cos θ)` over `(0, π]` by golden section.
///
/// Returns `(θ*, f(θ*))`; the minimizer is the angle whose rounding ratio
/// is the worst possible, `f(θ*) ≈ 0.8786`.
pub fn minimize_theta() -> (f64, f64) {
    let f = |t: f64| (2.0 / std::f64::consts::PI) * t / (1.0 - t.cos());
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.5, std::f64::consts::PI);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > 1e-12 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let theta = 0.5 * (lo + hi);
    (theta, f(theta))
}

/// Rounding used by [`karloff_worst_b`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorstBRounding {
    /// `⌈(cos θ* + 1)·m/4⌉` with the exact minimizer θ*.
    Ceiling,
    /// `⌊0.077·m⌋`, the hand-rounded coefficient; keeps b ≥ 1 for m ≥ 14.
    Floor,
}

/// The overlap `b` that makes `J(m, m/2, b)` (near) worst for hyperplane
/// rounding. Requires m ≥ 12 even so the triangle-free machinery applies.
pub fn karloff_worst_b(m: u64, rounding: WorstBRounding) -> Result<u64> {
    if m < 12 || !m.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "worst-b needs even m ≥ 12, got {m}"
        )));
    }
    let b = match rounding {
        WorstBRounding::Ceiling => {
            let (theta, _) = minimize_theta();
            ((theta.cos() + 1.0) * m as f64 / 4.0).ceil() as u64
        }
        WorstBRounding::Floor => (0.077 * m as f64).floor() as u64,
    };
    Ok(b)
}

/// Strongly-regular parameters: every pair of adjacent vertices shares λ
/// neighbors, every non-adjacent distinct pair shares μ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct SrgParams {
    pub n: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

impl SrgParams {
    pub fn new(n: u64, k: u64, lambda: u64, mu: u64) -> Result<SrgParams> {
        if k == 0 || k + 1 >= n {
            return Err(Error::InvalidArgument(format!(
                "degree k = {k} must satisfy 0 < k < n − 1 = {}",
                n.saturating_sub(1)
            )));
        }
        // Counting edges between a vertex's neighborhood and the rest.
        if k * (k - lambda - 1) != (n - k - 1) * mu {
            return Err(Error::InvalidArgument(format!(
                "parameters ({n}, {k}, {lambda}, {mu}) violate k(k−λ−1) = (n−k−1)μ"
            )));
        }
        Ok(SrgParams { n, k, lambda, mu })
    }

    pub fn edge_count(&self) -> u64 {
        self.n * self.k / 2
    }
}

fn isqrt_u128(v: u128) -> u128 {
    if v < 2 {
        return v;
    }
    let mut x = 1u128 << (v.ilog2() / 2 + 1);
    loop {
        let y = (x + v / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// The two non-principal eigenvalues of any graph with parameters `s`:
/// `½[(λ−μ) ± √((λ−μ)² + 4(k−μ))]`, returned as `(ξ₁, ξ₂)` with ξ₁ ≥ ξ₂.
///
/// When the discriminant is a perfect square both values are computed in
/// integer arithmetic, so families like q3t get `ξ₂ = −k/3` exactly.
pub fn srg_eigenvalues(s: SrgParams) -> Result<(f64, f64)> {
    let diff = s.lambda as i128 - s.mu as i128;
    let disc = diff * diff + 4 * (s.k as i128 - s.mu as i128);
    if disc < 0 {
        return Err(Error::InvalidArgument(format!(
            "parameters ({}, {}, {}, {}) have negative discriminant, not realizable",
            s.n, s.k, s.lambda, s.mu
        )));
    }
    let root = isqrt_u128(disc as u128);
    if (root * root) as i128 == disc {
        // diff and √disc always share parity here, so these are integers.
        let root = root as i128;
        Ok((((diff + root) / 2) as f64, ((diff - root) / 2) as f64))
    } else {
        let root = (disc as f64).sqrt();
        Ok(((diff as f64 + root) / 2.0, (diff as f64 - root) / 2.0))
    }
}

/// The q3t strongly-regular family at index t.
#[derive(Debug, Clone, Copy)]
pub struct Q3t {
    pub params: SrgParams,
    pub edge_count: u64,
    /// `2|E|/3`, an exact integer for every t; the SDP value, and the true
    /// maximum cut for all but a handful of exceptional instances.
    pub maxcut_bound: u64,
}

/// Parameters `(4(3t+1), 3(t+1), 2, t+1)`.
///
/// t = 0 would give the complete graph K₄ (k = n−1), which the
/// strong-regularity definition excludes, so t ≥ 1 is required.
pub fn q3t_params(t: u64) -> Result<Q3t> {
    if t == 0 {
        return Err(Error::InvalidArgument(
            "t = 0 degenerates to K4, which is not strongly regular".into(),
        ));
    }
    let params = SrgParams::new(4 * (3 * t + 1), 3 * (t + 1), 2, t + 1)?;
    let edge_count = params.edge_count();
    debug_assert_eq!((2 * edge_count) % 3, 0);
    Ok(Q3t {
        params,
        edge_count,
        maxcut_bound: 2 * edge_count / 3,
    })
}

/// Redraws every edge weight as `1 + σ·Z`, Z standard normal, in stored
/// edge order from the seeded stream. Any existing weights are discarded;
/// only the topology survives.
pub fn perturb_weights(g: &Graph, sigma: f64, seed: u64) -> Result<Graph> {
    if sigma < 0.0 || sigma.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "perturbation scale must be non-negative, got {sigma}"
        )));
    }
    let mut stream = Stream::new(seed);
    let weights: Vec<f64> = g
        .edges()
        .iter()
        .map(|_| 1.0 + sigma * stream.normal())
        .collect();
    g.with_weights(&weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(6, 3).unwrap(), 20);
        assert_eq!(binom(10, 0).unwrap(), 1);
        assert_eq!(binom(3, 5).unwrap(), 0);
        assert_eq!(binom(300, 3).unwrap(), 4_455_100);
        assert!(binom(300, 150).is_err());
        let exact = binom(60, 30).unwrap() as f64;
        assert!((ln_binom(60, 30) - exact.ln()).abs() < 1e-10);
    }

    #[test]
    fn subset_order_is_lexicographic() {
        let masks = half_subsets(4);
        // {0,1}, {0,2}, {0,3}, {1,2}, {1,3}, {2,3}
        assert_eq!(masks, vec![0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100]);
    }

    #[test]
    fn generate_j631() {
        let g = karloff_generate(KarloffParams::new(6, 1).unwrap()).unwrap();
        assert_eq!(g.n(), 20);
        assert_eq!(g.edge_count(), 90);
        assert_eq!(g.check_regular(), Some(9));
    }

    #[test]
    fn generate_j1052() {
        let g = karloff_generate(KarloffParams::new(10, 2).unwrap()).unwrap();
        assert_eq!(g.n(), 252);
        assert_eq!(g.edge_count(), 12_600);
        assert_eq!(g.check_regular(), Some(100));
    }

    #[test]
    fn b_zero_is_a_perfect_matching() {
        let g = karloff_generate(KarloffParams::new(6, 0).unwrap()).unwrap();
        assert_eq!(g.check_regular(), Some(1));
        assert_eq!(g.edge_count(), g.n() / 2);
    }

    #[test]
    fn budget_is_enforced() {
        let p = KarloffParams::new(16, 1).unwrap();
        assert!(matches!(
            karloff_generate(p),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn degree_formula() {
        assert_eq!(karloff_degree(KarloffParams::new(6, 1).unwrap()).unwrap(), 9);
        assert_eq!(karloff_degree(KarloffParams::new(12, 2).unwrap()).unwrap(), 225);
        assert_eq!(karloff_degree(KarloffParams::new(8, 0).unwrap()).unwrap(), 1);
    }

    #[test]
    fn common_neighbor_formula() {
        assert_eq!(
            karloff_common_neighbors(KarloffParams::new(12, 1).unwrap()).unwrap(),
            0
        );
        assert_eq!(
            karloff_common_neighbors(KarloffParams::new(6, 1).unwrap()).unwrap(),
            4
        );
        assert_eq!(
            karloff_common_neighbors(KarloffParams::new(10, 2).unwrap()).unwrap(),
            36
        );
        assert_eq!(
            karloff_common_neighbors(KarloffParams::new(6, 0).unwrap()).unwrap(),
            0
        );
    }

    #[test]
    fn common_neighbor_approx_matches_exact() {
        for (m, b) in [(6, 1), (10, 2), (12, 2), (14, 3)] {
            let exact = karloff_common_neighbors(KarloffParams::new(m, b).unwrap()).unwrap();
            let approx = karloff_common_neighbors_approx(KarloffParams::new(m, b).unwrap());
            assert!(
                (approx - exact as f64).abs() <= 1e-9 * exact as f64 + 1e-9,
                "({m},{b}): {approx} vs {exact}"
            );
        }
    }

    #[test]
    fn maxcut_formula() {
        assert_eq!(karloff_maxcut(KarloffParams::new(6, 1).unwrap()).unwrap(), 60);
        assert_eq!(karloff_maxcut(KarloffParams::new(8, 1).unwrap()).unwrap(), 420);
        let p = KarloffParams::new(8, 0).unwrap();
        assert_eq!(karloff_maxcut(p).unwrap(), binom(8, 4).unwrap() / 2);
        assert!(karloff_maxcut(KarloffParams::new(6, 2).unwrap()).is_err());
    }

    #[test]
    fn gw_ratio_examples() {
        let r = karloff_gw_ratio(KarloffParams::new(6, 1).unwrap()).unwrap();
        assert!((r.ratio - 0.9123).abs() < 5e-5);
        let r = karloff_gw_ratio(KarloffParams::new(10, 2).unwrap()).unwrap();
        assert!((r.ratio - 0.9402).abs() < 5e-5);
        let r = karloff_gw_ratio(KarloffParams::new(12, 1).unwrap()).unwrap();
        assert!((r.ratio - 0.8787).abs() < 5e-5);
        assert_eq!(
            karloff_gw_ratio(KarloffParams::new(8, 0).unwrap()).unwrap().ratio,
            1.0
        );
    }

    #[test]
    fn theta_star() {
        let (theta, alpha) = minimize_theta();
        assert!((theta - 2.33112).abs() < 1e-5);
        assert!(alpha > 0.878 && alpha < 0.879);
        assert!(((theta.cos() + 1.0) / 4.0 - 0.0777).abs() < 1e-4);
    }

    #[test]
    fn worst_b_examples() {
        assert_eq!(karloff_worst_b(12, WorstBRounding::Ceiling).unwrap(), 1);
        assert_eq!(karloff_worst_b(100, WorstBRounding::Ceiling).unwrap(), 8);
        assert_eq!(karloff_worst_b(300, WorstBRounding::Ceiling).unwrap(), 24);
        assert_eq!(karloff_worst_b(100, WorstBRounding::Floor).unwrap(), 7);
        assert!(karloff_worst_b(10, WorstBRounding::Ceiling).is_err());
        assert!(karloff_worst_b(13, WorstBRounding::Ceiling).is_err());
    }

    #[test]
    fn q3t_examples() {
        let q = q3t_params(1).unwrap();
        assert_eq!(
            (q.params.n, q.params.k, q.params.lambda, q.params.mu),
            (16, 6, 2, 2)
        );
        assert_eq!(q.edge_count, 48);
        assert_eq!(q.maxcut_bound, 32);
        let q = q3t_params(5).unwrap();
        assert_eq!(
            (q.params.n, q.params.k, q.params.lambda, q.params.mu),
            (64, 18, 2, 6)
        );
        let q = q3t_params(9).unwrap();
        assert_eq!(
            (q.params.n, q.params.k, q.params.lambda, q.params.mu),
            (112, 30, 2, 10)
        );
        assert!(q3t_params(0).is_err());
    }

    #[test]
    fn srg_eigenvalue_examples() {
        let s = SrgParams::new(16, 6, 2, 2).unwrap();
        assert_eq!(srg_eigenvalues(s).unwrap(), (2.0, -2.0));
        // Every q3t member has ξ₂ = −k/3 exactly.
        for t in 1..50 {
            let q = q3t_params(t).unwrap();
            let (_, xi2) = srg_eigenvalues(q.params).unwrap();
            assert_eq!(xi2, -((q.params.k / 3) as f64));
        }
        let c5 = SrgParams::new(5, 2, 0, 1).unwrap();
        let (xi1, xi2) = srg_eigenvalues(c5).unwrap();
        assert!((xi1 - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
        assert!((xi2 - (-(5f64.sqrt()) - 1.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn srg_params_validation() {
        assert!(SrgParams::new(4, 3, 2, 1).is_err()); // complete graph
        assert!(SrgParams::new(16, 6, 2, 3).is_err()); // identity fails
    }

    #[test]
    fn perturbation_contract() {
        let g = karloff_generate(KarloffParams::new(6, 1).unwrap()).unwrap();
        let same = perturb_weights(&g, 0.0, 5).unwrap();
        assert!(same.is_unit_weight());
        let a = perturb_weights(&g, 0.1, 7).unwrap();
        let b = perturb_weights(&g, 0.1, 7).unwrap();
        for (x, y) in a.edges().iter().zip(b.edges()) {
            assert_eq!(x.w.to_bits(), y.w.to_bits());
        }
        let mean: f64 = a.edges().iter().map(|e| e.w).sum::<f64>() / 90.0;
        assert!((mean - 1.0).abs() < 4.0 * 0.1 / 90f64.sqrt());
        assert!(perturb_weights(&g, -0.5, 1).is_err());
    }
}
