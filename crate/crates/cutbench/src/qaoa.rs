//! Depth-1 QAOA analytics.
//!
//! For unit-weight graphs the expected cut of a depth-1 circuit decomposes
//! edge by edge: with `d_u + 1, d_v + 1` the endpoint degrees and `λ_uv`
//! their common-neighbor count, the cut probability is
//!
//! ```text
//! p(γ,β) = ½ + ¼·sin4β·sinγ·(cos^{d_u}γ + cos^{d_v}γ)
//!            − ¼·sin²2β·cos^{d_u+d_v−2λ}γ·(1 − cos^λ2γ)
//! ```
//!
//! The best angles live in γ ∈ [−π/2, π/2), β ∈ [−π/4, π/4) and are found
//! by grid search; triangle-free regular graphs additionally have the exact
//! optimum `(|E|/2)(1 + d^{−1/2}((d−1)/d)^{(d−1)/2})`. A statevector
//! simulator provides the ground truth for small instances and is the only
//! path for weighted graphs, where the per-edge formula does not apply.
//!
//! Exponents are carried as floats in log space throughout, so the same
//! code serves both a 20-vertex instance and a family member whose degree
//! has eighty digits.

use crate::error::{Error, Result};
use crate::families::{self, KarloffParams};
use crate::graph::Graph;

/// Amplitude budget for the statevector path.
pub const STATEVECTOR_MAX_QUBITS: usize = 24;

pub const GAMMA_LO: f64 = -std::f64::consts::FRAC_PI_2;
pub const BETA_LO: f64 = -std::f64::consts::FRAC_PI_4;

/// An angle pair with its expected cut value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QaoaAngles {
    pub gamma: f64,
    pub beta: f64,
    pub value: f64,
}

/// Grid-search resolution over γ ∈ [−π/2, π/2), β ∈ [−π/4, π/4).
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    gamma_points: usize,
    beta_points: usize,
}

impl GridSpec {
    pub fn new(gamma_points: usize, beta_points: usize) -> Result<GridSpec> {
        if gamma_points < 2 || beta_points < 2 {
            return Err(Error::InvalidArgument(
                "grid needs at least 2 points per axis".into(),
            ));
        }
        Ok(GridSpec {
            gamma_points,
            beta_points,
        })
    }

    pub fn gamma_points(&self) -> usize {
        self.gamma_points
    }

    pub fn beta_points(&self) -> usize {
        self.beta_points
    }

    pub fn gamma(&self, i: usize) -> f64 {
        GAMMA_LO + i as f64 * std::f64::consts::PI / self.gamma_points as f64
    }

    pub fn beta(&self, j: usize) -> f64 {
        BETA_LO + j as f64 * std::f64::consts::FRAC_PI_2 / self.beta_points as f64
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            gamma_points: 1000,
            beta_points: 1000,
        }
    }
}

/// `base^e` for integer-valued float exponents, defined for negative bases
/// by exponent parity (every f64 ≥ 2⁵³ is an even integer).
fn powi_f(base: f64, e: f64) -> f64 {
    debug_assert!(e >= 0.0 && e.fract() == 0.0);
    if e == 0.0 {
        return 1.0;
    }
    if base == 0.0 {
        return 0.0;
    }
    let mag = (e * base.abs().ln()).exp();
    if base < 0.0 && e % 2.0 == 1.0 {
        -mag
    } else {
        mag
    }
}

/// Cut probability with exponents as floats; callers guarantee the
/// integer-valuedness and `λ ≤ min(d_u, d_v)`.
fn edge_cut_prob_raw(gamma: f64, beta: f64, du: f64, dv: f64, lam: f64) -> f64 {
    let c = gamma.cos();
    let hills = 0.25
        * (4.0 * beta).sin()
        * gamma.sin()
        * (powi_f(c, du) + powi_f(c, dv));
    let s2b = (2.0 * beta).sin();
    let valleys = 0.25
        * s2b
        * s2b
        * powi_f(c, du + dv - 2.0 * lam)
        * (1.0 - powi_f((2.0 * gamma).cos(), lam));
    0.5 + hills - valleys
}

/// Probability that depth-1 QAOA cuts an edge whose endpoints have degrees
/// `d_u + 1` and `d_v + 1` and share `λ_uv` neighbors.
pub fn edge_cut_prob(gamma: f64, beta: f64, d_u: u64, d_v: u64, lambda_uv: u64) -> Result<f64> {
    if lambda_uv > d_u.min(d_v) {
        return Err(Error::InvalidArgument(format!(
            "common neighbors λ = {lambda_uv} exceed min(d_u, d_v) = {}",
            d_u.min(d_v)
        )));
    }
    let p = edge_cut_prob_raw(gamma, beta, d_u as f64, d_v as f64, lambda_uv as f64);
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::Inconsistency(format!(
            "cut probability {p} left [0, 1]"
        )));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Expected cut of an edge-homogeneous unit-weight family:
/// `edge_count · p(γ, β)`.
pub fn expected_cut_param(
    edge_count: u64,
    d_u: u64,
    d_v: u64,
    lambda_uv: u64,
    gamma: f64,
    beta: f64,
) -> Result<f64> {
    Ok(edge_count as f64 * edge_cut_prob(gamma, beta, d_u, d_v, lambda_uv)?)
}

/// One edge class: a `(d_u, d_v, λ_uv)` signature and how many edges (by
/// total weight `count`) share it.
#[derive(Debug, Clone, Copy)]
struct EdgeClass {
    du: f64,
    dv: f64,
    lam: f64,
    count: f64,
}

/// Shared grid-search engine. `F(γ,β) = Σ_classes count·p` splits into
/// `total/2 + a(γ)·sin4β − b(γ)·sin²2β`, so each γ row is computed once
/// and swept over β cheaply. The argmax tie-break is lexicographic in the
/// grid indices, which a strict `>` comparison delivers for free.
fn grid_search_classes(classes: &[EdgeClass], spec: &GridSpec) -> QaoaAngles {
    let total: f64 = classes.iter().map(|c| c.count).sum();
    let betas: Vec<(f64, f64, f64)> = (0..spec.beta_points)
        .map(|j| {
            let beta = spec.beta(j);
            let s2b = (2.0 * beta).sin();
            (beta, (4.0 * beta).sin(), s2b * s2b)
        })
        .collect();

    let mut best = QaoaAngles {
        gamma: 0.0,
        beta: 0.0,
        value: f64::NEG_INFINITY,
    };
    for i in 0..spec.gamma_points {
        let gamma = spec.gamma(i);
        let c = gamma.cos();
        let c2 = (2.0 * gamma).cos();
        let sg = gamma.sin();
        let mut a = 0.0;
        let mut b = 0.0;
        for class in classes {
            a += class.count * 0.25 * sg * (powi_f(c, class.du) + powi_f(c, class.dv));
            b += class.count
                * 0.25
                * powi_f(c, class.du + class.dv - 2.0 * class.lam)
                * (1.0 - powi_f(c2, class.lam));
        }
        for &(beta, sin4b, sin2b_sq) in &betas {
            let value = 0.5 * total + a * sin4b - b * sin2b_sq;
            if value > best.value {
                best = QaoaAngles { gamma, beta, value };
            }
        }
    }
    best
}

/// Grid search for an edge-homogeneous family given its shared parameters.
pub fn grid_search_params(
    edge_count: u64,
    d_u: u64,
    d_v: u64,
    lambda_uv: u64,
    spec: &GridSpec,
) -> Result<QaoaAngles> {
    if lambda_uv > d_u.min(d_v) {
        return Err(Error::InvalidArgument(format!(
            "common neighbors λ = {lambda_uv} exceed min(d_u, d_v) = {}",
            d_u.min(d_v)
        )));
    }
    Ok(grid_search_classes(
        &[EdgeClass {
            du: d_u as f64,
            dv: d_v as f64,
            lam: lambda_uv as f64,
            count: edge_count as f64,
        }],
        spec,
    ))
}

/// Grid search on a unit-weight graph, using every edge's true
/// `(d_u, d_v, λ_uv)`. Edges sharing a signature are evaluated once.
pub fn grid_search_graph(g: &Graph, spec: &GridSpec) -> Result<QaoaAngles> {
    if !g.is_unit_weight() {
        return Err(Error::InvalidArgument(
            "the per-edge cut formula needs unit weights; weighted graphs \
             go through the statevector path"
                .into(),
        ));
    }
    let mut signatures: std::collections::HashMap<(u64, u64, u64), u64> =
        std::collections::HashMap::new();
    for e in g.edges() {
        let du = (g.degree(e.u) - 1) as u64;
        let dv = (g.degree(e.v) - 1) as u64;
        let lam = g.common_neighbors(e.u, e.v)? as u64;
        let key = (du.min(dv), du.max(dv), lam);
        *signatures.entry(key).or_insert(0) += 1;
    }
    let mut classes: Vec<EdgeClass> = signatures
        .into_iter()
        .map(|((du, dv, lam), count)| EdgeClass {
            du: du as f64,
            dv: dv as f64,
            lam: lam as f64,
            count: count as f64,
        })
        .collect();
    // Deterministic accumulation order.
    classes.sort_by(|x, y| {
        (x.du, x.dv, x.lam)
            .partial_cmp(&(y.du, y.dv, y.lam))
            .unwrap()
    });
    Ok(grid_search_classes(&classes, spec))
}

fn tf_factor_from_ln_d(ln_d: f64) -> f64 {
    // ((d−1)/d)^{(d−1)/2} → e^{−1/2}; switch to the limit once d is too
    // large to represent.
    let tail = if ln_d > 700.0 {
        -0.5
    } else {
        let d = ln_d.exp();
        if d <= 1.0 {
            return 1.0;
        }
        (d - 1.0) / 2.0 * (-1.0 / d).ln_1p()
    };
    (tail - 0.5 * ln_d).exp()
}

/// Exact depth-1 optimum for a d-regular triangle-free unit-weight graph:
/// `(|E|/2)(1 + (1/√d)·((d−1)/d)^{(d−1)/2})`.
pub fn triangle_free_optimum(d: u64, edge_count: u64) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidArgument(
            "triangle-free optimum needs degree ≥ 1".into(),
        ));
    }
    Ok(edge_count as f64 / 2.0 * (1.0 + tf_factor_from_ln_d((d as f64).ln())))
}

/// How the depth-1 optimum of `J(m, m/2, b)` was obtained.
#[derive(Debug, Clone, Copy)]
pub struct KarloffQaoa {
    /// `F₁ / Max-Cut`.
    pub ratio: f64,
    /// Optimal angles with per-edge value, when the grid route ran.
    pub angles: Option<QaoaAngles>,
    /// True when the triangle-free closed form applied (λ = 0).
    pub closed_form: bool,
}

/// Depth-1 approximation ratio of `J(m, m/2, b)`, entirely in log-safe
/// arithmetic: triangle-free members (λ = 0) use the closed form
/// `F₁/MC = (1 + ε)/(2(1 − 2r))` with `ε = d^{−1/2}((d−1)/d)^{(d−1)/2}`,
/// the rest run the parametric grid search with `d_u = d_v = d − 1`.
pub fn karloff_f1_ratio(p: KarloffParams) -> Result<KarloffQaoa> {
    karloff_f1_ratio_with_grid(p, &GridSpec::default())
}

pub fn karloff_f1_ratio_with_grid(p: KarloffParams, spec: &GridSpec) -> Result<KarloffQaoa> {
    if !p.in_formula_domain() {
        return Err(Error::InvalidArgument(format!(
            "b = {} is outside b < m/4 = {}, where the cut formula is unproven",
            p.b(),
            p.m() as f64 / 4.0
        )));
    }
    let lambda = match families::karloff_common_neighbors(p) {
        Ok(l) => l as f64,
        // Too big for exact arithmetic is in particular nonzero.
        Err(Error::Overflow(_)) => families::karloff_common_neighbors_approx(p),
        Err(e) => return Err(e),
    };
    let ln_d = 2.0 * families::ln_binom(p.m() / 2, p.b());
    let denom = 2.0 * (1.0 - 2.0 * p.r());
    if lambda == 0.0 {
        return Ok(KarloffQaoa {
            ratio: (1.0 + tf_factor_from_ln_d(ln_d)) / denom,
            angles: None,
            closed_form: true,
        });
    }
    // Keep the exponent integer-valued: exact degree while it fits, and
    // beyond 128 bits any nearby f64 is an integer anyway.
    let d = match families::karloff_degree(p) {
        Ok(deg) => deg as f64,
        Err(_) => ln_d.exp(),
    };
    let best = grid_search_classes(
        &[EdgeClass {
            du: d - 1.0,
            dv: d - 1.0,
            lam: lambda,
            count: 1.0,
        }],
        spec,
    );
    Ok(KarloffQaoa {
        // count = 1 makes the grid value a per-edge probability, and
        // F₁/MC = |E|·p / (|E|(1 − 2r)) = p / (1 − 2r).
        ratio: 2.0 * best.value / denom,
        angles: Some(best),
        closed_form: false,
    })
}

/// The m → ∞ depth-1 ratio of the `J(m, m/2, rm)` family: `1/(2 − 4r)`.
pub fn limiting_ratio(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 0.25) {
        return Err(Error::InvalidArgument(format!(
            "overlap fraction must lie in (0, 1/4), got {r}"
        )));
    }
    Ok(1.0 / (2.0 - 4.0 * r))
}

/// Exact depth-1 expectation by full statevector simulation.
///
/// The circuit is `e^{−iβΣXq} · e^{−iγC}` applied to the uniform
/// superposition, with `C(z) = Σ w_ij·[z_i ≠ z_j]`; bit i of the amplitude
/// index is vertex i. The phase sign is the convention under which the
/// result matches the per-edge formula on unit-weight graphs (the opposite
/// sign is the same circuit at −γ).
pub fn statevector_expectation(g: &Graph, gamma: f64, beta: f64) -> Result<f64> {
    let n = g.n();
    if n > STATEVECTOR_MAX_QUBITS {
        return Err(Error::Budget(format!(
            "{n} qubits exceed the statevector budget of {STATEVECTOR_MAX_QUBITS}"
        )));
    }
    let size = 1usize << n;
    let mut cost = vec![0.0f64; size];
    for e in g.edges() {
        let (bu, bv) = (1usize << e.u, 1usize << e.v);
        for (z, c) in cost.iter_mut().enumerate() {
            if (z & bu == 0) != (z & bv == 0) {
                *c += e.w;
            }
        }
    }

    let amp = 1.0 / (size as f64).sqrt();
    let mut re: Vec<f64> = cost.iter().map(|c| (gamma * c).cos() * amp).collect();
    let mut im: Vec<f64> = cost.iter().map(|c| -(gamma * c).sin() * amp).collect();

    let (cb, sb) = (beta.cos(), beta.sin());
    for q in 0..n {
        let mask = 1usize << q;
        for z in 0..size {
            if z & mask == 0 {
                let zz = z | mask;
                let (ar, ai) = (re[z], im[z]);
                let (br, bi) = (re[zz], im[zz]);
                re[z] = cb * ar + sb * bi;
                im[z] = cb * ai - sb * br;
                re[zz] = sb * ai + cb * br;
                im[zz] = -sb * ar + cb * bi;
            }
        }
    }

    Ok((0..size)
        .map(|z| (re[z] * re[z] + im[z] * im[z]) * cost[z])
        .sum())
}

/// Optimum, angles, and ratio against a known maximum cut.
#[derive(Debug, Clone, Copy)]
pub struct QaoaSummary {
    pub f1: f64,
    pub gamma: f64,
    pub beta: f64,
    pub ratio: f64,
}

pub fn qaoa_report(best: &QaoaAngles, maxcut: f64) -> Result<QaoaSummary> {
    if maxcut == 0.0 {
        return Err(Error::InvalidArgument(
            "approximation ratio undefined for zero max-cut".into(),
        ));
    }
    Ok(QaoaSummary {
        f1: best.value,
        gamma: best.gamma,
        beta: best.beta,
        ratio: best.value / maxcut,
    })
}
