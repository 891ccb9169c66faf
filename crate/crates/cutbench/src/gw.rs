//! The Goemans–Williamson pipeline: SDP embeddings, hyperplane rounding,
//! a low-rank solver for arbitrary weighted graphs, and optimality
//! certificates.
//!
//! The SDP relaxation of Max-Cut maximizes `½ Σ w_ij (1 − xᵢ·xⱼ)` over unit
//! vectors. Rounding by a random hyperplane cuts edge (i, j) with
//! probability `arccos(xᵢ·xⱼ)/π`, so the expected cut has the closed form
//! [`hp_expectation`]. For the two benchmark families the optimal embedding
//! is known analytically; everything else goes through [`bm_solve`], a
//! low-rank factorization ascent whose output is trusted only when its dual
//! certificate closes the gap.

use crate::error::{Error, Result};
use crate::families::{self, KarloffParams, SrgParams};
use crate::graph::{CutAssignment, Graph};
use crate::rng::Stream;
use crate::spectral::{self, SquareMatrix};

/// Largest graph [`bm_solve`] accepts.
pub const BM_BUDGET: usize = 2000;

/// One unit vector per vertex; the SDP solution `Y = XᵀX` in factored form.
#[derive(Debug, Clone)]
pub struct Embedding {
    vectors: Vec<Vec<f64>>,
}

impl Embedding {
    /// Validates a common dimension ≥ 1 and unit row norms (within 10⁻⁸).
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Embedding> {
        let dim = match vectors.first() {
            Some(v) if !v.is_empty() => v.len(),
            _ => {
                return Err(Error::InvalidArgument(
                    "embedding needs at least one vector of dimension ≥ 1".into(),
                ))
            }
        };
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "vector {i} has dimension {}, expected {dim}",
                    v.len()
                )));
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-8 {
                return Err(Error::InvalidArgument(format!(
                    "vector {i} has norm {norm}, not a unit vector"
                )));
            }
        }
        Ok(Embedding { vectors })
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    /// Inner product of two vertex vectors; compensated summation kicks in
    /// for high dimensions where naive accumulation loses digits.
    pub fn dot(&self, u: usize, v: usize) -> f64 {
        dot(&self.vectors[u], &self.vectors[v])
    }

    /// Text export: one row per vertex, 17-significant-digit columns.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.vectors {
            let cols: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            out.push_str(&cols.join(" "));
            out.push('\n');
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    if a.len() > 500 {
        kahan_sum(a.iter().zip(b).map(|(x, y)| x * y))
    } else {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }
}

fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

/// The analytically optimal embedding of `J(m, m/2, b)`: vertex S gets the
/// vector with entries `+1/√m` on S and `−1/√m` off S. Every edge's inner
/// product is `4b/m − 1` exactly.
pub fn karloff_embedding(p: KarloffParams) -> Result<Embedding> {
    let m = p.m();
    let scale = 1.0 / (m as f64).sqrt();
    let vectors: Vec<Vec<f64>> = families::half_subsets(m)
        .into_iter()
        .map(|mask| {
            (0..m)
                .map(|i| if mask & (1 << i) != 0 { scale } else { -scale })
                .collect()
        })
        .collect();
    Embedding::new(vectors)
}

/// An SDP-optimal embedding of a strongly regular graph, built from the
/// eigenspace of the smallest eigenvalue ξ₂.
#[derive(Debug, Clone)]
pub struct SrgEmbedding {
    pub embedding: Embedding,
    pub params: SrgParams,
    pub xi2: f64,
    /// SDP value of the embedding, `(|E|/2)(1 − ξ₂/k)`.
    pub z_p: f64,
}

/// Embeds a primitive strongly regular graph on the unit sphere so that
/// every edge's inner product is `ξ₂/k`; the associated SDP value
/// `(|E|/2)(1 − ξ₂/k)` is optimal for the relaxation.
pub fn srg_embedding(g: &Graph) -> Result<SrgEmbedding> {
    let params = g
        .check_srg()
        .ok_or_else(|| Error::InvalidArgument("graph is not strongly regular".into()))?;
    if !g.is_connected() || !g.complement_is_connected() {
        return Err(Error::InvalidArgument(
            "imprimitive strongly regular graph: graph or complement is disconnected".into(),
        ));
    }
    let (_, xi2) = families::srg_eigenvalues(params)?;
    let a = SquareMatrix::adjacency(g);
    let cluster_tol = spectral::default_cluster_tol(&a);
    let (mut rows, r) = spectral::eigenspace_rows(&a, xi2, cluster_tol)?;

    // On a vertex-transitive spectrum every projector row has norm √(r/n);
    // real deviation means the eigenspace was mis-clustered.
    let expected_norm = (r as f64 / g.n() as f64).sqrt();
    for (i, row) in rows.iter_mut().enumerate() {
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - expected_norm).abs() >= 1e-6 {
            return Err(Error::Inconsistency(format!(
                "projector row {i} has norm {norm}, expected {expected_norm}; \
                 eigenspace clustering looks wrong"
            )));
        }
        for x in row.iter_mut() {
            *x /= norm;
        }
    }
    let embedding = Embedding::new(rows)?;

    let k = params.k as f64;
    for e in g.edges() {
        let ip = embedding.dot(e.u, e.v);
        if (ip - xi2 / k).abs() > 1e-8 {
            return Err(Error::Inconsistency(format!(
                "edge ({}, {}) inner product {ip} differs from ξ₂/k = {}",
                e.u,
                e.v,
                xi2 / k
            )));
        }
    }
    let z_p = g.edge_count() as f64 / 2.0 * (1.0 - xi2 / k);
    Ok(SrgEmbedding {
        embedding,
        params,
        xi2,
        z_p,
    })
}

/// Expected cut of hyperplane rounding: `Σ (w_ij/π)·arccos(xᵢ·xⱼ)`.
pub fn hp_expectation(g: &Graph, e: &Embedding) -> Result<f64> {
    if e.len() != g.n() {
        return Err(Error::InvalidArgument(format!(
            "embedding has {} vectors for {} vertices",
            e.len(),
            g.n()
        )));
    }
    Ok(kahan_sum(g.edges().iter().map(|edge| {
        let ip = e.dot(edge.u, edge.v).clamp(-1.0, 1.0);
        edge.w / std::f64::consts::PI * ip.acos()
    })))
}

/// One random hyperplane: sides are the signs of projections onto a
/// standard normal direction (zero projections resolve to +1).
pub fn hyperplane_round(e: &Embedding, seed: u64) -> CutAssignment {
    let mut stream = Stream::new(seed);
    let normal: Vec<f64> = (0..e.dim()).map(|_| stream.normal()).collect();
    let sides: Vec<i8> = e
        .vectors()
        .iter()
        .map(|v| if dot(v, &normal) < 0.0 { -1 } else { 1 })
        .collect();
    CutAssignment::new(sides).expect("signs are ±1")
}

/// Primal/dual evidence that an SDP solution is optimal.
///
/// The dual bound is `z_D(ζ) = (Σw)/2 + ¼·Σζᵢ`, valid whenever
/// `A_w + diag(ζ)` is positive semidefinite; `min_eig_slack` reports how
/// close that matrix is to losing semidefiniteness.
#[derive(Debug, Clone)]
pub struct SdpCertificate {
    /// Primal objective of the embedding; absent for dual-only checks.
    pub primal_value: Option<f64>,
    pub dual_vector: Vec<f64>,
    pub dual_value: f64,
    pub min_eig_slack: f64,
}

#[derive(Debug, Clone)]
pub struct BmOptions {
    /// Factorization rank; default `⌈√(2n)⌉ + 1`, above which local maxima
    /// of this SDP class are global.
    pub rank: Option<usize>,
    pub seed: u64,
    pub max_iters: usize,
    /// Duality-gap acceptance threshold; default `10⁻⁴·max(1, z_P)`.
    pub gap_tol: Option<f64>,
    /// PSD slack acceptance threshold; default `10⁻⁷·‖A_w‖∞`.
    pub psd_tol: Option<f64>,
}

impl Default for BmOptions {
    fn default() -> Self {
        BmOptions {
            rank: None,
            seed: 0,
            max_iters: 50_000,
            gap_tol: None,
            psd_tol: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BmSolution {
    pub embedding: Embedding,
    pub certificate: SdpCertificate,
    pub certified: bool,
    /// Whether the gradient criterion was met within the iteration budget.
    pub converged: bool,
    pub iterations: usize,
    pub restarts_used: usize,
}

struct Factor {
    x: Vec<f64>, // n × r, row-major
    n: usize,
    r: usize,
}

impl Factor {
    fn random(n: usize, r: usize, stream: &mut Stream) -> Factor {
        let mut x = vec![0.0; n * r];
        for row in x.chunks_mut(r) {
            loop {
                for slot in row.iter_mut() {
                    *slot = stream.normal();
                }
                let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > 1e-12 {
                    for slot in row.iter_mut() {
                        *slot /= norm;
                    }
                    break;
                }
            }
        }
        Factor { x, n, r }
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.r..(i + 1) * self.r]
    }

    /// `M = A_w X`: row i is the weighted sum of i's neighbor vectors.
    fn neighbor_sums(&self, g: &Graph) -> Vec<f64> {
        let mut m = vec![0.0; self.n * self.r];
        for e in g.edges() {
            for c in 0..self.r {
                m[e.u * self.r + c] += e.w * self.x[e.v * self.r + c];
                m[e.v * self.r + c] += e.w * self.x[e.u * self.r + c];
            }
        }
        m
    }

    /// SDP objective `½ Σ w (1 − xᵢ·xⱼ)`.
    fn objective(&self, g: &Graph) -> f64 {
        let cross: f64 = g
            .edges()
            .iter()
            .map(|e| e.w * dot(self.row(e.u), self.row(e.v)))
            .sum();
        0.5 * (g.total_weight() - cross)
    }
}

/// Low-rank SDP ascent with a dual certificate.
///
/// Projected gradient ascent over the product of unit spheres with an
/// Armijo backtracking line search; afterwards the stationarity multipliers
/// `ζᵢ = −(A_w X)ᵢ·xᵢ` are tested as a dual solution. The dual's PSD slack
/// degrades linearly with the stationarity residual, so when the slack test
/// alone fails at the standard tolerance the ascent resumes with a tighter
/// target before giving up. One fresh random restart is attempted if the
/// first run fails certification.
pub fn bm_solve(g: &Graph, opts: &BmOptions) -> Result<BmSolution> {
    let n = g.n();
    if n > BM_BUDGET {
        return Err(Error::Budget(format!(
            "{n} vertices exceed the solver budget {BM_BUDGET}"
        )));
    }
    let rank = opts
        .rank
        .unwrap_or_else(|| (2.0 * n as f64).sqrt().ceil() as usize + 1)
        .clamp(1, n.max(1));
    let psd_tol = opts.psd_tol.unwrap_or_else(|| 1e-7 * g.adjacency_inf_norm());

    let mut best: Option<BmSolution> = None;
    for restart in 0..2 {
        let mut stream = Stream::new(opts.seed.wrapping_add(restart as u64));
        let mut factor = Factor::random(n, rank, &mut stream);
        let mut grad_tol = 1e-7 * g.total_abs_weight();
        let mut budget = opts.max_iters;
        let mut iterations = 0;
        let solution = loop {
            let (converged, used) = ascend(g, &mut factor, budget, grad_tol);
            budget = budget.saturating_sub(used);
            iterations += used;
            let (sol, gap_ok, slack_ok) =
                certify_factor(g, &factor, opts, psd_tol, converged, iterations, restart)?;
            if sol.certified || !converged || budget == 0 {
                break sol;
            }
            if gap_ok && !slack_ok && grad_tol > 1e-13 {
                // Stationary to spec but the dual is not yet feasible;
                // resume toward a tighter stationarity target.
                grad_tol /= 16.0;
                continue;
            }
            break sol;
        };
        let better = match &best {
            None => true,
            Some(b) => {
                solution.certificate.primal_value.unwrap_or(f64::NEG_INFINITY)
                    > b.certificate.primal_value.unwrap_or(f64::NEG_INFINITY)
            }
        };
        if better {
            best = Some(solution);
        }
        if best.as_ref().is_some_and(|b| b.certified) {
            break;
        }
    }
    Ok(best.expect("at least one restart ran"))
}

fn ascend(g: &Graph, factor: &mut Factor, max_iters: usize, grad_tol: f64) -> (bool, usize) {
    let n = factor.n;
    let r = factor.r;
    let mut step = 1.0 / (1.0 + g.adjacency_inf_norm());
    let mut value = factor.objective(g);
    let mut converged = false;
    let mut iterations = 0;

    for _ in 0..max_iters {
        iterations += 1;
        let m = factor.neighbor_sums(g);
        // Riemannian gradient: project −½M onto each sphere's tangent.
        let mut grad = vec![0.0; n * r];
        let mut grad_sq = 0.0;
        for i in 0..n {
            let xi = factor.row(i);
            let mi = &m[i * r..(i + 1) * r];
            let radial: f64 = dot(xi, mi);
            for c in 0..r {
                let gc = -0.5 * (mi[c] - radial * xi[c]);
                grad[i * r + c] = gc;
                grad_sq += gc * gc;
            }
        }
        if grad_sq.sqrt() <= grad_tol {
            converged = true;
            break;
        }

        // Backtracking Armijo line search along the projected gradient.
        step *= 2.0;
        let mut accepted = false;
        for _ in 0..60 {
            let mut trial = vec![0.0; n * r];
            for i in 0..n {
                let mut norm_sq = 0.0;
                for c in 0..r {
                    let v = factor.x[i * r + c] + step * grad[i * r + c];
                    trial[i * r + c] = v;
                    norm_sq += v * v;
                }
                let norm = norm_sq.sqrt();
                for c in 0..r {
                    trial[i * r + c] /= norm;
                }
            }
            let trial_factor = Factor { x: trial, n, r };
            let trial_value = trial_factor.objective(g);
            if trial_value >= value + 1e-4 * step * grad_sq {
                *factor = trial_factor;
                value = trial_value;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // The search direction no longer improves at representable
            // step sizes; treat as stationary.
            converged = true;
            break;
        }
    }
    (converged, iterations)
}

fn certify_factor(
    g: &Graph,
    factor: &Factor,
    opts: &BmOptions,
    psd_tol: f64,
    converged: bool,
    iterations: usize,
    restart: usize,
) -> Result<(BmSolution, bool, bool)> {
    let n = factor.n;
    let r = factor.r;
    let m = factor.neighbor_sums(g);
    let zeta: Vec<f64> = (0..n)
        .map(|i| -dot(factor.row(i), &m[i * r..(i + 1) * r]))
        .collect();
    let z_p = factor.objective(g);
    let z_d = g.total_weight() / 2.0 + 0.25 * zeta.iter().sum::<f64>();
    let mut shifted = SquareMatrix::adjacency(g);
    for (i, &z) in zeta.iter().enumerate() {
        shifted.set(i, i, shifted.get(i, i) + z);
    }
    let slack = spectral::min_eigenvalue(&shifted)?;

    let gap_tol = opts.gap_tol.unwrap_or_else(|| 1e-4 * z_p.abs().max(1.0));
    let gap_ok = z_d - z_p <= gap_tol;
    let slack_ok = slack >= -psd_tol;

    let vectors: Vec<Vec<f64>> = (0..n).map(|i| factor.row(i).to_vec()).collect();
    let solution = BmSolution {
        embedding: Embedding::new(vectors)?,
        certificate: SdpCertificate {
            primal_value: Some(z_p),
            dual_vector: zeta,
            dual_value: z_d,
            min_eig_slack: slack,
        },
        certified: gap_ok && slack_ok,
        converged,
        iterations,
        restarts_used: restart,
    };
    Ok((solution, gap_ok, slack_ok))
}

/// Evaluates a caller-supplied dual vector: objective `(Σw)/2 + ¼Σζ` and
/// the PSD slack of `A_w + diag(ζ)`. No optimization happens.
pub fn dual_check(g: &Graph, zeta: &[f64]) -> Result<SdpCertificate> {
    if zeta.len() != g.n() {
        return Err(Error::InvalidArgument(format!(
            "dual vector length {} for {} vertices",
            zeta.len(),
            g.n()
        )));
    }
    let z_d = g.total_weight() / 2.0 + 0.25 * zeta.iter().sum::<f64>();
    let mut shifted = SquareMatrix::adjacency(g);
    for (i, &z) in zeta.iter().enumerate() {
        shifted.set(i, i, shifted.get(i, i) + z);
    }
    let slack = spectral::min_eigenvalue(&shifted)?;
    Ok(SdpCertificate {
        primal_value: None,
        dual_vector: zeta.to_vec(),
        dual_value: z_d,
        min_eig_slack: slack,
    })
}

/// Rounding report for one embedding: the expected cut, the embedding's own
/// SDP value, and the resulting approximation ratios.
#[derive(Debug, Clone)]
pub struct GwSummary {
    pub hp: f64,
    /// `½ Σ w (1 − xᵢ·xⱼ)` of the supplied embedding.
    pub primal_value: f64,
    /// `HP / maxcut` when the true optimum is known.
    pub ratio: Option<f64>,
    /// `HP / z_P(embedding)`; a valid lower bound on the true ratio when
    /// the embedding is SDP-optimal, since Max-Cut ≤ z_P.
    pub ratio_lower_bound: Option<f64>,
}

pub fn gw_report(g: &Graph, e: &Embedding, maxcut: Option<f64>) -> Result<GwSummary> {
    let hp = hp_expectation(g, e)?;
    let cross: f64 = g
        .edges()
        .iter()
        .map(|edge| edge.w * e.dot(edge.u, edge.v))
        .sum();
    let primal_value = 0.5 * (g.total_weight() - cross);
    let ratio = match maxcut {
        Some(mc) => {
            if mc == 0.0 {
                return Err(Error::InvalidArgument(
                    "approximation ratio undefined for zero max-cut".into(),
                ));
            }
            Some(hp / mc)
        }
        None => None,
    };
    let ratio_lower_bound = (primal_value > 0.0).then(|| hp / primal_value);
    Ok(GwSummary {
        hp,
        primal_value,
        ratio,
        ratio_lower_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::karloff_generate;

    fn j631() -> Graph {
        karloff_generate(KarloffParams::new(6, 1).unwrap()).unwrap()
    }

    #[test]
    fn karloff_embedding_inner_products() {
        let p = KarloffParams::new(6, 1).unwrap();
        let g = j631();
        let e = karloff_embedding(p).unwrap();
        assert_eq!(e.len(), 20);
        assert_eq!(e.dim(), 6);
        for edge in g.edges() {
            assert!((e.dot(edge.u, edge.v) - (-1.0 / 3.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn matching_embedding_is_antipodal() {
        let p = KarloffParams::new(6, 0).unwrap();
        let g = karloff_generate(p).unwrap();
        let e = karloff_embedding(p).unwrap();
        for edge in g.edges() {
            assert!((e.dot(edge.u, edge.v) + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hp_on_j631_matches_closed_form() {
        let g = j631();
        let e = karloff_embedding(KarloffParams::new(6, 1).unwrap()).unwrap();
        let hp = hp_expectation(&g, &e).unwrap();
        let expect = 90.0 * (-1.0f64 / 3.0).acos() / std::f64::consts::PI;
        assert!((hp - expect).abs() < 1e-9);
        assert!((hp - 54.7355).abs() < 1e-3);
    }

    #[test]
    fn identical_vectors_cut_nothing() {
        let g = Graph::new(2, [(0, 1, 1.0)]).unwrap();
        let e = Embedding::new(vec![vec![1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(hp_expectation(&g, &e).unwrap(), 0.0);
        let cut = hyperplane_round(&e, 3);
        assert_eq!(cut.sides()[0], cut.sides()[1]);
    }

    #[test]
    fn antipodal_pair_always_cut() {
        let e = Embedding::new(vec![vec![1.0], vec![-1.0]]).unwrap();
        for seed in 0..20 {
            let cut = hyperplane_round(&e, seed);
            assert_ne!(cut.sides()[0], cut.sides()[1]);
        }
    }

    #[test]
    fn bm_solves_single_edge() {
        let g = Graph::new(2, [(0, 1, 1.0)]).unwrap();
        let sol = bm_solve(&g, &BmOptions::default()).unwrap();
        let z_p = sol.certificate.primal_value.unwrap();
        assert!((z_p - 1.0).abs() < 1e-6, "z_P = {z_p}");
        assert!(sol.certified);
        assert!((sol.embedding.dot(0, 1) + 1.0).abs() < 1e-4);
    }

    #[test]
    fn bm_certifies_j631() {
        let g = j631();
        let sol = bm_solve(&g, &BmOptions::default()).unwrap();
        let z_p = sol.certificate.primal_value.unwrap();
        assert!((z_p - 60.0).abs() < 1e-3, "z_P = {z_p}");
        assert!(sol.certified, "gap or slack failed: {:?}", sol.certificate);
    }

    #[test]
    fn dual_check_j631() {
        let g = j631();
        let cert = dual_check(&g, &[3.0; 20]).unwrap();
        assert!((cert.dual_value - 60.0).abs() < 1e-12);
        assert!(cert.min_eig_slack.abs() < 1e-8);
    }

    #[test]
    fn dual_check_k2() {
        let g = Graph::new(2, [(0, 1, 1.0)]).unwrap();
        let cert = dual_check(&g, &[1.0, 1.0]).unwrap();
        assert!((cert.dual_value - 1.0).abs() < 1e-12);
        assert!(cert.min_eig_slack.abs() < 1e-10);
    }

    #[test]
    fn report_ratios() {
        let g = j631();
        let e = karloff_embedding(KarloffParams::new(6, 1).unwrap()).unwrap();
        let s = gw_report(&g, &e, Some(60.0)).unwrap();
        assert!((s.ratio.unwrap() - 0.9123).abs() < 5e-5);
        assert!((s.primal_value - 60.0).abs() < 1e-9);
        assert!(gw_report(&g, &e, Some(0.0)).is_err());
    }

    #[test]
    fn embedding_validation() {
        assert!(Embedding::new(vec![]).is_err());
        assert!(Embedding::new(vec![vec![0.5]]).is_err());
        assert!(Embedding::new(vec![vec![1.0], vec![1.0, 0.0]]).is_err());
    }
}
