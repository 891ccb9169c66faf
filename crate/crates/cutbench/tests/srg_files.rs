//! End-to-end checks on ingested graph6 instances: three strongly regular
//! graphs with known parameters, spectra, and cut values.  The two
//! 16-vertex graphs share parameters (16, 6, 2, 2); the 40-vertex one is
//! the generalized-quadrangle graph with parameters (40, 12, 2, 4).

use cutbench::families::{srg_eigenvalues, SrgParams};
use cutbench::gw::{bm_solve, hp_expectation, srg_embedding, BmOptions};
use cutbench::io::read_graph6_lines;
use cutbench::maxcut::{brute_force, certify, local_search, MaxCutStatus};
use cutbench::spectral::{default_cluster_tol, symmetric_eigen, SquareMatrix};
use cutbench::Graph;

struct Fixture {
    name: &'static str,
    params: (u64, u64, u64, u64),
    edges: usize,
    /// Distinct adjacency eigenvalues with multiplicities, ascending.
    spectrum: &'static [(f64, usize)],
    maxcut: f64,
}

const FIXTURES: [Fixture; 3] = [
    Fixture {
        name: "shrikhande.g6",
        params: (16, 6, 2, 2),
        edges: 48,
        spectrum: &[(-2.0, 9), (2.0, 6), (6.0, 1)],
        maxcut: 32.0,
    },
    Fixture {
        name: "rook4.g6",
        params: (16, 6, 2, 2),
        edges: 48,
        spectrum: &[(-2.0, 9), (2.0, 6), (6.0, 1)],
        maxcut: 32.0,
    },
    Fixture {
        name: "gq33.g6",
        params: (40, 12, 2, 4),
        edges: 240,
        spectrum: &[(-4.0, 15), (2.0, 24), (12.0, 1)],
        maxcut: 160.0,
    },
];

fn load(name: &str) -> Graph {
    let text = std::fs::read_to_string(format!("tests/data/{name}")).unwrap();
    let mut graphs = read_graph6_lines(&text).unwrap();
    assert_eq!(graphs.len(), 1);
    graphs.pop().unwrap()
}

#[test]
fn recognized_parameters_and_counts() {
    for f in &FIXTURES {
        let g = load(f.name);
        let (n, k, lambda, mu) = f.params;
        assert_eq!(g.n(), n as usize, "{}", f.name);
        assert_eq!(g.edge_count(), f.edges, "{}", f.name);
        let s = g
            .check_srg()
            .unwrap_or_else(|| panic!("{} not detected as strongly regular", f.name));
        assert_eq!((s.n, s.k, s.lambda, s.mu), (n, k, lambda, mu), "{}", f.name);
        assert_eq!(s.edge_count(), f.edges as u64);
    }
}

#[test]
fn spectra_match_parameter_predictions() {
    for f in &FIXTURES {
        let g = load(f.name);
        let s = g.check_srg().unwrap();
        let (xi1, xi2) = srg_eigenvalues(s).unwrap();
        assert_eq!(xi2, f.spectrum[0].0, "{}", f.name);
        assert_eq!(xi1, f.spectrum[1].0, "{}", f.name);

        let a = SquareMatrix::adjacency(&g);
        let clusters = symmetric_eigen(&a).unwrap().multiplicities(default_cluster_tol(&a));
        assert_eq!(clusters.len(), f.spectrum.len(), "{}", f.name);
        for ((value, count), (expected, mult)) in clusters.iter().zip(f.spectrum) {
            assert!(
                (value - expected).abs() < 1e-8,
                "{}: eigenvalue {value} vs {expected}",
                f.name
            );
            assert_eq!(count, mult, "{}: multiplicity at {expected}", f.name);
        }
    }
}

#[test]
fn eigenspace_embedding_attains_relaxation_value() {
    for f in &FIXTURES {
        let g = load(f.name);
        let srg = srg_embedding(&g).unwrap();
        let k = f.params.1 as f64;
        let expected = f.edges as f64 / 2.0 * (1.0 - f.spectrum[0].0 / k);
        assert!(
            (srg.z_p - expected).abs() < 1e-9,
            "{}: z_p {} vs {expected}",
            f.name,
            srg.z_p
        );
        // The embedding's edge inner products should all equal ξ₂/k, so the
        // rounding expectation has the closed form |E|·arccos(ξ₂/k)/π.
        let hp = hp_expectation(&g, &srg.embedding).unwrap();
        let closed = f.edges as f64 * (f.spectrum[0].0 / k).acos() / std::f64::consts::PI;
        assert!(
            (hp - closed).abs() < 1e-9,
            "{}: hp {hp} vs {closed}",
            f.name
        );
    }
}

#[test]
fn cut_values_match_known_optima() {
    for f in &FIXTURES {
        let g = load(f.name);
        let heuristic = local_search(&g, 20, 0).unwrap();
        assert_eq!(heuristic.value, f.maxcut, "{}", f.name);
        if g.n() <= 24 {
            let exact = brute_force(&g).unwrap();
            assert_eq!(exact.value, f.maxcut, "{}", f.name);
        }
        // Each known value coincides with the relaxation bound 2|E|/3, so a
        // matching heuristic cut is certifiably optimal.
        let bound = 2.0 * f.edges as f64 / 3.0;
        assert_eq!(bound, f.maxcut);
        let certified = certify(&g, heuristic, bound).unwrap();
        assert_eq!(certified.status, MaxCutStatus::Certified, "{}", f.name);
    }
}

#[test]
fn bm_solver_certifies_sixteen_vertex_instances() {
    for name in ["shrikhande.g6", "rook4.g6"] {
        let g = load(name);
        let sol = bm_solve(&g, &BmOptions::default()).unwrap();
        assert!(sol.certified, "{name} failed to certify");
        let z_p = sol.certificate.primal_value.unwrap();
        assert!(
            (z_p - 32.0).abs() <= 1e-3,
            "{name}: primal value {z_p}"
        );
        assert!(
            sol.certificate.min_eig_slack >= -1e-7 * 6.0,
            "{name}: dual slack {}",
            sol.certificate.min_eig_slack
        );
    }
}

#[test]
fn parameter_siblings_are_distinguished_by_structure() {
    // Same SRG parameters but non-isomorphic: the 4×4 rook graph packs its
    // edges into 4-cliques while the other triangle structure does not.
    let a = load("shrikhande.g6");
    let b = load("rook4.g6");
    let count_k4 = |g: &Graph| {
        let linked = |u: usize, v: usize| g.adj(u).iter().any(|&(w, _)| w == v);
        let mut count = 0usize;
        for e in g.edges() {
            for w in 0..g.n() {
                if w == e.u || w == e.v || !linked(e.u, w) || !linked(e.v, w) {
                    continue;
                }
                for x in w + 1..g.n() {
                    if x != e.u
                        && x != e.v
                        && linked(e.u, x)
                        && linked(e.v, x)
                        && linked(w, x)
                    {
                        count += 1;
                    }
                }
            }
        }
        count / 6
    };
    assert_eq!(count_k4(&b), 8, "rook graph holds two layers of 4-cliques");
    assert_eq!(count_k4(&a), 0, "the Shrikhande graph has no 4-clique");
}

#[test]
fn sixteen_vertex_fixtures_fit_srg_parameter_identity() {
    for f in &FIXTURES {
        let (n, k, lambda, mu) = f.params;
        let s = SrgParams::new(n, k, lambda, mu).unwrap();
        assert_eq!(s.k * (s.k - s.lambda - 1), (s.n - s.k - 1) * s.mu);
    }
}
