//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any of them fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use cybe_forge::bdtriples::{brute_force_at, enumerate_at, enumerate_triples, BDTriple, TripleType};
use cybe_forge::grading::{alpha_grading, delta_alpha, order_model, order_model_perp, DoubleWindow, VertexData};
use cybe_forge::lie::LieAlgebra;
use cybe_forge::linalg::Subspace;
use cybe_forge::manin::{cartan_spaces, check_cartan_candidate, lagrangian_for_triple, verify_manin, verify_subspace};
use cybe_forge::pipeline::{classify_algebra, load_algebra, ClassificationRecord};
use cybe_forge::rmatrix::{
    is_unitary, solution_from_subalgebra, standard_r3, subalgebra_from_solution, verify_cybe, QuasiTrigSolution,
};
use cybe_forge::roots::{build_root_system, CartanType, RootSystem};
use cybe_forge::uq::hopf::check_hopf;
use cybe_forge::uq::limit::check_limit;
use cybe_forge::uq::presentation::{affine_exponent, kd_exponents, serre_exponent, Mode, Presentation};
use cybe_forge::Scalar;

fn records(label: &str, include_empty: bool) -> (Arc<LieAlgebra>, Vec<ClassificationRecord>) {
    let g = load_algebra(label).unwrap();
    let recs = classify_algebra(&g, None, include_empty).unwrap();
    (g, recs)
}

fn solution(g: &LieAlgebra, r: &ClassificationRecord) -> QuasiTrigSolution {
    QuasiTrigSolution::from_records(g.dim(), &r.solution).unwrap()
}

fn within(start: Instant, limit: Duration, what: &str) {
    let t = start.elapsed();
    assert!(t < limit, "{what} took {t:?}, limit {limit:?}");
}

fn criterion_1() {
    let start = Instant::now();
    let (_, recs) = records("B2", false);
    let nontrivial: Vec<_> = recs.iter().filter(|r| r.nontrivial_polynomial_part).collect();
    assert_eq!(nontrivial.len(), 2);
    let vertices: Vec<&str> = nontrivial.iter().map(|r| r.vertex.as_str()).collect();
    assert_eq!(vertices, ["alpha1", "alpha2"]);
    for r in nontrivial {
        assert_eq!(r.gamma1, [0]);
        assert_eq!(r.gamma2, [2]);
        assert!(r.flags.all(), "{:?}", r.flags);
    }
    within(start, Duration::from_secs(10), "o(5) enumeration");
}

fn criterion_2() {
    let g = load_algebra("B2").unwrap();
    let v = alpha_grading(&g, 1).unwrap();
    let t = enumerate_triples(&v).into_iter().find(|t| t.map == [(0, 2)]).unwrap();
    let c = cartan_spaces(&v, &t);
    let int = |xs: [i64; 5]| xs.map(Scalar::from_int);
    let h1 = g.cartan_from_diagonal(&int([-2, 1, 0, -1, 2])).unwrap();
    let s = Scalar::sqrt_of(5).unwrap();
    let z = Scalar::zero();
    let h2 = g.cartan_from_diagonal(&[z.clone(), s.clone(), z.clone(), -&s, z]).unwrap();
    let l = g.rank();
    let mut pair = h1[..l].to_vec();
    pair.extend_from_slice(&h2[..l]);
    let report = check_cartan_candidate(&c, &Subspace::span(2 * l, vec![pair]));
    assert!(report.isotropic, "{report:?}");
    assert!(report.condf, "{report:?}");
}

/// Shift map `alpha_j -> alpha_{j+1}` on `0..len`.
fn shift(len: usize) -> Vec<(usize, usize)> {
    (0..len).map(|j| (j, j + 1)).collect()
}

fn criterion_3() {
    for n in 2..=4usize {
        let start = Instant::now();
        let g = Arc::new(cybe_forge::lie::build_lie_algebra(&build_root_system(CartanType::A, n).unwrap()).unwrap());
        let v = alpha_grading(&g, n - 1).unwrap();
        let triples = enumerate_triples(&v);
        for (kind, len) in [(TripleType::I, n - 1), (TripleType::II, n)] {
            let t = triples
                .iter()
                .find(|t| t.kind == kind && t.map == shift(len))
                .unwrap_or_else(|| panic!("sl({}) missing {kind} shift triple", n + 1));
            assert_eq!(t.gamma1, (0..len).collect::<Vec<_>>());
            let lag = lagrangian_for_triple(&v, t).unwrap();
            let report = verify_manin(&v, &lag);
            assert!(report.all(), "sl({}) {kind}: {report:?}", n + 1);
        }
        if n == 4 {
            within(start, Duration::from_secs(60), "sl(5) shift triples");
        }
    }
}

fn criterion_4() {
    let start = Instant::now();
    for label in ["A1", "A2", "B2"] {
        let (g, recs) = records(label, true);
        assert!(!recs.is_empty());
        for r in &recs {
            let x = solution(&g, r);
            assert!(verify_cybe(&g, &x), "{label} {} {:?}: CYBE", r.vertex, r.map);
            assert!(is_unitary(&g, &x), "{label} {} {:?}: unitarity", r.vertex, r.map);
        }
        let r3 = standard_r3(&g);
        assert!(verify_cybe(&g, &r3) && is_unitary(&g, &r3));
        assert!(!verify_cybe(&g, &QuasiTrigSolution::zero(g.dim())));
    }
    within(start, Duration::from_secs(300), "CYBE suite");
}

fn criterion_5() {
    for label in ["A2", "B2"] {
        let g = load_algebra(label).unwrap();
        for depth in [2, 3] {
            let w = DoubleWindow::new(depth, g.dim());
            let gram = w.gram(&g);
            for a in 0..g.rank() {
                let v = alpha_grading(&g, a).unwrap();
                let computed = order_model(&v, &w).unwrap().orthogonal(&gram);
                assert_eq!(computed, order_model_perp(&v, &w).unwrap(), "{label} alpha{} depth {depth}", a + 1);
            }
        }
    }
}

fn record_triple(v: &VertexData, r: &ClassificationRecord) -> BDTriple {
    let t = r.triple().unwrap();
    assert_eq!(t.vertex, v.alpha_node());
    t
}

fn criterion_6() {
    for label in ["A1", "A2", "A3", "B2"] {
        let (g, recs) = records(label, true);
        for r in &recs {
            let v = alpha_grading(&g, r.vertex_index().unwrap() - 1).unwrap();
            let delta = delta_alpha(&v);
            assert_eq!(2 * delta.dim(), v.dim_l_alpha() + v.dim_g());
            assert_eq!(r.dim_delta, delta.dim());
            let d = verify_subspace(&v, &delta);
            assert!(d.isotropic && d.half_dimensional && d.subalgebra_closed, "{label} Delta: {d:?}");
            let lag = lagrangian_for_triple(&v, &record_triple(&v, r)).unwrap();
            assert_eq!(lag.space.dim(), r.dim_i_prime);
            let report = verify_manin(&v, &lag);
            assert!(report.all(), "{label} {} {:?}: {report:?}", r.vertex, r.map);
        }
    }
}

fn triple_set(ts: Vec<BDTriple>) -> BTreeSet<(Vec<(usize, usize)>, TripleType)> {
    ts.into_iter().map(|t| (t.map, t.kind)).collect()
}

fn criterion_7() {
    let start = Instant::now();
    let cases = [(CartanType::A, 1), (CartanType::A, 2), (CartanType::A, 3), (CartanType::B, 2), (CartanType::C, 3)];
    for (kind, n) in cases {
        let rs: RootSystem = build_root_system(kind, n).unwrap();
        for node in 1..=n {
            let fast = triple_set(enumerate_at(&rs, node).unwrap());
            let slow = triple_set(brute_force_at(&rs, node).unwrap());
            assert_eq!(fast, slow, "{kind:?}{n} vertex {node}");
        }
    }
    within(start, Duration::from_secs(60), "enumeration oracle");
}

fn round_trip(g: &LieAlgebra, x: &QuasiTrigSolution) {
    let w = subalgebra_from_solution(g, x).unwrap();
    let back = solution_from_subalgebra(g, &w).unwrap();
    assert_eq!(&back, x);
    assert_eq!(subalgebra_from_solution(g, &back).unwrap().space, w.space);
}

fn criterion_8() {
    for label in ["A1", "A2", "B2"] {
        let g = load_algebra(label).unwrap();
        round_trip(&g, &standard_r3(&g));
    }
    for label in ["A2", "B2"] {
        let (g, recs) = records(label, true);
        for r in &recs {
            round_trip(&g, &solution(&g, r));
        }
    }
}

/// `1 + max k` such that `beta + k alpha_i` is a root; the zero vector
/// stands for the imaginary root when `affine` is set.
fn string_length(rs: &RootSystem, i: usize, beta: &[i64], affine: bool) -> i64 {
    let mut cur = beta.to_vec();
    let mut k = 0;
    loop {
        cur[i] += 1;
        if !(rs.is_root(&cur) || affine && cur.iter().all(|x| *x == 0)) {
            return k + 1;
        }
        k += 1;
    }
}

fn criterion_9() {
    let start = Instant::now();
    let expected_kd: [(CartanType, usize, Vec<i64>); 3] =
        [(CartanType::A, 1, vec![-1]), (CartanType::A, 2, vec![-1, -1]), (CartanType::B, 2, vec![-2, -1])];
    for (kind, n, kd) in expected_kd {
        let rs = build_root_system(kind, n).unwrap();
        assert_eq!(kd_exponents(&rs), kd);
        let minus_theta: Vec<i64> = rs.theta().iter().map(|x| -x).collect();
        for i in 0..n {
            assert_eq!(affine_exponent(&rs, i), string_length(&rs, i, &minus_theta, true));
            for j in (0..n).filter(|j| *j != i) {
                assert_eq!(serre_exponent(&rs, i, j), string_length(&rs, i, &rs.simple_root(j), false));
            }
        }
        let p = Presentation::generate(&rs, Mode::Quantum);
        for rel in p.quantum_relations() {
            let len = |w: &Vec<_>| w.len() as i64;
            match rel.tag {
                "q-serre" => {
                    let (i, j) = (rel.indices[0], rel.indices[1]);
                    let want = string_length(&rs, i, &rs.simple_root(j), false) + 1;
                    assert!(rel.poly.terms().all(|(w, _)| len(w) == want));
                }
                "affine-serre" => {
                    let want = string_length(&rs, rel.indices[0], &minus_theta, true) + 1;
                    assert!(rel.poly.terms().all(|(w, _)| len(w) == want));
                }
                "affine-cubic" => assert!(n > 1 && rs.inner(&rs.simple_root(rel.indices[0]), rs.theta()) != 0),
                "sl2-quartic" => assert_eq!((kind, n), (CartanType::A, 1)),
                _ => {}
            }
        }
        let has_quartic = p.tags().contains(&"sl2-quartic");
        assert_eq!(has_quartic, n == 1);
        let hopf = check_hopf(&rs);
        assert!(hopf.passed(), "{kind:?}{n}: {hopf:?}");
        for e in check_limit(&rs) {
            assert!(e.matches, "{kind:?}{n}: {e:?}");
        }
    }
    let b2 = build_root_system(CartanType::B, 2).unwrap();
    let cubic: Vec<_> = Presentation::generate(&b2, Mode::Quantum)
        .quantum_relations()
        .iter()
        .filter(|r| r.tag == "affine-cubic")
        .map(|r| r.indices.clone())
        .collect();
    assert_eq!(cubic, vec![vec![0]]);
    within(start, Duration::from_secs(30), "quantum checks");
}

fn main() {
    let criteria: [(&str, fn()); 9] = [
        ("o(5) yields exactly two non-trivial records", criterion_1),
        ("quoted o(5) Cartan vector is isotropic and transversal", criterion_2),
        ("shift triples for sl(3), sl(4), sl(5) pass", criterion_3),
        ("CYBE and unitarity for every emitted solution", criterion_4),
        ("orthogonal of the order model matches closed form", criterion_5),
        ("structural invariants of Delta and i'", criterion_6),
        ("structured enumeration equals brute force", criterion_7),
        ("solution and subalgebra round trip", criterion_8),
        ("quantum presentation, Hopf axioms, classical limit", criterion_9),
    ];
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let default_hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = format!("criterion {}", i + 1);
        if filter.as_ref().is_some_and(|x| !id.contains(x.as_str()) && !name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f));
        let elapsed = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("{id}: PASS ({name}, {elapsed:.2} s)"),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("{id}: FAIL ({name}, {elapsed:.2} s): {msg}");
            }
        }
    }
    std::panic::set_hook(default_hook);
    if failed > 0 {
        std::process::exit(1);
    }
}
