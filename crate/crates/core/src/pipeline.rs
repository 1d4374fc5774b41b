//! End-to-end classification: triples at each vertex, their Lagrangian
//! subalgebras, the lifted `W`, and the resulting solutions, packaged as
//! flat self-validating records.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bdtriples::{automorphism_classes, classify, enumerate_triples, is_bd_admissible, BDTriple, TripleType};
use crate::error::CoreError;
use crate::grading::{alpha_grading, delta_alpha, DoubleWindow, VertexData};
use crate::lie::LieAlgebra;
use crate::linalg::{Subspace, Vector};
use crate::manin::{build_i_prime, cartan_spaces, construct_i_a_prime, radicand_of, verify_manin};
use crate::rmatrix::{
    is_unitary, lift_i_prime_to_w, solution_from_subalgebra, subalgebra_from_solution_in, verify_cybe, QuasiTrigSolution,
    SolutionTerm,
};
use crate::roots::{AlgebraLabel, RootSystem};
use crate::scalar::Scalar;

pub const SCHEMA: &str = "cybe-forge/1";

/// Truncation depth of the window used for vertex solutions.
pub const VERTEX_WINDOW_DEPTH: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordFlags {
    pub triple_valid: bool,
    pub condf: bool,
    pub isotropic: bool,
    pub half_dimensional: bool,
    pub subalgebra_closed: bool,
    pub intersection_with_delta_trivial: bool,
    pub sum_with_delta_full: bool,
    pub w_conditions: bool,
    pub round_trip: bool,
    pub cybe_verified: bool,
    pub unitary: bool,
}

impl RecordFlags {
    pub fn all(&self) -> bool {
        self.named().iter().all(|(_, v)| *v)
    }

    pub fn named(&self) -> [(&'static str, bool); 11] {
        [
            ("triple_valid", self.triple_valid),
            ("condf", self.condf),
            ("isotropic", self.isotropic),
            ("half_dimensional", self.half_dimensional),
            ("subalgebra_closed", self.subalgebra_closed),
            ("intersection_with_delta_trivial", self.intersection_with_delta_trivial),
            ("sum_with_delta_full", self.sum_with_delta_full),
            ("w_conditions", self.w_conditions),
            ("round_trip", self.round_trip),
            ("cybe_verified", self.cybe_verified),
            ("unitary", self.unitary),
        ]
    }

    /// Names of fields that differ between two flag sets.
    pub fn diff(&self, other: &RecordFlags) -> Vec<&'static str> {
        self.named()
            .iter()
            .zip(other.named().iter())
            .filter(|(a, b)| a.1 != b.1)
            .map(|(a, _)| a.0)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub algebra: String,
    pub vertex: String,
    pub triple_type: TripleType,
    pub gamma1: Vec<usize>,
    pub gamma2: Vec<usize>,
    pub map: Vec<(usize, usize)>,
    pub automorphism_class: usize,
    /// Basis of the Cartan piece in simple-coroot coordinates of `h x h`.
    pub i_a_prime: Vec<Vec<Scalar>>,
    pub sqrt_discriminant: u64,
    pub dim_l_alpha: usize,
    pub dim_delta: usize,
    pub dim_i_prime: usize,
    pub nontrivial_polynomial_part: bool,
    pub deg_u: u32,
    pub deg_v: u32,
    #[serde(flatten)]
    pub flags: RecordFlags,
    pub solution: Vec<SolutionTerm>,
}

impl ClassificationRecord {
    pub fn vertex_index(&self) -> Result<usize, CoreError> {
        parse_vertex(&self.vertex)
    }

    pub fn triple(&self) -> Result<BDTriple, CoreError> {
        Ok(BDTriple {
            vertex: self.vertex_index()?,
            gamma1: self.gamma1.clone(),
            gamma2: self.gamma2.clone(),
            map: self.map.clone(),
            kind: self.triple_type,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationDocument {
    pub schema: String,
    pub records: Vec<ClassificationRecord>,
}

impl ClassificationDocument {
    pub fn new(records: Vec<ClassificationRecord>) -> Self {
        ClassificationDocument {
            schema: SCHEMA.to_string(),
            records,
        }
    }
}

/// `alphaN` (1-based) to the extended node `N`.
pub fn parse_vertex(s: &str) -> Result<usize, CoreError> {
    s.strip_prefix("alpha")
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| CoreError::Parse(format!("vertex must look like alpha1, alpha2, ...: {s:?}")))
}

pub fn vertex_name(node: usize) -> String {
    format!("alpha{node}")
}

pub fn load_algebra(label: &str) -> Result<Arc<LieAlgebra>, CoreError> {
    let label: AlgebraLabel = label.parse()?;
    let rs = RootSystem::from_label(label)?;
    Ok(Arc::new(LieAlgebra::new(rs)?))
}

fn window(v: &VertexData) -> DoubleWindow {
    DoubleWindow::new(VERTEX_WINDOW_DEPTH, v.dim_g())
}

struct Evaluation {
    flags: RecordFlags,
    dim_i_prime: usize,
    solution: Option<QuasiTrigSolution>,
}

fn triple_valid(rs: &RootSystem, t: &BDTriple) -> bool {
    let nodes_ok = t.map.iter().all(|&(s, d)| s != t.vertex && s <= rs.rank() && d >= 1 && d <= rs.rank());
    let mut g1: Vec<usize> = t.map.iter().map(|p| p.0).collect();
    let mut g2: Vec<usize> = t.map.iter().map(|p| p.1).collect();
    g1.sort_unstable();
    g2.sort_unstable();
    nodes_ok
        && g1 == t.gamma1
        && g2 == t.gamma2
        && is_bd_admissible(rs, &t.map).is_ok()
        && classify(t.vertex, &t.map) == Some(t.kind)
}

/// Flags for a triple with a given Cartan piece; when `stored` is present
/// the solution-level flags refer to it instead of the derived solution.
fn evaluate(
    v: &VertexData,
    t: &BDTriple,
    i_a_prime: &Subspace,
    stored: Option<&QuasiTrigSolution>,
) -> Result<Evaluation, CoreError> {
    let g = v.algebra();
    let c = cartan_spaces(v, t);
    let valid = triple_valid(g.root_system(), t);
    let l = build_i_prime(v, t, i_a_prime);
    let manin = verify_manin(v, &l);
    let mut flags = RecordFlags {
        triple_valid: valid,
        condf: c.condf(i_a_prime) && c.a_prime.contains_subspace(i_a_prime),
        isotropic: manin.isotropic,
        half_dimensional: manin.half_dimensional,
        subalgebra_closed: manin.subalgebra_closed,
        intersection_with_delta_trivial: manin.intersection_with_delta_trivial,
        sum_with_delta_full: manin.sum_with_delta_full,
        w_conditions: false,
        round_trip: false,
        cybe_verified: false,
        unitary: false,
    };
    let win = window(v);
    let mut derived = None;
    if manin.all() {
        let w = lift_i_prime_to_w(v, &l, win)?;
        flags.w_conditions = crate::rmatrix::check_w(g, &w).all();
        if flags.w_conditions {
            derived = Some((w.clone(), solution_from_subalgebra(g, &w)?));
        }
    }
    let solution = stored.cloned().or_else(|| derived.as_ref().map(|d| d.1.clone()));
    if let Some(x) = &solution {
        flags.unitary = is_unitary(g, x);
        flags.cybe_verified = verify_cybe(g, x);
        if let Some((w, _)) = &derived {
            flags.round_trip = flags.unitary
                && subalgebra_from_solution_in(g, x, win).map(|back| &back == w).unwrap_or(false)
                && solution_from_subalgebra(g, w).map(|y| &y == x).unwrap_or(false);
        }
    }
    Ok(Evaluation {
        flags,
        dim_i_prime: l.space.dim(),
        solution,
    })
}

fn record(
    v: &VertexData,
    t: &BDTriple,
    class: usize,
    i_a_prime: &Subspace,
    eval: Evaluation,
) -> ClassificationRecord {
    let g = v.algebra();
    let sol = eval.solution.unwrap_or_else(|| QuasiTrigSolution::zero(g.dim()));
    ClassificationRecord {
        algebra: g.root_system().label().to_string(),
        vertex: vertex_name(v.alpha_node()),
        triple_type: t.kind,
        gamma1: t.gamma1.clone(),
        gamma2: t.gamma2.clone(),
        map: t.map.clone(),
        automorphism_class: class,
        i_a_prime: i_a_prime.basis().to_vec(),
        sqrt_discriminant: radicand_of(i_a_prime),
        dim_l_alpha: v.dim_l_alpha(),
        dim_delta: delta_alpha(v).dim(),
        dim_i_prime: eval.dim_i_prime,
        nontrivial_polynomial_part: !t.is_empty(),
        deg_u: sol.deg_u(),
        deg_v: sol.deg_v(),
        flags: eval.flags,
        solution: sol.to_records(),
    }
}

/// Records for every triple at the 0-based simple root `alpha`.
pub fn classify_vertex(g: &Arc<LieAlgebra>, alpha: usize, include_empty: bool) -> Result<Vec<ClassificationRecord>, CoreError> {
    let v = alpha_grading(g, alpha)?;
    let triples = enumerate_triples(&v);
    let classes = automorphism_classes(g.root_system(), &triples);
    triples
        .par_iter()
        .zip(classes.par_iter())
        .filter(|(t, _)| include_empty || !t.is_empty())
        .map(|(t, &class)| {
            let ia = construct_i_a_prime(&cartan_spaces(&v, t))?;
            let eval = evaluate(&v, t, &ia, None)?;
            Ok(record(&v, t, class, &ia, eval))
        })
        .collect()
}

/// Records for all vertices (or one, given as an extended node).
pub fn classify_algebra(
    g: &Arc<LieAlgebra>,
    vertex: Option<usize>,
    include_empty: bool,
) -> Result<Vec<ClassificationRecord>, CoreError> {
    let rank = g.rank();
    let vertices: Vec<usize> = match vertex {
        Some(n) if n == 0 || n > rank => return Err(CoreError::NotSimpleRoot(n)),
        Some(n) => vec![n - 1],
        None => (0..rank).collect(),
    };
    let per_vertex: Result<Vec<Vec<ClassificationRecord>>, CoreError> = vertices
        .par_iter()
        .map(|&a| classify_vertex(g, a, include_empty))
        .collect();
    Ok(per_vertex?.into_iter().flatten().collect())
}

/// Recomputes the flags of a loaded record.
pub fn verify_record(rec: &ClassificationRecord) -> Result<RecordFlags, CoreError> {
    let g = load_algebra(&rec.algebra)?;
    let node = rec.vertex_index()?;
    if node > g.rank() {
        return Err(CoreError::NotSimpleRoot(node));
    }
    let v = alpha_grading(&g, node - 1)?;
    let t = rec.triple()?;
    let l2 = 2 * g.rank();
    if rec.i_a_prime.iter().any(|b| b.len() != l2) {
        return Err(CoreError::Parse(format!("i_a_prime vectors must have length {l2}")));
    }
    let ia = Subspace::span(l2, rec.i_a_prime.iter().map(|b| b.to_vec() as Vector).collect());
    let stored = QuasiTrigSolution::from_records(g.dim(), &rec.solution)?;
    Ok(evaluate(&v, &t, &ia, Some(&stored))?.flags)
}
