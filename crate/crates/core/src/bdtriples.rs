//! Triples `(Gamma'_1, Gamma'_2, A')` attached to a vertex of the extended
//! Dynkin diagram, and the admissibility (nilpotency) predicate.
//!
//! Nodes use extended numbering: node 0 is `alpha_0 = -theta`, node `i` is
//! the simple root `alpha_i`. `Gamma'_1` lives in `Gamma^ext \ {alpha}` and
//! `Gamma'_2` in `Gamma`; the two share the nodes of `S = Gamma \ {alpha}`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::grading::VertexData;
use crate::roots::RootSystem;

pub const BRUTE_FORCE_MAX_RANK: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TripleType {
    #[serde(rename = "empty")]
    Empty,
    I,
    II,
}

impl std::fmt::Display for TripleType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TripleType::Empty => "empty",
            TripleType::I => "I",
            TripleType::II => "II",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BDTriple {
    /// Extended node of the chosen vertex.
    pub vertex: usize,
    pub gamma1: Vec<usize>,
    pub gamma2: Vec<usize>,
    /// Graph of `A'`, sorted by source node.
    pub map: Vec<(usize, usize)>,
    pub kind: TripleType,
}

impl BDTriple {
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn image(&self, node: usize) -> Option<usize> {
        self.map.iter().find(|(s, _)| *s == node).map(|(_, t)| *t)
    }

    pub fn preimage(&self, node: usize) -> Option<usize> {
        self.map.iter().find(|(_, t)| *t == node).map(|(s, _)| *s)
    }

    fn sort_key(&self) -> (usize, &[usize], &[usize], &[(usize, usize)]) {
        (self.gamma1.len(), &self.gamma1, &self.gamma2, &self.map)
    }
}

impl PartialOrd for BDTriple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BDTriple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then(self.vertex.cmp(&other.vertex))
            .then(self.kind.cmp(&other.kind))
    }
}

fn node_gram(rs: &RootSystem, a: usize, b: usize) -> i64 {
    rs.inner(&rs.node_root(a), &rs.node_root(b))
}

fn is_isometry(rs: &RootSystem, map: &[(usize, usize)]) -> bool {
    map.iter().all(|&(s1, t1)| {
        map.iter()
            .all(|&(s2, t2)| node_gram(rs, s1, s2) == node_gram(rs, t1, t2))
    })
}

fn has_cycle(map: &[(usize, usize)]) -> bool {
    let next: BTreeMap<usize, usize> = map.iter().copied().collect();
    for &(start, _) in map {
        let mut cur = start;
        for _ in 0..=map.len() {
            match next.get(&cur) {
                Some(&n) => cur = n,
                None => break,
            }
            if cur == start {
                return true;
            }
        }
    }
    false
}

/// Whether every node of the domain leaves it after finitely many steps of
/// the map. Non-isometric maps are rejected with [`CoreError::NotIsometry`].
pub fn is_bd_admissible(rs: &RootSystem, map: &[(usize, usize)]) -> Result<bool, CoreError> {
    let sources: BTreeSet<usize> = map.iter().map(|p| p.0).collect();
    let targets: BTreeSet<usize> = map.iter().map(|p| p.1).collect();
    if sources.len() != map.len() || targets.len() != map.len() || !is_isometry(rs, map) {
        return Err(CoreError::NotIsometry);
    }
    Ok(!has_cycle(map))
}

/// Type of a candidate triple at `vertex`, or `None` if it is neither.
/// The map must already be an isometric bijection.
pub fn classify(vertex: usize, map: &[(usize, usize)]) -> Option<TripleType> {
    if map.is_empty() {
        return Some(TripleType::Empty);
    }
    match map.iter().position(|&(_, t)| t == vertex) {
        None => (!has_cycle(map)).then_some(TripleType::I),
        Some(p) => {
            let mut rest = map.to_vec();
            rest.remove(p);
            (!has_cycle(&rest)).then_some(TripleType::II)
        }
    }
}

fn make_triple(vertex: usize, mut map: Vec<(usize, usize)>, kind: TripleType) -> BDTriple {
    map.sort();
    let gamma1 = map.iter().map(|p| p.0).collect();
    let mut gamma2: Vec<usize> = map.iter().map(|p| p.1).collect();
    gamma2.sort();
    BDTriple {
        vertex,
        gamma1,
        gamma2,
        map,
        kind,
    }
}

fn check_vertex(rs: &RootSystem, vertex: usize) -> Result<(), CoreError> {
    if vertex == 0 || vertex > rs.rank() {
        return Err(CoreError::NotSimpleRoot(vertex));
    }
    Ok(())
}

fn source_nodes(rs: &RootSystem, vertex: usize) -> Vec<usize> {
    (0..=rs.rank()).filter(|&n| n != vertex).collect()
}

struct Search<'a> {
    rs: &'a RootSystem,
    sources: Vec<usize>,
    targets: Vec<usize>,
}

impl Search<'_> {
    fn extend(&self, pos: usize, used: &mut Vec<bool>, map: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if pos == self.sources.len() {
            out.push(map.clone());
            return;
        }
        self.extend(pos + 1, used, map, out);
        let s = self.sources[pos];
        for (ti, &t) in self.targets.iter().enumerate() {
            if used[ti] || node_gram(self.rs, s, s) != node_gram(self.rs, t, t) {
                continue;
            }
            if map
                .iter()
                .any(|&(s2, t2)| node_gram(self.rs, s, s2) != node_gram(self.rs, t, t2))
            {
                continue;
            }
            used[ti] = true;
            map.push((s, t));
            self.extend(pos + 1, used, map, out);
            map.pop();
            used[ti] = false;
        }
    }
}

/// All triples of type I or II at the extended node `vertex`, plus the
/// empty triple, in deterministic order.
pub fn enumerate_at(rs: &RootSystem, vertex: usize) -> Result<Vec<BDTriple>, CoreError> {
    check_vertex(rs, vertex)?;
    let search = Search {
        rs,
        sources: source_nodes(rs, vertex),
        targets: (1..=rs.rank()).collect(),
    };
    // branch on the image of the first source node (or none) in parallel
    let first = search.sources[0];
    let branches: Vec<Option<usize>> = std::iter::once(None)
        .chain(search.targets.iter().copied().map(Some))
        .collect();
    let mut maps: Vec<Vec<(usize, usize)>> = branches
        .par_iter()
        .flat_map_iter(|branch| {
            let mut out = Vec::new();
            let mut used = vec![false; search.targets.len()];
            let mut map = Vec::new();
            if let Some(t) = *branch {
                if node_gram(rs, first, first) != node_gram(rs, t, t) {
                    return out;
                }
                used[t - 1] = true;
                map.push((first, t));
            }
            search.extend(1, &mut used, &mut map, &mut out);
            out
        })
        .collect();
    maps.sort();
    let mut triples: Vec<BDTriple> = maps
        .into_iter()
        .filter_map(|m| classify(vertex, &m).map(|k| make_triple(vertex, m, k)))
        .collect();
    triples.sort();
    Ok(triples)
}

/// Exhaustive scan over all subset pairs and bijections; an independent
/// oracle for [`enumerate_at`].
pub fn brute_force_at(rs: &RootSystem, vertex: usize) -> Result<Vec<BDTriple>, CoreError> {
    if rs.rank() > BRUTE_FORCE_MAX_RANK {
        return Err(CoreError::RankGuard {
            max: BRUTE_FORCE_MAX_RANK,
            rank: rs.rank(),
        });
    }
    check_vertex(rs, vertex)?;
    let sources = source_nodes(rs, vertex);
    let targets: Vec<usize> = (1..=rs.rank()).collect();
    let mut out = BTreeSet::new();
    for m in 0..=sources.len() {
        for dom in sources.iter().copied().combinations(m) {
            for img in targets.iter().copied().permutations(m) {
                let map: Vec<(usize, usize)> = dom.iter().copied().zip(img).collect();
                let iso = (0..m).all(|i| {
                    (0..m).all(|j| node_gram(rs, map[i].0, map[j].0) == node_gram(rs, map[i].1, map[j].1))
                });
                if !iso {
                    continue;
                }
                if let Some(kind) = brute_type(vertex, &map) {
                    out.insert(make_triple(vertex, map, kind));
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Nilpotency by iterating the partial map on the whole domain at once.
fn nilpotent(map: &[(usize, usize)]) -> bool {
    let mut live: BTreeSet<usize> = map.iter().map(|p| p.0).collect();
    let domain = live.clone();
    for _ in 0..=map.len() {
        live = live
            .iter()
            .filter_map(|x| map.iter().find(|p| p.0 == *x).map(|p| p.1))
            .filter(|y| domain.contains(y))
            .collect();
        if live.is_empty() {
            return true;
        }
    }
    false
}

fn brute_type(vertex: usize, map: &[(usize, usize)]) -> Option<TripleType> {
    if map.is_empty() {
        return Some(TripleType::Empty);
    }
    let hits: Vec<&(usize, usize)> = map.iter().filter(|p| p.1 == vertex).collect();
    if hits.is_empty() {
        return nilpotent(map).then_some(TripleType::I);
    }
    let rest: Vec<(usize, usize)> = map.iter().copied().filter(|p| p.1 != vertex).collect();
    nilpotent(&rest).then_some(TripleType::II)
}

/// [`enumerate_at`] for the vertex of `v`.
pub fn enumerate_triples(v: &VertexData) -> Vec<BDTriple> {
    enumerate_at(v.algebra().root_system(), v.alpha_node()).expect("vertex data carries a valid vertex")
}

/// [`brute_force_at`] for the vertex of `v`.
pub fn brute_force_enumerate(v: &VertexData) -> Result<Vec<BDTriple>, CoreError> {
    brute_force_at(v.algebra().root_system(), v.alpha_node())
}

/// Permutations of `nodes` preserving the node Gram matrix.
pub fn diagram_automorphisms(rs: &RootSystem, nodes: &[usize]) -> Vec<BTreeMap<usize, usize>> {
    fn go(
        rs: &RootSystem,
        nodes: &[usize],
        pos: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        out: &mut Vec<BTreeMap<usize, usize>>,
    ) {
        if pos == nodes.len() {
            out.push(nodes.iter().copied().zip(cur.iter().copied()).collect());
            return;
        }
        for (i, &t) in nodes.iter().enumerate() {
            if used[i] {
                continue;
            }
            let ok = (0..pos).all(|j| node_gram(rs, nodes[pos], nodes[j]) == node_gram(rs, t, cur[j]))
                && node_gram(rs, nodes[pos], nodes[pos]) == node_gram(rs, t, t);
            if ok {
                used[i] = true;
                cur.push(t);
                go(rs, nodes, pos + 1, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(rs, nodes, 0, &mut vec![false; nodes.len()], &mut Vec::new(), &mut out);
    out
}

/// Class labels for `triples` (all at one vertex) under the action of
/// `Aut(Gamma^ext \ {alpha}) x Aut_alpha(Gamma)` given by
/// `(s, t) . (G1, G2, A) = (s G1, t G2, t A s^-1)`. Triples with equal labels
/// are related; the label is the index of the first member of the class.
pub fn automorphism_classes(rs: &RootSystem, triples: &[BDTriple]) -> Vec<usize> {
    let Some(vertex) = triples.first().map(|t| t.vertex) else {
        return Vec::new();
    };
    let left = diagram_automorphisms(rs, &source_nodes(rs, vertex));
    let right: Vec<_> = diagram_automorphisms(rs, &(1..=rs.rank()).collect::<Vec<_>>())
        .into_iter()
        .filter(|t| t[&vertex] == vertex)
        .collect();
    let mut labels: Vec<usize> = (0..triples.len()).collect();
    for i in 0..triples.len() {
        if labels[i] != i {
            continue;
        }
        let base = &triples[i];
        let mut orbit = BTreeSet::new();
        for s in &left {
            for t in &right {
                let mut m: Vec<(usize, usize)> = base.map.iter().map(|&(a, b)| (s[&a], t[&b])).collect();
                m.sort();
                orbit.insert(m);
            }
        }
        for j in i + 1..triples.len() {
            if labels[j] == j && orbit.contains(&triples[j].map) {
                labels[j] = i;
            }
        }
    }
    labels
}
