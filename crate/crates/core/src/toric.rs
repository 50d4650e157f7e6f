//! Exponent vectors of the generators `u_phi`, exact Krull dimension, and the
//! explicit transcendence-basis witness for connected pairs.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hom::{enumerate_isotone, IsotoneMap};
use crate::limits::Limits;
use crate::linalg;
use crate::poset::Poset;

/// Integer vector indexed by `P x Q`, row-major by `p` then `q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ExpVector(pub Vec<i64>);

impl ExpVector {
    pub fn of_map(map: &IsotoneMap, q_len: usize) -> ExpVector {
        let mut v = vec![0; map.0.len() * q_len];
        for (p, &t) in map.0.iter().enumerate() {
            v[p * q_len + t] = 1;
        }
        ExpVector(v)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &ExpVector) -> ExpVector {
        ExpVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ExpVector) -> ExpVector {
        ExpVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Sum of the `p`-block.
    pub fn block_sum(&self, p: usize, q_len: usize) -> i64 {
        self.0[p * q_len..(p + 1) * q_len].iter().sum()
    }

    /// Monomial in `x_{p,q}` notation, e.g. `x11*x24^2`.
    pub fn x_monomial(&self, q_len: usize) -> String {
        let mut parts = Vec::new();
        for (k, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let (p, q) = (k / q_len + 1, k % q_len + 1);
            let var = if p < 10 && q < 10 { format!("x{p}{q}") } else { format!("x({p},{q})") };
            parts.push(if e == 1 { var } else { format!("{var}^{e}") });
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// The configuration `A` of `K[P,Q]`: rows indexed by `(p,q)`, one column per
/// isotone map in variable order.
#[derive(Debug, Clone)]
pub struct ExponentMatrix {
    pub p_len: usize,
    pub q_len: usize,
    pub maps: Vec<IsotoneMap>,
    pub rows: Vec<Vec<i64>>,
}

impl ExponentMatrix {
    pub fn new(p: &Poset, q: &Poset, limits: &Limits) -> Result<ExponentMatrix> {
        let maps = enumerate_isotone(p, q, limits)?;
        Ok(ExponentMatrix::from_maps(p.len(), q.len(), maps))
    }

    pub fn from_maps(p_len: usize, q_len: usize, maps: Vec<IsotoneMap>) -> ExponentMatrix {
        let mut rows = vec![vec![0i64; maps.len()]; p_len * q_len];
        for (c, m) in maps.iter().enumerate() {
            for (p, &t) in m.0.iter().enumerate() {
                rows[p * q_len + t][c] = 1;
            }
        }
        ExponentMatrix { p_len, q_len, maps, rows }
    }

    pub fn column(&self, c: usize) -> ExpVector {
        ExpVector::of_map(&self.maps[c], self.q_len)
    }

    pub fn columns(&self) -> Vec<ExpVector> {
        (0..self.maps.len()).map(|c| self.column(c)).collect()
    }

    pub fn ncols(&self) -> usize {
        self.maps.len()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.rows)
    }

    /// `A * exponent`: the x-exponent of a monomial in the presentation variables.
    pub fn image(&self, exponent: &[u32]) -> Vec<i64> {
        let mut out = vec![0i64; self.p_len * self.q_len];
        for (c, &e) in exponent.iter().enumerate() {
            if e == 0 {
                continue;
            }
            for (p, &t) in self.maps[c].0.iter().enumerate() {
                out[p * self.q_len + t] += e as i64;
            }
        }
        out
    }
}

pub fn exponent_matrix(p: &Poset, q: &Poset, limits: &Limits) -> Result<ExponentMatrix> {
    ExponentMatrix::new(p, q, limits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KrullDimension {
    pub rank: usize,
    pub formula: usize,
    pub agree: bool,
}

/// `|P|(|Q|-s) + rs - r + 1` with `r`, `s` the component counts.
pub fn dimension_formula(p: &Poset, q: &Poset) -> usize {
    let (r, s) = (p.component_count(), q.component_count());
    p.len() * (q.len() - s) + r * s - r + 1
}

pub fn krull_dimension(p: &Poset, q: &Poset, limits: &Limits) -> Result<KrullDimension> {
    let rank = ExponentMatrix::new(p, q, limits)?.rank();
    let formula = dimension_formula(p, q);
    Ok(KrullDimension { rank, formula, agree: rank == formula })
}

/// Independent exponent vectors: `u_q = prod_p x_{p,q}` for every `q`, and
/// `x_{p,q} / x_{p,q'}` for `p != p0` and every edge `q < q'` of a spanning
/// tree of the Hasse graph of `Q`.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionWitness {
    pub type_one: Vec<ExpVector>,
    pub type_two: Vec<ExpVector>,
    pub p0: usize,
    pub tree_edges: Vec<(usize, usize)>,
}

impl DimensionWitness {
    pub fn len(&self) -> usize {
        self.type_one.len() + self.type_two.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vectors(&self) -> Vec<Vec<i64>> {
        self.type_one.iter().chain(&self.type_two).map(|v| v.0.clone()).collect()
    }
}

/// Spanning tree of `G(Q)` by breadth-first search from element 0; edges
/// oriented `(lower, upper)`.
pub fn bfs_spanning_tree(q: &Poset) -> Vec<(usize, usize)> {
    let mut seen = vec![false; q.len()];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for w in q.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                edges.push(if q.lt(v, w) { (v, w) } else { (w, v) });
                queue.push_back(w);
            }
        }
    }
    edges
}

pub fn dimension_witness(p: &Poset, q: &Poset) -> Result<DimensionWitness> {
    if !p.is_connected() {
        return Err(Error::NotConnected("P"));
    }
    if !q.is_connected() {
        return Err(Error::NotConnected("Q"));
    }
    let (n, m) = (p.len(), q.len());
    let p0 = 0;
    let type_one = (0..m)
        .map(|t| {
            let mut v = vec![0; n * m];
            for s in 0..n {
                v[s * m + t] = 1;
            }
            ExpVector(v)
        })
        .collect();
    let tree_edges = bfs_spanning_tree(q);
    let mut type_two = Vec::new();
    for s in (0..n).filter(|&s| s != p0) {
        for &(lo, hi) in &tree_edges {
            let mut v = vec![0; n * m];
            v[s * m + lo] = 1;
            v[s * m + hi] = -1;
            type_two.push(ExpVector(v));
        }
    }
    let witness = DimensionWitness { type_one, type_two, p0, tree_edges };
    let expected = (n - 1) * (m - 1) + m;
    if witness.len() != expected || linalg::rank(&witness.vectors()) != expected {
        return Err(Error::InternalCheckFailed(format!(
            "dimension witness has {} vectors of rank {}, expected {expected}",
            witness.len(),
            linalg::rank(&witness.vectors())
        )));
    }
    Ok(witness)
}
