//! Normality of the affine semigroup `H` generated by the exponent vectors of
//! `K[P,Q]`: the Hilbert basis of `cone(H) ∩ ZH` against `H` itself.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal;
use crate::limits::Limits;
use crate::linalg::{self, HermiteBasis};
use crate::poset::Poset;
use crate::toric::{ExpVector, ExponentMatrix};

/// A cone given by generators, in coordinates of the lattice they span.
#[derive(Debug, Clone)]
pub struct ConeLattice {
    /// Ambient generators, deduplicated, in insertion order.
    pub generators: Vec<Vec<i64>>,
    pub lattice_basis: HermiteBasis,
    /// Generators in lattice coordinates.
    pub coords: Vec<Vec<i64>>,
    /// Inner normals in lattice coordinates, primitive.
    pub facet_normals: Vec<Vec<i64>>,
    pub dim: usize,
    /// Placing triangulation: index sets into `generators`.
    pub simplices: Vec<Vec<usize>>,
    /// Sum of the facet normals; positive on the cone minus the origin.
    pub grading: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Membership {
    /// Indices into the generator list, with repetition.
    Sum(Vec<usize>),
    NotInSemigroup,
}

#[derive(Debug, Clone, Serialize)]
pub struct HilbertBasisResult {
    pub basis: Vec<Vec<i64>>,
    pub all_in_semigroup: bool,
    pub witnesses: Vec<Membership>,
}

struct Facet {
    normal: Vec<i64>,
    /// Incidence with generators processed so far.
    inc: Vec<u64>,
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(set: &mut [u64], i: usize) {
    set[i / 64] |= 1 << (i % 64);
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn primitive(v: Vec<i128>) -> Result<Vec<i64>> {
    let g = v.iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
    let g = if g == 0 { 1 } else { g };
    v.into_iter()
        .map(|x| i64::try_from(x / g).map_err(|_| Error::InternalCheckFailed("facet normal overflow".into())))
        .collect()
}

fn big_to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::InternalCheckFailed("integer overflow in cone computation".into()))
}

impl ConeLattice {
    pub fn new(gens: &[Vec<i64>], limits: &Limits) -> Result<ConeLattice> {
        let Some(first) = gens.first() else {
            return Err(Error::InvalidInput("empty generator list".into()));
        };
        let width = first.len();
        if gens.iter().any(|g| g.len() != width) {
            return Err(Error::InvalidInput("generators of different lengths".into()));
        }
        let mut sorted: Vec<Vec<i64>> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).cloned().collect();
        sorted.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then_with(|| a.cmp(b)));
        sorted.dedup();
        if sorted.is_empty() {
            return Err(Error::InvalidInput("all generators are zero".into()));
        }
        let lattice_basis = HermiteBasis::new(&sorted);
        let dim = lattice_basis.rank();
        let coords: Vec<Vec<i64>> = sorted
            .iter()
            .map(|g| {
                lattice_basis
                    .coordinates(g)
                    .ok_or_else(|| Error::InternalCheckFailed("generator off its lattice".into()))
            })
            .collect::<Result<_>>()?;
        let mut cone = ConeLattice {
            generators: sorted,
            lattice_basis,
            coords,
            facet_normals: Vec::new(),
            dim,
            simplices: Vec::new(),
            grading: Vec::new(),
        };
        cone.beneath_beyond(limits)?;
        Ok(cone)
    }

    /// Double description and placing triangulation in one pass.
    fn beneath_beyond(&mut self, limits: &Limits) -> Result<()> {
        let (d, n) = (self.dim, self.coords.len());
        let words = n.div_ceil(64);
        let mut simplex = Vec::new();
        for i in 0..n {
            let mut trial: Vec<Vec<i64>> = simplex.iter().map(|&j: &usize| self.coords[j].clone()).collect();
            trial.push(self.coords[i].clone());
            if linalg::rank(&trial) == trial.len() {
                simplex.push(i);
                if simplex.len() == d {
                    break;
                }
            }
        }
        let mat: Vec<Vec<i64>> = simplex.iter().map(|&j| self.coords[j].clone()).collect();
        let (det, adj) = linalg::adjugate(&mat).ok_or_else(|| Error::InternalCheckFailed("singular start".into()))?;
        let sign: i128 = if det.is_negative() { -1 } else { 1 };
        let mut facets = Vec::with_capacity(d);
        for i in 0..d {
            let col: Vec<i128> =
                (0..d).map(|r| big_to_i64(&adj[r][i]).map(|x| sign * x as i128)).collect::<Result<_>>()?;
            let mut inc = vec![0u64; words];
            for (k, &j) in simplex.iter().enumerate() {
                if k != i {
                    set_bit(&mut inc, j);
                }
            }
            facets.push(Facet { normal: primitive(col)?, inc });
        }
        let mut simplices = vec![simplex.clone()];
        let in_simplex: HashSet<usize> = simplex.iter().copied().collect();
        for v in (0..n).filter(|v| !in_simplex.contains(v)) {
            limits.check_time()?;
            let x = &self.coords[v];
            let s: Vec<i128> = facets.iter().map(|f| dot(&f.normal, x)).collect();
            let visible: Vec<usize> = (0..facets.len()).filter(|&f| s[f] < 0).collect();
            if visible.is_empty() {
                for (f, &sf) in facets.iter_mut().zip(&s) {
                    if sf == 0 {
                        set_bit(&mut f.inc, v);
                    }
                }
                continue;
            }
            // placing step: cone over every boundary face that v sees
            let mut added = Vec::new();
            for simp in &simplices {
                for k in 0..simp.len() {
                    let on_visible = visible
                        .iter()
                        .any(|&f| simp.iter().enumerate().all(|(t, &j)| t == k || bit(&facets[f].inc, j)));
                    if on_visible {
                        let mut new: Vec<usize> =
                            simp.iter().enumerate().filter(|&(t, _)| t != k).map(|(_, &j)| j).collect();
                        new.push(v);
                        new.sort_unstable();
                        added.push(new);
                    }
                }
            }
            simplices.extend(added);
            limits.guard("triangulation size", simplices.len() as u64, limits.caps.simplices)?;
            // double description step
            let mut new_facets = Vec::new();
            for &f in &visible {
                for g in (0..facets.len()).filter(|&g| s[g] > 0) {
                    let common: Vec<u64> = facets[f].inc.iter().zip(&facets[g].inc).map(|(a, b)| a & b).collect();
                    let count: u32 = common.iter().map(|w| w.count_ones()).sum();
                    if (count as usize) + 2 < d {
                        continue;
                    }
                    let adjacent =
                        facets.iter().enumerate().all(|(h, fh)| h == f || h == g || !subset(&common, &fh.inc));
                    if !adjacent {
                        continue;
                    }
                    let normal: Vec<i128> = facets[g]
                        .normal
                        .iter()
                        .zip(&facets[f].normal)
                        .map(|(&ng, &nf)| s[g] * nf as i128 - s[f] * ng as i128)
                        .collect();
                    let mut inc = common;
                    set_bit(&mut inc, v);
                    new_facets.push(Facet { normal: primitive(normal)?, inc });
                }
            }
            let mut kept: Vec<Facet> = Vec::with_capacity(facets.len() + new_facets.len());
            for (f, sf) in facets.into_iter().zip(&s) {
                if *sf > 0 {
                    kept.push(f);
                } else if *sf == 0 {
                    let mut f = f;
                    set_bit(&mut f.inc, v);
                    kept.push(f);
                }
            }
            kept.extend(new_facets);
            facets = kept;
        }
        let normals: Vec<Vec<i64>> = facets.into_iter().map(|f| f.normal).collect();
        if normals.is_empty() || linalg::rank(&normals) < d {
            return Err(Error::NotPointed);
        }
        self.grading = (0..d).map(|i| normals.iter().map(|n| n[i]).sum()).collect();
        self.facet_normals = normals;
        self.simplices = simplices;
        Ok(())
    }

    pub fn contains_coords(&self, x: &[i64]) -> bool {
        self.facet_normals.iter().all(|n| dot(n, x) >= 0)
    }

    /// Lattice coordinates of an ambient vector inside the cone.
    pub fn locate(&self, v: &[i64]) -> Option<Vec<i64>> {
        self.lattice_basis.coordinates(v).filter(|c| self.contains_coords(c))
    }

    pub fn degree(&self, x: &[i64]) -> i128 {
        dot(&self.grading, x)
    }

    /// Nonzero lattice points `sum l_i g_i`, `0 <= l_i < 1`, of one simplex.
    fn parallelepiped(&self, simplex: &[usize], limits: &Limits) -> Result<Vec<Vec<i64>>> {
        let mat: Vec<Vec<i64>> = simplex.iter().map(|&j| self.coords[j].clone()).collect();
        let det = linalg::determinant(&mat).abs();
        let det_u = det.to_u64().unwrap_or(u64::MAX);
        if det_u == 1 {
            return Ok(Vec::new());
        }
        limits.guard("parallelepiped points", det_u, limits.caps.simplex_points)?;
        let (sdet, adj) =
            linalg::adjugate(&mat).ok_or_else(|| Error::InternalCheckFailed("singular simplex".into()))?;
        let hnf = HermiteBasis::new(&mat);
        let d = self.dim;
        let diag: Vec<i64> = (0..d).map(|i| big_to_i64(&hnf.rows[i][i])).collect::<Result<_>>()?;
        let adj: Vec<Vec<BigInt>> = adj;
        let mut out = Vec::with_capacity(det_u as usize - 1);
        let mut x = vec![0i64; d];
        loop {
            // advance the mixed-radix counter; the zero coset is skipped
            let mut k = 0;
            while k < d {
                x[k] += 1;
                if x[k] < diag[k] {
                    break;
                }
                x[k] = 0;
                k += 1;
            }
            if k == d {
                break;
            }
            // lambda * det = x * adj, reduced into [0, |det|)
            let mut lam = vec![BigInt::zero(); d];
            for (r, &xr) in x.iter().enumerate() {
                if xr != 0 {
                    for (l, a) in lam.iter_mut().zip(&adj[r]) {
                        *l += a * xr;
                    }
                }
            }
            if sdet.is_negative() {
                for l in lam.iter_mut() {
                    *l = -&*l;
                }
            }
            for l in lam.iter_mut() {
                *l = num_integer::Integer::mod_floor(&*l, &det);
            }
            let mut p = vec![BigInt::zero(); d];
            for (l, g) in lam.iter().zip(&mat) {
                if !l.is_zero() {
                    for (pi, &gi) in p.iter_mut().zip(g) {
                        *pi += l * gi;
                    }
                }
            }
            let point: Vec<i64> = p
                .iter()
                .map(|v| {
                    let (q, r) = num_integer::Integer::div_rem(v, &det);
                    if !r.is_zero() {
                        return Err(Error::InternalCheckFailed("parallelepiped point off lattice".into()));
                    }
                    big_to_i64(&q)
                })
                .collect::<Result<_>>()?;
            out.push(point);
        }
        Ok(out)
    }

    /// Hilbert basis in lattice coordinates, sorted by degree.
    pub fn hilbert_basis_coords(&self, limits: &Limits) -> Result<Vec<Vec<i64>>> {
        let chunks: Vec<Vec<Vec<i64>>> =
            self.simplices.par_iter().map(|s| self.parallelepiped(s, limits)).collect::<Result<_>>()?;
        let mut candidates: HashSet<Vec<i64>> = self.coords.iter().cloned().collect();
        for chunk in chunks {
            candidates.extend(chunk);
            limits.guard("candidate points", candidates.len() as u64, limits.caps.total_points)?;
        }
        let mut sorted: Vec<(i128, Vec<i64>)> = candidates.into_iter().map(|c| (self.degree(&c), c)).collect();
        sorted.sort();
        let mut basis: Vec<(i128, Vec<i64>)> = Vec::new();
        for (deg, x) in sorted {
            limits.check_time()?;
            let reducible = basis
                .iter()
                .take_while(|(dy, _)| *dy < deg)
                .any(|(_, y)| self.facet_normals.iter().all(|n| dot(n, &x) - dot(n, y) >= 0));
            if !reducible {
                basis.push((deg, x));
            }
        }
        Ok(basis.into_iter().map(|(_, x)| x).collect())
    }
}

/// Depth-first search for `target` as a sum of generators. With nonnegative
/// generators only those covering the first positive coordinate are tried.
pub struct SemigroupMembership<'a> {
    gens: &'a [Vec<i64>],
    cone: &'a ConeLattice,
    nonnegative: bool,
    failed: HashSet<Vec<i64>>,
}

impl<'a> SemigroupMembership<'a> {
    pub fn new(cone: &'a ConeLattice) -> Self {
        let gens = &cone.generators;
        let nonnegative = gens.iter().all(|g| g.iter().all(|&x| x >= 0));
        SemigroupMembership { gens, cone, nonnegative, failed: HashSet::new() }
    }

    pub fn decompose(&mut self, target: &[i64], limits: &Limits) -> Result<Option<Vec<usize>>> {
        let mut path = Vec::new();
        Ok(self.search(target.to_vec(), &mut path, limits)?.then_some(path))
    }

    fn search(&mut self, t: Vec<i64>, path: &mut Vec<usize>, limits: &Limits) -> Result<bool> {
        if t.iter().all(|&x| x == 0) {
            return Ok(true);
        }
        if self.failed.contains(&t) {
            return Ok(false);
        }
        limits.check_time()?;
        let first = if self.nonnegative { t.iter().position(|&x| x > 0) } else { None };
        for (k, g) in self.gens.iter().enumerate() {
            if let Some(i) = first {
                if g[i] == 0 {
                    continue;
                }
            }
            let rest: Vec<i64> = t.iter().zip(g).map(|(a, b)| a - b).collect();
            if self.nonnegative && rest.iter().any(|&x| x < 0) {
                continue;
            }
            if self.cone.locate(&rest).is_none() {
                continue;
            }
            path.push(k);
            if self.search(rest, path, limits)? {
                return Ok(true);
            }
            path.pop();
        }
        self.failed.insert(t);
        Ok(false)
    }
}

pub fn hilbert_basis(gens: &[Vec<i64>], limits: &Limits) -> Result<HilbertBasisResult> {
    let cone = ConeLattice::new(gens, limits)?;
    hilbert_basis_of_cone(&cone, limits)
}

pub fn hilbert_basis_of_cone(cone: &ConeLattice, limits: &Limits) -> Result<HilbertBasisResult> {
    let coords = cone.hilbert_basis_coords(limits)?;
    let basis: Vec<Vec<i64>> = coords.iter().map(|c| cone.lattice_basis.expand(c)).collect();
    let mut member = SemigroupMembership::new(cone);
    let mut witnesses = Vec::with_capacity(basis.len());
    for b in &basis {
        witnesses.push(match member.decompose(b, limits)? {
            Some(path) => Membership::Sum(path),
            None => Membership::NotInSemigroup,
        });
    }
    let all_in_semigroup = witnesses.iter().all(|w| matches!(w, Membership::Sum(_)));
    Ok(HilbertBasisResult { basis, all_in_semigroup, witnesses })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalityVia {
    SquarefreeCert,
    HilbertBasis,
}

impl std::fmt::Display for NormalityVia {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NormalityVia::SquarefreeCert => "squarefree-cert",
            NormalityVia::HilbertBasis => "hilbert-basis",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalityReport {
    pub normal: bool,
    /// `None` when the squarefree certificate settled the question.
    pub hilbert_count: Option<usize>,
    pub failing_elements: Vec<ExpVector>,
    pub via: NormalityVia,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NormalityOptions {
    /// Accept a squarefree initial ideal under the natural order as proof.
    pub try_certificate: bool,
}

pub fn is_normal(p: &Poset, q: &Poset, limits: &Limits) -> Result<NormalityReport> {
    is_normal_with(p, q, NormalityOptions::default(), limits)
}

pub fn is_normal_with(p: &Poset, q: &Poset, opts: NormalityOptions, limits: &Limits) -> Result<NormalityReport> {
    let matrix = ExponentMatrix::new(p, q, limits)?;
    if opts.try_certificate {
        let order = ideal::TermOrder::natural(matrix.ncols());
        // a capped certificate attempt falls through to the Hilbert basis
        let gb = match ideal::lattice_groebner(&matrix, &order, limits) {
            Err(Error::ExplosionGuard { what, .. }) => {
                log::info!("squarefree certificate abandoned at the {what} cap");
                Vec::new()
            }
            other => other?,
        };
        if !gb.is_empty() && ideal::analyze_basis(&gb).initial_squarefree {
            return Ok(NormalityReport {
                normal: true,
                hilbert_count: None,
                failing_elements: Vec::new(),
                via: NormalityVia::SquarefreeCert,
            });
        }
    }
    let gens: Vec<Vec<i64>> = matrix.columns().into_iter().map(|c| c.0).collect();
    let result = hilbert_basis(&gens, limits)?;
    let failing_elements: Vec<ExpVector> = result
        .basis
        .iter()
        .zip(&result.witnesses)
        .filter(|(_, w)| **w == Membership::NotInSemigroup)
        .map(|(b, _)| ExpVector(b.clone()))
        .collect();
    Ok(NormalityReport {
        normal: result.all_in_semigroup,
        hilbert_count: Some(result.basis.len()),
        failing_elements,
        via: NormalityVia::HilbertBasis,
    })
}

/// Repeatedly deletes the lowest-index element with exactly one neighbor in
/// the Hasse graph while more than one element remains.
pub fn pendant_reduce(p: &Poset) -> Poset {
    let mut cur = p.clone();
    while cur.len() > 1 {
        let Some(x) = (0..cur.len()).find(|&x| cur.neighbors(x).len() == 1) else { break };
        cur = cur.without(x).expect("nonempty after removal");
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{crown6, v_poset};

    fn lim() -> Limits {
        Limits::default()
    }

    fn gens(p: &Poset, q: &Poset) -> Vec<Vec<i64>> {
        ExponentMatrix::new(p, q, &lim()).unwrap().columns().into_iter().map(|c| c.0).collect()
    }

    #[test]
    fn numerical_semigroup_two_three() {
        let r = hilbert_basis(&[vec![2], vec![3]], &lim()).unwrap();
        assert_eq!(r.basis, vec![vec![1]]);
        assert!(!r.all_in_semigroup);
        assert_eq!(r.witnesses, vec![Membership::NotInSemigroup]);
    }

    #[test]
    fn segre_is_its_own_basis() {
        let g = gens(&Poset::antichain(2).unwrap(), &Poset::chain(2).unwrap());
        let r = hilbert_basis(&g, &lim()).unwrap();
        assert_eq!(r.basis.len(), 4);
        assert!(r.all_in_semigroup);
        let mut b = r.basis.clone();
        b.sort();
        let mut g = g;
        g.sort();
        assert_eq!(b, g);
    }

    #[test]
    fn unimodular_chain_cone() {
        let g = gens(&Poset::chain(2).unwrap(), &Poset::chain(2).unwrap());
        let cone = ConeLattice::new(&g, &lim()).unwrap();
        assert_eq!(cone.dim, 3);
        assert_eq!(cone.simplices.len(), 1);
        assert_eq!(hilbert_basis(&g, &lim()).unwrap().basis.len(), 3);
    }

    #[test]
    fn not_pointed() {
        assert_eq!(hilbert_basis(&[vec![1, 0], vec![-1, 0], vec![0, 1]], &lim()).unwrap_err(), Error::NotPointed);
    }

    #[test]
    fn plane_cone_missing_a_point() {
        let g = vec![vec![1, 0], vec![1, 1], vec![1, 3]];
        let r = hilbert_basis(&g, &lim()).unwrap();
        let mut b = r.basis.clone();
        b.sort();
        assert_eq!(b, vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![1, 3]]);
        assert!(!r.all_in_semigroup);
    }

    #[test]
    fn known_normal_examples() {
        let v = v_poset();
        assert!(is_normal(&v, &v, &lim()).unwrap().normal);
        assert!(is_normal(&v, &Poset::chain(3).unwrap(), &lim()).unwrap().normal);
        let r = is_normal(&Poset::chain(1).unwrap(), &crown6(), &lim()).unwrap();
        assert!(r.normal);
        assert_eq!(r.hilbert_count, Some(6));
    }

    #[test]
    fn certificate_path() {
        let v = v_poset();
        let r =
            is_normal_with(&v, &Poset::chain(2).unwrap(), NormalityOptions { try_certificate: true }, &lim()).unwrap();
        assert_eq!(r.via, NormalityVia::SquarefreeCert);
        assert!(r.normal);
    }

    #[test]
    fn pendant_examples() {
        assert_eq!(pendant_reduce(&v_poset()).len(), 1);
        assert_eq!(pendant_reduce(&Poset::chain(4).unwrap()).len(), 1);
        let c = crown6();
        assert!(pendant_reduce(&c).is_isomorphic(&c).unwrap());
        assert_eq!(pendant_reduce(&Poset::antichain(3).unwrap()).len(), 3);
    }
}
