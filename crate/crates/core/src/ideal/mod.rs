//! The defining ideal `J_{P,Q}` of `K[P,Q]`: the kernel of `y_phi -> u_phi`,
//! its reduced Groebner bases under graded reverse-lexicographic orders, and
//! its minimal generator degrees.

mod groebner;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Mutex;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hom::IsotoneMap;
use crate::limits::Limits;
use crate::linalg;
use crate::poset::Poset;
use crate::toric::ExponentMatrix;

pub(crate) use groebner::{cmp_revlex, Bin, Engine};

/// Graded reverse-lexicographic order on `K[y_phi]`. `sequence[0]` is the
/// smallest variable; `rank` is its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermOrder {
    sequence: Vec<usize>,
    rank: Vec<usize>,
}

impl TermOrder {
    /// Variables ordered by index, which for `Hom(P,Q)` in enumeration order
    /// is the first-difference rule on label tuples.
    pub fn natural(n: usize) -> Self {
        TermOrder { sequence: (0..n).collect(), rank: (0..n).collect() }
    }

    /// `sequence` lists the variables from smallest to largest.
    pub fn from_sequence(sequence: Vec<usize>) -> Result<Self> {
        let n = sequence.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, &v) in sequence.iter().enumerate() {
            if v >= n || rank[v] != usize::MAX {
                return Err(Error::InvalidInput(format!("not a permutation: {sequence:?}")));
            }
            rank[v] = pos;
        }
        Ok(TermOrder { sequence, rank })
    }

    /// Same relative order with `v` moved to the bottom.
    pub fn with_cheapest(&self, v: usize) -> Self {
        let mut sequence = vec![v];
        sequence.extend(self.sequence.iter().copied().filter(|&w| w != v));
        TermOrder::from_sequence(sequence).expect("permutation")
    }

    pub fn shuffled<R: rand::Rng>(n: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut sequence: Vec<usize> = (0..n).collect();
        sequence.shuffle(rng);
        TermOrder::from_sequence(sequence).expect("permutation")
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn is_natural(&self) -> bool {
        self.sequence.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn cheapest(&self) -> Option<usize> {
        self.sequence.first().copied()
    }

    pub fn compare_vars(&self, a: usize, b: usize) -> Ordering {
        self.rank[a].cmp(&self.rank[b])
    }

    /// Compares two exponent vectors indexed by variable.
    pub fn compare(&self, a: &[u32], b: &[u32]) -> Ordering {
        cmp_revlex(&self.to_internal(a), &self.to_internal(b))
    }

    fn to_internal(&self, m: &[u32]) -> Vec<u32> {
        self.sequence.iter().map(|&v| m[v]).collect()
    }

    fn to_public(&self, m: &[u32]) -> Vec<u32> {
        let mut out = vec![0; m.len()];
        for (pos, &v) in self.sequence.iter().enumerate() {
            out[v] = m[pos];
        }
        out
    }

    fn bin(&self, b: &Binomial, cancel: bool) -> Option<Bin> {
        Bin::new(self.to_internal(&b.plus), self.to_internal(&b.minus), cancel)
    }

    fn unbin(&self, b: &Bin) -> Binomial {
        Binomial { plus: self.to_public(&b.lead), minus: self.to_public(&b.trail) }
    }
}

/// The order whose variable comparison is the first-difference rule on label
/// tuples; with maps enumerated lexicographically this is the index order.
pub fn revlex_order(p: &Poset, q: &Poset, limits: &Limits) -> Result<TermOrder> {
    let maps = crate::hom::enumerate_isotone(p, q, limits)?;
    Ok(TermOrder::natural(maps.len()))
}

/// `y^plus - y^minus`, with `plus` the leading side under the order that
/// produced it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Binomial {
    pub plus: Vec<u32>,
    pub minus: Vec<u32>,
}

impl Binomial {
    pub fn new(a: Vec<u32>, b: Vec<u32>, order: &TermOrder) -> Option<Binomial> {
        order.bin(&Binomial { plus: a, minus: b }, false).map(|b| order.unbin(&b))
    }

    pub fn degree(&self) -> u32 {
        self.plus.iter().sum()
    }

    pub fn lead_is_squarefree(&self) -> bool {
        self.plus.iter().all(|&e| e <= 1)
    }

    /// Both sides have the same image under `y_phi -> u_phi`.
    pub fn in_kernel(&self, a: &ExponentMatrix) -> bool {
        a.image(&self.plus) == a.image(&self.minus)
    }

    pub fn difference(&self) -> Vec<i64> {
        self.plus.iter().zip(&self.minus).map(|(&a, &b)| a as i64 - b as i64).collect()
    }

    fn from_difference(v: &[i64]) -> Result<Binomial> {
        let conv = |x: i64| u32::try_from(x).map_err(|_| Error::InternalCheckFailed("exponent overflow".into()));
        Ok(Binomial {
            plus: v.iter().map(|&x| conv(x.max(0))).collect::<Result<_>>()?,
            minus: v.iter().map(|&x| conv((-x).max(0))).collect::<Result<_>>()?,
        })
    }

    /// Text form with variables named by map tuples.
    pub fn display<'a>(&'a self, maps: &'a [IsotoneMap]) -> BinomialDisplay<'a> {
        BinomialDisplay { b: self, maps }
    }
}

pub struct BinomialDisplay<'a> {
    b: &'a Binomial,
    maps: &'a [IsotoneMap],
}

pub fn monomial_string(m: &[u32], maps: &[IsotoneMap]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { format!("y{}", maps[v]) } else { format!("y{}^{e}", maps[v]) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for BinomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - {}", monomial_string(&self.b.plus, self.maps), monomial_string(&self.b.minus, self.maps))
    }
}

/// Parses `y(1,4)*y(2,5)^2` against a variable list.
pub fn parse_monomial(text: &str, maps: &[IsotoneMap]) -> Result<Vec<u32>> {
    let mut m = vec![0u32; maps.len()];
    for factor in text.split('*').map(str::trim).filter(|s| !s.is_empty()) {
        let (var, exp) = match factor.split_once('^') {
            Some((v, e)) => (v, e.trim().parse::<u32>().map_err(|_| Error::InvalidInput(factor.into()))?),
            None => (factor, 1),
        };
        let map = IsotoneMap::parse(var.trim().trim_start_matches(['y', 'u']))?;
        let idx = maps
            .iter()
            .position(|x| *x == map)
            .ok_or_else(|| Error::InvalidInput(format!("{var} is not an isotone map")))?;
        m[idx] += exp;
    }
    Ok(m)
}

/// `J_{P,Q}` with its minimal generators and a reduced Groebner basis under
/// the natural order.
#[derive(Debug)]
pub struct BinomialIdeal {
    pub matrix: ExponentMatrix,
    /// Minimal homogeneous generators, oriented by the natural order.
    pub generators: Vec<Binomial>,
    natural_gb: Vec<Binomial>,
    cache: Mutex<HashMap<TermOrder, Vec<Binomial>>>,
}

impl BinomialIdeal {
    pub fn maps(&self) -> &[IsotoneMap] {
        &self.matrix.maps
    }

    pub fn nvars(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.natural_gb.is_empty()
    }

    pub fn generator_degrees(&self) -> Vec<u32> {
        self.generators.iter().map(Binomial::degree).collect()
    }

    pub fn format(&self, b: &Binomial) -> String {
        b.display(self.maps()).to_string()
    }
}

fn run_groebner(gens: &[Binomial], order: &TermOrder, n: usize, limits: &Limits) -> Result<(Vec<Bin>, bool)> {
    let mut engine = Engine::new(n, true, limits);
    let mut sorted: Vec<Bin> = gens.iter().filter_map(|g| order.bin(g, true)).collect();
    sorted.sort_by(|a, b| cmp_revlex(&a.lead, &b.lead));
    sorted.dedup();
    for g in sorted {
        engine.add(g)?;
    }
    engine.complete(None)?;
    engine.reduced()
}

/// Reduced Groebner basis of the ideal generated by `gens`, enlarged by
/// dividing out common monomial factors along the way. For generators of a
/// lattice ideal the result is that ideal's reduced basis.
fn saturated_groebner(gens: &[Binomial], order: &TermOrder, n: usize, limits: &Limits) -> Result<Vec<Binomial>> {
    let mut current: Vec<Binomial> = gens.to_vec();
    loop {
        let (gb, changed) = run_groebner(&current, order, n, limits)?;
        let gb: Vec<Binomial> = gb.iter().map(|b| order.unbin(b)).collect();
        if !changed {
            return Ok(gb);
        }
        current = gb;
    }
}

/// Reduced Groebner basis of the lattice ideal of `ker A` under `order`.
///
/// Starts from a Hermite-form kernel basis `B`, which is nonnegative on its
/// pivot columns, so `I_B` saturated at the remaining variables already equals
/// the lattice ideal. Each Buchberger run with variable `v` cheapest and
/// common factors cancelled yields an ideal saturated at `v`.
pub fn lattice_groebner(a: &ExponentMatrix, order: &TermOrder, limits: &Limits) -> Result<Vec<Binomial>> {
    let n = a.ncols();
    if order.len() != n {
        return Err(Error::InvalidInput(format!("order on {} variables, ring has {n}", order.len())));
    }
    let (hermite, pivots) = linalg::integer_kernel_hermite(&a.rows, n)?;
    if hermite.is_empty() {
        return Ok(Vec::new());
    }
    let mut vectors: BTreeSet<Vec<i64>> = hermite.into_iter().collect();
    vectors.extend(linalg::integer_kernel(&a.rows, n)?);
    let mut current: Vec<Binomial> = vectors.iter().map(|v| Binomial::from_difference(v)).collect::<Result<_>>()?;
    let pivot_set: BTreeSet<usize> = pivots.into_iter().collect();
    let target_cheapest = order.cheapest();
    for v in (0..n).filter(|v| !pivot_set.contains(v) && Some(*v) != target_cheapest) {
        let saturating = order.with_cheapest(v);
        let (gb, _) = run_groebner(&current, &saturating, n, limits)?;
        current = gb.iter().map(|b| saturating.unbin(b)).collect();
        log::trace!("saturated at variable {v}: {} generators", current.len());
    }
    let gb = saturated_groebner(&current, order, n, limits)?;
    for g in &gb {
        if !g.in_kernel(a) {
            return Err(Error::InternalCheckFailed(format!("binomial {g:?} is not in the kernel")));
        }
    }
    Ok(gb)
}

/// Greedy minimal generating subset of a homogeneous Groebner basis, scanned
/// by degree then lead.
pub fn minimal_generators(gb: &[Binomial], order: &TermOrder, limits: &Limits) -> Result<Vec<Binomial>> {
    let Some(first) = gb.first() else { return Ok(Vec::new()) };
    let n = first.plus.len();
    let mut sorted: Vec<&Binomial> = gb.iter().collect();
    sorted.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| order.compare(&a.plus, &b.plus)));
    let mut engine = Engine::new(n, false, limits);
    let mut kept = Vec::new();
    for g in sorted {
        engine.complete(Some(g.degree()))?;
        let b = order.bin(g, false).ok_or_else(|| Error::InternalCheckFailed("zero binomial".into()))?;
        if engine.add(b)? {
            kept.push(g.clone());
        }
    }
    Ok(kept)
}

pub fn toric_ideal(p: &Poset, q: &Poset, limits: &Limits) -> Result<BinomialIdeal> {
    let matrix = ExponentMatrix::new(p, q, limits)?;
    ideal_of_matrix(matrix, limits)
}

pub fn ideal_of_matrix(matrix: ExponentMatrix, limits: &Limits) -> Result<BinomialIdeal> {
    let order = TermOrder::natural(matrix.ncols());
    let natural_gb = lattice_groebner(&matrix, &order, limits)?;
    let generators = minimal_generators(&natural_gb, &order, limits)?;
    let mut cache = HashMap::new();
    cache.insert(order, natural_gb.clone());
    Ok(BinomialIdeal { matrix, generators, natural_gb, cache: Mutex::new(cache) })
}

/// Reduced Groebner basis sorted by degree then leading monomial.
pub fn reduced_groebner(ideal: &BinomialIdeal, order: &TermOrder, limits: &Limits) -> Result<Vec<Binomial>> {
    if let Some(gb) = ideal.cache.lock().expect("cache lock").get(order) {
        return Ok(gb.clone());
    }
    let gb = saturated_groebner(&ideal.natural_gb, order, ideal.nvars(), limits)?;
    for g in &gb {
        if !g.in_kernel(&ideal.matrix) {
            return Err(Error::InternalCheckFailed(format!("binomial {g:?} is not in the kernel")));
        }
    }
    ideal.cache.lock().expect("cache lock").insert(order.clone(), gb.clone());
    Ok(gb)
}

/// Normal form of a monomial modulo a Groebner basis oriented by `order`.
pub fn normal_form(gb: &[Binomial], m: &[u32]) -> Vec<u32> {
    let mut m = m.to_vec();
    'outer: loop {
        for g in gb {
            if g.plus.iter().zip(&m).all(|(a, b)| a <= b) {
                for ((x, a), b) in m.iter_mut().zip(&g.plus).zip(&g.minus) {
                    *x = *x - a + b;
                }
                continue 'outer;
            }
        }
        return m;
    }
}

/// Degree multiset as a sorted list.
pub fn minimal_generator_degrees(ideal: &BinomialIdeal) -> Vec<u32> {
    let mut d = ideal.generator_degrees();
    d.sort_unstable();
    d
}

pub fn degree_histogram(degrees: &[u32]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &d in degrees {
        *h.entry(d).or_default() += 1;
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InitialIdealAnalysis {
    pub max_gb_degree: u32,
    pub initial_squarefree: bool,
}

pub fn analyze_basis(gb: &[Binomial]) -> InitialIdealAnalysis {
    InitialIdealAnalysis {
        max_gb_degree: gb.iter().map(Binomial::degree).max().unwrap_or(0),
        initial_squarefree: gb.iter().all(Binomial::lead_is_squarefree),
    }
}

pub fn initial_ideal_analysis(
    ideal: &BinomialIdeal,
    order: &TermOrder,
    limits: &Limits,
) -> Result<InitialIdealAnalysis> {
    Ok(analyze_basis(&reduced_groebner(ideal, order, limits)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{crown6, from_labels, v_poset};

    fn lim() -> Limits {
        Limits::default()
    }

    fn maps_of(ideal: &BinomialIdeal) -> Vec<String> {
        ideal.maps().iter().map(|m| m.to_string()).collect()
    }

    #[test]
    fn natural_order_examples() {
        let c3 = Poset::chain(3).unwrap();
        let q = from_labels(3, &[(1, 3), (2, 3)]).unwrap();
        let maps = crate::hom::enumerate_isotone(&c3, &q, &lim()).unwrap();
        let names: Vec<String> = maps.iter().map(|m| m.compact()).collect();
        assert_eq!(names, ["111", "113", "133", "222", "223", "233", "333"]);
        let order = revlex_order(&c3, &q, &lim()).unwrap();
        assert!(order.is_natural());
        // y1 y3 < y2^2 for y1 < y2 < y3
        let o3 = TermOrder::natural(3);
        assert_eq!(o3.compare(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        // (1,1,3) < (1,3,1): first difference at position 2
        let x = IsotoneMap(vec![0, 0, 2]);
        let y = IsotoneMap(vec![0, 2, 0]);
        assert!(x < y);
    }

    #[test]
    fn chain_chain_is_zero() {
        let c2 = Poset::chain(2).unwrap();
        let i = toric_ideal(&c2, &c2, &lim()).unwrap();
        assert!(i.is_zero());
        assert!(minimal_generator_degrees(&i).is_empty());
        let a = initial_ideal_analysis(&i, &TermOrder::natural(3), &lim()).unwrap();
        assert_eq!(a, InitialIdealAnalysis { max_gb_degree: 0, initial_squarefree: true });
    }

    #[test]
    fn segre_quadric() {
        let i = toric_ideal(&Poset::antichain(2).unwrap(), &Poset::chain(2).unwrap(), &lim()).unwrap();
        assert_eq!(i.generators.len(), 1);
        let text = i.format(&i.generators[0]);
        assert_eq!(text, "y(1,2)*y(2,1) - y(1,1)*y(2,2)");
        assert_eq!(minimal_generator_degrees(&i), [2]);
    }

    #[test]
    fn crown_generator_is_cubic() {
        let i = toric_ideal(&Poset::chain(2).unwrap(), &crown6(), &lim()).unwrap();
        assert_eq!(maps_of(&i).len(), 12);
        assert_eq!(i.generators.len(), 1);
        // y(1,4) is the cheapest variable in play, so the other side leads
        assert_eq!(i.format(&i.generators[0]), "y(1,5)*y(2,6)*y(3,4) - y(1,4)*y(2,5)*y(3,6)");
        let a = initial_ideal_analysis(&i, &TermOrder::natural(12), &lim()).unwrap();
        assert_eq!(a, InitialIdealAnalysis { max_gb_degree: 3, initial_squarefree: true });
    }

    #[test]
    fn hibi_quadric_for_v() {
        let i = toric_ideal(&v_poset(), &Poset::chain(2).unwrap(), &lim()).unwrap();
        let gb = reduced_groebner(&i, &TermOrder::natural(5), &lim()).unwrap();
        assert_eq!(gb.len(), 1);
        // ideals {1,2} = (1,1,2), {1,3} = (1,2,1), {1} = (1,2,2), {1,2,3} = (1,1,1)
        assert_eq!(i.format(&gb[0]), "y(1,1,2)*y(1,2,1) - y(1,1,1)*y(1,2,2)");
    }

    #[test]
    fn parse_round_trip() {
        let i = toric_ideal(&Poset::chain(2).unwrap(), &crown6(), &lim()).unwrap();
        let m = parse_monomial("y(1,4)*y(2,5)^2", i.maps()).unwrap();
        assert_eq!(monomial_string(&m, i.maps()), "y(1,4)*y(2,5)^2");
        assert!(parse_monomial("y(4,1)", i.maps()).is_err());
    }
}
