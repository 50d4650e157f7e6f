//! Standard expressions of monomials of `K[P,Q]`: a product `u_phi u_psi` is
//! nonstandard when its degree-2 fiber holds a reverse-lex smaller pair.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hom::{enumerate_isotone, IsotoneMap};
use crate::ideal::TermOrder;
use crate::limits::Limits;
use crate::poset::Poset;
use crate::toric::ExpVector;

/// A product of generators, factors kept sorted in variable order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expression {
    pub factors: Vec<IsotoneMap>,
    pub product: ExpVector,
}

impl Expression {
    pub fn compact(&self) -> String {
        self.factors.iter().map(|f| format!("u{f}")).collect::<Vec<_>>().join("*")
    }
}

/// `Hom(P,Q)` with a term order on its variables.
#[derive(Debug, Clone)]
pub struct Straightener {
    pub p: Poset,
    pub q: Poset,
    pub maps: Vec<IsotoneMap>,
    index: HashMap<IsotoneMap, usize>,
    pub order: TermOrder,
}

impl Straightener {
    pub fn new(p: &Poset, q: &Poset, limits: &Limits) -> Result<Self> {
        let maps = enumerate_isotone(p, q, limits)?;
        let order = TermOrder::natural(maps.len());
        Ok(Self::with_order(p, q, maps, order))
    }

    pub fn with_order(p: &Poset, q: &Poset, maps: Vec<IsotoneMap>, order: TermOrder) -> Self {
        let index = maps.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Straightener { p: p.clone(), q: q.clone(), maps, index, order }
    }

    pub fn var(&self, m: &IsotoneMap) -> Result<usize> {
        self.index.get(m).copied().ok_or_else(|| Error::InvalidInput(format!("{m} is not isotone")))
    }

    fn q_len(&self) -> usize {
        self.q.len()
    }

    pub fn expression(&self, factors: &[IsotoneMap]) -> Result<Expression> {
        let mut vars: Vec<usize> = factors.iter().map(|f| self.var(f)).collect::<Result<_>>()?;
        vars.sort_by(|&a, &b| self.order.compare_vars(a, b));
        let factors: Vec<IsotoneMap> = vars.iter().map(|&v| self.maps[v].clone()).collect();
        let mut product = vec![0i64; self.p.len() * self.q_len()];
        for f in &factors {
            for (p, &t) in f.0.iter().enumerate() {
                product[p * self.q_len() + t] += 1;
            }
        }
        Ok(Expression { factors, product: ExpVector(product) })
    }

    fn monomial(&self, vars: &[usize]) -> Vec<u32> {
        let mut m = vec![0u32; self.maps.len()];
        for &v in vars {
            m[v] += 1;
        }
        m
    }

    /// Unordered pairs `{phi', psi'}` with `u_phi' u_psi' = u_phi u_psi`.
    pub fn quadratic_fiber(&self, phi: &IsotoneMap, psi: &IsotoneMap) -> Vec<(usize, usize)> {
        let n = self.p.len();
        let diff: Vec<usize> = (0..n).filter(|&k| phi.0[k] != psi.0[k]).collect();
        let mut out = Vec::new();
        for mask in 0u64..1 << diff.len() {
            let mut a = phi.0.clone();
            let mut b = psi.0.clone();
            for (bit, &k) in diff.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    std::mem::swap(&mut a[k], &mut b[k]);
                }
            }
            let (Some(&x), Some(&y)) = (self.index.get(&IsotoneMap(a)), self.index.get(&IsotoneMap(b))) else {
                continue;
            };
            let pair = if self.order.compare_vars(x, y).is_le() { (x, y) } else { (y, x) };
            out.push(pair);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Reverse-lex smallest pair in the quadratic fiber.
    pub fn smallest_pair(&self, phi: &IsotoneMap, psi: &IsotoneMap) -> (usize, usize) {
        self.quadratic_fiber(phi, psi)
            .into_iter()
            .min_by(|a, b| self.order.compare(&self.monomial(&[a.0, a.1]), &self.monomial(&[b.0, b.1])))
            .expect("fiber contains the pair itself")
    }

    pub fn is_nonstandard_pair(&self, phi: &IsotoneMap, psi: &IsotoneMap) -> Result<bool> {
        let (a, b) = (self.var(phi)?, self.var(psi)?);
        let (x, y) = self.smallest_pair(phi, psi);
        Ok(self.monomial(&[x, y]) != self.monomial(&[a, b]))
    }

    /// For `P` a chain: with `y_phi < y_psi`, some `2 <= i <= n` has
    /// `phi(i) > psi(i)` by label, `phi(i-1) <= psi(i)` and `psi(i-1) <= phi(i)`.
    pub fn chain_nonstandard_criterion(&self, phi: &IsotoneMap, psi: &IsotoneMap) -> Result<bool> {
        if !self.p.is_chain() {
            return Err(Error::NotAChain);
        }
        let (a, b) = (self.var(phi)?, self.var(psi)?);
        let (phi, psi) = if self.order.compare_vars(a, b).is_le() { (phi, psi) } else { (psi, phi) };
        let q = &self.q;
        Ok((1..phi.0.len())
            .any(|i| phi.0[i] > psi.0[i] && q.leq(phi.0[i - 1], psi.0[i]) && q.leq(psi.0[i - 1], phi.0[i])))
    }

    pub fn is_standard(&self, e: &Expression) -> Result<bool> {
        for i in 0..e.factors.len() {
            for j in i + 1..e.factors.len() {
                if self.is_nonstandard_pair(&e.factors[i], &e.factors[j])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Rewrites the first nonstandard pair to its smallest equivalent until
    /// none is left.
    pub fn straighten(&self, e: &Expression) -> Result<Expression> {
        let mut cur = self.expression(&e.factors)?;
        'outer: loop {
            let s = cur.factors.len();
            for i in 0..s {
                for j in i + 1..s {
                    let (x, y) = self.smallest_pair(&cur.factors[i], &cur.factors[j]);
                    let (a, b) = (self.var(&cur.factors[i])?, self.var(&cur.factors[j])?);
                    if self.monomial(&[x, y]) != self.monomial(&[a, b]) {
                        let mut f = cur.factors.clone();
                        f[i] = self.maps[x].clone();
                        f[j] = self.maps[y].clone();
                        cur = self.expression(&f)?;
                        continue 'outer;
                    }
                }
            }
            return Ok(cur);
        }
    }

    /// Every expression of `w` as a product of `s` generators.
    pub fn factorizations(&self, w: &ExpVector, s: usize, limits: &Limits) -> Result<Vec<Expression>> {
        let (n, m) = (self.p.len(), self.q_len());
        if w.0.len() != n * m || (0..n).any(|p| w.block_sum(p, m) != s as i64) || w.0.iter().any(|&x| x < 0) {
            return Ok(Vec::new());
        }
        let lower: Vec<Vec<usize>> = (0..n).map(|p| self.p.lower_covers(p).collect()).collect();
        let mut partial = vec![vec![0usize; n]; s];
        let mut out = Vec::new();
        let mut count = 0u64;
        self.assign(w, s, 0, 0, &lower, &mut partial, &mut out, &mut count, limits)?;
        out.into_iter().map(|f: Vec<IsotoneMap>| self.expression(&f)).collect()
    }

    /// Fills position `p` of factor `k`, keeping factors with equal prefixes
    /// in nondecreasing order so each multiset appears once.
    #[allow(clippy::too_many_arguments)]
    fn assign(
        &self,
        w: &ExpVector,
        s: usize,
        p: usize,
        k: usize,
        lower: &[Vec<usize>],
        partial: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<IsotoneMap>>,
        count: &mut u64,
        limits: &Limits,
    ) -> Result<()> {
        let (n, m) = (self.p.len(), self.q_len());
        if p == n {
            *count += 1;
            limits.guard("fiber size", *count, limits.caps.fiber)?;
            out.push(partial.iter().map(|f| IsotoneMap(f.clone())).collect());
            return Ok(());
        }
        if k == s {
            return self.assign(w, s, p + 1, 0, lower, partial, out, count, limits);
        }
        for t in 0..m {
            let used = (0..k).filter(|&j| partial[j][p] == t).count() as i64;
            if used >= w.0[p * m + t] {
                continue;
            }
            if lower[p].iter().any(|&l| !self.q.leq(partial[k][l], t)) {
                continue;
            }
            if k > 0 && partial[k - 1][..p] == partial[k][..p] && partial[k - 1][p] > t {
                continue;
            }
            partial[k][p] = t;
            self.assign(w, s, p, k + 1, lower, partial, out, count, limits)?;
        }
        Ok(())
    }

    pub fn standard_expressions_of_fiber(&self, w: &ExpVector, s: usize, limits: &Limits) -> Result<Vec<Expression>> {
        let mut out = Vec::new();
        for e in self.factorizations(w, s, limits)? {
            if self.is_standard(&e)? {
                out.push(e);
            }
        }
        Ok(out)
    }

    /// Standard expressions of every fiber of degree `1..=max_degree`, grouped
    /// by product; a fiber with no standard expression cannot occur.
    pub fn fiber_uniqueness(&self, max_degree: usize, limits: &Limits) -> Result<UniquenessReport> {
        let mut report = UniquenessReport::default();
        let nvars = self.maps.len();
        for d in 1..=max_degree {
            let mut fibers: BTreeMap<Vec<i64>, (usize, Vec<Expression>)> = BTreeMap::new();
            let mut vars = vec![0usize; d];
            loop {
                limits.check_time()?;
                let factors: Vec<IsotoneMap> = vars.iter().map(|&v| self.maps[v].clone()).collect();
                let e = self.expression(&factors)?;
                let entry = fibers.entry(e.product.0.clone()).or_default();
                entry.0 += 1;
                if self.is_standard(&e)? {
                    entry.1.push(e);
                }
                // next nondecreasing index tuple
                let Some(k) = (0..d).rev().find(|&k| vars[k] + 1 < nvars) else { break };
                let v = vars[k] + 1;
                for x in vars[k..].iter_mut() {
                    *x = v;
                }
            }
            limits.guard("fiber count", fibers.len() as u64, limits.caps.fiber)?;
            report.fibers_checked += fibers.len();
            for (product, (_, standard)) in fibers {
                if standard.len() != 1 {
                    report.violations.push(FiberViolation { degree: d, product: ExpVector(product), standard });
                }
            }
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberViolation {
    pub degree: usize,
    pub product: ExpVector,
    pub standard: Vec<Expression>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct UniquenessReport {
    pub fibers_checked: usize,
    pub violations: Vec<FiberViolation>,
}

impl UniquenessReport {
    pub fn unique(&self) -> bool {
        self.violations.is_empty()
    }
}
