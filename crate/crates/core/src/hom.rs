//! Isotone maps `P -> Q` and the pointwise-ordered Hom poset.

use std::fmt;

use serde::Serialize;

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::poset::Poset;

/// An isotone map stored as the tuple of target indices `(j_1, .., j_n)`
/// (0-based; displayed 1-based). Ordering is lexicographic on the tuple,
/// which is the variable order used for the presentation ring.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IsotoneMap(pub Vec<usize>);

impl IsotoneMap {
    pub fn targets(&self) -> &[usize] {
        &self.0
    }

    pub fn source_size(&self) -> usize {
        self.0.len()
    }

    pub fn is_isotone(&self, p: &Poset, q: &Poset) -> bool {
        self.0.len() == p.len()
            && self.0.iter().all(|&t| t < q.len())
            && p.covers().iter().all(|&(a, b)| q.leq(self.0[a], self.0[b]))
    }

    /// Parses `1,4` or `14` (single digit labels) into a 0-based map.
    pub fn parse(text: &str) -> Result<IsotoneMap> {
        let text = text.trim().trim_start_matches(['(', 'y', 'u']).trim_start_matches('(');
        let text = text.trim_end_matches(')');
        let labels: Option<Vec<usize>> = if text.contains(',') {
            text.split(',').map(|t| t.trim().parse().ok()).collect()
        } else {
            text.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        match labels {
            Some(l) if !l.is_empty() && l.iter().all(|&x| x >= 1) => {
                Ok(IsotoneMap(l.into_iter().map(|x| x - 1).collect()))
            }
            _ => Err(Error::InvalidInput(format!("cannot parse map `{text}`"))),
        }
    }

    /// Compact name: `123` when all labels are single digits, else `(1,2,10)`.
    pub fn compact(&self) -> String {
        if self.0.iter().all(|&t| t < 9) {
            self.0.iter().map(|t| (t + 1).to_string()).collect()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for IsotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, t) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", t + 1)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for IsotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for IsotoneMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All isotone maps, in increasing lexicographic (variable) order.
///
/// Backtracks over `P` in label order; since labels are a linear extension,
/// every lower cover of `p_i` is already assigned when `p_i` is reached.
pub fn enumerate_isotone(p: &Poset, q: &Poset, limits: &Limits) -> Result<Vec<IsotoneMap>> {
    let n = p.len();
    let lower: Vec<Vec<usize>> = (0..n).map(|i| p.lower_covers(i).collect()).collect();
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    let cap = limits.caps.hom;
    fn go(
        i: usize,
        q: &Poset,
        lower: &[Vec<usize>],
        current: &mut Vec<usize>,
        out: &mut Vec<IsotoneMap>,
        cap: u64,
    ) -> Result<()> {
        if i == current.len() {
            if out.len() as u64 >= cap {
                return Err(Error::ExplosionGuard { what: "isotone map enumeration", cap });
            }
            out.push(IsotoneMap(current.clone()));
            return Ok(());
        }
        for t in 0..q.len() {
            if lower[i].iter().all(|&k| q.leq(current[k], t)) {
                current[i] = t;
                go(i + 1, q, lower, current, out, cap)?;
            }
        }
        Ok(())
    }
    go(0, q, &lower, &mut current, &mut out, cap)?;
    Ok(out)
}

pub fn count_isotone(p: &Poset, q: &Poset, limits: &Limits) -> Result<usize> {
    Ok(enumerate_isotone(p, q, limits)?.len())
}

/// `Hom(P,Q)` ordered pointwise. Element `k` is the `k`-th map in
/// lexicographic order, which is already a linear extension.
pub fn hom_poset(p: &Poset, q: &Poset, limits: &Limits) -> Result<(Poset, Vec<IsotoneMap>)> {
    let maps = enumerate_isotone(p, q, limits)?;
    limits.guard("Hom poset size", maps.len() as u64, limits.caps.hom_poset)?;
    let m = maps.len();
    let mut leq = BitMatrix::new(m);
    for a in 0..m {
        for b in a..m {
            if pointwise_leq(q, &maps[a], &maps[b]) {
                leq.set(a, b);
            }
        }
    }
    let names = maps.iter().map(IsotoneMap::compact).collect();
    let poset = Poset::from_order(names, leq)?;
    Ok((poset, maps))
}

pub fn pointwise_leq(q: &Poset, a: &IsotoneMap, b: &IsotoneMap) -> bool {
    a.0.iter().zip(&b.0).all(|(&x, &y)| q.leq(x, y))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub hom_count: usize,
    pub checks: Vec<IdentityCheck>,
}

impl DecompositionReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Counts behind the sum/product/dual rules for Hom sets:
/// `|Hom(sum P_i, Q)| = prod |Hom(P_i,Q)|`, for connected `P`
/// `|Hom(P, sum Q_j)| = sum |Hom(P,Q_j)|`, and `Hom(P,Q) ~ Hom(P^v,Q^v)`
/// via an order-reversing bijection.
pub fn verify_decomposition(p: &Poset, q: &Poset, limits: &Limits) -> Result<DecompositionReport> {
    let maps = enumerate_isotone(p, q, limits)?;
    let total = maps.len();
    let mut checks = Vec::new();

    let product: usize =
        p.connected_components().iter().map(|c| count_isotone(c, q, limits)).product::<Result<usize>>()?;
    checks.push(IdentityCheck { name: "source-sum", lhs: total, rhs: product, holds: total == product });

    if p.is_connected() {
        let sum: usize = q.connected_components().iter().map(|c| count_isotone(p, c, limits)).sum::<Result<usize>>()?;
        checks.push(IdentityCheck { name: "target-sum", lhs: total, rhs: sum, holds: total == sum });
    }

    let (pd, pmap) = p.dual_with_map();
    let (qd, qmap) = q.dual_with_map();
    let dual_maps = enumerate_isotone(&pd, &qd, limits)?;
    let transport = |phi: &IsotoneMap| {
        let mut t = vec![0; phi.0.len()];
        for (i, &x) in phi.0.iter().enumerate() {
            t[pmap[i]] = qmap[x];
        }
        IsotoneMap(t)
    };
    let image: Vec<IsotoneMap> = maps.iter().map(transport).collect();
    let mut bijective = image.iter().all(|m| m.is_isotone(&pd, &qd)) && dual_maps.len() == total;
    if bijective {
        let mut sorted = image.clone();
        sorted.sort();
        bijective = sorted == dual_maps;
    }
    // order reversing: phi <= psi in Hom(P,Q) iff image(psi) <= image(phi)
    if bijective && total <= 400 {
        for (a, ia) in maps.iter().zip(&image) {
            for (b, ib) in maps.iter().zip(&image) {
                if pointwise_leq(q, a, b) != pointwise_leq(&qd, ib, ia) {
                    bijective = false;
                }
            }
        }
    }
    checks.push(IdentityCheck { name: "dual", lhs: total, rhs: dual_maps.len(), holds: bijective });
    Ok(DecompositionReport { hom_count: total, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{order_ideals, v_poset};

    fn lim() -> Limits {
        Limits::default()
    }

    fn brute_force(p: &Poset, q: &Poset) -> Vec<IsotoneMap> {
        let n = p.len();
        let m = q.len();
        let mut out = Vec::new();
        let total = m.pow(n as u32);
        for code in 0..total {
            let mut t = vec![0; n];
            let mut c = code;
            for i in (0..n).rev() {
                t[i] = c % m;
                c /= m;
            }
            let ok = (0..n).all(|a| (0..n).all(|b| !p.leq(a, b) || q.leq(t[a], t[b])));
            if ok {
                out.push(IsotoneMap(t));
            }
        }
        out
    }

    #[test]
    fn v_to_v_has_eleven_maps() {
        let v = v_poset();
        let maps = enumerate_isotone(&v, &v, &lim()).unwrap();
        let names: Vec<String> = maps.iter().map(IsotoneMap::compact).collect();
        let mut expected = vec!["111", "112", "121", "113", "131", "122", "123", "132", "133", "222", "333"];
        expected.sort();
        assert_eq!(names, expected);
    }

    #[test]
    fn chain_counts() {
        let c2 = Poset::chain(2).unwrap();
        let c3 = Poset::chain(3).unwrap();
        assert_eq!(count_isotone(&c2, &c3, &lim()).unwrap(), 6);
    }

    #[test]
    fn v_into_two_chain_matches_ideals() {
        let maps = enumerate_isotone(&v_poset(), &Poset::chain(2).unwrap(), &lim()).unwrap();
        assert_eq!(maps.len(), 5);
        assert_eq!(order_ideals(&v_poset()).len(), 5);
        // phi^{-1}(1) is an order ideal
        for m in &maps {
            let ideal: Vec<usize> = (0..3).filter(|&i| m.0[i] == 0).collect();
            assert!(order_ideals(&v_poset()).contains(&ideal));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let a = Poset::antichain(4).unwrap();
        let mut l = lim();
        l.caps.hom = 10;
        let err = enumerate_isotone(&a, &a, &l).unwrap_err();
        assert!(matches!(err, Error::ExplosionGuard { .. }));
    }

    #[test]
    fn enumeration_equals_brute_force() {
        let mut posets = Vec::new();
        for k in 1..=4 {
            posets.extend(crate::poset::enumerate_posets(k).unwrap());
        }
        for p in &posets {
            for q in &posets {
                let fast = enumerate_isotone(p, q, &lim()).unwrap();
                assert!(fast.iter().all(|m| m.is_isotone(p, q)));
                assert_eq!(fast, brute_force(p, q), "{p} -> {q}");
            }
        }
    }

    #[test]
    fn hom_poset_v_v_covers() {
        let v = v_poset();
        let (h, maps) = hom_poset(&v, &v, &lim()).unwrap();
        assert_eq!(h.len(), 11);
        let idx = |s: &str| h.index_of(s).unwrap();
        let mut up: Vec<&str> = h.upper_covers(idx("111")).map(|i| h.name(i)).collect();
        up.sort();
        // pointwise in V: 2 and 3 are incomparable, so 113 and 131 also cover 111
        assert_eq!(up, vec!["112", "113", "121", "131"]);
        assert_eq!(h.covers().len(), 14);
        // cover relations agree with brute-force pointwise comparison
        for a in 0..11 {
            for b in 0..11 {
                let lt = a != b && pointwise_leq(&v, &maps[a], &maps[b]);
                let covered = lt
                    && !(0..11).any(|c| {
                        c != a
                            && c != b
                            && pointwise_leq(&v, &maps[a], &maps[c])
                            && pointwise_leq(&v, &maps[c], &maps[b])
                    });
                assert_eq!(h.covers().contains(&(a, b)), covered);
            }
        }
    }

    #[test]
    fn hom_from_point_is_target() {
        let q = crate::poset::crown6();
        let (h, _) = hom_poset(&Poset::chain(1).unwrap(), &q, &lim()).unwrap();
        assert!(h.is_isomorphic(&q).unwrap());
    }

    #[test]
    fn hom_into_two_chain_is_ideal_lattice() {
        let (h, maps) = hom_poset(&v_poset(), &Poset::chain(2).unwrap(), &lim()).unwrap();
        // phi <= psi iff phi^{-1}(1) contains psi^{-1}(1): reverse inclusion of ideals,
        // i.e. inclusion of the complementary filters; both lattices are the same shape
        let ideals: Vec<Vec<usize>> = maps.iter().map(|m| (0..3).filter(|&i| m.0[i] == 0).collect()).collect();
        for a in 0..5 {
            for b in 0..5 {
                let sup = ideals[b].iter().all(|x| ideals[a].contains(x));
                assert_eq!(h.leq(a, b), sup);
            }
        }
    }

    #[test]
    fn decomposition_identities() {
        let v = v_poset();
        let r = verify_decomposition(&Poset::antichain(2).unwrap(), &v, &lim()).unwrap();
        assert_eq!(r.hom_count, 9);
        assert!(r.all_hold());
        let target = v.sum(&Poset::chain(1).unwrap());
        let r = verify_decomposition(&v, &target, &lim()).unwrap();
        assert_eq!(r.hom_count, 12);
        assert!(r.all_hold());
        let r = verify_decomposition(&v, &v, &lim()).unwrap();
        assert_eq!(r.hom_count, 11);
        assert_eq!(r.checks.last().unwrap().rhs, 11);
        assert!(r.all_hold());
    }

    #[test]
    fn cardinality_at_least_target_size() {
        let small: Vec<Poset> = (1..=3).flat_map(|k| crate::poset::enumerate_posets(k).unwrap()).collect();
        for p in &small {
            for q in &small {
                let c = count_isotone(p, q, &lim()).unwrap();
                assert!(c >= q.len());
                // single-element posets on either side are degenerate equality cases
                let equality = p.len() == 1 || q.len() == 1 || (p.is_connected() && q.is_antichain());
                assert_eq!(c == q.len(), equality, "{p} {q}");
            }
        }
    }

    #[test]
    fn parse_map() {
        assert_eq!(IsotoneMap::parse("1,4").unwrap(), IsotoneMap(vec![0, 3]));
        assert_eq!(IsotoneMap::parse("123").unwrap(), IsotoneMap(vec![0, 1, 2]));
        assert_eq!(IsotoneMap::parse("(1,10)").unwrap(), IsotoneMap(vec![0, 9]));
        assert!(IsotoneMap::parse("a,b").is_err());
    }
}
