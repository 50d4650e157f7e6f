//! Finite posets with a canonical linear-extension labeling.
//!
//! Elements are stored as indices `0..n`; the label of element `i` is `i + 1`.
//! Every constructor relabels so that `i < j` as indices whenever element `i`
//! is strictly below element `j`. Downstream term orders depend on that.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::bits::BitMatrix;
use crate::error::{Error, Result};

/// Largest element count accepted by [`enumerate_posets`].
pub const ENUMERATION_CAP: usize = 6;
/// Largest element count accepted by brute-force canonical forms.
pub const CANONICAL_CAP: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    names: Vec<String>,
    leq: BitMatrix,
    covers: Vec<(usize, usize)>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset({self})")
    }
}

/// Builds a poset from element names and cover pairs `(lower, upper)` given by name.
pub fn parse_poset<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Poset> {
    let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
    let index =
        |name: &str| names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownElement(name.to_string()));
    let rel = covers.iter().map(|(a, b)| Ok((index(a.as_ref())?, index(b.as_ref())?))).collect::<Result<Vec<_>>>()?;
    Poset::new(names, &rel)
}

impl Poset {
    /// Poset generated by the strict relations `(a, b)` meaning `a < b`.
    pub fn new(names: Vec<String>, relations: &[(usize, usize)]) -> Result<Poset> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyPoset);
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        let mut leq = BitMatrix::new(n);
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::UnknownElement(format!("#{}", a.max(b) + 1)));
            }
            if a == b {
                return Err(Error::CycleDetected(names[a].clone()));
            }
            leq.set(a, b);
        }
        leq.close();
        Poset::from_order(names, leq)
    }

    /// `leq` must already be reflexive and transitive.
    pub(crate) fn from_order(names: Vec<String>, leq: BitMatrix) -> Result<Poset> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyPoset);
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq.get(i, j) && leq.get(j, i) {
                    return Err(Error::CycleDetected(names[i].clone()));
                }
            }
        }
        let order = lex_min_linear_extension(n, |a, b| leq.get(a, b));
        let mut relabeled = BitMatrix::new(n);
        for (new_i, &old_i) in order.iter().enumerate() {
            for (new_j, &old_j) in order.iter().enumerate() {
                if leq.get(old_i, old_j) {
                    relabeled.set(new_i, new_j);
                }
            }
        }
        let names = order.iter().map(|&i| names[i].clone()).collect();
        let covers = transitive_reduction(n, &relabeled);
        Ok(Poset { names, leq: relabeled, covers })
    }

    pub fn chain(n: usize) -> Result<Poset> {
        let rel: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::new(numbered(n), &rel)
    }

    pub fn antichain(n: usize) -> Result<Poset> {
        Poset::new(numbered(n), &[])
    }

    /// Parses the text format:
    ///
    /// ```text
    /// # comment
    /// elements: 1 2 3
    /// covers: 1<2 1<3
    /// ```
    pub fn from_text(text: &str) -> Result<Poset> {
        let mut elements: Option<Vec<String>> = None;
        let mut covers: Vec<(String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse { line: lineno + 1, msg: msg.to_string() };
            let (key, rest) = line.split_once(':').ok_or_else(|| err("expected `key: values`"))?;
            match key.trim() {
                "elements" => {
                    let list = elements.get_or_insert_with(Vec::new);
                    list.extend(rest.split_whitespace().map(str::to_string));
                }
                "covers" => {
                    for tok in rest.split_whitespace() {
                        let (a, b) = tok
                            .split_once('<')
                            .filter(|(a, b)| !a.is_empty() && !b.is_empty())
                            .ok_or_else(|| err(&format!("bad cover `{tok}`, expected a<b")))?;
                        covers.push((a.to_string(), b.to_string()));
                    }
                }
                other => return Err(err(&format!("unknown key `{other}`"))),
            }
        }
        let elements = elements.unwrap_or_default();
        parse_poset(&elements, &covers)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("elements:");
        for name in &self.names {
            s.push(' ');
            s.push_str(name);
        }
        s.push_str("\ncovers:");
        for &(a, b) in &self.covers {
            s.push_str(&format!(" {}<{}", self.names[a], self.names[b]));
        }
        s.push('\n');
        s
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq.get(a, b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq.get(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn lower_covers(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.1 == i).map(|c| c.0)
    }

    pub fn upper_covers(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.0 == i).map(|c| c.1)
    }

    /// Neighbors of `i` in the Hasse graph, sorted.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .covers
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_chain(&self) -> bool {
        (0..self.len()).all(|i| (0..self.len()).all(|j| self.comparable(i, j)))
    }

    pub fn is_antichain(&self) -> bool {
        self.covers.is_empty()
    }

    pub fn dual(&self) -> Poset {
        self.dual_with_map().0
    }

    /// Dual poset plus the map from old element index to new index.
    pub fn dual_with_map(&self) -> (Poset, Vec<usize>) {
        let n = self.len();
        let mut leq = BitMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                if self.leq(j, i) {
                    leq.set(i, j);
                }
            }
        }
        let dual = Poset::from_order(self.names.clone(), leq).expect("dual of a poset is a poset");
        let map = self.index_map_by_name(&dual);
        (dual, map)
    }

    fn index_map_by_name(&self, other: &Poset) -> Vec<usize> {
        self.names.iter().map(|n| other.index_of(n).expect("same element names")).collect()
    }

    /// Disjoint union. Names are prefixed with `a.`/`b.` only if they collide.
    pub fn sum(&self, other: &Poset) -> Poset {
        let collide = self.names.iter().any(|n| other.names.contains(n));
        let rename = |prefix: &str, n: &String| {
            if collide {
                format!("{prefix}.{n}")
            } else {
                n.clone()
            }
        };
        let n1 = self.len();
        let n = n1 + other.len();
        let mut names: Vec<String> = self.names.iter().map(|x| rename("a", x)).collect();
        names.extend(other.names.iter().map(|x| rename("b", x)));
        let mut leq = BitMatrix::new(n);
        for i in 0..n1 {
            for j in 0..n1 {
                if self.leq(i, j) {
                    leq.set(i, j);
                }
            }
        }
        for i in 0..other.len() {
            for j in 0..other.len() {
                if other.leq(i, j) {
                    leq.set(n1 + i, n1 + j);
                }
            }
        }
        Poset::from_order(names, leq).expect("sum of posets is a poset")
    }

    /// Componentwise product; element `(a,b)` is named `(name_a,name_b)`.
    pub fn product(&self, other: &Poset) -> Poset {
        let (n1, n2) = (self.len(), other.len());
        let n = n1 * n2;
        let names = (0..n).map(|k| format!("({},{})", self.names[k / n2], other.names[k % n2])).collect();
        let mut leq = BitMatrix::new(n);
        for a in 0..n {
            for b in 0..n {
                if self.leq(a / n2, b / n2) && other.leq(a % n2, b % n2) {
                    leq.set(a, b);
                }
            }
        }
        Poset::from_order(names, leq).expect("product of posets is a poset")
    }

    /// Subposet induced on `elements` (in any order).
    pub fn induced(&self, elements: &[usize]) -> Result<Poset> {
        let names = elements.iter().map(|&i| self.names[i].clone()).collect();
        let mut leq = BitMatrix::new(elements.len());
        for (x, &i) in elements.iter().enumerate() {
            for (y, &j) in elements.iter().enumerate() {
                if self.leq(i, j) {
                    leq.set(x, y);
                }
            }
        }
        Poset::from_order(names, leq)
    }

    /// Poset with element `i` removed.
    pub fn without(&self, i: usize) -> Result<Poset> {
        let keep: Vec<usize> = (0..self.len()).filter(|&j| j != i).collect();
        self.induced(&keep)
    }

    /// Connected component id of every element (ids ordered by smallest member).
    pub fn component_ids(&self) -> (usize, Vec<usize>) {
        let n = self.len();
        let mut id = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if id[start] != usize::MAX {
                continue;
            }
            let mut queue = VecDeque::from([start]);
            id[start] = count;
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if id[w] == usize::MAX {
                        id[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (count, id)
    }

    pub fn component_count(&self) -> usize {
        self.component_ids().0
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Connected components of the Hasse graph, each as a poset.
    pub fn connected_components(&self) -> Vec<Poset> {
        let (count, id) = self.component_ids();
        (0..count)
            .map(|c| {
                let members: Vec<usize> = (0..self.len()).filter(|&i| id[i] == c).collect();
                self.induced(&members).expect("component is nonempty")
            })
            .collect()
    }

    /// A rooted tree: the elements below any element form a chain.
    pub fn is_rooted_tree(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            let below: Vec<usize> = (0..n).filter(|&b| self.lt(b, a)).collect();
            below.iter().all(|&x| below.iter().all(|&y| self.comparable(x, y)))
        })
    }

    pub fn is_co_rooted_tree(&self) -> bool {
        self.dual().is_rooted_tree()
    }

    pub fn classify(&self) -> Classification {
        Classification {
            hasse_is_tree: self.is_connected() && self.covers.len() + 1 == self.len(),
            is_rooted_tree: self.is_rooted_tree(),
            is_co_rooted_tree: self.is_co_rooted_tree(),
        }
    }

    pub fn hasse_is_forest(&self) -> bool {
        self.covers.len() + self.component_count() == self.len()
    }

    /// Minimal order encoding over all labelings that are linear extensions.
    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        Ok(self.canonical()?.0)
    }

    fn canonical(&self) -> Result<(CanonicalForm, Vec<usize>)> {
        let n = self.len();
        if n > CANONICAL_CAP {
            return Err(Error::SizeCap { what: "canonical form", size: n, cap: CANONICAL_CAP });
        }
        let mut best: Option<(u64, Vec<usize>)> = None;
        let mut seq = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.visit_linear_extensions(&mut seq, &mut used, &mut |ext| {
            let code = encode(n, |i, j| self.lt(ext[i], ext[j]));
            if best.as_ref().is_none_or(|(b, _)| code < *b) {
                best = Some((code, ext.to_vec()));
            }
        });
        let (bits, perm) = best.expect("every poset has a linear extension");
        Ok((CanonicalForm { n, bits }, perm))
    }

    fn visit_linear_extensions(&self, seq: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
        let n = self.len();
        if seq.len() == n {
            f(seq);
            return;
        }
        for v in 0..n {
            if used[v] || (0..n).any(|u| !used[u] && self.lt(u, v)) {
                continue;
            }
            used[v] = true;
            seq.push(v);
            self.visit_linear_extensions(seq, used, f);
            seq.pop();
            used[v] = false;
        }
    }

    pub fn is_isomorphic(&self, other: &Poset) -> Result<bool> {
        Ok(self.len() == other.len() && self.canonical_form()? == other.canonical_form()?)
    }

    /// The isomorphic poset relabeled by its canonical form, with names `1..n`.
    pub fn canonical_poset(&self) -> Result<Poset> {
        let (form, _) = self.canonical()?;
        Ok(form.to_poset())
    }
}

/// Applies one of the elementary poset constructions.
#[derive(Debug, Clone)]
pub enum Transform<'a> {
    Dual,
    Sum(&'a Poset),
    Product(&'a Poset),
}

pub fn transform(p: &Poset, op: Transform<'_>) -> Poset {
    match op {
        Transform::Dual => p.dual(),
        Transform::Sum(q) => p.sum(q),
        Transform::Product(q) => p.product(q),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub hasse_is_tree: bool,
    pub is_rooted_tree: bool,
    pub is_co_rooted_tree: bool,
}

/// Isomorphism invariant: the strict order of the lexicographically minimal
/// linear-extension labeling, as an upper-triangular bit string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub n: usize,
    pub bits: u64,
}

impl CanonicalForm {
    pub fn to_poset(&self) -> Poset {
        let n = self.n;
        let mut rel = Vec::new();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.bits >> (pair_count(n) - 1 - k) & 1 == 1 {
                    rel.push((i, j));
                }
                k += 1;
            }
        }
        Poset::new(numbered(n), &rel).expect("canonical forms decode to posets")
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{:x}", self.n, self.bits)
    }
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn encode(n: usize, lt: impl Fn(usize, usize) -> bool) -> u64 {
    let mut code = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            code = code << 1 | lt(i, j) as u64;
        }
    }
    code
}

/// All posets on `k` elements up to isomorphism, sorted by canonical form.
pub fn enumerate_posets(k: usize) -> Result<Vec<Poset>> {
    if k > ENUMERATION_CAP {
        return Err(Error::SizeCap { what: "poset enumeration", size: k, cap: ENUMERATION_CAP });
    }
    if k == 0 {
        return Err(Error::EmptyPoset);
    }
    let mut level: BTreeMap<CanonicalForm, Poset> = BTreeMap::new();
    let single = Poset::antichain(1)?;
    level.insert(single.canonical_form()?, single);
    for size in 2..=k {
        let mut next = BTreeMap::new();
        for p in level.values() {
            // new maximal element on top of every order ideal
            for ideal in order_ideals(p) {
                let rel: Vec<(usize, usize)> = ideal.iter().map(|&i| (i, size - 1)).collect();
                let mut all_rel: Vec<(usize, usize)> = p.covers.clone();
                all_rel.extend(rel);
                let q = Poset::new(numbered(size), &all_rel)?;
                let form = q.canonical_form()?;
                next.entry(form).or_insert_with(|| form.to_poset());
            }
        }
        level = next;
    }
    Ok(level.into_values().collect())
}

/// All down-closed subsets of `p`, each sorted.
pub fn order_ideals(p: &Poset) -> Vec<Vec<usize>> {
    let n = p.len();
    assert!(n < 32, "order ideal enumeration is for small posets");
    (0u32..1 << n)
        .filter(|&mask| (0..n).all(|i| mask >> i & 1 == 0 || (0..n).all(|j| !p.lt(j, i) || mask >> j & 1 == 1)))
        .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
        .collect()
}

fn numbered(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn lex_min_linear_extension(n: usize, leq: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut indegree = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && leq(i, j) {
                indegree[j] += 1;
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> = (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(Reverse(v)) = heap.pop() {
        out.push(v);
        for w in 0..n {
            if w != v && leq(v, w) {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    heap.push(Reverse(w));
                }
            }
        }
    }
    out
}

fn transitive_reduction(n: usize, leq: &BitMatrix) -> Vec<(usize, usize)> {
    let mut covers = Vec::new();
    for i in 0..n {
        // j covers i iff i < j and no k with i < k < j; labels are a linear
        // extension so k lies strictly between i and j as an index
        for j in leq.ones_in_row(i).filter(|&j| j > i) {
            let between = leq.ones_in_row(i).any(|k| k > i && k < j && leq.get(k, j));
            if !between {
                covers.push((i, j));
            }
        }
    }
    covers
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, name) in self.names.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{name}")?;
        }
        write!(f, " |")?;
        for &(a, b) in &self.covers {
            write!(f, " {}<{}", self.names[a], self.names[b])?;
        }
        write!(f, "}}")
    }
}

/// Poset from labels `1..=n` and cover pairs given as labels. Test and
/// example convenience.
pub fn from_labels(n: usize, covers: &[(usize, usize)]) -> Result<Poset> {
    let rel: Vec<_> = covers.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
    Poset::new(numbered(n), &rel)
}

/// The three element poset with one minimum and two maxima.
pub fn v_poset() -> Poset {
    from_labels(3, &[(1, 2), (1, 3)]).expect("valid")
}

/// Six elements `1,2,3 < 4,5,6` forming a crown: 1<4,1<5,2<5,2<6,3<6,3<4.
pub fn crown6() -> Poset {
    from_labels(6, &[(1, 4), (1, 5), (2, 5), (2, 6), (3, 6), (3, 4)]).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_posets(k: usize) -> usize {
        // all strict orders on k labeled points, deduplicated by canonical form
        let pairs: Vec<(usize, usize)> =
            (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
        let mut forms = std::collections::BTreeSet::new();
        for mask in 0u64..1 << pairs.len() {
            let rel = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).is_some_and(|t| mask >> t & 1 == 1);
            let antisym = (0..k).all(|i| (0..k).all(|j| !(rel(i, j) && rel(j, i))));
            let trans = (0..k).all(|i| (0..k).all(|j| (0..k).all(|l| !(rel(i, j) && rel(j, l)) || rel(i, l))));
            if !(antisym && trans) {
                continue;
            }
            let r: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(i, j)| rel(i, j)).collect();
            let p = Poset::new(numbered(k), &r).unwrap();
            forms.insert(p.canonical_form().unwrap());
        }
        forms.len()
    }

    #[test]
    fn v_poset_from_names() {
        let p = parse_poset(&["1", "2", "3"], &[("1", "2"), ("1", "3")]).unwrap();
        assert_eq!(p.covers(), &[(0, 1), (0, 2)]);
        assert!(p.lt(0, 1) && p.lt(0, 2) && !p.comparable(1, 2));
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = parse_poset(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, Error::CycleDetected(_)));
    }

    #[test]
    fn empty_and_dangling_rejected() {
        let none: [&str; 0] = [];
        assert_eq!(parse_poset(&none, &[]).unwrap_err(), Error::EmptyPoset);
        assert_eq!(parse_poset(&["a"], &[("a", "z")]).unwrap_err(), Error::UnknownElement("z".into()));
        assert!(matches!(parse_poset(&["a", "a"], &[]).unwrap_err(), Error::DuplicateElement(_)));
    }

    #[test]
    fn redundant_cover_dropped() {
        let p = parse_poset(&["1", "2", "3"], &[("1", "2"), ("2", "3"), ("1", "3")]).unwrap();
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
        assert!(p.is_chain());
    }

    #[test]
    fn labeling_is_a_linear_extension() {
        let p = parse_poset(&["top", "mid", "bot"], &[("mid", "top"), ("bot", "mid")]).unwrap();
        assert_eq!(p.names(), &["bot", "mid", "top"]);
        let q = parse_poset(&["c", "a", "b"], &[("a", "b")]).unwrap();
        // lexicographically smallest extension keeps input order where allowed
        assert_eq!(q.names(), &["c", "a", "b"]);
    }

    #[test]
    fn text_format_roundtrip() {
        let text = "# the V\nelements: 1 2 3\ncovers: 1<2 1<3\n";
        let p = Poset::from_text(text).unwrap();
        assert_eq!(p, v_poset());
        assert_eq!(Poset::from_text(&p.to_text()).unwrap(), p);
        assert!(matches!(Poset::from_text("covers: 1-2").unwrap_err(), Error::Parse { .. }));
    }

    #[test]
    fn dual_of_chain_is_chain() {
        let c = Poset::chain(3).unwrap();
        let d = c.dual();
        assert!(d.is_chain());
        assert!(d.is_isomorphic(&c).unwrap());
        assert_eq!(d.names(), &["3", "2", "1"]);
    }

    #[test]
    fn sum_has_two_components() {
        let s = v_poset().sum(&Poset::chain(2).unwrap());
        assert_eq!(s.len(), 5);
        assert_eq!(s.component_count(), 2);
    }

    #[test]
    fn product_of_two_chains_is_diamond() {
        let c2 = Poset::chain(2).unwrap();
        let d = c2.product(&c2);
        assert_eq!(d.len(), 4);
        // brute force componentwise comparison over all 16 pairs
        for a in 0..4 {
            for b in 0..4 {
                let (pa, pb) = (d.name(a), d.name(b));
                let parse = |s: &str| -> (u8, u8) {
                    let t: Vec<u8> =
                        s.trim_matches(|c| c == '(' || c == ')').split(',').map(|x| x.parse().unwrap()).collect();
                    (t[0], t[1])
                };
                let (x, y) = (parse(pa), parse(pb));
                assert_eq!(d.leq(a, b), x.0 <= y.0 && x.1 <= y.1, "{pa} {pb}");
            }
        }
        let mins = (0..4).filter(|&i| d.lower_covers(i).count() == 0).count();
        let maxs = (0..4).filter(|&i| d.upper_covers(i).count() == 0).count();
        assert_eq!((mins, maxs), (1, 1));
        assert_eq!(d.covers().len(), 4);
    }

    #[test]
    fn components() {
        assert_eq!(v_poset().connected_components().len(), 1);
        let a = Poset::antichain(3).unwrap().connected_components();
        assert_eq!(a.len(), 3);
        assert!(a.iter().all(|c| c.len() == 1));
        assert_eq!(crown6().connected_components().len(), 1);
    }

    #[test]
    fn classification() {
        let t = |h, r, c| Classification { hasse_is_tree: h, is_rooted_tree: r, is_co_rooted_tree: c };
        assert_eq!(Poset::chain(4).unwrap().classify(), t(true, true, true));
        assert_eq!(v_poset().classify(), t(true, true, false));
        assert_eq!(crown6().classify(), t(false, false, false));
        assert_eq!(v_poset().dual().classify(), t(true, false, true));
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (1..=5).map(|k| enumerate_posets(k).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 63]);
        assert!(matches!(enumerate_posets(7).unwrap_err(), Error::SizeCap { .. }));
    }

    #[test]
    fn enumeration_matches_brute_force_oracle() {
        for k in 1..=4 {
            assert_eq!(enumerate_posets(k).unwrap().len(), brute_force_posets(k), "k={k}");
        }
    }

    #[test]
    fn enumeration_contains_chain_and_antichain() {
        for k in 1..=5 {
            let all = enumerate_posets(k).unwrap();
            let forms: Vec<_> = all.iter().map(|p| p.canonical_form().unwrap()).collect();
            let mut sorted = forms.clone();
            sorted.dedup();
            assert_eq!(sorted.len(), forms.len());
            for special in [Poset::chain(k).unwrap(), Poset::antichain(k).unwrap()] {
                assert!(forms.contains(&special.canonical_form().unwrap()));
            }
        }
    }

    #[test]
    fn order_ideals_of_v() {
        let ideals = order_ideals(&v_poset());
        assert_eq!(ideals, vec![vec![], vec![0], vec![0, 1], vec![0, 2], vec![0, 1, 2]]);
    }
}
