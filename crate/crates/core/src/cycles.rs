//! Induced poset cycles: `a_1..a_l`, `b_1..b_l` whose only comparabilities
//! are `a_i < b_i` and `a_i < b_{i+1}` (indices mod `l`).

use std::collections::BTreeSet;

use serde::Serialize;

use crate::poset::Poset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PosetCycle {
    /// Lower vertices (0-based element indices).
    pub a: Vec<usize>,
    /// Upper vertices, with `a[i] < b[i]` and `a[i] < b[(i+1) % l]`.
    pub b: Vec<usize>,
}

impl PosetCycle {
    pub fn half_length(&self) -> usize {
        self.a.len()
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.a.len()
    }

    /// Checks the defining comparabilities against `q` directly.
    pub fn is_induced_in(&self, q: &Poset) -> bool {
        let l = self.a.len();
        if l < 2 || self.b.len() != l {
            return false;
        }
        let mut verts: Vec<usize> = self.a.iter().chain(&self.b).copied().collect();
        verts.sort_unstable();
        if verts.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        for (i, &x) in self.a.iter().enumerate() {
            for (j, &y) in self.a.iter().enumerate() {
                if i != j && q.comparable(x, y) {
                    return false;
                }
            }
            for (j, &y) in self.b.iter().enumerate() {
                let expected = j == i || j == (i + 1) % l;
                if q.lt(x, y) != expected || q.lt(y, x) {
                    return false;
                }
            }
        }
        for (i, &x) in self.b.iter().enumerate() {
            for (j, &y) in self.b.iter().enumerate() {
                if i != j && q.comparable(x, y) {
                    return false;
                }
            }
        }
        true
    }
}

/// All induced poset cycles with at least `min_vertices` vertices, each
/// reported once: `a[0]` is the smallest lower vertex and `b[0] < b[1]`.
pub fn find_induced_poset_cycles(q: &Poset, min_vertices: usize) -> Vec<PosetCycle> {
    let n = q.len();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for a0 in 0..n {
        let uppers: Vec<usize> = (0..n).filter(|&b| q.lt(a0, b)).collect();
        for &b_first in &uppers {
            for &b_second in &uppers {
                if b_first >= b_second || q.comparable(b_first, b_second) {
                    continue;
                }
                // walk a_1 -> b_2 -> a_2 -> b_3 ... until some a_k sits under b_1
                let mut a = vec![a0];
                let mut b = vec![b_first, b_second];
                extend(q, a0, &mut a, &mut b, &mut |a, b| {
                    let cyc = PosetCycle { a: a.to_vec(), b: b.to_vec() };
                    if cyc.vertex_count() >= min_vertices && cyc.is_induced_in(q) {
                        let mut key: Vec<usize> = a.iter().chain(b).copied().collect();
                        key.sort_unstable();
                        if seen.insert(key) {
                            out.push(cyc);
                        }
                    }
                });
            }
        }
    }
    out
}

/// Invariant on entry: `b.len() == a.len() + 1`, `b[0]` is `b_1` and the
/// last entry of `b` is the upper vertex the next lower vertex must sit under.
/// The cycle closes when that lower vertex also sits under `b_1`.
fn extend(q: &Poset, a0: usize, a: &mut Vec<usize>, b: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize], &[usize])) {
    let n = q.len();
    let last_b = *b.last().expect("nonempty");
    for next_a in a0 + 1..n {
        if a.contains(&next_a) || !q.lt(next_a, last_b) {
            continue;
        }
        if a.iter().any(|&x| q.comparable(x, next_a)) {
            continue;
        }
        let inner = &b[1..b.len() - 1];
        if inner.iter().any(|&y| q.lt(next_a, y)) || b.iter().any(|&y| q.lt(y, next_a)) {
            continue;
        }
        a.push(next_a);
        if q.lt(next_a, b[0]) {
            emit(a, b);
        } else {
            for next_b in 0..n {
                if b.contains(&next_b) || !q.lt(next_a, next_b) {
                    continue;
                }
                if b.iter().any(|&y| q.comparable(y, next_b)) || a[..a.len() - 1].iter().any(|&x| q.lt(x, next_b)) {
                    continue;
                }
                b.push(next_b);
                extend(q, a0, a, b, emit);
                b.pop();
            }
        }
        a.pop();
    }
}
