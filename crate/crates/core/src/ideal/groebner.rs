//! Buchberger's algorithm specialised to binomials. Monomials live in order
//! coordinates: coordinate 0 is the cheapest variable of a graded
//! reverse-lexicographic order.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};

use crate::error::Result;
use crate::limits::Limits;

pub(crate) type Mono = Vec<u32>;

pub(crate) fn degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// Graded reverse-lexicographic comparison in order coordinates.
pub(crate) fn cmp_revlex(a: &[u32], b: &[u32]) -> Ordering {
    degree(a).cmp(&degree(b)).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

fn signature(m: &[u32]) -> u64 {
    m.iter().enumerate().filter(|(_, &e)| e > 0).fold(0, |s, (i, _)| s | 1 << (i % 64))
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// `lead - trail` with `lead > trail`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Bin {
    pub lead: Mono,
    pub trail: Mono,
    sig: u64,
}

impl Bin {
    /// `None` when the two sides agree. With `cancel` the common factor is
    /// divided out.
    pub fn new(mut a: Mono, mut b: Mono, cancel: bool) -> Option<Bin> {
        if cancel {
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let g = (*x).min(*y);
                *x -= g;
                *y -= g;
            }
        }
        match cmp_revlex(&a, &b) {
            Ordering::Equal => None,
            Ordering::Greater => Some(Bin { sig: signature(&a), lead: a, trail: b }),
            Ordering::Less => Some(Bin { sig: signature(&b), lead: b, trail: a }),
        }
    }
}

/// Incremental Buchberger state. Pairs whose lcm exceeds the requested degree
/// stay queued, so `complete(Some(d))` leaves a `d`-truncated basis.
pub(crate) struct Engine<'a> {
    n: usize,
    cancel: bool,
    limits: &'a Limits,
    pub basis: Vec<Bin>,
    /// Basis indices bucketed by the first variable in the support of the lead.
    by_var: Vec<Vec<u32>>,
    queue: BinaryHeap<Reverse<(u32, u32, u32)>>,
    pending: HashSet<(u32, u32)>,
    steps: u64,
}

impl<'a> Engine<'a> {
    pub fn new(n: usize, cancel: bool, limits: &'a Limits) -> Self {
        Engine {
            n,
            cancel,
            limits,
            basis: Vec::new(),
            by_var: vec![Vec::new(); n],
            queue: BinaryHeap::new(),
            pending: HashSet::new(),
            steps: 0,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps.is_multiple_of(4096) {
            self.limits.check_time()?;
        }
        Ok(())
    }

    fn find_divisor(&self, m: &[u32], skip: Option<usize>) -> Option<usize> {
        let msig = signature(m);
        let mut best: Option<usize> = None;
        for (v, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            for &k in &self.by_var[v] {
                let k = k as usize;
                if Some(k) == skip || best.is_some_and(|b| b < k) {
                    continue;
                }
                let g = &self.basis[k];
                if g.sig & !msig == 0 && divides(&g.lead, m) {
                    best = Some(k);
                }
            }
        }
        best
    }

    /// Replace `m` by `m / lead * trail`.
    fn rewrite(m: &[u32], g: &Bin) -> Mono {
        m.iter().zip(&g.lead).zip(&g.trail).map(|((x, l), t)| x - l + t).collect()
    }

    fn top_reduce(&mut self, mut f: Bin) -> Result<Option<Bin>> {
        while let Some(k) = self.find_divisor(&f.lead, None) {
            self.tick()?;
            let lead = Self::rewrite(&f.lead, &self.basis[k]);
            match Bin::new(lead, f.trail, self.cancel) {
                Some(b) => f = b,
                None => return Ok(None),
            }
        }
        Ok(Some(f))
    }

    /// Reduces `f`; inserts the remainder when nonzero. Returns whether
    /// anything was inserted.
    pub fn add(&mut self, f: Bin) -> Result<bool> {
        debug_assert_eq!(f.lead.len(), self.n);
        match self.top_reduce(f)? {
            Some(h) => {
                self.insert(h)?;
                Ok(true)
            }
            None => Ok(false),
        }
    }

    fn insert(&mut self, h: Bin) -> Result<()> {
        let j = self.basis.len() as u32;
        self.limits.guard("Groebner basis size", self.basis.len() as u64 + 1, self.limits.caps.groebner)?;
        for (i, g) in self.basis.iter().enumerate() {
            let coprime = g.sig & h.sig == 0 || g.lead.iter().zip(&h.lead).all(|(x, y)| *x == 0 || *y == 0);
            if coprime {
                continue;
            }
            let d: u32 = g.lead.iter().zip(&h.lead).map(|(x, y)| *x.max(y)).sum();
            self.queue.push(Reverse((d, i as u32, j)));
            self.pending.insert((i as u32, j));
        }
        let first = h.lead.iter().position(|&e| e > 0).expect("nonconstant lead");
        self.by_var[first].push(j);
        self.basis.push(h);
        Ok(())
    }

    fn is_pending(&self, a: u32, b: u32) -> bool {
        self.pending.contains(&(a.min(b), a.max(b)))
    }

    /// Processes queued pairs with lcm degree at most `max_degree`.
    pub fn complete(&mut self, max_degree: Option<u32>) -> Result<()> {
        while let Some(&Reverse((d, i, j))) = self.queue.peek() {
            if max_degree.is_some_and(|m| d > m) {
                break;
            }
            self.queue.pop();
            self.pending.remove(&(i, j));
            self.tick()?;
            let (gi, gj) = (&self.basis[i as usize], &self.basis[j as usize]);
            let l = lcm(&gi.lead, &gj.lead);
            if self.chain_criterion(&l, i, j) {
                continue;
            }
            let a = Self::rewrite(&l, gi);
            let b = Self::rewrite(&l, gj);
            if let Some(s) = Bin::new(a, b, self.cancel) {
                self.add(s)?;
            }
        }
        Ok(())
    }

    /// Some third lead divides `l` and both of its pairs with `i`, `j` are
    /// already treated.
    fn chain_criterion(&self, l: &[u32], i: u32, j: u32) -> bool {
        let lsig = signature(l);
        for (v, &e) in l.iter().enumerate() {
            if e == 0 {
                continue;
            }
            for &k in &self.by_var[v] {
                if k == i || k == j {
                    continue;
                }
                let g = &self.basis[k as usize];
                if g.sig & !lsig == 0 && divides(&g.lead, l) && !self.is_pending(i, k) && !self.is_pending(j, k) {
                    return true;
                }
            }
        }
        false
    }

    /// Reduced basis of the current generators, sorted by degree then lead.
    /// The flag reports whether cancellation changed a lead during tail
    /// reduction; the result is then only a generating set.
    pub fn reduced(&self) -> Result<(Vec<Bin>, bool)> {
        let minimal: Vec<Bin> = self
            .basis
            .iter()
            .enumerate()
            .filter(|(i, g)| self.find_divisor(&g.lead, Some(*i)).is_none())
            .map(|(_, g)| g.clone())
            .collect();
        let mut lean = Engine::new(self.n, self.cancel, self.limits);
        for g in &minimal {
            let j = lean.basis.len() as u32;
            let first = g.lead.iter().position(|&e| e > 0).expect("nonconstant lead");
            lean.by_var[first].push(j);
            lean.basis.push(g.clone());
        }
        let mut out = Vec::with_capacity(minimal.len());
        let mut changed = false;
        for g in &minimal {
            let mut trail = g.trail.clone();
            while let Some(k) = lean.find_divisor(&trail, None) {
                lean.tick()?;
                trail = Self::rewrite(&trail, &lean.basis[k]);
            }
            match Bin::new(g.lead.clone(), trail, self.cancel) {
                Some(b) => {
                    changed |= b.lead != g.lead;
                    out.push(b);
                }
                None => changed = true,
            }
        }
        out.sort_by(|a, b| cmp_revlex(&a.lead, &b.lead));
        Ok((out, changed))
    }
}
