/// Square boolean matrix with bit-packed rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix { n, words, data: vec![0; n * words] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1 << (j % 64);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    /// row `i` |= row `k`
    fn or_row_into(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        let w = self.words;
        let (src, dst) = if k < i {
            let (a, b) = self.data.split_at_mut(i * w);
            (&a[k * w..(k + 1) * w], &mut b[..w])
        } else {
            let (a, b) = self.data.split_at_mut(k * w);
            (&b[..w], &mut a[i * w..(i + 1) * w])
        };
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= *s;
        }
    }

    /// Reflexive-transitive closure in place (Warshall over bit rows).
    pub fn close(&mut self) {
        for i in 0..self.n {
            self.set(i, i);
        }
        for k in 0..self.n {
            for i in 0..self.n {
                if self.get(i, k) {
                    self.or_row_into(i, k);
                }
            }
        }
    }

    pub fn ones_in_row(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.n;
        self.row(i).iter().enumerate().flat_map(move |(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
            .filter(move |&j| j < n)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_path() {
        let mut m = BitMatrix::new(70);
        for i in 0..69 {
            m.set(i, i + 1);
        }
        m.close();
        assert!(m.get(0, 69));
        assert!(m.get(5, 5));
        assert!(!m.get(69, 0));
        assert_eq!(m.ones_in_row(60).collect::<Vec<_>>(), (60..70).collect::<Vec<_>>());
    }
}
