//! Dense square bit matrix, one row of `u64` words per vertex.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> BitMatrix {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            data: vec![0; n * words],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Bytes held by the matrix.
    pub fn size_bytes(&self) -> usize {
        self.data.len() * 8
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] |= 1 << (c % 64);
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    /// `row[dst] |= row[src]`.
    pub fn or_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            return;
        }
        let w = self.words;
        let (d, s) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * w);
            (&mut lo[dst * w..(dst + 1) * w], &hi[..w])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * w);
            (&mut hi[..w], &lo[src * w..(src + 1) * w])
        };
        for (a, b) in d.iter_mut().zip(s) {
            *a |= *b;
        }
    }

    pub fn row_count(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Set columns of row `r`, ascending.
    pub fn row_iter(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(r).iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_or() {
        let mut m = BitMatrix::new(130);
        m.set(0, 0);
        m.set(0, 129);
        m.set(5, 64);
        assert!(m.get(0, 129) && !m.get(0, 128));
        m.or_row(5, 0);
        assert_eq!(m.row_iter(5).collect::<Vec<_>>(), vec![0, 64, 129]);
        m.or_row(0, 5);
        assert_eq!(m.row_count(0), 3);
        m.or_row(3, 3);
        assert_eq!(m.row_count(3), 0);
    }
}
