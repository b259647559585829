//! Dense linear algebra over the prime field GF(p), p ∈ {2, 3}.

/// Row-major matrix over GF(p) with entries in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GfMatrix {
    pub p: u8,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u8>,
}

pub fn inv(p: u8, a: u8) -> u8 {
    debug_assert!(!a.is_multiple_of(p));
    let mut r = 1u32;
    for _ in 0..(p - 2) {
        r = r * a as u32 % p as u32;
    }
    r as u8
}

pub fn dot(p: u8, a: &[u8], b: &[u8]) -> u8 {
    (a.iter().zip(b).map(|(&x, &y)| x as u32 * y as u32).sum::<u32>() % p as u32) as u8
}

impl GfMatrix {
    pub fn zeros(p: u8, rows: usize, cols: usize) -> Self {
        GfMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u8, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u8, rows: &[Vec<u8>], cols: usize) -> Self {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, v % p);
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let p = self.p as u32;
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let s: u32 = (0..self.cols).map(|k| self.get(r, k) as u32 * other.get(k, c) as u32).sum();
                out.set(r, c, (s % p) as u8);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        (0..self.rows).map(|r| dot(self.p, self.row(r), v)).collect()
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else { continue };
            for k in 0..self.cols {
                self.data.swap(r * self.cols + k, pr * self.cols + k);
            }
            let s = inv(p, self.get(r, c));
            for k in 0..self.cols {
                let v = self.get(r, k) as u32 * s as u32 % p as u32;
                self.set(r, k, v as u8);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                for k in 0..self.cols {
                    let v = (self.get(i, k) as u32 + (p - f) as u32 * self.get(r, k) as u32) % p as u32;
                    self.set(i, k, v as u8);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.p, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut out = Self::zeros(self.p, n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, aug.get(r, n + c));
            }
        }
        Some(out)
    }

    /// Basis of the right null space `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u8>> {
        let p = self.p;
        let mut m = self.clone();
        let piv = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u8; self.cols];
                v[f] = 1;
                for (r, &pc) in piv.iter().enumerate() {
                    v[pc] = (p - m.get(r, f)) % p;
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> u8 {
        assert_eq!(self.rows, self.cols);
        let p = self.p as u32;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1u32;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| m.get(i, c) != 0) else { return 0 };
            if pr != c {
                for k in 0..n {
                    m.data.swap(c * n + k, pr * n + k);
                }
                det = det * (p - 1) % p;
            }
            let pv = m.get(c, c);
            det = det * pv as u32 % p;
            let s = inv(self.p, pv);
            for i in c + 1..n {
                let f = m.get(i, c) as u32 * s as u32 % p;
                if f == 0 {
                    continue;
                }
                for k in 0..n {
                    let v = (m.get(i, k) as u32 + (p - f) * m.get(c, k) as u32) % p;
                    m.set(i, k, v as u8);
                }
            }
        }
        det as u8
    }
}

/// Incremental span test: rows kept in echelon form with their expansion
/// in terms of the inserted vectors.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    p: u8,
    len: usize,
    rows: Vec<(usize, Vec<u8>, Vec<u8>)>,
    inserted: usize,
}

impl SpanBasis {
    pub fn new(p: u8, len: usize) -> Self {
        SpanBasis { p, len, rows: Vec::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Expresses `v` in terms of the inserted vectors, if it lies in the span.
    pub fn express(&self, v: &[u8]) -> Option<Vec<u8>> {
        let (rem, comb) = self.reduce(v);
        rem.iter().all(|&x| x == 0).then(|| {
            let p = self.p;
            comb.iter().map(|&c| (p - c) % p).collect()
        })
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduce(v).0.iter().all(|&x| x == 0)
    }

    fn reduce(&self, v: &[u8]) -> (Vec<u8>, Vec<u8>) {
        let p = self.p as u32;
        let mut rem = v.to_vec();
        let mut comb = vec![0u8; self.inserted];
        for (pc, row, rc) in &self.rows {
            let f = rem[*pc] as u32;
            if f == 0 {
                continue;
            }
            for k in 0..self.len {
                rem[k] = ((rem[k] as u32 + (p - f) * row[k] as u32) % p) as u8;
            }
            for (k, &x) in rc.iter().enumerate() {
                comb[k] = ((comb[k] as u32 + (p - f) * x as u32) % p) as u8;
            }
        }
        (rem, comb)
    }

    /// Inserts `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        assert_eq!(v.len(), self.len);
        let p = self.p as u32;
        let (mut rem, comb) = self.reduce(v);
        self.inserted += 1;
        for (_, _, rc) in self.rows.iter_mut() {
            rc.push(0);
        }
        let Some(pc) = rem.iter().position(|&x| x != 0) else { return false };
        let mut rc: Vec<u8> = comb;
        rc.push(1);
        let s = inv(self.p, rem[pc]) as u32;
        for x in rem.iter_mut() {
            *x = (*x as u32 * s % p) as u8;
        }
        for x in rc.iter_mut() {
            *x = (*x as u32 * s % p) as u8;
        }
        for (_, row, orc) in self.rows.iter_mut() {
            let f = row[pc] as u32;
            if f == 0 {
                continue;
            }
            for k in 0..self.len {
                row[k] = ((row[k] as u32 + (p - f) * rem[k] as u32) % p) as u8;
            }
            for k in 0..rc.len() {
                orc[k] = ((orc[k] as u32 + (p - f) * rc[k] as u32) % p) as u8;
            }
        }
        self.rows.push((pc, rem, rc));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let m = GfMatrix::from_rows(3, &[vec![1, 1], vec![0, 2]], 2);
        let mi = m.inverse().unwrap();
        assert_eq!(m.mul(&mi), GfMatrix::identity(3, 2));
        assert_eq!(m.determinant(), 2);
    }

    #[test]
    fn span_expression() {
        let mut s = SpanBasis::new(3, 3);
        assert!(s.insert(&[1, 1, 0]));
        assert!(s.insert(&[0, 1, 2]));
        assert!(!s.insert(&[1, 2, 2]));
        let c = s.express(&[2, 0, 2]).unwrap();
        let v: Vec<u8> = (0..3).map(|k| ((c[0] as u32 * [1, 1, 0][k] + c[1] as u32 * [0, 1, 2][k] + c[2] as u32 * [1, 2, 2][k]) % 3) as u8).collect();
        assert_eq!(v, vec![2, 0, 2]);
        assert!(s.express(&[0, 0, 1]).is_none());
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = GfMatrix::from_rows(3, &[vec![1, 2, 0, 1], vec![0, 1, 1, 1]], 4);
        for v in m.kernel() {
            assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        }
        assert_eq!(m.kernel().len(), 2);
    }
}
