use rayon::prelude::*;

use crate::cyclo::{CycloNum, Ring};
use crate::error::{Error, Result};

/// Dense row-major matrix of exact cyclotomic entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<CycloNum>,
}

impl ExactMatrix {
    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ExactMatrix { ring, rows, cols, data: vec![CycloNum::zero(ring); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = CycloNum::one(ring);
        }
        m
    }

    pub fn from_fn(ring: Ring, rows: usize, cols: usize, f: impl Fn(usize, usize) -> CycloNum) -> Self {
        let mut m = Self::zeros(ring, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = f(r, c);
            }
        }
        m
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vec<CycloNum>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if r == 0 || c == 0 || rows.iter().any(|x| x.len() != c) {
            return Err(Error::Shape("ragged or empty rows".into()));
        }
        if rows.iter().flatten().any(|x| x.ring() != ring) {
            return Err(Error::RingMismatch(ring.to_string(), "entry".into()));
        }
        Ok(ExactMatrix { ring, rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Column vector from a state.
    pub fn column(ring: Ring, entries: Vec<CycloNum>) -> Self {
        let n = entries.len();
        ExactMatrix { ring, rows: n, cols: 1, data: entries }
    }

    /// Diagonal matrix of roots of unity `ζ_N^{e_i}`.
    pub fn diag_zeta(ring: Ring, exps: &[i64]) -> Self {
        let n = exps.len();
        Self::from_fn(ring, n, n, |r, c| if r == c { CycloNum::zeta(ring, exps[r]) } else { CycloNum::zero(ring) })
    }

    /// Permutation matrix sending basis `j` to `perm[j]`.
    pub fn permutation(ring: Ring, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(ring, n, n);
        for (j, &p) in perm.iter().enumerate() {
            m.data[p * n + j] = CycloNum::one(ring);
        }
        m
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn entries(&self) -> &[CycloNum] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &CycloNum {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CycloNum) {
        assert_eq!(v.ring(), self.ring, "cyclotomic ring mismatch");
        self.data[r * self.cols + c] = v;
    }

    pub fn col(&self, c: usize) -> Vec<CycloNum> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let ring = self.ring;
        let (n, m) = (self.rows, other.cols);
        let rows: Vec<Vec<CycloNum>> = (0..n)
            .into_par_iter()
            .map(|r| {
                let mut acc = vec![CycloNum::zero(ring); m];
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    if a.is_zero() {
                        continue;
                    }
                    for (c, slot) in acc.iter_mut().enumerate() {
                        let b = other.get(k, c);
                        if !b.is_zero() {
                            *slot = &*slot + &(a * b);
                        }
                    }
                }
                acc
            })
            .collect();
        Ok(ExactMatrix { ring, rows: n, cols: m, data: rows.into_iter().flatten().collect() })
    }

    pub fn kron(&self, other: &Self) -> Self {
        assert_eq!(self.ring, other.ring, "cyclotomic ring mismatch");
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        Self::from_fn(self.ring, rows, cols, |r, c| {
            let a = self.get(r / other.rows, c / other.cols);
            if a.is_zero() {
                return CycloNum::zero(self.ring);
            }
            a * other.get(r % other.rows, c % other.cols)
        })
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.ring, self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, s: &CycloNum) -> Self {
        ExactMatrix { ring: self.ring, rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("addition of unequal shapes".into()));
        }
        Ok(ExactMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>()?,
        })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::identity(self.ring, self.rows);
        for _ in 0..e {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    /// Returns `λ` with `self = λ·other`, if such a ring element exists.
    pub fn equal_up_to_scalar(&self, other: &Self) -> Option<CycloNum> {
        if self.rows != other.rows || self.cols != other.cols || self.ring != other.ring {
            return None;
        }
        let p = other.data.iter().position(|x| !x.is_zero())?;
        let lambda = self.data[p].checked_div(&other.data[p]).ok()??;
        if lambda.is_zero() {
            return None;
        }
        let ok = self.data.par_iter().zip(other.data.par_iter()).all(|(a, b)| *a == &lambda * b);
        ok.then_some(lambda)
    }

    /// Returns `k` with `self = ζ_N^k · other`.
    pub fn equal_up_to_phase(&self, other: &Self) -> Option<u32> {
        self.equal_up_to_scalar(other)?.root_of_unity_exponent()
    }

    /// True iff every column holds exactly one entry equal to 1 and rows are hit at most once.
    pub fn is_permutation(&self) -> bool {
        self.permutation_image().is_ok()
    }

    /// For a 0/1 permutation matrix, the row hit by each column.
    pub fn permutation_image(&self) -> Result<Vec<usize>> {
        let mut seen = vec![false; self.rows];
        let mut out = Vec::with_capacity(self.cols);
        for c in 0..self.cols {
            let mut hit = None;
            for r in 0..self.rows {
                let v = self.get(r, c);
                if v.is_zero() {
                    continue;
                }
                if !v.is_one() || hit.is_some() {
                    return Err(Error::NotPermutation(c.to_string()));
                }
                hit = Some(r);
            }
            match hit {
                Some(r) if !seen[r] => {
                    seen[r] = true;
                    out.push(r);
                }
                _ => return Err(Error::NotPermutation(c.to_string())),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_gate() -> ExactMatrix {
        ExactMatrix::diag_zeta(Ring::Qutrit, &[0, 4, 32])
    }

    #[test]
    fn scalar_examples() {
        let a = t_gate();
        assert!(a.equal_up_to_scalar(&a).unwrap().is_one());
        let two = CycloNum::from_int(Ring::Qutrit, 2);
        assert_eq!(a.scale(&two).equal_up_to_scalar(&a).unwrap(), two);
        // Z(1/3, -1/3) in units of ω = ζ36^12 is (4, -4).
        let z = ExactMatrix::diag_zeta(Ring::Qutrit, &[0, 4, -4]);
        assert!(a.equal_up_to_scalar(&z).unwrap().is_one());
    }

    #[test]
    fn zero_reference_with_nonzero_lhs_is_absent() {
        let z = ExactMatrix::zeros(Ring::Qutrit, 3, 3);
        assert!(t_gate().equal_up_to_scalar(&z).is_none());
    }

    #[test]
    fn phase_variant_rejects_nonunit_scalar() {
        let a = t_gate();
        let two = CycloNum::from_int(Ring::Qutrit, 2);
        assert!(a.scale(&two).equal_up_to_phase(&a).is_none());
        let w = CycloNum::zeta(Ring::Qutrit, 5);
        assert_eq!(a.scale(&w).equal_up_to_phase(&a), Some(5));
    }

    #[test]
    fn permutation_roundtrip() {
        let m = ExactMatrix::permutation(Ring::Qutrit, &[1, 2, 0]);
        assert_eq!(m.permutation_image().unwrap(), vec![1, 2, 0]);
        assert!(!t_gate().is_permutation());
    }
}
