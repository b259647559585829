//! Exact cyclotomic numbers `(Σ c_k ζ_N^k) / d^e`.
//!
//! Two rings are supported: `Z[ζ36][1/3]` for qutrits and `Z[ζ8][1/2]` for
//! qubits. Coefficients are arbitrary precision; values that fit in `i64`
//! are stored inline and promoted to `BigInt` transparently on overflow.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const MAXDEG: usize = 12;

/// The cyclotomic ring attached to a local dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    /// `Z[ζ8][1/2]`, used for qubits.
    Qubit,
    /// `Z[ζ36][1/3]`, used for qutrits.
    Qutrit,
}

impl Ring {
    pub fn for_dim(d: u32) -> Result<Ring> {
        match d {
            2 => Ok(Ring::Qubit),
            3 => Ok(Ring::Qutrit),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }

    /// Local dimension `d`; also the prime allowed in denominators.
    pub const fn dim(self) -> u32 {
        match self {
            Ring::Qubit => 2,
            Ring::Qutrit => 3,
        }
    }

    /// The conductor `N` of the ring.
    pub const fn order(self) -> u32 {
        match self {
            Ring::Qubit => 8,
            Ring::Qutrit => 36,
        }
    }

    /// `φ(N)`, the length of the power basis.
    pub const fn degree(self) -> usize {
        match self {
            Ring::Qubit => 4,
            Ring::Qutrit => 12,
        }
    }

    /// Exponent `a` such that `ζ_N^a` is the primitive `d`-th root of unity.
    pub const fn omega_exp(self) -> u32 {
        self.order() / self.dim()
    }

    // Lower coefficients of the monic cyclotomic polynomial.
    fn low_poly(self) -> &'static [i64] {
        match self {
            Ring::Qubit => &[1, 0, 0, 0],
            Ring::Qutrit => &[1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0],
        }
    }

    // Canonical coefficients of ζ^m for m in 0..N.
    fn zeta_table(self) -> &'static [[i64; MAXDEG]] {
        static QUBIT: OnceLock<Vec<[i64; MAXDEG]>> = OnceLock::new();
        static QUTRIT: OnceLock<Vec<[i64; MAXDEG]>> = OnceLock::new();
        let cell = match self {
            Ring::Qubit => &QUBIT,
            Ring::Qutrit => &QUTRIT,
        };
        cell.get_or_init(|| {
            let deg = self.degree();
            let low = self.low_poly();
            let mut out = Vec::with_capacity(self.order() as usize);
            let mut cur = [0i64; MAXDEG];
            cur[0] = 1;
            for _ in 0..self.order() {
                out.push(cur);
                let top = cur[deg - 1];
                let mut next = [0i64; MAXDEG];
                next[1..deg].copy_from_slice(&cur[..deg - 1]);
                for j in 0..deg {
                    next[j] -= top * low[j];
                }
                cur = next;
            }
            out
        })
    }

    fn units(self) -> Vec<u32> {
        let n = self.order();
        (1..n).filter(|a| a.gcd(&n) == 1).collect()
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[zeta{}][1/{}]", self.order(), self.dim())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Num {
    Small([i64; MAXDEG]),
    Big(Vec<BigInt>),
}

/// An exact element of `Z[ζ_N][1/d]` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloNum {
    ring: Ring,
    num: Num,
    den_exp: u32,
}

fn reduce_wide(ring: Ring, wide: &mut [i128]) -> Option<()> {
    let deg = ring.degree();
    let low = ring.low_poly();
    for k in (deg..wide.len()).rev() {
        let c = wide[k];
        if c == 0 {
            continue;
        }
        wide[k] = 0;
        for (j, &p) in low.iter().enumerate() {
            if p != 0 {
                let idx = k - deg + j;
                wide[idx] = wide[idx].checked_sub(c.checked_mul(p as i128)?)?;
            }
        }
    }
    Some(())
}

fn reduce_big(ring: Ring, wide: &mut [BigInt]) {
    let deg = ring.degree();
    let low = ring.low_poly();
    for k in (deg..wide.len()).rev() {
        if wide[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut wide[k]);
        for (j, &p) in low.iter().enumerate() {
            if p != 0 {
                wide[k - deg + j] -= &c * p;
            }
        }
    }
}

impl CycloNum {
    fn from_small(ring: Ring, coeffs: [i64; MAXDEG], den_exp: u32) -> Self {
        let mut x = CycloNum { ring, num: Num::Small(coeffs), den_exp };
        x.normalize();
        x
    }

    fn from_wide(ring: Ring, wide: &[i128], den_exp: u32) -> Option<Self> {
        let mut c = [0i64; MAXDEG];
        for (k, &w) in wide.iter().take(ring.degree()).enumerate() {
            c[k] = i64::try_from(w).ok()?;
        }
        Some(Self::from_small(ring, c, den_exp))
    }

    fn from_big_vec(ring: Ring, mut v: Vec<BigInt>, den_exp: u32) -> Self {
        let deg = ring.degree();
        if v.len() > deg {
            reduce_big(ring, &mut v);
        }
        v.resize(deg, BigInt::zero());
        let mut x = CycloNum { ring, num: Num::Big(v), den_exp };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        let d = self.ring.dim() as i64;
        let deg = self.ring.degree();
        if let Num::Big(v) = &self.num {
            if v.iter().all(|c| c.to_i64().is_some()) {
                let mut s = [0i64; MAXDEG];
                for (k, c) in v.iter().enumerate() {
                    s[k] = c.to_i64().unwrap();
                }
                self.num = Num::Small(s);
            }
        }
        match &mut self.num {
            Num::Small(c) => {
                if c[..deg].iter().all(|&x| x == 0) {
                    self.den_exp = 0;
                    return;
                }
                while self.den_exp > 0 && c[..deg].iter().all(|&x| x % d == 0) {
                    for x in c[..deg].iter_mut() {
                        *x /= d;
                    }
                    self.den_exp -= 1;
                }
            }
            Num::Big(v) => {
                let db = BigInt::from(d);
                if v.iter().all(|x| x.is_zero()) {
                    self.den_exp = 0;
                    return;
                }
                while self.den_exp > 0 && v.iter().all(|x| x.is_multiple_of(&db)) {
                    for x in v.iter_mut() {
                        *x /= &db;
                    }
                    self.den_exp -= 1;
                }
            }
        }
    }

    fn big_coeffs(&self) -> Vec<BigInt> {
        match &self.num {
            Num::Small(c) => c[..self.ring.degree()].iter().map(|&x| BigInt::from(x)).collect(),
            Num::Big(v) => v.clone(),
        }
    }

    fn small(&self) -> Option<&[i64; MAXDEG]> {
        match &self.num {
            Num::Small(c) => Some(c),
            Num::Big(_) => None,
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()))
        }
    }

    pub fn zero(ring: Ring) -> Self {
        CycloNum { ring, num: Num::Small([0; MAXDEG]), den_exp: 0 }
    }

    pub fn one(ring: Ring) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn from_int(ring: Ring, v: i64) -> Self {
        let mut c = [0i64; MAXDEG];
        c[0] = v;
        Self::from_small(ring, c, 0)
    }

    pub fn from_bigint(ring: Ring, v: BigInt) -> Self {
        let mut c = vec![BigInt::zero(); ring.degree()];
        c[0] = v;
        Self::from_big_vec(ring, c, 0)
    }

    /// Builds `(Σ c_k ζ^k) / d^e`; any number of coefficients is accepted.
    pub fn from_coeffs(ring: Ring, coeffs: &[BigInt], den_exp: u32) -> Self {
        let mut acc = Self::zero(ring);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let term = Self::from_bigint(ring, c.clone()).mul_zeta(k as i64);
                acc = acc.add_same(&term);
            }
        }
        acc.div_dim_pow(den_exp)
    }

    /// `ζ_N^k` for any integer `k`.
    pub fn zeta(ring: Ring, k: i64) -> Self {
        let n = ring.order() as i64;
        let row = ring.zeta_table()[k.rem_euclid(n) as usize];
        Self::from_small(ring, row, 0)
    }

    /// The primitive `d`-th root of unity raised to `k`.
    pub fn omega(ring: Ring, k: i64) -> Self {
        Self::zeta(ring, k * ring.omega_exp() as i64)
    }

    /// `1/√d`: `i(ω²−ω)/3` for qutrits, `(ζ8−ζ8³)/2` for qubits.
    pub fn inv_sqrt_dim(ring: Ring) -> Self {
        match ring {
            Ring::Qutrit => {
                let w = Self::omega(ring, 2).sub_same(&Self::omega(ring, 1));
                w.mul_zeta(9).div_dim_pow(1)
            }
            Ring::Qubit => Self::zeta(ring, 1).sub_same(&Self::zeta(ring, 3)).div_dim_pow(1),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn den_exp(&self) -> u32 {
        self.den_exp
    }

    pub fn coeffs(&self) -> Vec<BigInt> {
        self.big_coeffs()
    }

    pub fn is_zero(&self) -> bool {
        match &self.num {
            Num::Small(c) => c.iter().all(|&x| x == 0),
            Num::Big(v) => v.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.ring)
    }

    /// Divides by `d^k`.
    pub fn div_dim_pow(&self, k: u32) -> Self {
        let mut x = self.clone();
        if !x.is_zero() {
            x.den_exp += k;
            x.normalize();
        }
        x
    }

    fn add_same(&self, other: &Self) -> Self {
        let ring = self.ring;
        let deg = ring.degree();
        let e = self.den_exp.max(other.den_exp);
        let d = ring.dim() as i128;
        if let (Some(a), Some(b)) = (self.small(), other.small()) {
            let fa = d.checked_pow(e - self.den_exp);
            let fb = d.checked_pow(e - other.den_exp);
            if let (Some(fa), Some(fb)) = (fa, fb) {
                let mut w = [0i128; MAXDEG];
                let mut ok = true;
                for k in 0..deg {
                    match (a[k] as i128).checked_mul(fa).and_then(|x| {
                        (b[k] as i128).checked_mul(fb).and_then(|y| x.checked_add(y))
                    }) {
                        Some(v) => w[k] = v,
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    if let Some(r) = Self::from_wide(ring, &w[..deg], e) {
                        return r;
                    }
                }
            }
        }
        let db = BigInt::from(ring.dim());
        let fa = num_traits::pow(db.clone(), (e - self.den_exp) as usize);
        let fb = num_traits::pow(db, (e - other.den_exp) as usize);
        let v: Vec<BigInt> = self
            .big_coeffs()
            .into_iter()
            .zip(other.big_coeffs())
            .map(|(x, y)| x * &fa + y * &fb)
            .collect();
        Self::from_big_vec(ring, v, e)
    }

    fn sub_same(&self, other: &Self) -> Self {
        self.add_same(&other.neg_ref())
    }

    fn mul_same(&self, other: &Self) -> Self {
        let ring = self.ring;
        let deg = ring.degree();
        if self.is_zero() || other.is_zero() {
            return Self::zero(ring);
        }
        let e = self.den_exp + other.den_exp;
        if let (Some(a), Some(b)) = (self.small(), other.small()) {
            let mut w = [0i128; 2 * MAXDEG];
            let mut ok = true;
            'outer: for i in 0..deg {
                if a[i] == 0 {
                    continue;
                }
                for j in 0..deg {
                    if b[j] == 0 {
                        continue;
                    }
                    match (a[i] as i128).checked_mul(b[j] as i128).and_then(|p| w[i + j].checked_add(p)) {
                        Some(v) => w[i + j] = v,
                        None => {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if ok && reduce_wide(ring, &mut w[..2 * deg - 1]).is_some() {
                if let Some(r) = Self::from_wide(ring, &w[..deg], e) {
                    return r;
                }
            }
        }
        let a = self.big_coeffs();
        let b = other.big_coeffs();
        let mut w = vec![BigInt::zero(); 2 * deg - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    w[i + j] += x * y;
                }
            }
        }
        Self::from_big_vec(ring, w, e)
    }

    fn neg_ref(&self) -> Self {
        match &self.num {
            Num::Small(c) => {
                if c.iter().all(|&x| x.checked_neg().is_some()) {
                    let mut n = *c;
                    for x in n.iter_mut() {
                        *x = -*x;
                    }
                    return CycloNum { ring: self.ring, num: Num::Small(n), den_exp: self.den_exp };
                }
                let v = self.big_coeffs().into_iter().map(|x| -x).collect();
                Self::from_big_vec(self.ring, v, self.den_exp)
            }
            Num::Big(v) => Self::from_big_vec(self.ring, v.iter().map(|x| -x).collect(), self.den_exp),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.add_same(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.sub_same(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.mul_same(other))
    }

    /// Multiplies by `ζ_N^k`.
    pub fn mul_zeta(&self, k: i64) -> Self {
        let n = self.ring.order() as i64;
        let k = k.rem_euclid(n);
        if k == 0 || self.is_zero() {
            return self.clone();
        }
        self.apply_exponent_map(|j| j + k)
    }

    // Applies Σ c_j ζ^j ↦ Σ c_j ζ^{f(j)}.
    fn apply_exponent_map(&self, f: impl Fn(i64) -> i64) -> Self {
        let ring = self.ring;
        let n = ring.order() as i64;
        let deg = ring.degree();
        let table = ring.zeta_table();
        if let Some(c) = self.small() {
            let mut w = [0i128; MAXDEG];
            for j in 0..deg {
                if c[j] == 0 {
                    continue;
                }
                let row = &table[f(j as i64).rem_euclid(n) as usize];
                for k in 0..deg {
                    w[k] += c[j] as i128 * row[k] as i128;
                }
            }
            if let Some(r) = Self::from_wide(ring, &w[..deg], self.den_exp) {
                return r;
            }
        }
        let c = self.big_coeffs();
        let mut w = vec![BigInt::zero(); deg];
        for (j, cj) in c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let row = &table[f(j as i64).rem_euclid(n) as usize];
            for k in 0..deg {
                if row[k] != 0 {
                    w[k] += cj * row[k];
                }
            }
        }
        Self::from_big_vec(ring, w, self.den_exp)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        let n = self.ring.order() as i64;
        self.apply_exponent_map(|j| n - j)
    }

    /// The Galois automorphism `ζ ↦ ζ^a`; `a` must be coprime to `N`.
    pub fn galois(&self, a: u32) -> Result<Self> {
        if a.gcd(&self.ring.order()) != 1 {
            return Err(Error::Invalid(format!("{a} is not a unit mod {}", self.ring.order())));
        }
        let a = a as i64;
        Ok(self.apply_exponent_map(|j| j * a))
    }

    /// `|x|²`, which is real.
    pub fn norm_sq(&self) -> Self {
        self.mul_same(&self.conj())
    }

    /// Returns the value as a rational number when it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        let c = self.big_coeffs();
        if c[1..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let den = num_traits::pow(BigInt::from(self.ring.dim()), self.den_exp as usize);
        Some(BigRational::new(c[0].clone(), den))
    }

    pub fn is_rational(&self) -> bool {
        self.to_rational().is_some()
    }

    /// True iff the value is real.
    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Returns `k` with `self = ζ_N^k` when the value is a root of unity.
    pub fn root_of_unity_exponent(&self) -> Option<u32> {
        if self.den_exp != 0 {
            return None;
        }
        let c = self.small()?;
        let table = self.ring.zeta_table();
        let deg = self.ring.degree();
        table.iter().position(|row| row[..deg] == c[..deg]).map(|k| k as u32)
    }

    /// Membership in `Z[ζ9][1/3]`, the ring holding every single-qutrit
    /// Clifford+T matrix entry. Always false for the qubit ring.
    pub fn in_clifford_t_ring(&self) -> bool {
        if self.ring != Ring::Qutrit {
            return false;
        }
        self.big_coeffs().iter().skip(1).step_by(2).all(|c| c.is_zero())
    }

    /// Field norm down to `Q`.
    pub fn field_norm(&self) -> BigRational {
        let mut acc = Self::one(self.ring);
        for a in self.ring.units() {
            acc = acc.mul_same(&self.galois(a).expect("unit"));
        }
        acc.to_rational().expect("norm is rational")
    }

    /// Exact division by an integer, if the quotient stays in the ring.
    pub fn div_int(&self, n: &BigInt) -> Option<Self> {
        if n.is_zero() {
            return None;
        }
        let d = BigInt::from(self.ring.dim());
        let mut g = n.abs();
        let mut m = 0u32;
        while g.is_multiple_of(&d) {
            g /= &d;
            m += 1;
        }
        let c = self.big_coeffs();
        if c.iter().any(|x| !x.is_multiple_of(&g)) {
            return None;
        }
        let sign = if n.is_negative() { -1 } else { 1 };
        let v = c.into_iter().map(|x| x / &g * sign).collect();
        Some(Self::from_big_vec(self.ring, v, self.den_exp + m))
    }

    /// Exact quotient `self / other` when it lies in the ring.
    pub fn checked_div(&self, other: &Self) -> Result<Option<Self>> {
        self.check_ring(other)?;
        if other.is_zero() {
            return Ok(None);
        }
        if let Some(k) = other.root_of_unity_exponent() {
            return Ok(Some(self.mul_zeta(-(k as i64))));
        }
        let base = CycloNum { ring: other.ring, num: other.num.clone(), den_exp: 0 };
        let mut cof = Self::one(self.ring);
        for a in self.ring.units().into_iter().skip(1) {
            cof = cof.mul_same(&base.galois(a)?);
        }
        let norm = base.mul_same(&cof).to_rational().expect("norm is rational");
        let n = norm.numer().clone();
        let scale = num_traits::pow(BigInt::from(self.ring.dim()), other.den_exp as usize);
        let top = self.mul_same(&cof).mul_same(&Self::from_bigint(self.ring, scale));
        Ok(top.div_int(&n))
    }

    /// Debug-only approximation as `(re, im)`.
    pub fn approx(&self) -> (f64, f64) {
        let n = self.ring.order() as f64;
        let scale = (self.ring.dim() as f64).powi(self.den_exp as i32);
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.big_coeffs().iter().enumerate() {
            let cf = c.to_f64().unwrap_or(f64::NAN);
            let th = 2.0 * std::f64::consts::PI * k as f64 / n;
            re += cf * th.cos();
            im += cf * th.sin();
        }
        (re / scale, im / scale)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ring);
        for _ in 0..e {
            acc = acc.mul_same(self);
        }
        acc
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.big_coeffs().iter().map(|c| c.to_string()).collect();
        write!(f, "({})/{}^{}", parts.join(","), self.ring.dim(), self.den_exp)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: &CycloNum) -> CycloNum {
                assert_eq!(self.ring, rhs.ring, "cyclotomic ring mismatch");
                self.$inner(rhs)
            }
        }
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: &CycloNum) -> CycloNum {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, add_same);
binop!(Sub, sub, sub_same);
binop!(Mul, mul, mul_same);

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        self.neg_ref()
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        self.neg_ref()
    }
}

/// Parses the `(c0,...,c11)/3^e` rendering.
impl std::str::FromStr for CycloNum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("malformed cyclotomic literal `{s}`"));
        let s = s.trim();
        let (body, den) = s.strip_prefix('(').and_then(|r| r.split_once(")/")).ok_or_else(bad)?;
        let (d, e) = den.split_once('^').ok_or_else(bad)?;
        let d: u32 = d.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        let ring = Ring::for_dim(d)?;
        let coeffs: Vec<BigInt> =
            body.split(',').map(|t| t.trim().parse::<BigInt>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
        if coeffs.len() != ring.degree() {
            return Err(bad());
        }
        Ok(Self::from_coeffs(ring, &coeffs, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q() -> Ring {
        Ring::Qutrit
    }

    #[test]
    fn root_of_unity_inverse() {
        let z9 = CycloNum::zeta(q(), 4);
        let z9_8 = CycloNum::zeta(q(), 32);
        assert!((&z9 * &z9_8).is_one());
    }

    #[test]
    fn omega_sum_is_minus_one() {
        let s = CycloNum::omega(q(), 1) + CycloNum::omega(q(), 2);
        assert_eq!(s, CycloNum::from_int(q(), -1));
    }

    #[test]
    fn sqrt_minus_three_squared() {
        let w = CycloNum::omega(q(), 1) - CycloNum::omega(q(), 2);
        assert_eq!(&w * &w, CycloNum::from_int(q(), -3));
    }

    #[test]
    fn inv_sqrt_dim_squares_to_inverse() {
        for ring in [Ring::Qubit, Ring::Qutrit] {
            let s = CycloNum::inv_sqrt_dim(ring);
            let sq = &s * &s;
            let want = CycloNum::one(ring).div_dim_pow(1);
            assert_eq!(sq, want);
            assert!(s.is_real());
        }
    }

    #[test]
    fn ring_membership_examples() {
        assert!(CycloNum::zeta(q(), 4).in_clifford_t_ring());
        assert!(CycloNum::one(q()).div_dim_pow(1).in_clifford_t_ring());
        assert!(!CycloNum::inv_sqrt_dim(q()).in_clifford_t_ring());
    }

    #[test]
    fn one_third_is_unit_over_power_of_uniformizer() {
        // (1 - ζ9)^6 / 3 is integral with norm ±1, so 1/3 = unit / (1-ζ9)^6.
        let u = CycloNum::one(q()) - CycloNum::zeta(q(), 4);
        let u6 = u.pow(6);
        let unit = u6.div_dim_pow(1);
        assert_eq!(unit.den_exp(), 0);
        let n = unit.field_norm();
        assert!(n == BigRational::one() || n == -BigRational::one());
        let back = unit.checked_div(&u6).unwrap().unwrap();
        assert_eq!(back, CycloNum::one(q()).div_dim_pow(1));
    }

    #[test]
    fn overflow_promotes_to_bigint() {
        let big = CycloNum::from_int(q(), i64::MAX);
        let sq = &big * &big;
        let want = BigInt::from(i64::MAX) * BigInt::from(i64::MAX);
        assert_eq!(sq.to_rational().unwrap(), BigRational::from_integer(want));
        let back = sq.checked_div(&big).unwrap().unwrap();
        assert_eq!(back, big);
    }

    #[test]
    fn render_and_parse() {
        let x = CycloNum::inv_sqrt_dim(q());
        let s = x.to_string();
        assert_eq!(s, "(0,0,0,2,0,0,0,0,0,-1,0,0)/3^1");
        assert_eq!(s.parse::<CycloNum>().unwrap(), x);
    }

    #[test]
    fn mismatched_rings_error() {
        let a = CycloNum::one(Ring::Qubit);
        let b = CycloNum::one(Ring::Qutrit);
        assert!(matches!(a.checked_add(&b), Err(Error::RingMismatch(..))));
    }

    #[test]
    fn division_outside_ring_is_none() {
        let two = CycloNum::from_int(q(), 2);
        assert!(CycloNum::one(q()).checked_div(&two).unwrap().is_none());
        let three = CycloNum::from_int(q(), 3);
        assert_eq!(CycloNum::one(q()).checked_div(&three).unwrap().unwrap(), CycloNum::one(q()).div_dim_pow(1));
    }
}
