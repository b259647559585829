//! Generalized Pauli operators over GF(d), stabilizer-set validation and
//! bounded-weight code distance.

use std::fmt;

use rayon::prelude::*;

use crate::cyclo::{CycloNum, Ring};
use crate::error::{Error, Result};
use crate::gf::SpanBasis;
use crate::matrix::ExactMatrix;

/// `phase · ⊗ᵢ X^{xᵢ} Z^{zᵢ}`, with the phase `ω^k` (odd `d`) or `i^k` (`d = 2`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOp {
    dim: u8,
    x: Vec<u8>,
    z: Vec<u8>,
    phase: u8,
}

impl PauliOp {
    pub fn new(dim: u8, x: Vec<u8>, z: Vec<u8>, phase: u8) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::UnsupportedDimension(dim as u32));
        }
        if x.len() != z.len() {
            return Err(Error::Shape("x and z exponent vectors differ in length".into()));
        }
        let x = x.into_iter().map(|v| v % dim).collect();
        let z = z.into_iter().map(|v| v % dim).collect();
        let phase = phase % Self::phase_order(dim);
        Ok(PauliOp { dim, x, z, phase })
    }

    pub fn identity(dim: u8, n: usize) -> Self {
        PauliOp { dim, x: vec![0; n], z: vec![0; n], phase: 0 }
    }

    /// `X^e` on one site (0-based).
    pub fn single_x(dim: u8, n: usize, site: usize, e: u8) -> Self {
        let mut p = Self::identity(dim, n);
        p.x[site] = e % dim;
        p
    }

    pub fn single_z(dim: u8, n: usize, site: usize, e: u8) -> Self {
        let mut p = Self::identity(dim, n);
        p.z[site] = e % dim;
        p
    }

    pub fn x_type(dim: u8, x: Vec<u8>) -> Self {
        let n = x.len();
        PauliOp::new(dim, x, vec![0; n], 0).expect("valid")
    }

    pub fn z_type(dim: u8, z: Vec<u8>) -> Self {
        let n = z.len();
        PauliOp::new(dim, vec![0; n], z, 0).expect("valid")
    }

    pub fn phase_order(dim: u8) -> u8 {
        if dim == 2 {
            4
        } else {
            dim
        }
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }
    pub fn n(&self) -> usize {
        self.x.len()
    }
    pub fn x(&self) -> &[u8] {
        &self.x
    }
    pub fn z(&self) -> &[u8] {
        &self.z
    }
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        let mut p = self.clone();
        p.phase = phase % Self::phase_order(self.dim);
        p
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(a, b)| **a != 0 || **b != 0).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.x[i] != 0 || self.z[i] != 0).collect()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.weight() == 0
    }

    pub fn is_x_type(&self) -> bool {
        self.z.iter().all(|&v| v == 0)
    }

    pub fn is_z_type(&self) -> bool {
        self.x.iter().all(|&v| v == 0)
    }

    /// The `(x | z)` row used in span computations.
    pub fn symplectic_vector(&self) -> Vec<u8> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.z);
        v
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.n() != other.n() {
            return Err(Error::Shape(format!(
                "Pauli operators on (d={}, n={}) and (d={}, n={})",
                self.dim,
                self.n(),
                other.dim,
                other.n()
            )));
        }
        Ok(())
    }

    /// Exact product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = self.dim as u32;
        let order = Self::phase_order(self.dim) as u32;
        let weight = if self.dim == 2 { 2 } else { 1 };
        let cross: u32 = self.z.iter().zip(&other.x).map(|(&a, &b)| a as u32 * b as u32).sum();
        let phase = (self.phase as u32 + other.phase as u32 + weight * cross) % order;
        let x = self.x.iter().zip(&other.x).map(|(&a, &b)| ((a as u32 + b as u32) % d) as u8).collect();
        let z = self.z.iter().zip(&other.z).map(|(&a, &b)| ((a as u32 + b as u32) % d) as u8).collect();
        Ok(PauliOp { dim: self.dim, x, z, phase: phase as u8 })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.dim, self.n());
        for _ in 0..e {
            acc = acc.mul(self).expect("same shape");
        }
        acc
    }

    pub fn inverse(&self) -> Self {
        let order = if self.dim == 2 { 2 } else { self.dim as u32 };
        let base = self.with_phase(0).pow(order - 1);
        let ph = (Self::phase_order(self.dim) - self.phase) % Self::phase_order(self.dim);
        base.mul(&PauliOp::identity(self.dim, self.n()).with_phase(ph)).expect("same shape")
    }

    /// Dense matrix of the operator (sites ordered with site 0 most significant).
    pub fn to_matrix(&self) -> ExactMatrix {
        let ring = Ring::for_dim(self.dim as u32).expect("supported");
        let d = self.dim as usize;
        let n = self.n();
        let size = d.pow(n as u32);
        let ph_unit = (ring.order() / Self::phase_order(self.dim) as u32) as i64;
        let mut m = ExactMatrix::zeros(ring, size, size);
        for col in 0..size {
            let mut digits = digits_of(col, d, n);
            let mut exp = self.phase as i64 * ph_unit;
            for i in 0..n {
                exp += (self.z[i] as i64 * digits[i] as i64) * ring.omega_exp() as i64;
                digits[i] = (digits[i] + self.x[i] as usize) % d;
            }
            m.set(index_of(&digits, d), col, CycloNum::zeta(ring, exp));
        }
        m
    }

    /// Parses `X1^2 Z3` style text for `n` sites.
    pub fn parse(dim: u8, n: usize, text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Invalid(format!("bad Pauli `{text}`: {m}"));
        let mut p = Self::identity(dim, n);
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(bad("empty"));
        }
        if chars == ['I'] {
            return Ok(p);
        }
        let mut i = 0;
        let read_num = |i: &mut usize| -> Option<u32> {
            let start = *i;
            while *i < chars.len() && chars[*i].is_ascii_digit() {
                *i += 1;
            }
            chars[start..*i].iter().collect::<String>().parse().ok()
        };
        while i < chars.len() {
            let c = chars[i];
            i += 1;
            match c {
                'w' | 'i' => {
                    if (c == 'w') != (dim != 2) {
                        return Err(bad("phase symbol does not match dimension"));
                    }
                    let mut e = 1;
                    if i < chars.len() && chars[i] == '^' {
                        i += 1;
                        e = read_num(&mut i).ok_or_else(|| bad("phase exponent"))?;
                    }
                    let order = Self::phase_order(dim) as u32;
                    p.phase = ((p.phase as u32 + e) % order) as u8;
                }
                'X' | 'Z' => {
                    let site = read_num(&mut i).ok_or_else(|| bad("site index"))? as usize;
                    if site == 0 || site > n {
                        return Err(bad("site index out of range"));
                    }
                    let mut e = 1;
                    if i < chars.len() && chars[i] == '^' {
                        i += 1;
                        e = read_num(&mut i).ok_or_else(|| bad("exponent"))?;
                    }
                    let factor = if c == 'X' {
                        Self::single_x(dim, n, site - 1, (e % dim as u32) as u8)
                    } else {
                        Self::single_z(dim, n, site - 1, (e % dim as u32) as u8)
                    };
                    p = p.mul(&factor)?;
                }
                _ => return Err(bad("unexpected character")),
            }
        }
        Ok(p)
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.phase != 0 {
            let sym = if self.dim == 2 { "i" } else { "w" };
            parts.push(if self.phase == 1 { sym.to_string() } else { format!("{sym}^{}", self.phase) });
        }
        let term = |name: char, site: usize, e: u8| {
            if e == 1 {
                format!("{name}{}", site + 1)
            } else {
                format!("{name}{}^{e}", site + 1)
            }
        };
        for i in 0..self.n() {
            if self.x[i] != 0 {
                parts.push(term('X', i, self.x[i]));
            }
            if self.z[i] != 0 {
                parts.push(term('Z', i, self.z[i]));
            }
        }
        if parts.is_empty() || self.weight() == 0 && self.phase == 0 {
            return write!(f, "I");
        }
        write!(f, "{}", parts.join(" "))
    }
}

pub(crate) fn digits_of(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for i in (0..n).rev() {
        out[i] = idx % d;
        idx /= d;
    }
    out
}

pub(crate) fn index_of(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

/// `σ = x_P·z_Q − z_P·x_Q (mod d)`; the operators satisfy `QP = ω^σ PQ`.
pub fn symplectic(p: &PauliOp, q: &PauliOp) -> Result<u8> {
    p.check(q)?;
    let d = p.dim as i64;
    let s: i64 = (0..p.n()).map(|i| p.x[i] as i64 * q.z[i] as i64 - p.z[i] as i64 * q.x[i] as i64).sum();
    Ok(s.rem_euclid(d) as u8)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StabilizerFailure {
    /// Generators `i` and `j` do not commute.
    Anticommuting { i: usize, j: usize, sigma: u8 },
    /// Generator `index` is a GF(d) combination of the earlier generators.
    Dependent { index: usize, combination: Vec<u8> },
    /// A product of generators equals the identity with a nontrivial phase.
    NontrivialPhase { index: usize, phase: u8 },
    /// Generators act on different register shapes.
    Shape(String),
}

impl fmt::Display for StabilizerFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilizerFailure::Anticommuting { i, j, sigma } => {
                write!(f, "generators {} and {} do not commute (sigma = {sigma})", i + 1, j + 1)
            }
            StabilizerFailure::Dependent { index, combination } => {
                let terms: Vec<String> = combination
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(k, c)| format!("{c}*g{}", k + 1))
                    .collect();
                write!(f, "generator {} is dependent: {}", index + 1, terms.join(" + "))
            }
            StabilizerFailure::NontrivialPhase { index, phase } => {
                write!(f, "generator {} closes to the identity with phase exponent {phase}", index + 1)
            }
            StabilizerFailure::Shape(m) => write!(f, "shape mismatch: {m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerReport {
    pub rank: usize,
    pub failures: Vec<StabilizerFailure>,
}

impl StabilizerReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks commutation, independence and phase consistency of a generator list.
pub fn validate_stabilizer_set(gens: &[PauliOp]) -> StabilizerReport {
    let mut failures = Vec::new();
    let Some(first) = gens.first() else { return StabilizerReport { rank: 0, failures } };
    let (dim, n) = (first.dim, first.n());
    if let Some(bad) = gens.iter().position(|g| g.dim != dim || g.n() != n) {
        failures.push(StabilizerFailure::Shape(format!("generator {} differs from generator 1", bad + 1)));
        return StabilizerReport { rank: 0, failures };
    }
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let s = symplectic(&gens[i], &gens[j]).expect("checked");
            if s != 0 {
                failures.push(StabilizerFailure::Anticommuting { i, j, sigma: s });
            }
        }
    }
    let closes = if dim == 2 { 2 } else { dim as u32 };
    for (i, g) in gens.iter().enumerate() {
        let ph = g.pow(closes).phase;
        if ph != 0 {
            failures.push(StabilizerFailure::NontrivialPhase { index: i, phase: ph });
        }
    }
    let mut span = SpanBasis::new(dim, 2 * n);
    let mut members: Vec<usize> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let v = g.symplectic_vector();
        if let Some(comb) = span.express(&v) {
            let mut full = vec![0u8; i];
            for (slot, &gi) in members.iter().enumerate() {
                full[gi] = comb[slot];
            }
            let mut prod = PauliOp::identity(dim, n);
            for (k, &c) in full.iter().enumerate() {
                prod = prod.mul(&gens[k].pow(c as u32)).expect("checked");
            }
            let rest = prod.mul(&g.inverse()).expect("checked");
            if rest.phase != 0 {
                failures.push(StabilizerFailure::NontrivialPhase { index: i, phase: rest.phase });
            }
            failures.push(StabilizerFailure::Dependent { index: i, combination: full });
        } else {
            span.insert(&v);
            members.push(i);
        }
    }
    StabilizerReport { rank: span.rank(), failures }
}

/// A minimum-weight nontrivial logical operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceWitness {
    pub weight: usize,
    pub operator: PauliOp,
}

/// Bounded-weight distance search over logical operators of a stabilizer group.
///
/// Candidates are enumerated by weight, then lexicographic support, then
/// per-site pattern `x·d + z`; the first hit in that order is returned.
pub fn distance_search(dim: u8, n: usize, stabilizers: &[PauliOp], w_max: usize) -> Result<Option<DistanceWitness>> {
    if w_max < 1 {
        return Err(Error::Invalid("maximum weight must be at least 1".into()));
    }
    if stabilizers.iter().any(|s| s.dim != dim || s.n() != n) {
        return Err(Error::Shape("stabilizer shape differs from the code".into()));
    }
    let d = dim as usize;
    let mut span = SpanBasis::new(dim, 2 * n);
    for s in stabilizers {
        span.insert(&s.symplectic_vector());
    }
    // syndromes[site][pattern] = commutation values against every stabilizer.
    let patterns: Vec<(u8, u8)> = (1..d * d).map(|p| ((p / d) as u8, (p % d) as u8)).collect();
    let syndromes: Vec<Vec<Vec<u8>>> = (0..n)
        .map(|site| {
            patterns
                .iter()
                .map(|&(x, z)| {
                    stabilizers
                        .iter()
                        .map(|s| ((x as i64 * s.z[site] as i64 - z as i64 * s.x[site] as i64).rem_euclid(d as i64)) as u8)
                        .collect()
                })
                .collect()
        })
        .collect();
    for w in 1..=w_max.min(n) {
        let hits: Vec<Option<(Vec<usize>, Vec<usize>)>> = (0..n)
            .into_par_iter()
            .map(|first| search_partition(&syndromes, &span, &patterns, n, d, w, first))
            .collect();
        if let Some((sites, pats)) = hits.into_iter().flatten().min() {
            let mut x = vec![0u8; n];
            let mut z = vec![0u8; n];
            for (s, p) in sites.iter().zip(&pats) {
                x[*s] = patterns[*p].0;
                z[*s] = patterns[*p].1;
            }
            let operator = PauliOp::new(dim, x, z, 0)?;
            return Ok(Some(DistanceWitness { weight: w, operator }));
        }
    }
    Ok(None)
}

fn search_partition(
    syn: &[Vec<Vec<u8>>],
    span: &SpanBasis,
    patterns: &[(u8, u8)],
    n: usize,
    d: usize,
    w: usize,
    first: usize,
) -> Option<(Vec<usize>, Vec<usize>)> {
    if first + w > n {
        return None;
    }
    let r = syn[0][0].len();
    let mut sites: Vec<usize> = (first..first + w).collect();
    loop {
        let mut pats = Vec::with_capacity(w);
        if pattern_dfs(syn, span, patterns, n, d, &sites, &mut pats, &vec![0u8; r]) {
            return Some((sites, pats));
        }
        // Advance to the next support with the same first site.
        let mut i = w;
        loop {
            if i == 1 {
                return None;
            }
            i -= 1;
            if sites[i] < n - (w - i) {
                break;
            }
        }
        sites[i] += 1;
        for j in i + 1..w {
            sites[j] = sites[j - 1] + 1;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn pattern_dfs(
    syn: &[Vec<Vec<u8>>],
    span: &SpanBasis,
    patterns: &[(u8, u8)],
    n: usize,
    d: usize,
    sites: &[usize],
    pats: &mut Vec<usize>,
    acc: &[u8],
) -> bool {
    let depth = pats.len();
    let site = sites[depth];
    for p in 0..patterns.len() {
        let next: Vec<u8> = acc.iter().zip(&syn[site][p]).map(|(&a, &b)| ((a + b) as usize % d) as u8).collect();
        pats.push(p);
        if depth + 1 == sites.len() {
            if next.iter().all(|&v| v == 0) {
                let mut v = vec![0u8; 2 * n];
                for (s, q) in sites.iter().zip(pats.iter()) {
                    v[*s] = patterns[*q].0;
                    v[n + *s] = patterns[*q].1;
                }
                if !span.contains(&v) {
                    return true;
                }
            }
        } else if pattern_dfs(syn, span, patterns, n, d, sites, pats, &next) {
            return true;
        }
        pats.pop();
    }
    false
}
