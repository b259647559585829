//! Phase polynomials of CX + diagonal circuits, their resynthesis, and an
//! exact solver for diagonal gadget decompositions over Z₉.
//!
//! A qutrit gadget with parity `s` and exponent `t` applies `ζ₉^{t·cube(s·x)}`
//! with `cube(u) = (u mod 3)³ mod 9`. A qubit gadget applies `ζ₈^{t·(s·x mod 2)}`.

use std::collections::BTreeMap;
use std::fmt;

use crate::circuit::{Circuit, Gate, Single};
use crate::cyclo::{CycloNum, Ring};
use crate::error::{Error, Result};
use crate::gf::GfMatrix;
use crate::matrix::ExactMatrix;
use crate::sim;

pub fn cube(u: u8) -> u8 {
    let u = u % 3;
    u * u * u % 9
}

/// Modulus of gadget exponents.
pub fn t_modulus(dim: u32) -> u8 {
    if dim == 2 {
        8
    } else {
        9
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhaseGadget {
    pub parity: Vec<u8>,
    pub t_exp: u8,
}

impl PhaseGadget {
    /// Canonical form: first nonzero parity coefficient is 1.
    pub fn new(dim: u32, parity: Vec<u8>, t_exp: u8) -> Result<Self> {
        let p = dim as u8;
        let mut parity: Vec<u8> = parity.into_iter().map(|v| v % p).collect();
        let Some(lead) = parity.iter().copied().find(|&v| v != 0) else {
            return Err(Error::Invalid("gadget parity must be nonzero".into()));
        };
        let m = t_modulus(dim);
        let mut t = t_exp % m;
        if lead == 2 {
            for v in parity.iter_mut() {
                *v = *v * 2 % p;
            }
            t = (m - t) % m;
        }
        Ok(PhaseGadget { parity, t_exp: t })
    }

    /// Exponent contributed on input `x`, in units of `ζ₉` (qutrit) or `ζ₈` (qubit).
    pub fn value(&self, dim: u32, x: &[u8]) -> u8 {
        let p = dim;
        let u = (self.parity.iter().zip(x).map(|(&a, &b)| a as u32 * b as u32).sum::<u32>() % p) as u8;
        let m = t_modulus(dim) as u32;
        if dim == 2 {
            (self.t_exp as u32 * u as u32 % m) as u8
        } else {
            (self.t_exp as u32 * cube(u) as u32 % m) as u8
        }
    }
}

impl fmt::Display for PhaseGadget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.parity.iter().map(|v| v.to_string()).collect();
        write!(f, "({})^{}", p.join(","), self.t_exp)
    }
}

/// `U|x⟩ = ζ^{Σ_g value_g(x)} |L x⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasePolynomial {
    pub dim: u32,
    pub n: usize,
    pub gadgets: Vec<PhaseGadget>,
    pub linear: GfMatrix,
}

fn gadget_t(ring: Ring, op: Single) -> Option<u8> {
    let Single::ZPhase(k1, k2) = op else { return None };
    match ring {
        Ring::Qubit => Some((k1 % 8) as u8),
        Ring::Qutrit => {
            if k1 % 4 != 0 {
                return None;
            }
            let t = (k1 / 4) % 9;
            (k2 % 36 == 32 * t % 36).then_some(t as u8)
        }
    }
}

fn zphase_for(ring: Ring, t: u8) -> Single {
    match ring {
        Ring::Qubit => Single::ZPhase(t as u32 % 8, 0),
        Ring::Qutrit => Single::ZPhase(4 * t as u32 % 36, 32 * t as u32 % 36),
    }
}

fn add_row(m: &mut GfMatrix, tgt: usize, src: usize, k: u8) {
    for c in 0..m.cols {
        let v = (m.get(tgt, c) as u32 + k as u32 * m.get(src, c) as u32) % m.p as u32;
        m.set(tgt, c, v as u8);
    }
}

fn merge(dim: u32, gadgets: impl IntoIterator<Item = PhaseGadget>) -> Vec<PhaseGadget> {
    let m = t_modulus(dim);
    let mut acc: BTreeMap<Vec<u8>, u8> = BTreeMap::new();
    for g in gadgets {
        let e = acc.entry(g.parity).or_insert(0);
        *e = (*e + g.t_exp) % m;
    }
    acc.into_iter().filter(|(_, t)| *t != 0).map(|(parity, t_exp)| PhaseGadget { parity, t_exp }).collect()
}

/// Extracts the phase polynomial and checks it against dense simulation.
pub fn phase_polynomial(c: &Circuit) -> Result<PhasePolynomial> {
    let poly = extract(c)?;
    if c.n_wires() <= sim::SimConfig::default().max_wires_qutrit
        && sim::unitary_of(c)? != poly.to_matrix() {
            return Err(Error::Invalid("phase polynomial disagrees with dense simulation".into()));
        }
    Ok(poly)
}

fn extract(c: &Circuit) -> Result<PhasePolynomial> {
    let ring = c.ring();
    let dim = c.dim();
    let p = dim as u8;
    let n = c.n_wires();
    let mut forms = GfMatrix::identity(p, n);
    let mut gadgets = Vec::new();
    for (i, g) in c.gates().iter().enumerate() {
        match *g {
            Gate::CX { ctrl, tgt } => add_row(&mut forms, tgt, ctrl, 1),
            Gate::CXdg { ctrl, tgt } => add_row(&mut forms, tgt, ctrl, p - 1),
            Gate::Swap { a, b } => {
                let (ra, rb) = (forms.row(a).to_vec(), forms.row(b).to_vec());
                for k in 0..n {
                    forms.set(a, k, rb[k]);
                    forms.set(b, k, ra[k]);
                }
            }
            Gate::Single { op: Single::Dualizer, wire } => {
                for k in 0..n {
                    let v = forms.get(wire, k) * (p - 1) % p;
                    forms.set(wire, k, v);
                }
            }
            Gate::Single { op, wire } => {
                let t = gadget_t(ring, op)
                    .ok_or_else(|| Error::NonConforming(format!("gate {} is not a lattice phase", i + 1)))?;
                if t != 0 {
                    gadgets.push(PhaseGadget::new(dim, forms.row(wire).to_vec(), t)?);
                }
            }
            _ => return Err(Error::NonConforming(format!("gate {} is outside the CX + diagonal fragment", i + 1))),
        }
    }
    Ok(PhasePolynomial { dim, n, gadgets: merge(dim, gadgets), linear: forms })
}

fn word(index: usize, d: usize, len: usize) -> Vec<u8> {
    let mut w = vec![0u8; len];
    let mut rem = index;
    for slot in w.iter_mut().rev() {
        *slot = (rem % d) as u8;
        rem /= d;
    }
    w
}

fn index(w: &[u8], d: usize) -> usize {
    w.iter().fold(0, |acc, &v| acc * d + v as usize)
}

impl PhasePolynomial {
    pub fn ring(&self) -> Ring {
        Ring::for_dim(self.dim).expect("supported dimension")
    }

    /// Exponent of the phase on input `x` in units of `ζ₉` or `ζ₈`.
    pub fn phase_at(&self, x: &[u8]) -> u8 {
        let m = t_modulus(self.dim) as u32;
        (self.gadgets.iter().map(|g| g.value(self.dim, x) as u32).sum::<u32>() % m) as u8
    }

    pub fn to_matrix(&self) -> ExactMatrix {
        let ring = self.ring();
        let d = self.dim as usize;
        let size = d.pow(self.n as u32);
        let scale = if self.dim == 2 { 1 } else { 4 };
        let mut m = ExactMatrix::zeros(ring, size, size);
        for j in 0..size {
            let x = word(j, d, self.n);
            let y = self.linear.mul_vec(&x);
            m.set(index(&y, d), j, CycloNum::zeta(ring, scale * self.phase_at(&x) as i64));
        }
        m
    }

    /// Parity ladders for each gadget followed by a synthesis of the linear map.
    pub fn synthesize(&self) -> Result<Circuit> {
        let ring = self.ring();
        let p = self.dim as u8;
        let mut c = Circuit::new(self.dim, self.n)?;
        for g in &self.gadgets {
            let pivot = g.parity.iter().position(|&v| v == 1).expect("canonical parity");
            let mut ladder = Circuit::new(self.dim, self.n)?;
            for (j, &s) in g.parity.iter().enumerate() {
                if j == pivot || s == 0 {
                    continue;
                }
                if s == 1 || p == 2 {
                    ladder.cx(j, pivot);
                } else {
                    ladder.cxdg(j, pivot);
                }
            }
            c.append(&ladder)?;
            c.add_single(zphase_for(ring, g.t_exp), pivot);
            c.append(&ladder.adjoint())?;
        }
        c.append(&linear_map_circuit(&self.linear)?)?;
        Ok(c)
    }
}

/// A CX/CX†/dualizer/SWAP circuit with `|x⟩ ↦ |L x⟩`.
pub fn linear_map_circuit(l: &GfMatrix) -> Result<Circuit> {
    let n = l.rows;
    let p = l.p;
    if l.cols != n || l.inverse().is_none() {
        return Err(Error::Invalid("linear map is not invertible".into()));
    }
    let mut m = l.clone();
    let mut ops: Vec<Gate> = Vec::new();
    for j in 0..n {
        let r = (j..n).find(|&r| m.get(r, j) != 0).expect("invertible");
        if r != j {
            for k in 0..n {
                let (a, b) = (m.get(r, k), m.get(j, k));
                m.set(r, k, b);
                m.set(j, k, a);
            }
            ops.push(Gate::Swap { a: j, b: r });
        }
        if m.get(j, j) == 2 {
            for k in 0..n {
                let v = m.get(j, k) * 2 % p;
                m.set(j, k, v);
            }
            ops.push(Gate::single(Single::Dualizer, j));
        }
        for i in 0..n {
            let a = m.get(i, j);
            if i == j || a == 0 {
                continue;
            }
            let k = p - a;
            add_row(&mut m, i, j, k);
            ops.push(if k == 1 { Gate::CX { ctrl: j, tgt: i } } else { Gate::CXdg { ctrl: j, tgt: i } });
        }
    }
    let mut c = Circuit::new(p as u32, n)?;
    let ring = c.ring();
    for g in ops.iter().rev() {
        c.push(g.adjoint(ring))?;
    }
    Ok(c)
}

/// Canonical qutrit parities over `m` variables, in lexicographic order.
pub fn canonical_parities(m: usize) -> Vec<Vec<u8>> {
    (1..3usize.pow(m as u32))
        .map(|i| word(i, 3, m))
        .filter(|s| s.iter().copied().find(|&v| v != 0) == Some(1))
        .collect()
}

/// Gadgets realizing `ζ₉^{f(x)}` on `m ≤ 3` qutrits with the fewest gadgets,
/// ties broken by the lexicographically least exponent vector.
/// `f` is indexed by `x` with the first variable most significant.
pub fn solve_diagonal_gadgets(m: usize, f: &[u8]) -> Result<Vec<PhaseGadget>> {
    solve_with_parities(m, f, &canonical_parities(m))
}

/// As [`solve_diagonal_gadgets`] with gadgets restricted to `parities`.
pub fn solve_with_parities(m: usize, f: &[u8], parities: &[Vec<u8>]) -> Result<Vec<PhaseGadget>> {
    if m == 0 || m > 3 {
        return Err(Error::Invalid(format!("solver supports 1 to 3 variables, got {m}")));
    }
    let points = 3usize.pow(m as u32);
    if f.len() != points {
        return Err(Error::Shape(format!("target table has {} entries, expected {points}", f.len())));
    }
    let f: Vec<u8> = f.iter().map(|v| v % 9).collect();
    let gadgets: Vec<PhaseGadget> =
        parities.iter().map(|s| PhaseGadget::new(3, s.clone(), 1)).collect::<Result<_>>()?;
    if gadgets.iter().any(|g| g.parity.len() != m) {
        return Err(Error::Shape("parity length differs from variable count".into()));
    }
    let cols = gadgets.len();
    let a: Vec<Vec<u8>> = (0..points).map(|i| gadgets.iter().map(|g| g.value(3, &word(i, 3, m))).collect()).collect();
    let snf = Snf9::new(&a, cols);
    let sol = snf.solve(&f).ok_or_else(|| Error::NotRealizable("no exponent assignment over Z9 matches the target".into()))?;
    let mut best: Option<(usize, Vec<u8>)> = None;
    snf.enumerate(&sol, |t| {
        let w = t.iter().filter(|&&v| v != 0).count();
        let better = match &best {
            None => true,
            Some((bw, bt)) => w < *bw || (w == *bw && t < bt.as_slice()),
        };
        if better {
            best = Some((w, t.to_vec()));
        }
    });
    let (_, t) = best.expect("a particular solution exists");
    Ok(gadgets
        .into_iter()
        .zip(t)
        .filter(|(_, t)| *t != 0)
        .map(|(g, t)| PhaseGadget { parity: g.parity, t_exp: t })
        .collect())
}

fn val3(x: u8) -> u32 {
    match x % 9 {
        0 => 2,
        3 | 6 => 1,
        _ => 0,
    }
}

fn inv9(x: u8) -> u8 {
    (1..9).find(|&y| (x as u32 * y as u32) % 9 == 1).expect("unit")
}

/// Smith form `U A V = D` over Z/9 with `D` diagonal in powers of 3.
struct Snf9 {
    u: Vec<Vec<u8>>,
    v: Vec<Vec<u8>>,
    diag: Vec<u32>,
    rows: usize,
    cols: usize,
}

impl Snf9 {
    fn new(a: &[Vec<u8>], cols: usize) -> Self {
        let rows = a.len();
        let mut m: Vec<Vec<u8>> = a.to_vec();
        let ident = |n: usize| (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()).collect::<Vec<Vec<u8>>>();
        let mut u = ident(rows);
        let mut v = ident(cols);
        let mut diag = Vec::new();
        let r9 = |x: u32| (x % 9) as u8;
        for k in 0..rows.min(cols) {
            let mut piv: Option<(usize, usize, u32)> = None;
            for i in k..rows {
                for j in k..cols {
                    let vv = val3(m[i][j]);
                    if vv < 2 && piv.is_none_or(|(_, _, b)| vv < b) {
                        piv = Some((i, j, vv));
                    }
                }
            }
            let Some((pi, pj, pv)) = piv else { break };
            m.swap(k, pi);
            u.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            for row in v.iter_mut() {
                row.swap(k, pj);
            }
            // Scale column k so the pivot becomes exactly 3^pv.
            let unit = if pv == 0 { m[k][k] } else { m[k][k] / 3 };
            let s = inv9(unit);
            for row in m.iter_mut() {
                row[k] = r9(row[k] as u32 * s as u32);
            }
            for row in v.iter_mut() {
                row[k] = r9(row[k] as u32 * s as u32);
            }
            let pivot = m[k][k];
            for i in 0..rows {
                if i == k || m[i][k] == 0 {
                    continue;
                }
                let q = if pv == 0 { m[i][k] } else { m[i][k] / 3 };
                let neg = (9 - q) % 9;
                for j in 0..cols {
                    m[i][j] = r9(m[i][j] as u32 + neg as u32 * m[k][j] as u32);
                }
                for j in 0..rows {
                    u[i][j] = r9(u[i][j] as u32 + neg as u32 * u[k][j] as u32);
                }
            }
            for j in 0..cols {
                if j == k || m[k][j] == 0 {
                    continue;
                }
                let q = if pv == 0 { m[k][j] } else { m[k][j] / 3 };
                let neg = (9 - q) % 9;
                for row in m.iter_mut() {
                    row[j] = r9(row[j] as u32 + neg as u32 * row[k] as u32);
                }
                for row in v.iter_mut() {
                    row[j] = r9(row[j] as u32 + neg as u32 * row[k] as u32);
                }
            }
            debug_assert_eq!(m[k][k], pivot);
            diag.push(pv);
        }
        Snf9 { u, v, diag, rows, cols }
    }

    /// A particular solution `y` of `D y = U f`, or `None`.
    fn solve(&self, f: &[u8]) -> Option<Vec<u8>> {
        let g: Vec<u8> = (0..self.rows)
            .map(|i| (self.u[i].iter().zip(f).map(|(&a, &b)| a as u32 * b as u32).sum::<u32>() % 9) as u8)
            .collect();
        let mut y = vec![0u8; self.cols];
        for (i, &gi) in g.iter().enumerate() {
            match self.diag.get(i) {
                Some(0) => y[i] = gi,
                Some(1) => {
                    if gi % 3 != 0 {
                        return None;
                    }
                    y[i] = gi / 3;
                }
                _ => {
                    if gi != 0 {
                        return None;
                    }
                }
            }
        }
        Some(y)
    }

    fn v_times(&self, y: &[u8]) -> Vec<u8> {
        (0..self.cols)
            .map(|i| (self.v[i].iter().zip(y).map(|(&a, &b)| a as u32 * b as u32).sum::<u32>() % 9) as u8)
            .collect()
    }

    /// Calls `visit` on every solution `t = V (y + kernel)`.
    fn enumerate(&self, y: &[u8], mut visit: impl FnMut(&[u8])) {
        let mut steps: Vec<(Vec<u8>, u32)> = Vec::new();
        for i in 0..self.cols {
            let (step, radix) = match self.diag.get(i) {
                Some(0) => continue,
                Some(1) => (3u8, 3u32),
                _ => (1u8, 9u32),
            };
            let mut e = vec![0u8; self.cols];
            e[i] = step;
            steps.push((self.v_times(&e), radix));
        }
        let mut t = self.v_times(y);
        let mut digits = vec![0u32; steps.len()];
        loop {
            visit(&t);
            let mut i = 0;
            loop {
                if i == steps.len() {
                    return;
                }
                for (slot, &w) in t.iter_mut().zip(&steps[i].0) {
                    *slot = (*slot + w) % 9;
                }
                digits[i] += 1;
                if digits[i] < steps[i].1 {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }
}

/// Diagonal exponent table `f(x) = Σ_g value_g(x)` of qutrit gadgets.
pub fn gadget_table(m: usize, gadgets: &[PhaseGadget]) -> Vec<u8> {
    (0..3usize.pow(m as u32))
        .map(|i| {
            let x = word(i, 3, m);
            (gadgets.iter().map(|g| g.value(3, &x) as u32).sum::<u32>() % 9) as u8
        })
        .collect()
}

/// A circuit realizing `gadgets` on `m` qutrits.
pub fn gadget_circuit(dim: u32, m: usize, gadgets: &[PhaseGadget]) -> Result<Circuit> {
    let poly = PhasePolynomial {
        dim,
        n: m,
        gadgets: merge(dim, gadgets.iter().cloned()),
        linear: GfMatrix::identity(dim as u8, m),
    };
    poly.synthesize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_t_is_one_gadget() {
        let mut c = Circuit::qutrit(1);
        c.t(0);
        let p = phase_polynomial(&c).unwrap();
        assert_eq!(p.gadgets, vec![PhaseGadget { parity: vec![1], t_exp: 1 }]);
    }

    #[test]
    fn conjugated_t_gives_sum_parity() {
        let mut c = Circuit::qutrit(2);
        c.cx(0, 1).t(1).cxdg(0, 1);
        let p = phase_polynomial(&c).unwrap();
        assert_eq!(p.gadgets, vec![PhaseGadget { parity: vec![1, 1], t_exp: 1 }]);
        assert_eq!(p.linear, GfMatrix::identity(3, 2));
    }

    #[test]
    fn canonical_form_flips_sign() {
        let g = PhaseGadget::new(3, vec![0, 2, 1], 1).unwrap();
        assert_eq!(g, PhaseGadget { parity: vec![0, 1, 2], t_exp: 8 });
    }

    #[test]
    fn non_conforming_gate() {
        let mut c = Circuit::qutrit(1);
        c.add_single(Single::H, 0);
        assert!(matches!(phase_polynomial(&c), Err(Error::NonConforming(_))));
        let mut s = Circuit::qutrit(1);
        s.add_single(Single::ZPhase(0, 12), 0);
        assert!(matches!(phase_polynomial(&s), Err(Error::NonConforming(_))));
    }

    #[test]
    fn linear_synthesis_roundtrip() {
        let l = GfMatrix::from_rows(3, &[vec![0, 2, 1], vec![1, 1, 0], vec![2, 0, 0]], 3);
        let c = linear_map_circuit(&l).unwrap();
        assert_eq!(extract(&c).unwrap().linear, l);
    }

    #[test]
    fn solver_trivial_cases() {
        assert!(solve_diagonal_gadgets(2, &[0; 9]).unwrap().is_empty());
        let f: Vec<u8> = (0..9).map(|i| cube((i / 3) as u8)).collect();
        assert_eq!(solve_diagonal_gadgets(2, &f).unwrap(), vec![PhaseGadget { parity: vec![1, 0], t_exp: 1 }]);
    }

    #[test]
    fn solver_rejects_unrealizable() {
        // S = diag(1,1,ω) is not a T-lattice diagonal.
        assert!(matches!(solve_diagonal_gadgets(1, &[0, 0, 3]), Err(Error::NotRealizable(_))));
    }
}
