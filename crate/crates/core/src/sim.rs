//! Exact dense semantics: state vectors, unitaries/isometries, truth
//! tables, emulation checks and measurement branches.

use std::fmt;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::circuit::{BasisState, Circuit, Gate, Perm, Single};
use crate::cyclo::{CycloNum, Ring};
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;

/// Largest register handled densely, per local dimension.
#[derive(Clone, Copy, Debug)]
pub struct SimConfig {
    pub max_wires_qutrit: usize,
    pub max_wires_qubit: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { max_wires_qutrit: 8, max_wires_qubit: 14 }
    }
}

impl SimConfig {
    fn cap(&self, ring: Ring) -> usize {
        match ring {
            Ring::Qutrit => self.max_wires_qutrit,
            Ring::Qubit => self.max_wires_qubit,
        }
    }
}

enum Action {
    Perm(Vec<usize>),
    Diag(Vec<i64>),
    Dense(Vec<Vec<CycloNum>>),
}

/// Dense `d×d` matrix of a single-qudit operation, as rows.
pub fn single_matrix(op: Single, ring: Ring) -> Vec<Vec<CycloNum>> {
    let d = ring.dim() as usize;
    match action_of(op, ring) {
        Action::Perm(p) => (0..d)
            .map(|r| (0..d).map(|c| if p[c] == r { CycloNum::one(ring) } else { CycloNum::zero(ring) }).collect())
            .collect(),
        Action::Diag(e) => (0..d)
            .map(|r| (0..d).map(|c| if r == c { CycloNum::zeta(ring, e[r]) } else { CycloNum::zero(ring) }).collect())
            .collect(),
        Action::Dense(m) => m,
    }
}

fn hadamard(ring: Ring, sign: i64) -> Vec<Vec<CycloNum>> {
    let d = ring.dim() as i64;
    let s = CycloNum::inv_sqrt_dim(ring);
    (0..d).map(|j| (0..d).map(|k| CycloNum::omega(ring, sign * j * k) * &s).collect()).collect()
}

fn matmul_small(a: &[Vec<CycloNum>], b: &[Vec<CycloNum>]) -> Vec<Vec<CycloNum>> {
    let ring = a[0][0].ring();
    let d = a.len();
    (0..d)
        .map(|r| {
            (0..d)
                .map(|c| (0..d).fold(CycloNum::zero(ring), |acc, k| acc + &a[r][k] * &b[k][c]))
                .collect()
        })
        .collect()
}

fn action_of(op: Single, ring: Ring) -> Action {
    let d = ring.dim();
    match op {
        Single::PermX(p) => Action::Perm((0..d).map(|k| p.apply(d, k) as usize).collect()),
        Single::ZPhase(a, b) => {
            if d == 2 {
                Action::Diag(vec![0, a as i64])
            } else {
                Action::Diag(vec![0, a as i64, b as i64])
            }
        }
        Single::Dualizer => Action::Perm((0..d).map(|k| ((d - k) % d) as usize).collect()),
        Single::H => Action::Dense(hadamard(ring, 1)),
        Single::Hdg => Action::Dense(hadamard(ring, -1)),
        Single::XPhase(a, b) => {
            let z = single_matrix(Single::ZPhase(a, b), ring);
            Action::Dense(matmul_small(&matmul_small(&hadamard(ring, 1), &z), &hadamard(ring, -1)))
        }
    }
}

fn power_of(op: Single, ring: Ring, e: usize) -> Vec<Vec<CycloNum>> {
    let d = ring.dim() as usize;
    let mut acc: Vec<Vec<CycloNum>> =
        (0..d).map(|r| (0..d).map(|c| if r == c { CycloNum::one(ring) } else { CycloNum::zero(ring) }).collect()).collect();
    let m = single_matrix(op, ring);
    for _ in 0..e {
        acc = matmul_small(&m, &acc);
    }
    acc
}

fn basis_vector(state: BasisState, ring: Ring) -> Vec<CycloNum> {
    let d = ring.dim() as usize;
    match state {
        BasisState::Ket(k) => (0..d).map(|i| if i == k as usize { CycloNum::one(ring) } else { CycloNum::zero(ring) }).collect(),
        BasisState::Plus => vec![CycloNum::inv_sqrt_dim(ring); d],
    }
}

/// A state over the full register of a circuit. Wires that are not live
/// (never opened, or already postselected) hold `|0⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateVec {
    ring: Ring,
    n: usize,
    amps: Vec<CycloNum>,
}

impl StateVec {
    pub fn new(ring: Ring, n: usize, amps: Vec<CycloNum>) -> Result<Self> {
        if amps.len() != (ring.dim() as usize).pow(n as u32) {
            return Err(Error::Shape(format!("{} amplitudes for {n} wires", amps.len())));
        }
        Ok(StateVec { ring, n, amps })
    }

    pub fn basis(ring: Ring, n: usize, index: usize) -> Self {
        let size = (ring.dim() as usize).pow(n as u32);
        let mut amps = vec![CycloNum::zero(ring); size];
        amps[index] = CycloNum::one(ring);
        StateVec { ring, n, amps }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn amps(&self) -> &[CycloNum] {
        &self.amps
    }

    fn d(&self) -> usize {
        self.ring.dim() as usize
    }

    fn stride(&self, wire: usize) -> usize {
        self.d().pow((self.n - 1 - wire) as u32)
    }

    fn digit(&self, idx: usize, wire: usize) -> usize {
        idx / self.stride(wire) % self.d()
    }

    fn apply_action(&mut self, wire: usize, act: &Action, filter: impl Fn(usize) -> bool) {
        let d = self.d();
        let st = self.stride(wire);
        let size = self.amps.len();
        let ring = self.ring;
        let mut idx = 0;
        while idx < size {
            if self.digit(idx, wire) != 0 {
                idx += 1;
                continue;
            }
            if !filter(idx) {
                idx += 1;
                continue;
            }
            match act {
                Action::Perm(p) => {
                    let old: Vec<CycloNum> = (0..d).map(|k| std::mem::replace(&mut self.amps[idx + k * st], CycloNum::zero(ring))).collect();
                    for (k, a) in old.into_iter().enumerate() {
                        self.amps[idx + p[k] * st] = a;
                    }
                }
                Action::Diag(e) => {
                    for k in 1..d {
                        if e[k] != 0 {
                            let v = self.amps[idx + k * st].mul_zeta(e[k]);
                            self.amps[idx + k * st] = v;
                        }
                    }
                }
                Action::Dense(m) => {
                    let old: Vec<CycloNum> = (0..d).map(|k| self.amps[idx + k * st].clone()).collect();
                    if old.iter().all(|x| x.is_zero()) {
                        idx += 1;
                        continue;
                    }
                    for r in 0..d {
                        let mut acc = CycloNum::zero(ring);
                        for (c, a) in old.iter().enumerate() {
                            if !a.is_zero() && !m[r][c].is_zero() {
                                acc = acc + &m[r][c] * a;
                            }
                        }
                        self.amps[idx + r * st] = acc;
                    }
                }
            }
            idx += 1;
        }
    }

    fn apply_single(&mut self, op: Single, wire: usize) {
        let act = action_of(op, self.ring);
        self.apply_action(wire, &act, |_| true);
    }

    fn apply_controlled(&mut self, ctrl: usize, tgt: usize, per_value: &[Option<Action>]) {
        for (v, act) in per_value.iter().enumerate() {
            if let Some(act) = act {
                let st = self.stride(ctrl);
                let d = self.d();
                self.apply_action(tgt, act, |idx| idx / st % d == v);
            }
        }
    }

    /// Applies one gate; `live` tracks which wires currently carry a qudit.
    fn apply_gate(&mut self, g: &Gate, live: &mut [bool]) -> Result<()> {
        let ring = self.ring;
        let d = self.d();
        match *g {
            Gate::Single { op, wire } => self.apply_single(op, wire),
            Gate::CX { ctrl, tgt } | Gate::CXdg { ctrl, tgt } => {
                let sign = if matches!(g, Gate::CX { .. }) { 1 } else { d - 1 };
                let acts: Vec<Option<Action>> = (0..d)
                    .map(|v| (v != 0).then(|| Action::Perm((0..d).map(|k| (k + sign * v) % d).collect())))
                    .collect();
                self.apply_controlled(ctrl, tgt, &acts);
            }
            Gate::LambdaCtrl { u, ctrl, tgt } => {
                let acts: Vec<Option<Action>> =
                    (0..d).map(|v| (v != 0).then(|| Action::Dense(power_of(u, ring, v)))).collect();
                self.apply_controlled(ctrl, tgt, &acts);
            }
            Gate::KetCtrl { value, u, ctrl, tgt } => {
                let acts: Vec<Option<Action>> =
                    (0..d).map(|v| (v == value as usize).then(|| action_of(u, ring))).collect();
                self.apply_controlled(ctrl, tgt, &acts);
            }
            Gate::Swap { a, b } => {
                let (sa, sb) = (self.stride(a), self.stride(b));
                let size = self.amps.len();
                for idx in 0..size {
                    let (da, db) = (idx / sa % d, idx / sb % d);
                    if da < db {
                        let j = idx - da * sa - db * sb + db * sa + da * sb;
                        self.amps.swap(idx, j);
                    }
                }
            }
            Gate::Prep { wire, state } => {
                if live[wire] {
                    return Err(Error::Invalid(format!("PREP on live wire {}", wire + 1)));
                }
                let v = basis_vector(state, ring);
                let st = self.stride(wire);
                for idx in 0..self.amps.len() {
                    if self.digit(idx, wire) == 0 && !self.amps[idx].is_zero() {
                        let a = self.amps[idx].clone();
                        for k in (0..d).rev() {
                            self.amps[idx + k * st] = &a * &v[k];
                        }
                    }
                }
                live[wire] = true;
            }
            Gate::Postselect { wire, state } => {
                if !live[wire] {
                    return Err(Error::Invalid(format!("POST on dead wire {}", wire + 1)));
                }
                let v: Vec<CycloNum> = basis_vector(state, ring).iter().map(|x| x.conj()).collect();
                let st = self.stride(wire);
                for idx in 0..self.amps.len() {
                    if self.digit(idx, wire) == 0 {
                        let mut acc = CycloNum::zero(ring);
                        for k in 0..d {
                            let a = std::mem::replace(&mut self.amps[idx + k * st], CycloNum::zero(ring));
                            if !a.is_zero() {
                                acc = acc + &v[k] * &a;
                            }
                        }
                        self.amps[idx] = acc;
                    }
                }
                live[wire] = false;
            }
        }
        Ok(())
    }

    /// `⟨ψ|ψ⟩`.
    pub fn norm_sq(&self) -> CycloNum {
        self.amps.iter().fold(CycloNum::zero(self.ring), |acc, a| acc + a.norm_sq())
    }

    pub fn inner(&self, other: &Self) -> CycloNum {
        self.amps.iter().zip(&other.amps).fold(CycloNum::zero(self.ring), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn scale(&self, s: &CycloNum) -> Self {
        StateVec { ring: self.ring, n: self.n, amps: self.amps.iter().map(|a| a * s).collect() }
    }

    /// Returns `λ` with `self = λ·other`.
    pub fn proportional_to(&self, other: &Self) -> Option<CycloNum> {
        ExactMatrix::column(self.ring, self.amps.clone())
            .equal_up_to_scalar(&ExactMatrix::column(other.ring, other.amps.clone()))
    }

    /// Applies every gate of `c` to this full-register state.
    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.n_wires() != self.n || c.ring() != self.ring {
            return Err(Error::Shape("state and circuit registers differ".into()));
        }
        let inputs = c.input_wires();
        let mut live: Vec<bool> = (0..self.n).map(|w| inputs.contains(&w)).collect();
        for g in c.gates() {
            self.apply_gate(g, &mut live)?;
        }
        Ok(())
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(if a.is_zero() { CycloNum::zero(self.ring) } else { a * b });
            }
        }
        StateVec { ring: self.ring, n: self.n + other.n, amps }
    }
}

/// Measurement basis for [`branch`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureBasis {
    Z,
    /// Eigenbasis `H|k⟩`.
    X,
}

/// An exact branch probability.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Probability {
    Rational(BigRational),
    /// A real cyclotomic value that is not rational.
    Real(CycloNum),
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probability::Rational(r) => write!(f, "{r}"),
            Probability::Real(c) => write!(f, "{c}"),
        }
    }
}

impl Probability {
    fn from_cyclo(c: CycloNum) -> Self {
        match c.to_rational() {
            Some(r) => Probability::Rational(r),
            None => Probability::Real(c),
        }
    }
}

/// Projects `wire` onto `outcome`, returning the subnormalized state and its probability.
pub fn branch(state: &StateVec, wire: usize, outcome: usize, basis: MeasureBasis) -> Result<(StateVec, Probability)> {
    let d = state.d();
    if wire >= state.n || outcome >= d {
        return Err(Error::Invalid(format!("wire {} / outcome {outcome} out of range", wire + 1)));
    }
    let mut s = state.clone();
    let mut live = vec![true; s.n];
    if basis == MeasureBasis::X {
        s.apply_gate(&Gate::single(Single::Hdg, wire), &mut live)?;
    }
    let st = s.stride(wire);
    for idx in 0..s.amps.len() {
        if idx / st % d != outcome {
            s.amps[idx] = CycloNum::zero(s.ring);
        }
    }
    if basis == MeasureBasis::X {
        s.apply_gate(&Gate::single(Single::H, wire), &mut live)?;
    }
    let p = s.norm_sq();
    Ok((s, Probability::from_cyclo(p)))
}

fn check_cap(c: &Circuit, cfg: &SimConfig) -> Result<()> {
    let cap = cfg.cap(c.ring());
    if c.n_wires() > cap {
        return Err(Error::CapExceeded(format!("{} wires exceeds the dense cap of {cap}", c.n_wires())));
    }
    c.validate()
}

/// Embeds a vector over the circuit's input wires into the full register.
fn embed(c: &Circuit, wires: &[usize], index: usize) -> usize {
    let d = c.dim() as usize;
    let n = c.n_wires();
    let mut rem = index;
    let mut full = 0;
    for &w in wires.iter().rev() {
        let digit = rem % d;
        rem /= d;
        full += digit * d.pow((n - 1 - w) as u32);
    }
    full
}

/// Runs `c` on a vector over its input wires, returning the vector over its output wires.
pub fn run(c: &Circuit, input: &[CycloNum], cfg: &SimConfig) -> Result<Vec<CycloNum>> {
    check_cap(c, cfg)?;
    let ring = c.ring();
    let d = c.dim() as usize;
    let n = c.n_wires();
    let ins = c.input_wires();
    let outs = c.output_wires();
    if input.len() != d.pow(ins.len() as u32) {
        return Err(Error::Shape(format!("input of length {} for {} input wires", input.len(), ins.len())));
    }
    let mut amps = vec![CycloNum::zero(ring); d.pow(n as u32)];
    for (i, a) in input.iter().enumerate() {
        amps[embed(c, &ins, i)] = a.clone();
    }
    let mut s = StateVec { ring, n, amps };
    s.apply_circuit(c)?;
    Ok((0..d.pow(outs.len() as u32)).map(|j| s.amps[embed(c, &outs, j)].clone()).collect())
}

/// Applies `c` to every column of `m` (rows indexed by the input wires).
pub fn apply_to_columns(c: &Circuit, m: &ExactMatrix, cfg: &SimConfig) -> Result<ExactMatrix> {
    let cols: Vec<Vec<CycloNum>> =
        (0..m.cols()).into_par_iter().map(|j| run(c, &m.col(j), cfg)).collect::<Result<_>>()?;
    let rows = cols[0].len();
    Ok(ExactMatrix::from_fn(c.ring(), rows, m.cols(), |r, j| cols[j][r].clone()))
}

/// The exact matrix of `c`: a unitary, or an isometry/co-isometry when
/// boundary markers are present.
pub fn unitary_of(c: &Circuit) -> Result<ExactMatrix> {
    unitary_of_with(c, &SimConfig::default())
}

pub fn unitary_of_with(c: &Circuit, cfg: &SimConfig) -> Result<ExactMatrix> {
    check_cap(c, cfg)?;
    let ring = c.ring();
    let d = c.dim() as usize;
    let n_in = c.input_wires().len();
    let dim_in = d.pow(n_in as u32);
    let cols: Vec<Vec<CycloNum>> = (0..dim_in)
        .into_par_iter()
        .map(|j| {
            let mut v = vec![CycloNum::zero(ring); dim_in];
            v[j] = CycloNum::one(ring);
            run(c, &v, cfg)
        })
        .collect::<Result<_>>()?;
    let rows = cols[0].len();
    Ok(ExactMatrix::from_fn(ring, rows, dim_in, |r, j| cols[j][r].clone()))
}

/// Basis map of a classical reversible circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub rows: Vec<(Vec<u8>, Vec<u8>)>,
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

pub fn truth_table(c: &Circuit) -> Result<TruthTable> {
    let d = c.dim() as usize;
    let m = unitary_of(c)?;
    let image = m.permutation_image().map_err(|e| match e {
        Error::NotPermutation(col) => {
            let idx: usize = col.parse().unwrap_or(0);
            let w: Vec<String> = word(idx, d, c.input_wires().len()).iter().map(|x| x.to_string()).collect();
            Error::NotPermutation(format!("{idx} (input {})", w.join("")))
        }
        other => other,
    })?;
    let (n_in, n_out) = (c.input_wires().len(), c.output_wires().len());
    let (inputs, outputs) = match c.labels() {
        Some((i, o)) if i.len() == n_in && o.len() == n_out => (i.clone(), o.clone()),
        _ => (
            c.input_wires().iter().map(|w| format!("in{}", w + 1)).collect(),
            c.output_wires().iter().map(|w| format!("out{}", w + 1)).collect(),
        ),
    };
    let rows = image.iter().enumerate().map(|(j, &r)| (word(j, d, n_in), word(r, d, n_out))).collect();
    Ok(TruthTable { inputs, outputs, rows })
}

impl TruthTable {
    /// Aligned text, inputs then outputs, one row per basis input.
    pub fn render(&self) -> String {
        let labels: Vec<&String> = self.inputs.iter().chain(&self.outputs).collect();
        let widths: Vec<usize> = labels.iter().map(|l| l.chars().count().max(1)).collect();
        let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - s.chars().count()));
        let n_in = self.inputs.len();
        let line = |cells: Vec<String>| {
            let mut parts: Vec<String> = Vec::new();
            for (i, c) in cells.iter().enumerate() {
                if i == n_in {
                    parts.push("|".into());
                }
                parts.push(pad(c, widths[i]));
            }
            parts.join(" ").trim_end().to_string()
        };
        let mut out = vec![line(labels.iter().map(|s| s.to_string()).collect())];
        for (i, o) in &self.rows {
            out.push(line(i.iter().chain(o).map(|x| x.to_string()).collect()));
        }
        out.join("\n") + "\n"
    }
}

/// A boolean function of the binary inputs written to one output wire.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolOutput {
    /// Position among the circuit's output wires.
    pub output: usize,
    /// Value for each binary input word, indexed with the first input most significant.
    pub table: Vec<u8>,
}

impl BoolOutput {
    pub fn from_fn(m: usize, output: usize, f: impl Fn(&[u8]) -> u8) -> Self {
        let table = (0..1usize << m).map(|i| f(&word(i, 2, m))).collect();
        BoolOutput { output, table }
    }

    pub fn and(m: usize, output: usize) -> Self {
        Self::from_fn(m, output, |b| b.iter().all(|&x| x == 1) as u8)
    }

    pub fn or(m: usize, output: usize) -> Self {
        Self::from_fn(m, output, |b| b.contains(&1) as u8)
    }
}

#[derive(Clone, Debug)]
pub enum EmulationTarget {
    /// A `2^m × 2^m` matrix acting on the binary subspace of all wires.
    Unitary(ExactMatrix),
    Boolean(Vec<BoolOutput>),
}

/// True iff `c` restricted to binary inputs reproduces `target` exactly, phases included.
pub fn emulates(c: &Circuit, target: &EmulationTarget) -> Result<bool> {
    let ring = c.ring();
    let d = c.dim() as usize;
    let m = c.input_wires().len();
    let n_out = c.output_wires().len();
    let binary_index = |bits: &[u8]| bits.iter().fold(0usize, |acc, &b| acc * d + b as usize);
    match target {
        EmulationTarget::Unitary(u) => {
            if u.rows() != 1 << m || u.cols() != 1 << m || n_out != m || u.ring() != ring {
                return Err(Error::Invalid("target unitary does not match the circuit's binary subspace".into()));
            }
            for b in 0..1usize << m {
                let mut v = vec![CycloNum::zero(ring); d.pow(m as u32)];
                v[binary_index(&word(b, 2, m))] = CycloNum::one(ring);
                let out = run(c, &v, &SimConfig::default())?;
                let mut want = vec![CycloNum::zero(ring); d.pow(m as u32)];
                for r in 0..1usize << m {
                    want[binary_index(&word(r, 2, m))] = u.get(r, b).clone();
                }
                if out != want {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        EmulationTarget::Boolean(outs) => {
            let mut seen = std::collections::HashSet::new();
            for o in outs {
                if o.output >= n_out || o.table.len() != 1 << m || !seen.insert(o.output) {
                    return Err(Error::Invalid(format!("malformed designation for output {}", o.output + 1)));
                }
            }
            for b in 0..1usize << m {
                let mut v = vec![CycloNum::zero(ring); d.pow(m as u32)];
                v[binary_index(&word(b, 2, m))] = CycloNum::one(ring);
                let out = run(c, &v, &SimConfig::default())?;
                let hits: Vec<usize> = (0..out.len()).filter(|&i| !out[i].is_zero()).collect();
                if hits.len() != 1 || !out[hits[0]].is_one() {
                    return Ok(false);
                }
                let w = word(hits[0], d, n_out);
                if outs.iter().any(|o| w[o.output] != o.table[b]) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Matrix of a single gate placed on an `n`-wire register.
pub fn gate_matrix(g: &Gate, dim: u32, n: usize) -> Result<ExactMatrix> {
    let mut c = Circuit::new(dim, n)?;
    c.push(g.clone())?;
    unitary_of(&c)
}

/// Returns the single-qudit permutation `X_{+1}` etc. as a matrix for tests and reports.
pub fn perm_matrix(p: Perm, ring: Ring) -> ExactMatrix {
    let rows = single_matrix(Single::PermX(p), ring);
    ExactMatrix::from_rows(ring, rows).expect("square")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_wire(ops: &[Single]) -> ExactMatrix {
        let mut c = Circuit::qutrit(1);
        for &op in ops {
            c.add_single(op, 0);
        }
        unitary_of(&c).unwrap()
    }

    #[test]
    fn hadamard_identities() {
        let id = ExactMatrix::identity(Ring::Qutrit, 3);
        assert_eq!(one_wire(&[Single::H; 4]), id);
        assert_eq!(one_wire(&[Single::H; 2]), one_wire(&[Single::Dualizer]));
        assert_eq!(one_wire(&[Single::H; 3]), one_wire(&[Single::Hdg]));
    }

    #[test]
    fn cx_has_order_three() {
        let mut c = Circuit::qutrit(2);
        c.cx(0, 1).cx(0, 1).cx(0, 1);
        assert_eq!(unitary_of(&c).unwrap(), ExactMatrix::identity(Ring::Qutrit, 9));
        let mut a = Circuit::qutrit(2);
        a.cx(0, 1).cx(0, 1);
        let mut b = Circuit::qutrit(2);
        b.cxdg(0, 1);
        assert_eq!(unitary_of(&a).unwrap(), unitary_of(&b).unwrap());
    }

    #[test]
    fn conjugation_identities() {
        // H Z^{-1} H† = X and H† Z H = X.
        let x = one_wire(&[Single::PermX(Perm::Plus)]);
        assert_eq!(one_wire(&[Single::Hdg, Single::ZPhase(24, 12), Single::H]), x);
        assert_eq!(one_wire(&[Single::H, Single::ZPhase(12, 24), Single::Hdg]), x);
    }

    #[test]
    fn pauli_z_matches_omega() {
        let z = one_wire(&[Single::ZPhase(12, 24)]);
        let want = crate::pauli::PauliOp::parse(3, 1, "Z1").unwrap().to_matrix();
        assert_eq!(z, want);
    }

    #[test]
    fn plus_measurement_probabilities() {
        let mut c = Circuit::qutrit(1);
        c.add(Gate::Prep { wire: 0, state: BasisState::Plus });
        let v = run(&c, &[CycloNum::one(Ring::Qutrit)], &SimConfig::default()).unwrap();
        let s = StateVec::new(Ring::Qutrit, 1, v).unwrap();
        for k in 0..3 {
            let (_, p) = branch(&s, 0, k, MeasureBasis::Z).unwrap();
            assert_eq!(p, Probability::Rational(BigRational::new(1.into(), 3.into())));
        }
        let (_, p) = branch(&s, 0, 0, MeasureBasis::X).unwrap();
        assert_eq!(p, Probability::Rational(BigRational::from_integer(1.into())));
        let zero = StateVec::basis(Ring::Qutrit, 1, 0);
        let (_, p) = branch(&zero, 0, 0, MeasureBasis::Z).unwrap();
        assert_eq!(p, Probability::Rational(BigRational::from_integer(1.into())));
    }

    #[test]
    fn identity_truth_table() {
        let c = Circuit::qutrit(2);
        let t = truth_table(&c).unwrap();
        assert!(t.rows.iter().all(|(i, o)| i == o));
        assert_eq!(t.rows.len(), 9);
    }

    #[test]
    fn non_permutation_is_rejected() {
        let mut c = Circuit::qutrit(1);
        c.add_single(Single::H, 0);
        assert!(matches!(truth_table(&c), Err(Error::NotPermutation(_))));
    }

    #[test]
    fn identity_does_not_emulate_and() {
        let c = Circuit::qutrit(2);
        assert!(!emulates(&c, &EmulationTarget::Boolean(vec![BoolOutput::and(2, 1)])).unwrap());
        assert!(emulates(&c, &EmulationTarget::Boolean(vec![BoolOutput::from_fn(2, 1, |b| b[1])])).unwrap());
        assert!(emulates(&c, &EmulationTarget::Boolean(vec![BoolOutput::and(2, 5)])).is_err());
    }

    #[test]
    fn isometry_shapes() {
        let mut c = Circuit::qutrit(2);
        c.add(Gate::Prep { wire: 1, state: BasisState::Ket(0) });
        c.cx(0, 1);
        let m = unitary_of(&c).unwrap();
        assert_eq!((m.rows(), m.cols()), (9, 3));
        let a = unitary_of(&c.adjoint()).unwrap();
        assert_eq!(a, m.adjoint());
    }

    #[test]
    fn cap_is_enforced() {
        let c = Circuit::qutrit(9);
        assert!(matches!(unitary_of(&c), Err(Error::CapExceeded(_))));
    }
}
