//! Stabilizer codes: file format, read-off from CX encoders, symmetric
//! circuit splitting, transversal-gate checks and concatenation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::circuit::{BasisState, Circuit, Gate, Single};
use crate::cyclo::{CycloNum, Ring};
use crate::error::{Error, Result};
use crate::gf::{GfMatrix, SpanBasis};
use crate::matrix::ExactMatrix;
use crate::pauli::{self, distance_search, validate_stabilizer_set, DistanceWitness, PauliOp, StabilizerReport};
use crate::phasepoly::{self, cube};
use crate::sim::{self, SimConfig};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerCode {
    pub dim: u8,
    pub n: usize,
    pub k: usize,
    pub stabilizers: Vec<PauliOp>,
    pub logical_x: Vec<PauliOp>,
    pub logical_z: Vec<PauliOp>,
    pub encoder: Option<Circuit>,
    /// Path of the encoder file as written in the code file.
    pub encoder_path: Option<String>,
    pub provenance: String,
}

#[derive(Clone, Debug)]
pub struct CodeReport {
    pub stabilizers: StabilizerReport,
    pub failures: Vec<String>,
}

impl CodeReport {
    pub fn is_valid(&self) -> bool {
        self.stabilizers.is_valid() && self.failures.is_empty()
    }
}

impl StabilizerCode {
    /// `n = k` sites, no stabilizers, logicals `Xᵢ`, `Zᵢ`.
    pub fn trivial(dim: u8, k: usize) -> Self {
        StabilizerCode {
            dim,
            n: k,
            k,
            stabilizers: Vec::new(),
            logical_x: (0..k).map(|i| PauliOp::single_x(dim, k, i, 1)).collect(),
            logical_z: (0..k).map(|i| PauliOp::single_z(dim, k, i, 1)).collect(),
            encoder: Some(Circuit::new(dim as u32, k).expect("supported dimension")),
            encoder_path: None,
            provenance: "trivial code".into(),
        }
    }

    pub fn ring(&self) -> Ring {
        Ring::for_dim(self.dim as u32).expect("supported dimension")
    }

    pub fn validate(&self) -> CodeReport {
        let stabilizers = validate_stabilizer_set(&self.stabilizers);
        let mut failures = Vec::new();
        let all = || self.stabilizers.iter().chain(&self.logical_x).chain(&self.logical_z);
        if all().any(|p| p.n() != self.n || p.dim() != self.dim) {
            failures.push("operator shape differs from the code".into());
            return CodeReport { stabilizers, failures };
        }
        if self.logical_x.len() != self.k || self.logical_z.len() != self.k {
            failures.push(format!("expected {} logical pairs", self.k));
        }
        if stabilizers.rank + self.k > self.n {
            failures.push("too many stabilizers for k".into());
        }
        for (i, s) in self.stabilizers.iter().enumerate() {
            for (name, ops) in [("X", &self.logical_x), ("Z", &self.logical_z)] {
                for (j, l) in ops.iter().enumerate() {
                    let sig = pauli::symplectic(s, l).expect("shape checked");
                    if sig != 0 {
                        failures.push(format!("logical {name}{} does not commute with stabilizer {}", j + 1, i + 1));
                    }
                }
            }
        }
        for (i, a) in self.logical_x.iter().enumerate() {
            for (j, b) in self.logical_z.iter().enumerate() {
                let sig = pauli::symplectic(a, b).expect("shape checked");
                if sig != u8::from(i == j) {
                    failures.push(format!("symplectic(X{}, Z{}) = {sig}", i + 1, j + 1));
                }
            }
            for (j, b) in self.logical_x.iter().enumerate().skip(i + 1) {
                if pauli::symplectic(a, b).expect("shape checked") != 0 {
                    failures.push(format!("logicals X{} and X{} do not commute", i + 1, j + 1));
                }
            }
        }
        for (i, a) in self.logical_z.iter().enumerate() {
            for (j, b) in self.logical_z.iter().enumerate().skip(i + 1) {
                if pauli::symplectic(a, b).expect("shape checked") != 0 {
                    failures.push(format!("logicals Z{} and Z{} do not commute", i + 1, j + 1));
                }
            }
        }
        CodeReport { stabilizers, failures }
    }

    /// Minimum weight of a nontrivial logical operator, searched up to `w_max`.
    pub fn distance(&self, w_max: usize) -> Result<Option<DistanceWitness>> {
        distance_search(self.dim, self.n, &self.stabilizers, w_max)
    }

    pub fn is_css(&self) -> bool {
        self.stabilizers.iter().all(|s| s.is_x_type() || s.is_z_type())
    }

    pub fn x_stabilizers(&self) -> Vec<&PauliOp> {
        self.stabilizers.iter().filter(|s| s.is_x_type() && !s.is_identity_up_to_phase()).collect()
    }

    pub fn z_stabilizers(&self) -> Vec<&PauliOp> {
        self.stabilizers.iter().filter(|s| s.is_z_type() && !s.is_identity_up_to_phase()).collect()
    }

    /// Span of the stabilizers as `(x|z)` rows, phases ignored.
    fn stabilizer_span(&self) -> SpanBasis {
        let mut span = SpanBasis::new(self.dim, 2 * self.n);
        for s in &self.stabilizers {
            span.insert(&s.symplectic_vector());
        }
        span
    }

    /// True iff `a` and `b` differ by a stabilizer, up to phase.
    pub fn equivalent_mod_stabilizers(&self, a: &PauliOp, b: &PauliOp) -> bool {
        let Ok(q) = a.mul(&b.inverse()) else { return false };
        self.stabilizer_span().contains(&q.symplectic_vector())
    }

    /// Same stabilizer span and the same logical cosets, phases ignored.
    pub fn same_code(&self, other: &StabilizerCode) -> bool {
        if self.dim != other.dim || self.n != other.n || self.k != other.k {
            return false;
        }
        let (mine, theirs) = (self.stabilizer_span(), other.stabilizer_span());
        if mine.rank() != theirs.rank() || other.stabilizers.iter().any(|s| !mine.contains(&s.symplectic_vector())) {
            return false;
        }
        self.logical_x.iter().zip(&other.logical_x).all(|(a, b)| self.equivalent_mod_stabilizers(a, b))
            && self.logical_z.iter().zip(&other.logical_z).all(|(a, b)| self.equivalent_mod_stabilizers(a, b))
    }

    pub fn encoder_isometry(&self) -> Result<ExactMatrix> {
        let enc = self.encoder.as_ref().ok_or_else(|| Error::Invalid("code has no encoder".into()))?;
        self.check_encoder_shape(enc)?;
        sim::unitary_of(enc)
    }

    fn check_encoder_shape(&self, enc: &Circuit) -> Result<()> {
        if enc.n_wires() != self.n || enc.input_wires().len() != self.k || enc.dim() != self.dim as u32 {
            return Err(Error::Shape(format!(
                "encoder has {} wires and {} inputs; code is [[{}, {}]]",
                enc.n_wires(),
                enc.input_wires().len(),
                self.n,
                self.k
            )));
        }
        Ok(())
    }

    /// Canonical serialization.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "dim {}", self.dim);
        let _ = writeln!(s, "n {}", self.n);
        let _ = writeln!(s, "k {}", self.k);
        for p in &self.stabilizers {
            let _ = writeln!(s, "stabilizer {p}");
        }
        for p in &self.logical_x {
            let _ = writeln!(s, "logical_x {p}");
        }
        for p in &self.logical_z {
            let _ = writeln!(s, "logical_z {p}");
        }
        if let Some(e) = &self.encoder_path {
            let _ = writeln!(s, "encoder {e}");
        }
        if !self.provenance.is_empty() {
            for line in self.provenance.lines() {
                let _ = writeln!(s, "provenance {line}");
            }
        }
        s
    }

    /// Parses the key-value format; `encoder` paths resolve against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut fields: Vec<(usize, String, String)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            let body = line.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let (key, value) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
            fields.push((ln + 1, key.to_string(), value.trim().to_string()));
        }
        let scalar = |key: &str| -> Result<usize> {
            let hits: Vec<&(usize, String, String)> = fields.iter().filter(|f| f.1 == key).collect();
            match hits.as_slice() {
                [one] => one.2.parse().map_err(|_| Error::parse(one.0, format!("`{key}` needs an integer"))),
                [] => Err(Error::parse(0, format!("missing `{key}`"))),
                _ => Err(Error::parse(hits[1].0, format!("duplicate `{key}`"))),
            }
        };
        let dim = scalar("dim")? as u8;
        Ring::for_dim(dim as u32)?;
        let n = scalar("n")?;
        let k = scalar("k")?;
        let mut code = StabilizerCode {
            dim,
            n,
            k,
            stabilizers: Vec::new(),
            logical_x: Vec::new(),
            logical_z: Vec::new(),
            encoder: None,
            encoder_path: None,
            provenance: String::new(),
        };
        let mut prov = Vec::new();
        for (ln, key, value) in &fields {
            let pauli = || PauliOp::parse(dim, n, value).map_err(|e| Error::parse(*ln, e.to_string()));
            match key.as_str() {
                "dim" | "n" | "k" => {}
                "stabilizer" => code.stabilizers.push(pauli()?),
                "logical_x" => code.logical_x.push(pauli()?),
                "logical_z" => code.logical_z.push(pauli()?),
                "encoder" => {
                    let path = base.map_or_else(|| Path::new(value).to_path_buf(), |b| b.join(value));
                    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    let enc = Circuit::parse(&text)?;
                    code.check_encoder_shape(&enc)?;
                    code.encoder = Some(enc);
                    code.encoder_path = Some(value.clone());
                }
                "provenance" => prov.push(value.clone()),
                other => return Err(Error::parse(*ln, format!("unknown field `{other}`"))),
            }
        }
        code.provenance = prov.join("\n");
        Ok(code)
    }
}

/// `U P U†` for `U` a circuit of CX, CX†, SWAP and dualizer gates.
pub fn conjugate_through(p: &PauliOp, c: &Circuit) -> Result<PauliOp> {
    let d = p.dim();
    let mut x = p.x().to_vec();
    let mut z = p.z().to_vec();
    let add = |v: &mut Vec<u8>, t: usize, s: usize, k: u8| v[t] = (v[t] + k * v[s]) % d;
    for (i, g) in c.gates().iter().enumerate() {
        match *g {
            Gate::CX { ctrl, tgt } => {
                add(&mut x, tgt, ctrl, 1);
                add(&mut z, ctrl, tgt, d - 1);
            }
            Gate::CXdg { ctrl, tgt } => {
                add(&mut x, tgt, ctrl, d - 1);
                add(&mut z, ctrl, tgt, 1);
            }
            Gate::Swap { a, b } => {
                x.swap(a, b);
                z.swap(a, b);
            }
            Gate::Single { op: Single::Dualizer, wire } => {
                x[wire] = (d - x[wire]) % d;
                z[wire] = (d - z[wire]) % d;
            }
            Gate::Prep { .. } => {}
            _ => return Err(Error::NonConforming(format!("gate {} is not a CX-type gate", i + 1))),
        }
    }
    PauliOp::new(d, x, z, p.phase())
}

/// CSS code read off a CX encoder with `|0⟩` (Z check) and `|+⟩` (X check) ancillae.
pub fn read_code_from_gpf(encoder: &Circuit) -> Result<StabilizerCode> {
    encoder.validate()?;
    let d = encoder.dim() as u8;
    let n = encoder.n_wires();
    let mut x_checks = Vec::new();
    let mut z_checks = Vec::new();
    for (i, g) in encoder.gates().iter().enumerate() {
        match g {
            Gate::Prep { wire, state: BasisState::Plus } => x_checks.push(*wire),
            Gate::Prep { wire, state: BasisState::Ket(0) } => z_checks.push(*wire),
            Gate::Prep { .. } => return Err(Error::NonConforming(format!("gate {}: ancillae must start in |0⟩ or |+⟩", i + 1))),
            Gate::Postselect { .. } => return Err(Error::NonConforming("postselection: the encoder is not an isometry".into())),
            Gate::CX { .. } | Gate::CXdg { .. } | Gate::Swap { .. } | Gate::Single { op: Single::Dualizer, .. } => {}
            _ => return Err(Error::NonConforming(format!("gate {} is not a CX-type gate", i + 1))),
        }
    }
    let inputs = encoder.input_wires();
    let push = |p: PauliOp| conjugate_through(&p, encoder);
    let mut stabilizers = Vec::new();
    for &w in &x_checks {
        stabilizers.push(push(PauliOp::single_x(d, n, w, 1))?);
    }
    for &w in &z_checks {
        stabilizers.push(push(PauliOp::single_z(d, n, w, 1))?);
    }
    let logical_x = inputs.iter().map(|&w| push(PauliOp::single_x(d, n, w, 1))).collect::<Result<_>>()?;
    let logical_z = inputs.iter().map(|&w| push(PauliOp::single_z(d, n, w, 1))).collect::<Result<_>>()?;
    let code = StabilizerCode {
        dim: d,
        n,
        k: inputs.len(),
        stabilizers,
        logical_x,
        logical_z,
        encoder: Some(encoder.clone()),
        encoder_path: None,
        provenance: "read off a CX encoder".into(),
    };
    let report = code.validate();
    if !report.is_valid() {
        return Err(Error::Invalid(format!("read-off code is invalid: {:?}", report.failures)));
    }
    Ok(code)
}

/// A CX encoder whose code states are `Σ_g |Σ cᵢ rᵢ + Σ g_j s_j⟩` for
/// logical rows `rᵢ` (the first `k` rows) and X-check rows `s_j`.
pub fn css_encoder(dim: u8, n: usize, k: usize, x_rows: &[Vec<u8>]) -> Result<Circuit> {
    let m = x_rows.len();
    if k > m || x_rows.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("X rows do not fit the register".into()));
    }
    let r = GfMatrix::from_rows(dim, x_rows, n);
    let mut red = r.clone();
    let pivots = red.rref();
    if pivots.len() != m {
        return Err(Error::Invalid("X rows are linearly dependent".into()));
    }
    let a = GfMatrix::from_rows(dim, &x_rows.iter().map(|row| pivots.iter().map(|&p| row[p]).collect()).collect::<Vec<_>>(), m);
    let a_inv = a.inverse().expect("pivot block is invertible");
    let r_prime = a_inv.mul(&r);
    let mut c = Circuit::new(dim as u32, n)?;
    for (j, &p) in pivots.iter().enumerate() {
        if j >= k {
            c.add(Gate::Prep { wire: p, state: BasisState::Plus });
        }
    }
    for w in (0..n).filter(|w| !pivots.contains(w)) {
        c.add(Gate::Prep { wire: w, state: BasisState::Ket(0) });
    }
    let pre = phasepoly::linear_map_circuit(&a.transpose())?;
    c.append_mapped(&pre, &pivots)?;
    for (j, &p) in pivots.iter().enumerate() {
        for t in (0..n).filter(|t| !pivots.contains(t)) {
            match r_prime.get(j, t) {
                0 => {}
                1 => {
                    c.cx(p, t);
                }
                _ => {
                    c.cxdg(p, t);
                }
            }
        }
    }
    Ok(c)
}

fn digits_of(index: usize, d: usize, n: usize) -> Vec<u8> {
    let mut w = vec![0u8; n];
    let mut rem = index;
    for slot in w.iter_mut().rev() {
        *slot = (rem % d) as u8;
        rem /= d;
    }
    w
}

fn index_of(w: &[u8], d: usize) -> usize {
    w.iter().fold(0, |acc, &v| acc * d + v as usize)
}

/// Recognizes a matrix as a Pauli operator, phase included.
pub fn recognize_pauli(m: &ExactMatrix, dim: u8, n: usize) -> Option<PauliOp> {
    let d = dim as usize;
    let size = d.pow(n as u32);
    if m.rows() != size || m.cols() != size {
        return None;
    }
    let ring = m.ring();
    let col0: Vec<usize> = (0..size).filter(|&r| !m.get(r, 0).is_zero()).collect();
    let [r0] = col0.as_slice() else { return None };
    let x = digits_of(*r0, d, n);
    let base = m.get(*r0, 0).root_of_unity_exponent()?;
    let unit = ring.order() / PauliOp::phase_order(dim) as u32;
    if base % unit != 0 {
        return None;
    }
    let mut z = vec![0u8; n];
    for i in 0..n {
        let mut y = vec![0u8; n];
        y[i] = 1;
        let col = index_of(&y, d);
        let tgt: Vec<u8> = y.iter().zip(&x).map(|(a, b)| (a + b) % dim).collect();
        let e = m.get(index_of(&tgt, d), col).root_of_unity_exponent()?;
        let diff = (e + ring.order() - base) % ring.order();
        if !diff.is_multiple_of(ring.order() / ring.dim()) {
            return None;
        }
        z[i] = (diff / (ring.order() / ring.dim())) as u8 % dim;
    }
    let p = PauliOp::new(dim, x, z, (base / unit) as u8).ok()?;
    (p.to_matrix() == *m).then_some(p)
}

/// `V P V†` for a Clifford circuit `V` on `n` wires, found by dense conjugation.
pub fn conjugate_pauli_dense(p: &PauliOp, v: &Circuit) -> Result<PauliOp> {
    let u = sim::unitary_of(v)?;
    let m = u.matmul(&p.to_matrix())?.matmul(&u.adjoint())?;
    recognize_pauli(&m, p.dim(), p.n()).ok_or_else(|| Error::Invalid("conjugate is not a Pauli operator".into()))
}

/// A circuit of the form `V; E; P; E†; V†` and what it encodes.
#[derive(Clone, Debug)]
pub struct SymmetricSplit {
    /// The CSS code of the CX core `E`.
    pub inner: StabilizerCode,
    /// The same stabilizers with logicals dressed by `V`; encoder `V; E`.
    pub code: StabilizerCode,
    pub outer: Circuit,
    pub layer: Circuit,
}

fn is_diagonal_single(g: &Gate) -> bool {
    matches!(g, Gate::Single { op, .. } if op.is_diagonal())
}

fn is_cx_type(g: &Gate) -> bool {
    matches!(g, Gate::CX { .. } | Gate::CXdg { .. } | Gate::Swap { .. } | Gate::Single { op: Single::Dualizer, .. })
}

/// Splits a symmetric circuit and reads off its code.
pub fn code_from_symmetric_circuit(c: &Circuit) -> Result<SymmetricSplit> {
    let gates = c.gates();
    let ring = c.ring();
    let len = gates.len();
    let mut found = None;
    'outer: for run in (0..=len).rev() {
        for s in 0..=len - run {
            let e = s + run;
            if !gates[s..e].iter().all(is_diagonal_single) {
                continue;
            }
            let pre: Vec<&Gate> = gates[..s].iter().filter(|g| !matches!(g, Gate::Prep { .. })).collect();
            let post: Vec<&Gate> = gates[e..].iter().filter(|g| !matches!(g, Gate::Postselect { .. })).collect();
            if pre.len() != post.len() {
                continue;
            }
            if pre.iter().rev().zip(&post).all(|(a, b)| a.adjoint(ring) == **b) {
                found = Some((s, e));
                break 'outer;
            }
        }
    }
    let (s, e) = found.ok_or_else(|| Error::Invalid("no split V; E; P; E†; V† found".into()))?;
    let n = c.n_wires();
    let prefix = &gates[..s];
    let last_non_cx = prefix.iter().rposition(|g| !is_cx_type(g) && !matches!(g, Gate::Prep { .. }));
    let split_at = last_non_cx.map_or(0, |i| i + 1);
    let mut outer = Circuit::new(c.dim(), n)?;
    let mut core = Circuit::new(c.dim(), n)?;
    for (i, g) in prefix.iter().enumerate() {
        if matches!(g, Gate::Prep { .. }) {
            core.push(g.clone())?;
        } else if i < split_at {
            outer.push(g.clone())?;
        }
    }
    for g in &prefix[split_at..] {
        if !matches!(g, Gate::Prep { .. }) {
            core.push(g.clone())?;
        }
    }
    let mut layer = Circuit::new(c.dim(), n)?;
    for g in &gates[s..e] {
        layer.push(g.clone())?;
    }
    let inner = read_code_from_gpf(&core)?;
    let data = core.input_wires();
    let ancillae: Vec<usize> = (0..n).filter(|w| !data.contains(w)).collect();
    if outer.gates().iter().any(|g| g.wires().iter().any(|w| ancillae.contains(w))) {
        return Err(Error::Invalid("outer Clifford touches an ancilla wire".into()));
    }
    let mut v = Circuit::new(c.dim(), data.len())?;
    let local: Vec<usize> = (0..n).map(|w| data.iter().position(|&x| x == w).unwrap_or(0)).collect();
    for g in outer.gates() {
        v.push(remap(g, &local))?;
    }
    let d = c.dim() as u8;
    let k = data.len();
    let dress = |p: PauliOp| -> Result<PauliOp> {
        let q = conjugate_pauli_dense(&p, &v)?;
        let mut x = vec![0u8; n];
        let mut z = vec![0u8; n];
        for (i, &w) in data.iter().enumerate() {
            x[w] = q.x()[i];
            z[w] = q.z()[i];
        }
        conjugate_through(&PauliOp::new(d, x, z, q.phase())?, &core)
    };
    let logical_x = (0..k).map(|i| dress(PauliOp::single_x(d, k, i, 1))).collect::<Result<_>>()?;
    let logical_z = (0..k).map(|i| dress(PauliOp::single_z(d, k, i, 1))).collect::<Result<_>>()?;
    let mut encoder = outer.clone();
    encoder.append(&core)?;
    let mut prov = String::from("outer Clifford:");
    for g in v.gates() {
        let mut one = Circuit::new(c.dim(), k)?;
        one.push(g.clone())?;
        let text = one.to_string();
        if let Some(line) = text.lines().last() {
            prov.push(' ');
            prov.push_str(line);
            prov.push(';');
        }
    }
    let code = StabilizerCode {
        dim: d,
        n,
        k,
        stabilizers: inner.stabilizers.clone(),
        logical_x,
        logical_z,
        encoder: Some(encoder),
        encoder_path: None,
        provenance: prov,
    };
    Ok(SymmetricSplit { inner, code, outer, layer })
}

fn remap(g: &Gate, m: &[usize]) -> Gate {
    match *g {
        Gate::Single { op, wire } => Gate::Single { op, wire: m[wire] },
        Gate::CX { ctrl, tgt } => Gate::CX { ctrl: m[ctrl], tgt: m[tgt] },
        Gate::CXdg { ctrl, tgt } => Gate::CXdg { ctrl: m[ctrl], tgt: m[tgt] },
        Gate::LambdaCtrl { u, ctrl, tgt } => Gate::LambdaCtrl { u, ctrl: m[ctrl], tgt: m[tgt] },
        Gate::KetCtrl { value, u, ctrl, tgt } => Gate::KetCtrl { value, u, ctrl: m[ctrl], tgt: m[tgt] },
        Gate::Swap { a, b } => Gate::Swap { a: m[a], b: m[b] },
        Gate::Prep { wire, state } => Gate::Prep { wire: m[wire], state },
        Gate::Postselect { wire, state } => Gate::Postselect { wire: m[wire], state },
    }
}

/// Result of a transversal check: the global phase exponent `ζ_N^k` when it holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalReport {
    pub holds: bool,
    pub phase: Option<u32>,
}

/// Checks `layer · E = ζ^k · E · logical` on the encoder isometry.
pub fn transversal_check(code: &StabilizerCode, layer: &Circuit, logical: &ExactMatrix, block_local: bool) -> Result<TransversalReport> {
    if code.encoder.is_none() {
        return Err(Error::Invalid("encoder missing".into()));
    }
    if layer.n_wires() != code.n || layer.dim() != code.dim as u32 {
        return Err(Error::Shape("layer register differs from the code".into()));
    }
    if !block_local && layer.gates().iter().any(|g| g.wires().len() != 1 || g.is_boundary()) {
        return Err(Error::Invalid("layer is not wire-local".into()));
    }
    let e = code.encoder_isometry()?;
    let d = code.dim as usize;
    if logical.rows() != d.pow(code.k as u32) || logical.cols() != logical.rows() {
        return Err(Error::Shape("logical unitary does not act on k qudits".into()));
    }
    let lhs = sim::apply_to_columns(layer, &e, &SimConfig::default())?;
    let rhs = e.matmul(logical)?;
    let phase = lhs.equal_up_to_phase(&rhs);
    Ok(TransversalReport { holds: phase.is_some(), phase })
}

/// Phase-function form of a transversal diagonal check for qutrit CSS codes
/// whose logical X operators are X-type: the layer `Π_k T^{t_k}` must give
/// `Σ_k t_k·cube(y_k) ≡ f(a) + c (mod 9)` for every `y` in the coset of `a`.
/// `f` is indexed by the logical word `a`, first logical most significant.
pub fn transversal_phase_check(code: &StabilizerCode, layer_t: &[u8], f: &[u8]) -> Result<bool> {
    if code.dim != 3 || !code.is_css() || code.logical_x.iter().any(|p| !p.is_x_type()) {
        return Err(Error::Invalid("phase-function route needs a qutrit CSS code with X-type logical X".into()));
    }
    if layer_t.len() != code.n || f.len() != 3usize.pow(code.k as u32) {
        return Err(Error::Shape("layer or logical table has the wrong length".into()));
    }
    let n = code.n;
    let mut rows: Vec<Vec<u8>> = code.x_stabilizers().iter().map(|s| s.x().to_vec()).collect();
    rows.sort_by_key(|r| r.iter().filter(|&&v| v != 0).count());
    let supports: Vec<Vec<usize>> = rows.iter().map(|r| (0..n).filter(|&i| r[i] != 0).collect()).collect();
    let phase_of = |y: &[u8]| -> u32 { y.iter().zip(layer_t).map(|(&v, &t)| t as u32 * cube(v) as u32).sum::<u32>() % 9 };
    let per_word: Vec<Option<u32>> = (0..f.len())
        .into_par_iter()
        .map(|ai| {
            let a = digits_of(ai, 3, code.k);
            let mut y = vec![0u8; n];
            for (c, l) in a.iter().zip(&code.logical_x) {
                for (slot, &v) in y.iter_mut().zip(l.x()) {
                    *slot = (*slot + c * v) % 3;
                }
            }
            let mut ph = phase_of(&y);
            let want = ph;
            let mut digits = vec![0u8; rows.len()];
            loop {
                let mut i = 0;
                loop {
                    if i == rows.len() {
                        return Some((want + 9 - f[ai] as u32) % 9);
                    }
                    for &s in &supports[i] {
                        let old = layer_t[s] as u32 * cube(y[s]) as u32;
                        y[s] = (y[s] + rows[i][s]) % 3;
                        ph = (ph + 9 * 9 - old + layer_t[s] as u32 * cube(y[s]) as u32) % 9;
                    }
                    digits[i] += 1;
                    if digits[i] < 3 {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
                if ph != want {
                    return None;
                }
            }
        })
        .collect();
    let Some(first) = per_word[0] else { return Ok(false) };
    Ok(per_word.iter().all(|p| *p == Some(first)))
}

/// Both circuits realize `logical` on their data wires, each up to a nonzero scalar.
pub fn verify_logical_preserved(before: &Circuit, after: &Circuit, logical: &ExactMatrix) -> Result<bool> {
    let a = sim::unitary_of(before)?;
    let b = sim::unitary_of(after)?;
    if a.rows() != logical.rows() || b.rows() != logical.rows() || a.cols() != logical.cols() || b.cols() != logical.cols() {
        return Err(Error::Shape("data registers differ from the logical map".into()));
    }
    Ok(a.equal_up_to_scalar(logical).is_some() && b.equal_up_to_scalar(logical).is_some())
}

/// Concatenation with a `k = 1` CSS inner code whose logicals are pure X and pure Z.
pub fn concatenate(outer: &StabilizerCode, inner: &StabilizerCode) -> Result<StabilizerCode> {
    if inner.k != 1 {
        return Err(Error::Invalid(format!("inner code must have k = 1, has k = {}", inner.k)));
    }
    if inner.dim != outer.dim {
        return Err(Error::Invalid("codes have different local dimensions".into()));
    }
    let (xl, zl) = (&inner.logical_x[0], &inner.logical_z[0]);
    if !xl.is_x_type() || !zl.is_z_type() || xl.phase() != 0 || zl.phase() != 0 {
        return Err(Error::Invalid("inner logicals must be pure X and pure Z strings".into()));
    }
    let d = outer.dim;
    let (m, b) = (outer.n, inner.n);
    let n = m * b;
    let lift = |p: &PauliOp| -> Result<PauliOp> {
        let mut x = vec![0u8; n];
        let mut z = vec![0u8; n];
        for j in 0..m {
            for s in 0..b {
                x[j * b + s] = (p.x()[j] * xl.x()[s]) % d;
                z[j * b + s] = (p.z()[j] * zl.z()[s]) % d;
            }
        }
        PauliOp::new(d, x, z, p.phase())
    };
    let mut stabilizers = Vec::new();
    for j in 0..m {
        for s in &inner.stabilizers {
            let mut x = vec![0u8; n];
            let mut z = vec![0u8; n];
            x[j * b..(j + 1) * b].copy_from_slice(s.x());
            z[j * b..(j + 1) * b].copy_from_slice(s.z());
            stabilizers.push(PauliOp::new(d, x, z, s.phase())?);
        }
    }
    for s in &outer.stabilizers {
        stabilizers.push(lift(s)?);
    }
    let code = StabilizerCode {
        dim: d,
        n,
        k: outer.k,
        stabilizers,
        logical_x: outer.logical_x.iter().map(lift).collect::<Result<_>>()?,
        logical_z: outer.logical_z.iter().map(lift).collect::<Result<_>>()?,
        encoder: None,
        encoder_path: None,
        provenance: format!("concatenation of [[{}, {}]] with inner [[{}, 1]]", outer.n, outer.k, inner.n),
    };
    Ok(code)
}

fn group_elements(gens: &[PauliOp], n: usize, dim: u8) -> Vec<PauliOp> {
    let mut elems = vec![PauliOp::identity(dim, n)];
    for g in gens {
        let mut next = Vec::with_capacity(elems.len() * dim as usize);
        for e in &elems {
            let mut acc = e.clone();
            next.push(acc.clone());
            for _ in 1..dim {
                acc = acc.mul(g).expect("same shape");
                next.push(acc.clone());
            }
        }
        elems = next;
    }
    elems
}

/// Pauli action on a basis state: returns (exponent of `ζ_N`, image index).
fn pauli_on_basis(p: &PauliOp, y: &[u8], ring: Ring) -> (i64, usize) {
    let d = p.dim();
    let unit = (ring.order() / PauliOp::phase_order(d) as u32) as i64;
    let mut exp = p.phase() as i64 * unit;
    let mut out = y.to_vec();
    for i in 0..y.len() {
        exp += (p.z()[i] as i64 * y[i] as i64) * (ring.order() / ring.dim()) as i64;
        out[i] = (y[i] + p.x()[i]) % d;
    }
    (exp, index_of(&out, d as usize))
}

/// Compares the stabilizer projector `|S|⁻¹ Σ_s s` with `E E†` column by column.
pub fn projector_matches_encoder(code: &StabilizerCode) -> Result<bool> {
    let e = code.encoder_isometry()?;
    let ring = code.ring();
    let d = code.dim as usize;
    let size = d.pow(code.n as u32);
    let group = group_elements(&code.stabilizers, code.n, code.dim);
    let gens = code.stabilizers.len() as u32;
    let ok = (0..size).into_par_iter().all(|y| {
        let yw = digits_of(y, d, code.n);
        let mut lhs: BTreeMap<usize, CycloNum> = BTreeMap::new();
        for s in &group {
            let (exp, img) = pauli_on_basis(s, &yw, ring);
            let v = lhs.entry(img).or_insert_with(|| CycloNum::zero(ring));
            *v = &*v + &CycloNum::zeta(ring, exp);
        }
        let lhs: BTreeMap<usize, CycloNum> = lhs
            .into_iter()
            .map(|(k, v)| (k, v.div_dim_pow(gens)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        let mut rhs: BTreeMap<usize, CycloNum> = BTreeMap::new();
        for j in 0..e.cols() {
            let c = e.get(y, j);
            if c.is_zero() {
                continue;
            }
            let cc = c.conj();
            for row in 0..size {
                let a = e.get(row, j);
                if !a.is_zero() {
                    let v = rhs.entry(row).or_insert_with(|| CycloNum::zero(ring));
                    *v = &*v + &(a * &cc);
                }
            }
        }
        let rhs: BTreeMap<usize, CycloNum> = rhs.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        lhs == rhs
    });
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(dim: u8, n: usize, s: &str) -> PauliOp {
        PauliOp::parse(dim, n, s).unwrap()
    }

    #[test]
    fn cx_conjugation_rules() {
        let mut c = Circuit::qutrit(2);
        c.cx(0, 1);
        assert_eq!(conjugate_through(&p(3, 2, "X1"), &c).unwrap(), p(3, 2, "X1 X2"));
        assert_eq!(conjugate_through(&p(3, 2, "Z2"), &c).unwrap(), p(3, 2, "Z1^2 Z2"));
        for s in ["X1", "X2", "Z1", "Z2", "X1 Z2^2"] {
            let q = p(3, 2, s);
            assert_eq!(conjugate_through(&q, &c).unwrap(), conjugate_pauli_dense(&q, &c).unwrap(), "{s}");
        }
    }

    #[test]
    fn recognizes_phased_pauli() {
        let q = p(3, 2, "w^2 X1^2 Z1 Z2");
        assert_eq!(recognize_pauli(&q.to_matrix(), 3, 2), Some(q));
        let mut c = Circuit::qutrit(1);
        c.t(0);
        assert!(recognize_pauli(&sim::unitary_of(&c).unwrap(), 3, 1).is_none());
    }

    #[test]
    fn trivial_encoder_gives_trivial_code() {
        let c = Circuit::qutrit(2);
        let code = read_code_from_gpf(&c).unwrap();
        assert!(code.stabilizers.is_empty());
        assert_eq!(code.logical_x, vec![p(3, 2, "X1"), p(3, 2, "X2")]);
        assert_eq!(code.logical_z, vec![p(3, 2, "Z1"), p(3, 2, "Z2")]);
    }

    #[test]
    fn non_cx_encoder_is_rejected() {
        let mut c = Circuit::qutrit(2);
        c.add_single(Single::H, 0);
        assert!(matches!(read_code_from_gpf(&c), Err(Error::NonConforming(_))));
    }

    #[test]
    fn text_roundtrip() {
        let code = StabilizerCode::trivial(3, 2);
        let text = code.to_text();
        let back = StabilizerCode::parse(&text, None).unwrap();
        assert_eq!(back.to_text(), text);
    }
}
