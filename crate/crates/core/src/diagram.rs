//! Open tensor diagrams of Z/X spiders, Hadamard boxes, dualizers and
//! explicit matrices, evaluated by exact contraction.
//!
//! Legs are oriented. An X spider contributes `H|k⟩` on each output leg and
//! `⟨k|H†` on each input leg, so orientation changes its value for `d = 3`.
//! A node's legs are ordered by creation; for a `Box` the input legs index
//! the matrix columns and the output legs index its rows, first leg most
//! significant.

use std::collections::HashMap;
use std::path::Path;

use crate::circuit::{BasisState, Circuit, Gate, Single};
use crate::cyclo::{CycloNum, Ring};
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::sim;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    /// Z spider with phases `ζ_N^a`, `ζ_N^b` on `|1…1⟩`, `|2…2⟩`.
    Z { a: u32, b: u32 },
    X { a: u32, b: u32 },
    /// `1 ↦ H`, `2 ↦ H†`.
    H { tag: u8 },
    Dual,
    Box(ExactMatrix),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Leg {
    Edge { from: usize, to: usize },
    In { to: usize },
    Out { from: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    dim: u32,
    nodes: Vec<(String, NodeKind)>,
    legs: Vec<Leg>,
}

/// Limit on the number of open legs of any intermediate tensor.
#[derive(Clone, Copy, Debug)]
pub struct EvalConfig {
    pub max_legs: usize,
}

impl EvalConfig {
    pub fn for_dim(dim: u32) -> Self {
        EvalConfig { max_legs: if dim == 2 { 20 } else { 13 } }
    }
}

#[derive(Clone, Debug)]
struct Tensor {
    legs: Vec<usize>,
    data: Vec<CycloNum>,
}

fn digits(index: usize, d: usize, len: usize) -> Vec<usize> {
    let mut w = vec![0; len];
    let mut rem = index;
    for slot in w.iter_mut().rev() {
        *slot = rem % d;
        rem /= d;
    }
    w
}

fn undigits(w: &[usize], d: usize) -> usize {
    w.iter().fold(0, |acc, &v| acc * d + v)
}

impl Tensor {
    fn permuted(&self, order: &[usize], d: usize) -> Tensor {
        let pos: Vec<usize> = order.iter().map(|l| self.legs.iter().position(|x| x == l).expect("leg")).collect();
        let n = self.legs.len();
        let mut data = vec![CycloNum::zero(self.data[0].ring()); self.data.len()];
        for (i, v) in self.data.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let w = digits(i, d, n);
            let nw: Vec<usize> = pos.iter().map(|&p| w[p]).collect();
            data[undigits(&nw, d)] = v.clone();
        }
        Tensor { legs: order.to_vec(), data }
    }

    /// Sums over pairs of positions that carry the same leg.
    fn trace_repeated(self, d: usize) -> Tensor {
        let n = self.legs.len();
        let mut first: HashMap<usize, usize> = HashMap::new();
        let mut pairs = Vec::new();
        for (i, &l) in self.legs.iter().enumerate() {
            if let Some(&j) = first.get(&l) {
                pairs.push((j, i));
            } else {
                first.insert(l, i);
            }
        }
        if pairs.is_empty() {
            return self;
        }
        let drop: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let keep: Vec<usize> = (0..n).filter(|i| !drop.contains(i)).collect();
        let ring = self.data[0].ring();
        let mut data = vec![CycloNum::zero(ring); d.pow(keep.len() as u32)];
        for (i, v) in self.data.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let w = digits(i, d, n);
            if pairs.iter().all(|&(a, b)| w[a] == w[b]) {
                let k: Vec<usize> = keep.iter().map(|&p| w[p]).collect();
                let idx = undigits(&k, d);
                data[idx] = &data[idx] + v;
            }
        }
        Tensor { legs: keep.iter().map(|&p| self.legs[p]).collect(), data }
    }

    fn contract(&self, other: &Tensor, d: usize, ring: Ring) -> Result<Tensor> {
        let shared: Vec<usize> = self.legs.iter().copied().filter(|l| other.legs.contains(l)).collect();
        let fa: Vec<usize> = self.legs.iter().copied().filter(|l| !shared.contains(l)).collect();
        let fb: Vec<usize> = other.legs.iter().copied().filter(|l| !shared.contains(l)).collect();
        let a = self.permuted(&[fa.clone(), shared.clone()].concat(), d);
        let b = other.permuted(&[shared.clone(), fb.clone()].concat(), d);
        let (ra, k, cb) = (d.pow(fa.len() as u32), d.pow(shared.len() as u32), d.pow(fb.len() as u32));
        let ma = ExactMatrix::from_fn(ring, ra, k, |r, c| a.data[r * k + c].clone());
        let mb = ExactMatrix::from_fn(ring, k, cb, |r, c| b.data[r * cb + c].clone());
        let prod = ma.matmul(&mb)?;
        Ok(Tensor { legs: [fa, fb].concat(), data: prod.entries().to_vec() })
    }
}

impl Diagram {
    pub fn new(dim: u32) -> Result<Self> {
        Ring::for_dim(dim)?;
        Ok(Diagram { dim, nodes: Vec::new(), legs: Vec::new() })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn ring(&self) -> Ring {
        Ring::for_dim(self.dim).expect("validated")
    }

    pub fn n_inputs(&self) -> usize {
        self.legs.iter().filter(|l| matches!(l, Leg::In { .. })).count()
    }

    pub fn n_outputs(&self) -> usize {
        self.legs.iter().filter(|l| matches!(l, Leg::Out { .. })).count()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn add_node(&mut self, id: impl Into<String>, kind: NodeKind) -> usize {
        self.nodes.push((id.into(), kind));
        self.nodes.len() - 1
    }

    pub fn z(&mut self, a: u32, b: u32) -> usize {
        let id = format!("n{}", self.nodes.len());
        self.add_node(id, NodeKind::Z { a, b })
    }

    pub fn x(&mut self, a: u32, b: u32) -> usize {
        let id = format!("n{}", self.nodes.len());
        self.add_node(id, NodeKind::X { a, b })
    }

    pub fn node(&mut self, kind: NodeKind) -> usize {
        let id = format!("n{}", self.nodes.len());
        self.add_node(id, kind)
    }

    pub fn edge(&mut self, from: usize, to: usize) -> &mut Self {
        self.legs.push(Leg::Edge { from, to });
        self
    }

    pub fn input(&mut self, to: usize) -> &mut Self {
        self.legs.push(Leg::In { to });
        self
    }

    pub fn output(&mut self, from: usize) -> &mut Self {
        self.legs.push(Leg::Out { from });
        self
    }

    /// Legs of `v` as `(leg index, is_output)` in creation order.
    fn node_legs(&self, v: usize) -> Vec<(usize, bool)> {
        let mut out = Vec::new();
        for (i, l) in self.legs.iter().enumerate() {
            match *l {
                Leg::Edge { from, to } => {
                    if from == v {
                        out.push((i, true));
                    }
                    if to == v {
                        out.push((i, false));
                    }
                }
                Leg::In { to } if to == v => out.push((i, false)),
                Leg::Out { from } if from == v => out.push((i, true)),
                _ => {}
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        for l in &self.legs {
            let ok = match *l {
                Leg::Edge { from, to } => from < n && to < n,
                Leg::In { to } => to < n,
                Leg::Out { from } => from < n,
            };
            if !ok {
                return Err(Error::Invalid("edge endpoint out of range".into()));
            }
        }
        let d = self.dim as usize;
        for (v, (id, kind)) in self.nodes.iter().enumerate() {
            let legs = self.node_legs(v);
            let outs = legs.iter().filter(|l| l.1).count();
            let ins = legs.len() - outs;
            match kind {
                NodeKind::H { tag } if !matches!(tag, 1 | 2) => {
                    return Err(Error::Invalid(format!("node {id}: Hadamard tag must be 1 or 2")));
                }
                NodeKind::H { .. } | NodeKind::Dual if (ins, outs) != (1, 1) => {
                    return Err(Error::Invalid(format!("node {id} needs one input and one output leg")));
                }
                NodeKind::Box(m) if (m.rows(), m.cols()) != (d.pow(outs as u32), d.pow(ins as u32)) => {
                    return Err(Error::Shape(format!(
                        "box {id} is {}x{} but has {ins} input and {outs} output legs",
                        m.rows(),
                        m.cols()
                    )));
                }
                NodeKind::Box(m) if m.ring() != self.ring() => {
                    return Err(Error::RingMismatch(self.ring().to_string(), m.ring().to_string()));
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn node_tensor(&self, v: usize) -> Tensor {
        let ring = self.ring();
        let d = self.dim as usize;
        let legs = self.node_legs(v);
        let n = legs.len();
        let size = d.pow(n as u32);
        let phase = |a: u32, b: u32, k: usize| match k {
            0 => CycloNum::one(ring),
            1 => CycloNum::zeta(ring, a as i64),
            _ => CycloNum::zeta(ring, b as i64),
        };
        let h = sim::single_matrix(Single::H, ring);
        let mut data = vec![CycloNum::zero(ring); size];
        match &self.nodes[v].1 {
            NodeKind::Z { a, b } => {
                for k in 0..d {
                    data[undigits(&vec![k; n], d)] = phase(*a, *b, k);
                }
            }
            NodeKind::X { a, b } => {
                for (i, slot) in data.iter_mut().enumerate() {
                    let w = digits(i, d, n);
                    let mut acc = CycloNum::zero(ring);
                    for k in 0..d {
                        let mut term = phase(*a, *b, k);
                        for (pos, &(_, is_out)) in legs.iter().enumerate() {
                            let e = &h[w[pos]][k];
                            term = if is_out { &term * e } else { &term * &e.conj() };
                        }
                        acc = acc + term;
                    }
                    *slot = acc;
                }
            }
            NodeKind::H { .. } | NodeKind::Dual | NodeKind::Box(_) => {
                let m: ExactMatrix = match &self.nodes[v].1 {
                    NodeKind::H { tag } => {
                        let op = if *tag == 1 { Single::H } else { Single::Hdg };
                        ExactMatrix::from_rows(ring, sim::single_matrix(op, ring)).expect("square")
                    }
                    NodeKind::Dual => ExactMatrix::from_rows(ring, sim::single_matrix(Single::Dualizer, ring)).expect("square"),
                    NodeKind::Box(m) => m.clone(),
                    _ => unreachable!(),
                };
                let out_pos: Vec<usize> = (0..n).filter(|&p| legs[p].1).collect();
                let in_pos: Vec<usize> = (0..n).filter(|&p| !legs[p].1).collect();
                for (i, slot) in data.iter_mut().enumerate() {
                    let w = digits(i, d, n);
                    let r = undigits(&out_pos.iter().map(|&p| w[p]).collect::<Vec<_>>(), d);
                    let c = undigits(&in_pos.iter().map(|&p| w[p]).collect::<Vec<_>>(), d);
                    *slot = m.get(r, c).clone();
                }
            }
        }
        Tensor { legs: legs.iter().map(|l| l.0).collect(), data }.trace_repeated(d)
    }

    /// Exact linear map from the inputs (columns) to the outputs (rows).
    pub fn evaluate(&self) -> Result<ExactMatrix> {
        self.evaluate_with(&EvalConfig::for_dim(self.dim))
    }

    pub fn evaluate_with(&self, cfg: &EvalConfig) -> Result<ExactMatrix> {
        self.validate()?;
        let ring = self.ring();
        let d = self.dim as usize;
        let boundary = self.n_inputs() + self.n_outputs();
        if boundary > cfg.max_legs {
            return Err(Error::CapExceeded(format!("{boundary} boundary legs exceed the cap of {}", cfg.max_legs)));
        }
        let mut scalar = CycloNum::one(ring);
        let mut pool = Vec::new();
        for v in 0..self.nodes.len() {
            let t = self.node_tensor(v);
            if t.legs.is_empty() {
                scalar = &scalar * &t.data[0];
            } else {
                pool.push(t);
            }
        }
        while pool.len() > 1 {
            let mut best: Option<(usize, usize, usize, bool)> = None;
            for i in 0..pool.len() {
                for j in i + 1..pool.len() {
                    let shared = pool[i].legs.iter().filter(|l| pool[j].legs.contains(l)).count();
                    let result = pool[i].legs.len() + pool[j].legs.len() - 2 * shared;
                    let connected = shared > 0;
                    let better = match best {
                        None => true,
                        Some((_, _, r, c)) => (connected && !c) || (connected == c && result < r),
                    };
                    if better {
                        best = Some((i, j, result, connected));
                    }
                }
            }
            let (i, j, result, _) = best.expect("at least two tensors");
            if result > cfg.max_legs {
                return Err(Error::CapExceeded(format!("intermediate tensor with {result} legs")));
            }
            let b = pool.remove(j);
            let a = pool.remove(i);
            pool.push(a.contract(&b, d, ring)?);
        }
        let outs: Vec<usize> =
            self.legs.iter().enumerate().filter(|(_, l)| matches!(l, Leg::Out { .. })).map(|(i, _)| i).collect();
        let ins: Vec<usize> =
            self.legs.iter().enumerate().filter(|(_, l)| matches!(l, Leg::In { .. })).map(|(i, _)| i).collect();
        let (rows, cols) = (d.pow(outs.len() as u32), d.pow(ins.len() as u32));
        let Some(t) = pool.pop() else {
            return Ok(ExactMatrix::from_fn(ring, 1, 1, |_, _| scalar.clone()));
        };
        let t = t.permuted(&[outs, ins].concat(), d);
        Ok(ExactMatrix::from_fn(ring, rows, cols, |r, c| &t.data[r * cols + c] * &scalar))
    }

    fn append_shifted(&mut self, other: &Diagram, prefix: &str) -> usize {
        let base = self.nodes.len();
        for (id, k) in &other.nodes {
            self.nodes.push((format!("{prefix}{id}"), k.clone()));
        }
        base
    }

    /// Sequential composition: `self` first, its outputs feeding `next`'s inputs.
    pub fn then(&self, next: &Diagram) -> Result<Diagram> {
        if self.dim != next.dim || self.n_outputs() != next.n_inputs() {
            return Err(Error::Shape(format!(
                "cannot feed {} outputs into {} inputs",
                self.n_outputs(),
                next.n_inputs()
            )));
        }
        let mut out = Diagram { dim: self.dim, nodes: Vec::new(), legs: Vec::new() };
        out.append_shifted(self, "a.");
        let base = out.append_shifted(next, "b.");
        let my_outs: Vec<usize> =
            self.legs.iter().filter_map(|l| if let Leg::Out { from } = l { Some(*from) } else { None }).collect();
        let mut k = 0;
        for l in &self.legs {
            match *l {
                Leg::Out { .. } => {}
                other => out.legs.push(other),
            }
        }
        for l in &next.legs {
            match *l {
                Leg::In { to } => {
                    out.legs.push(Leg::Edge { from: my_outs[k], to: to + base });
                    k += 1;
                }
                Leg::Edge { from, to } => out.legs.push(Leg::Edge { from: from + base, to: to + base }),
                Leg::Out { from } => out.legs.push(Leg::Out { from: from + base }),
            }
        }
        Ok(out)
    }

    /// Parallel composition; boundary order is `self`'s legs then `other`'s.
    pub fn tensor(&self, other: &Diagram) -> Result<Diagram> {
        if self.dim != other.dim {
            return Err(Error::Shape("dimension mismatch".into()));
        }
        let mut out = self.clone();
        let base = out.append_shifted(other, "b.");
        for l in &other.legs {
            out.legs.push(match *l {
                Leg::Edge { from, to } => Leg::Edge { from: from + base, to: to + base },
                Leg::In { to } => Leg::In { to: to + base },
                Leg::Out { from } => Leg::Out { from: from + base },
            });
        }
        Ok(out)
    }

    /// The diagram of a circuit; evaluates to the circuit's map up to a nonzero scalar.
    pub fn from_circuit(c: &Circuit) -> Result<Diagram> {
        c.validate()?;
        let ring = c.ring();
        let d = c.dim() as usize;
        let mut dg = Diagram::new(c.dim())?;
        let inputs = c.input_wires();
        // For each wire, the node whose output leg is the wire's current end.
        let mut ends: Vec<Option<usize>> = vec![None; c.n_wires()];
        for &w in &inputs {
            let v = dg.z(0, 0);
            dg.legs.push(Leg::In { to: v });
            ends[w] = Some(v);
        }
        let attach = |dg: &mut Diagram, ends: &mut Vec<Option<usize>>, w: usize, v: usize| {
            let u = ends[w].expect("validated circuits only touch open wires");
            dg.edge(u, v);
            ends[w] = Some(v);
        };
        let single_box = |op: Single| ExactMatrix::from_rows(ring, sim::single_matrix(op, ring)).expect("square");
        for g in c.gates() {
            match *g {
                Gate::Single { op, wire } => {
                    let kind = match op {
                        Single::ZPhase(a, b) => NodeKind::Z { a, b },
                        Single::XPhase(a, b) => NodeKind::X { a, b },
                        Single::H => NodeKind::H { tag: 1 },
                        Single::Hdg => NodeKind::H { tag: 2 },
                        Single::Dualizer => NodeKind::Dual,
                        Single::PermX(_) => NodeKind::Box(single_box(op)),
                    };
                    let v = dg.node(kind);
                    attach(&mut dg, &mut ends, wire, v);
                }
                Gate::CX { ctrl, tgt } | Gate::CXdg { ctrl, tgt } => {
                    let zc = dg.z(0, 0);
                    let xt = dg.x(0, 0);
                    attach(&mut dg, &mut ends, ctrl, zc);
                    attach(&mut dg, &mut ends, tgt, xt);
                    if matches!(g, Gate::CX { .. }) {
                        dg.edge(zc, xt);
                    } else {
                        let du = dg.node(NodeKind::Dual);
                        dg.edge(zc, du).edge(du, xt);
                    }
                }
                Gate::Swap { a, b } => ends.swap(a, b),
                Gate::LambdaCtrl { ctrl, tgt, .. } | Gate::KetCtrl { ctrl, tgt, .. } => {
                    let m = sim::gate_matrix(g, c.dim(), c.n_wires().max(2))?;
                    let local = two_wire_restriction(&m, c.n_wires(), ctrl, tgt, d);
                    let v = dg.node(NodeKind::Box(local));
                    attach(&mut dg, &mut ends, ctrl, v);
                    attach(&mut dg, &mut ends, tgt, v);
                    // Fix the order of the box's output legs.
                    let (oc, ot) = (dg.z(0, 0), dg.z(0, 0));
                    dg.edge(v, oc).edge(v, ot);
                    ends[ctrl] = Some(oc);
                    ends[tgt] = Some(ot);
                }
                Gate::Prep { wire, state } => {
                    let v = match state {
                        BasisState::Plus => dg.z(0, 0),
                        BasisState::Ket(0) => dg.x(0, 0),
                        BasisState::Ket(k) => {
                            let mut col = vec![CycloNum::zero(ring); d];
                            col[k as usize] = CycloNum::one(ring);
                            dg.node(NodeKind::Box(ExactMatrix::column(ring, col)))
                        }
                    };
                    ends[wire] = Some(v);
                }
                Gate::Postselect { wire, state } => {
                    let v = match state {
                        BasisState::Plus => dg.z(0, 0),
                        BasisState::Ket(0) => dg.x(0, 0),
                        BasisState::Ket(k) => {
                            let mut row = vec![CycloNum::zero(ring); d];
                            row[k as usize] = CycloNum::one(ring);
                            dg.node(NodeKind::Box(ExactMatrix::from_rows(ring, vec![row]).expect("row")))
                        }
                    };
                    attach(&mut dg, &mut ends, wire, v);
                    ends[wire] = None;
                }
            }
        }
        let outputs = c.output_wires();
        for &w in &outputs {
            let v = ends[w].expect("output wire has an end");
            dg.legs.push(Leg::Out { from: v });
        }
        Ok(dg)
    }

    /// Parses the text format; `Box` files are resolved relative to `base`.
    pub fn parse(text: &str, dim: u32, base: Option<&Path>) -> Result<Diagram> {
        let ring = Ring::for_dim(dim)?;
        let mut dg = Diagram::new(dim)?;
        let mut ids: HashMap<String, usize> = HashMap::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            let num = |s: &str| s.parse::<u32>().map_err(|_| Error::parse(line, format!("bad number `{s}`")));
            let lookup = |ids: &HashMap<String, usize>, s: &str| {
                ids.get(s).copied().ok_or_else(|| Error::parse(line, format!("unknown node `{s}`")))
            };
            let mut declare = |dg: &mut Diagram, id: &str, kind: NodeKind| -> Result<()> {
                if ids.contains_key(id) {
                    return Err(Error::parse(line, format!("duplicate node `{id}`")));
                }
                let v = dg.add_node(id, kind);
                ids.insert(id.to_string(), v);
                Ok(())
            };
            match toks.as_slice() {
                ["DIM", _] => {}
                ["Zs", a, b, id] => declare(&mut dg, id, NodeKind::Z { a: num(a)?, b: num(b)? })?,
                ["Xs", a, b, id] => declare(&mut dg, id, NodeKind::X { a: num(a)?, b: num(b)? })?,
                ["Hbox", t, id] => {
                    let tag = num(t)? as u8;
                    if !matches!(tag, 1 | 2) {
                        return Err(Error::parse(line, "Hbox tag must be 1 or 2"));
                    }
                    declare(&mut dg, id, NodeKind::H { tag })?
                }
                ["Dual", id] => declare(&mut dg, id, NodeKind::Dual)?,
                ["Box", file, id] => {
                    let path = base.map_or_else(|| Path::new(file).to_path_buf(), |b| b.join(file));
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    declare(&mut dg, id, NodeKind::Box(parse_matrix(&text, ring)?))?
                }
                ["E", a, b] => {
                    let (a, b) = (lookup(&ids, a)?, lookup(&ids, b)?);
                    dg.edge(a, b);
                }
                ["IN", rest @ ..] => {
                    for s in rest {
                        let v = lookup(&ids, s)?;
                        dg.input(v);
                    }
                }
                ["OUT", rest @ ..] => {
                    for s in rest {
                        let v = lookup(&ids, s)?;
                        dg.output(v);
                    }
                }
                _ => return Err(Error::parse(line, format!("unrecognized line `{body}`"))),
            }
        }
        dg.validate()?;
        Ok(dg)
    }
}

/// Reads a local `d^2 × d^2` block for a two-wire gate out of its full-register matrix.
fn two_wire_restriction(m: &ExactMatrix, n: usize, ctrl: usize, tgt: usize, d: usize) -> ExactMatrix {
    let ring = m.ring();
    let place = |a: usize, b: usize| {
        let mut w = vec![0usize; n.max(2)];
        w[ctrl] = a;
        w[tgt] = b;
        undigits(&w, d)
    };
    ExactMatrix::from_fn(ring, d * d, d * d, |r, c| m.get(place(r / d, r % d), place(c / d, c % d)).clone())
}

/// Matrix text: one row per line, entries as `(c0,..)/d^e` literals or integers.
pub fn parse_matrix(text: &str, ring: Ring) -> Result<ExactMatrix> {
    let mut rows = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let row: Vec<CycloNum> = body
            .split_whitespace()
            .map(|t| match t.parse::<i64>() {
                Ok(v) => Ok(CycloNum::from_int(ring, v)),
                Err(_) => t.parse::<CycloNum>().map_err(|e| Error::parse(ln + 1, e.to_string())),
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    ExactMatrix::from_rows(ring, rows)
}

/// Phase gadgets on `n` wires: for each `(support, a)`, an X spider joined to
/// the wires in `support` with a Z-spider leaf of phase `ζ_N^a`.
pub fn phase_gadget_diagram(dim: u32, n: usize, gadgets: &[(Vec<usize>, u32)]) -> Result<Diagram> {
    let mut dg = Diagram::new(dim)?;
    let mut last: Vec<Option<usize>> = vec![None; n];
    let mut first: Vec<Option<usize>> = vec![None; n];
    let mut hub_of = Vec::new();
    for (support, a) in gadgets {
        if support.iter().any(|&w| w >= n) {
            return Err(Error::Invalid(format!("gadget support {support:?} outside {n} wires")));
        }
        let hub = dg.x(0, 0);
        let leaf = dg.z(*a, 0);
        dg.edge(hub, leaf);
        hub_of.push((hub, support.clone()));
    }
    for w in 0..n {
        for (hub, support) in &hub_of {
            if support.contains(&w) {
                let v = dg.z(0, 0);
                match last[w] {
                    Some(u) => {
                        dg.edge(u, v);
                    }
                    None => first[w] = Some(v),
                }
                dg.edge(v, *hub);
                last[w] = Some(v);
            }
        }
        if first[w].is_none() {
            let v = dg.z(0, 0);
            first[w] = Some(v);
            last[w] = Some(v);
        }
    }
    for v in first.iter().flatten() {
        dg.input(*v);
    }
    for v in last.iter().flatten() {
        dg.output(*v);
    }
    Ok(dg)
}

/// Qubit gadgets on every nonempty subset of `n` wires, phase `±π/4` by the parity of the subset size.
pub fn spider_nest(n: usize) -> Result<Diagram> {
    let mut gadgets = Vec::new();
    for mask in 1usize..(1 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask >> (n - 1 - i) & 1 == 1).collect();
        let a = if support.len() % 2 == 1 { 1 } else { 7 };
        gadgets.push((support, a));
    }
    phase_gadget_diagram(2, n, &gadgets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_z_spider_is_identity() {
        let mut dg = Diagram::new(3).unwrap();
        let v = dg.z(0, 0);
        dg.input(v).output(v);
        assert_eq!(dg.evaluate().unwrap(), ExactMatrix::identity(Ring::Qutrit, 3));
    }

    #[test]
    fn spider_nest_cases() {
        let id = ExactMatrix::identity(Ring::Qubit, 16);
        assert!(spider_nest(4).unwrap().evaluate().unwrap().equal_up_to_scalar(&id).is_some());
        let ccz = ExactMatrix::diag_zeta(Ring::Qubit, &[0, 0, 0, 0, 0, 0, 0, 4]);
        assert!(spider_nest(3).unwrap().evaluate().unwrap().equal_up_to_scalar(&ccz).is_some());
    }

    #[test]
    fn x_spider_one_to_one_is_x_phase() {
        let mut dg = Diagram::new(3).unwrap();
        let v = dg.x(12, 0);
        dg.input(v).output(v);
        let mut c = Circuit::qutrit(1);
        c.add_single(Single::XPhase(12, 0), 0);
        assert_eq!(dg.evaluate().unwrap(), sim::unitary_of(&c).unwrap());
    }

    #[test]
    fn cx_and_cx_dagger_diagrams() {
        let text = "Zs 0 0 c\nXs 0 0 t\nIN c t\nE c t\nOUT c t\n";
        let dg = Diagram::parse(text, 3, None).unwrap();
        let mut cx = Circuit::qutrit(2);
        cx.cx(0, 1);
        let u = sim::unitary_of(&cx).unwrap();
        let m = dg.evaluate().unwrap();
        assert!(m.equal_up_to_scalar(&u).is_some());
        let mut cxd = Circuit::qutrit(2);
        cxd.cxdg(0, 1);
        let ud = sim::unitary_of(&cxd).unwrap();
        assert!(m.equal_up_to_scalar(&ud).is_none());
        let dual = "Zs 0 0 c\nXs 0 0 t\nDual d\nIN c t\nE c d\nE d t\nOUT c t\n";
        let md = Diagram::parse(dual, 3, None).unwrap().evaluate().unwrap();
        assert!(md.equal_up_to_scalar(&ud).is_some());
    }

    #[test]
    fn self_loop_is_traced() {
        let mut dg = Diagram::new(3).unwrap();
        let v = dg.z(0, 0);
        dg.edge(v, v);
        let m = dg.evaluate().unwrap();
        assert_eq!(m.get(0, 0), &CycloNum::from_int(Ring::Qutrit, 3));
    }

    #[test]
    fn box_shape_is_checked() {
        let mut dg = Diagram::new(3).unwrap();
        let v = dg.node(NodeKind::Box(ExactMatrix::identity(Ring::Qutrit, 9)));
        dg.input(v).output(v);
        assert!(matches!(dg.evaluate(), Err(Error::Shape(_))));
    }

    #[test]
    fn composition_multiplies() {
        let mut h = Diagram::new(3).unwrap();
        let v = h.node(NodeKind::H { tag: 1 });
        h.input(v).output(v);
        let hh = h.then(&h).unwrap();
        let want = ExactMatrix::from_rows(Ring::Qutrit, sim::single_matrix(Single::Dualizer, Ring::Qutrit)).unwrap();
        assert_eq!(hh.evaluate().unwrap(), want);
    }

    #[test]
    fn circuit_with_boundaries_matches_simulation() {
        let text = "DIM 3\nWIRES 3\nPREP + 3\nCX 1 2\nKCTRL 2 X+1 3 1\nH 2\nCXDG 2 3\nT 3\nSWAP 1 3\nPOST 0 2\n";
        let c = Circuit::parse(text).unwrap();
        let dg = Diagram::from_circuit(&c).unwrap();
        let u = sim::unitary_of(&c).unwrap();
        assert!(dg.evaluate().unwrap().equal_up_to_scalar(&u).is_some());
    }
}
