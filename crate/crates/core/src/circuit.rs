//! Gate-level intermediate representation for qutrit and qubit circuits.
//!
//! Wires are 0-based in the API and 1-based in the text format. Phase
//! exponents are integers modulo `N` (36 for qutrits, 8 for qubits), so
//! `ZPhase(k1, k2)` is `diag(1, ζ_N^k1, ζ_N^k2)`.

use std::fmt;

use crate::cyclo::Ring;
use crate::error::{Error, Result};

/// Permutations of the computational basis of one qutrit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Perm {
    /// `|k⟩ ↦ |k+1⟩`
    Plus,
    /// `|k⟩ ↦ |k−1⟩`
    Minus,
    S01,
    S02,
    S12,
}

impl Perm {
    pub fn apply(self, d: u32, k: u32) -> u32 {
        match self {
            Perm::Plus => (k + 1) % d,
            Perm::Minus => (k + d - 1) % d,
            Perm::S01 => match k {
                0 => 1,
                1 => 0,
                other => other,
            },
            Perm::S02 => match k {
                0 => 2,
                2 => 0,
                other => other,
            },
            Perm::S12 => match k {
                1 => 2,
                2 => 1,
                other => other,
            },
        }
    }

    pub fn inverse(self) -> Perm {
        match self {
            Perm::Plus => Perm::Minus,
            Perm::Minus => Perm::Plus,
            other => other,
        }
    }

    fn token(self) -> &'static str {
        match self {
            Perm::Plus => "X+1",
            Perm::Minus => "X-1",
            Perm::S01 => "X01",
            Perm::S02 => "X02",
            Perm::S12 => "X12",
        }
    }
}

/// A single-qudit operation without a wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Single {
    PermX(Perm),
    ZPhase(u32, u32),
    XPhase(u32, u32),
    H,
    Hdg,
    Dualizer,
}

impl Single {
    pub fn adjoint(self, ring: Ring) -> Single {
        let n = ring.order();
        let neg = |k: u32| (n - k % n) % n;
        match self {
            Single::PermX(p) => Single::PermX(p.inverse()),
            Single::ZPhase(a, b) => Single::ZPhase(neg(a), neg(b)),
            Single::XPhase(a, b) => Single::XPhase(neg(a), neg(b)),
            Single::H => Single::Hdg,
            Single::Hdg => Single::H,
            Single::Dualizer => Single::Dualizer,
        }
    }

    pub fn is_diagonal(self) -> bool {
        matches!(self, Single::ZPhase(..))
    }

    fn normalized(self, ring: Ring) -> Single {
        let n = ring.order();
        match self {
            Single::ZPhase(a, b) => Single::ZPhase(a % n, if ring == Ring::Qubit { 0 } else { b % n }),
            Single::XPhase(a, b) => Single::XPhase(a % n, if ring == Ring::Qubit { 0 } else { b % n }),
            other => other,
        }
    }
}

/// A basis state for preparation or an effect for postselection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisState {
    Ket(u8),
    /// The uniform superposition `Σ_k |k⟩ / √d`.
    Plus,
}

impl BasisState {
    fn token(self) -> String {
        match self {
            BasisState::Ket(k) => k.to_string(),
            BasisState::Plus => "+".into(),
        }
    }

    fn parse(s: &str, d: u32, line: usize) -> Result<Self> {
        if s == "+" {
            return Ok(BasisState::Plus);
        }
        match s.parse::<u8>() {
            Ok(k) if (k as u32) < d => Ok(BasisState::Ket(k)),
            _ => Err(Error::parse(line, format!("bad basis state `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Single { op: Single, wire: usize },
    CX { ctrl: usize, tgt: usize },
    CXdg { ctrl: usize, tgt: usize },
    /// Applies `U^i` to the target when the control holds `i`.
    LambdaCtrl { u: Single, ctrl: usize, tgt: usize },
    /// Applies `U` to the target exactly when the control holds `value`.
    KetCtrl { value: u8, u: Single, ctrl: usize, tgt: usize },
    Swap { a: usize, b: usize },
    Prep { wire: usize, state: BasisState },
    Postselect { wire: usize, state: BasisState },
}

impl Gate {
    pub fn single(op: Single, wire: usize) -> Gate {
        Gate::Single { op, wire }
    }

    pub fn wires(&self) -> Vec<usize> {
        match *self {
            Gate::Single { wire, .. } | Gate::Prep { wire, .. } | Gate::Postselect { wire, .. } => vec![wire],
            Gate::CX { ctrl, tgt }
            | Gate::CXdg { ctrl, tgt }
            | Gate::LambdaCtrl { ctrl, tgt, .. }
            | Gate::KetCtrl { ctrl, tgt, .. } => vec![ctrl, tgt],
            Gate::Swap { a, b } => vec![a, b],
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, Gate::Prep { .. } | Gate::Postselect { .. })
    }

    pub fn adjoint(&self, ring: Ring) -> Gate {
        match *self {
            Gate::Single { op, wire } => Gate::Single { op: op.adjoint(ring), wire },
            Gate::CX { ctrl, tgt } => Gate::CXdg { ctrl, tgt },
            Gate::CXdg { ctrl, tgt } => Gate::CX { ctrl, tgt },
            Gate::LambdaCtrl { u, ctrl, tgt } => Gate::LambdaCtrl { u: u.adjoint(ring), ctrl, tgt },
            Gate::KetCtrl { value, u, ctrl, tgt } => Gate::KetCtrl { value, u: u.adjoint(ring), ctrl, tgt },
            Gate::Swap { a, b } => Gate::Swap { a, b },
            Gate::Prep { wire, state } => Gate::Postselect { wire, state },
            Gate::Postselect { wire, state } => Gate::Prep { wire, state },
        }
    }

    fn remap(&self, map: &[usize]) -> Gate {
        let m = |w: usize| map[w];
        match *self {
            Gate::Single { op, wire } => Gate::Single { op, wire: m(wire) },
            Gate::CX { ctrl, tgt } => Gate::CX { ctrl: m(ctrl), tgt: m(tgt) },
            Gate::CXdg { ctrl, tgt } => Gate::CXdg { ctrl: m(ctrl), tgt: m(tgt) },
            Gate::LambdaCtrl { u, ctrl, tgt } => Gate::LambdaCtrl { u, ctrl: m(ctrl), tgt: m(tgt) },
            Gate::KetCtrl { value, u, ctrl, tgt } => Gate::KetCtrl { value, u, ctrl: m(ctrl), tgt: m(tgt) },
            Gate::Swap { a, b } => Gate::Swap { a: m(a), b: m(b) },
            Gate::Prep { wire, state } => Gate::Prep { wire: m(wire), state },
            Gate::Postselect { wire, state } => Gate::Postselect { wire: m(wire), state },
        }
    }

    fn normalized(&self, ring: Ring) -> Gate {
        match *self {
            Gate::Single { op, wire } => Gate::Single { op: op.normalized(ring), wire },
            Gate::LambdaCtrl { u, ctrl, tgt } => Gate::LambdaCtrl { u: u.normalized(ring), ctrl, tgt },
            Gate::KetCtrl { value, u, ctrl, tgt } => Gate::KetCtrl { value, u: u.normalized(ring), ctrl, tgt },
            ref other => other.clone(),
        }
    }
}

/// Named diagonal gates, per dimension: `(name, k1, k2)`.
fn named_phases(ring: Ring) -> &'static [(&'static str, u32, u32)] {
    match ring {
        Ring::Qutrit => &[
            ("T", 4, 32),
            ("TDG", 32, 4),
            ("Z", 12, 24),
            ("ZDG", 24, 12),
            ("S", 0, 12),
            ("SDG", 0, 24),
            ("R", 0, 18),
            ("SQRTR", 0, 9),
            ("SQRTRDG", 0, 27),
        ],
        Ring::Qubit => &[("T", 1, 0), ("TDG", 7, 0), ("S", 2, 0), ("SDG", 6, 0), ("Z", 4, 0)],
    }
}

/// A labelled range `[start, end)` of gate indices, used as provenance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub label: String,
    pub start: usize,
    pub end: usize,
}

/// Resource tallies of a circuit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub t_count: usize,
    pub r_count: usize,
    pub cx_count: usize,
    /// Two-qudit operations with each two-wire provenance block counted once.
    pub two_qudit_count: usize,
    /// Physical gates acting on two wires.
    pub raw_two_qudit_count: usize,
    pub depth: usize,
    pub t_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    dim: u32,
    n_wires: usize,
    gates: Vec<Gate>,
    blocks: Vec<Block>,
    diagrammatic: bool,
    labels: Option<(Vec<String>, Vec<String>)>,
}

impl Circuit {
    pub fn new(dim: u32, n_wires: usize) -> Result<Self> {
        Ring::for_dim(dim)?;
        if n_wires == 0 {
            return Err(Error::Invalid("a circuit needs at least one wire".into()));
        }
        Ok(Circuit { dim, n_wires, gates: Vec::new(), blocks: Vec::new(), diagrammatic: false, labels: None })
    }

    pub fn qutrit(n_wires: usize) -> Self {
        Self::new(3, n_wires).expect("valid")
    }

    pub fn qubit(n_wires: usize) -> Self {
        Self::new(2, n_wires).expect("valid")
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }
    pub fn ring(&self) -> Ring {
        Ring::for_dim(self.dim).expect("validated")
    }
    pub fn n_wires(&self) -> usize {
        self.n_wires
    }
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }
    pub fn is_diagrammatic(&self) -> bool {
        self.diagrammatic
    }
    pub fn labels(&self) -> Option<&(Vec<String>, Vec<String>)> {
        self.labels.as_ref()
    }

    pub fn set_diagrammatic(&mut self, on: bool) {
        self.diagrammatic = on;
    }

    pub fn set_labels(&mut self, inputs: Vec<String>, outputs: Vec<String>) {
        self.labels = Some((inputs, outputs));
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        let ws = g.wires();
        if ws.iter().any(|&w| w >= self.n_wires) {
            return Err(Error::Invalid(format!("gate {g:?} uses a wire outside 1..={}", self.n_wires)));
        }
        if ws.len() == 2 && ws[0] == ws[1] {
            return Err(Error::Invalid(format!("gate {g:?} uses the same wire twice")));
        }
        if let Gate::KetCtrl { value, .. } = g {
            if value as u32 >= self.dim {
                return Err(Error::Invalid(format!("control value {value} out of range")));
            }
        }
        self.gates.push(g.normalized(self.ring()));
        Ok(())
    }

    /// Pushes a gate given in known-valid form; panics on wire errors.
    pub fn add(&mut self, g: Gate) -> &mut Self {
        self.push(g).expect("valid gate");
        self
    }

    pub fn add_single(&mut self, op: Single, wire: usize) -> &mut Self {
        self.add(Gate::Single { op, wire })
    }

    pub fn t(&mut self, wire: usize) -> &mut Self {
        let op = match self.ring() {
            Ring::Qutrit => Single::ZPhase(4, 32),
            Ring::Qubit => Single::ZPhase(1, 0),
        };
        self.add_single(op, wire)
    }

    pub fn tdg(&mut self, wire: usize) -> &mut Self {
        let op = match self.ring() {
            Ring::Qutrit => Single::ZPhase(32, 4),
            Ring::Qubit => Single::ZPhase(7, 0),
        };
        self.add_single(op, wire)
    }

    pub fn cx(&mut self, ctrl: usize, tgt: usize) -> &mut Self {
        self.add(Gate::CX { ctrl, tgt })
    }

    pub fn cxdg(&mut self, ctrl: usize, tgt: usize) -> &mut Self {
        self.add(Gate::CXdg { ctrl, tgt })
    }

    /// Appends `other` with its wire `i` mapped to `map[i]`.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) -> Result<()> {
        if other.dim != self.dim {
            return Err(Error::Invalid("dimension mismatch when appending".into()));
        }
        if map.len() != other.n_wires || map.iter().any(|&w| w >= self.n_wires) {
            return Err(Error::Invalid("bad wire map".into()));
        }
        let offset = self.gates.len();
        for g in &other.gates {
            self.push(g.remap(map))?;
        }
        for b in &other.blocks {
            self.blocks.push(Block { label: b.label.clone(), start: b.start + offset, end: b.end + offset });
        }
        self.diagrammatic |= other.diagrammatic;
        Ok(())
    }

    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        let map: Vec<usize> = (0..other.n_wires).collect();
        self.append_mapped(other, &map)
    }

    /// Appends `other` and records the appended range as a labelled block.
    pub fn append_block(&mut self, label: &str, other: &Circuit, map: &[usize]) -> Result<()> {
        let start = self.gates.len();
        self.append_mapped(other, map)?;
        self.mark_block(label, start, self.gates.len());
        Ok(())
    }

    /// Records `[start, end)` as a block, keeping outer blocks before inner ones.
    pub fn mark_block(&mut self, label: &str, start: usize, end: usize) {
        if start >= end {
            return;
        }
        self.blocks.push(Block { label: label.to_string(), start, end });
        self.blocks.sort_by(|a, b| a.start.cmp(&b.start).then(b.end.cmp(&a.end)));
    }

    pub fn adjoint(&self) -> Circuit {
        let ring = self.ring();
        let len = self.gates.len();
        let gates = self.gates.iter().rev().map(|g| g.adjoint(ring)).collect();
        let mut blocks: Vec<Block> = self
            .blocks
            .iter()
            .map(|b| Block {
                label: match b.label.strip_suffix("_dg") {
                    Some(s) => s.to_string(),
                    None => format!("{}_dg", b.label),
                },
                start: len - b.end,
                end: len - b.start,
            })
            .collect();
        blocks.sort_by(|a, b| a.start.cmp(&b.start).then(b.end.cmp(&a.end)));
        let labels = self.labels.as_ref().map(|(i, o)| (o.clone(), i.clone()));
        Circuit { dim: self.dim, n_wires: self.n_wires, gates, blocks, diagrammatic: self.diagrammatic, labels }
    }

    /// Wires that carry inputs: those not opened by a `Prep` before any other use.
    pub fn input_wires(&self) -> Vec<usize> {
        (0..self.n_wires)
            .filter(|&w| !matches!(self.gates.iter().find(|g| g.wires().contains(&w)), Some(Gate::Prep { .. })))
            .collect()
    }

    /// Wires that carry outputs: those not closed by a `Postselect` after their last use.
    pub fn output_wires(&self) -> Vec<usize> {
        (0..self.n_wires)
            .filter(|&w| {
                !matches!(self.gates.iter().rev().find(|g| g.wires().contains(&w)), Some(Gate::Postselect { .. }))
            })
            .collect()
    }

    /// Checks the boundary-marker placement rule.
    pub fn validate(&self) -> Result<()> {
        if self.diagrammatic {
            return Ok(());
        }
        for w in 0..self.n_wires {
            let uses: Vec<&Gate> = self.gates.iter().filter(|g| g.wires().contains(&w)).collect();
            for (i, g) in uses.iter().enumerate() {
                match g {
                    Gate::Prep { .. } if i != 0 => {
                        return Err(Error::Invalid(format!("PREP on wire {} is not at the start", w + 1)));
                    }
                    Gate::Postselect { .. } if i + 1 != uses.len() => {
                        return Err(Error::Invalid(format!("POST on wire {} is not at the end", w + 1)));
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn is_t(&self, op: Single) -> bool {
        match (self.ring(), op) {
            (Ring::Qutrit, Single::ZPhase(a, b)) => (a, b) == (4, 32) || (a, b) == (32, 4),
            (Ring::Qubit, Single::ZPhase(a, _)) => a == 1 || a == 7,
            _ => false,
        }
    }

    pub fn is_r(&self, op: Single) -> bool {
        matches!((self.ring(), op), (Ring::Qutrit, Single::ZPhase(a, b)) if [(0, 18), (18, 0), (18, 18)].contains(&(a, b)))
    }

    pub fn counts(&self) -> Counts {
        let mut c = Counts::default();
        let mut layer = vec![0usize; self.n_wires];
        let mut t_layer = vec![0usize; self.n_wires];
        for g in &self.gates {
            if let Gate::Single { op, .. } = g {
                if self.is_t(*op) {
                    c.t_count += 1;
                }
                if self.is_r(*op) {
                    c.r_count += 1;
                }
            }
            if matches!(g, Gate::CX { .. } | Gate::CXdg { .. }) {
                c.cx_count += 1;
            }
            let ws = g.wires();
            if ws.len() == 2 {
                c.raw_two_qudit_count += 1;
            }
            if g.is_boundary() {
                continue;
            }
            let l = ws.iter().map(|&w| layer[w]).max().unwrap_or(0) + 1;
            let is_t = matches!(g, Gate::Single { op, .. } if self.is_t(*op));
            let tl = ws.iter().map(|&w| t_layer[w]).max().unwrap_or(0) + usize::from(is_t);
            for &w in &ws {
                layer[w] = l;
                t_layer[w] = tl;
            }
        }
        c.depth = layer.into_iter().max().unwrap_or(0);
        c.t_depth = t_layer.into_iter().max().unwrap_or(0);
        c.two_qudit_count = self.two_qudit_blocked();
        c
    }

    fn block_wires(&self, b: &Block) -> Vec<usize> {
        let mut ws: Vec<usize> = self.gates[b.start..b.end].iter().flat_map(|g| g.wires()).collect();
        ws.sort_unstable();
        ws.dedup();
        ws
    }

    // Outermost two-wire blocks count once; other two-wire gates count individually.
    fn two_qudit_blocked(&self) -> usize {
        let two_wire: Vec<&Block> = self.blocks.iter().filter(|b| self.block_wires(b).len() == 2).collect();
        let maximal: Vec<&Block> = two_wire
            .iter()
            .enumerate()
            .filter(|(i, b)| {
                !two_wire.iter().enumerate().any(|(j, o)| {
                    *i != j && o.start <= b.start && b.end <= o.end && ((o.end - o.start) > (b.end - b.start) || j < *i)
                })
            })
            .map(|(_, b)| *b)
            .collect();
        let mut covered = vec![false; self.gates.len()];
        for b in &maximal {
            for slot in &mut covered[b.start..b.end] {
                *slot = true;
            }
        }
        let loose = self.gates.iter().enumerate().filter(|(i, g)| !covered[*i] && g.wires().len() == 2).count();
        maximal.len() + loose
    }

    /// Parses the line-oriented text format.
    pub fn parse(text: &str) -> Result<Circuit> {
        let mut dim = 3u32;
        let mut wires: Option<usize> = None;
        let mut body: Vec<(usize, Vec<&str>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "DIM" if body.is_empty() && wires.is_none() => {
                    dim = toks.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| Error::parse(i + 1, "bad DIM"))?;
                }
                "WIRES" if body.is_empty() => {
                    wires =
                        Some(toks.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| Error::parse(i + 1, "bad WIRES"))?);
                }
                _ => body.push((i + 1, toks)),
            }
        }
        Ring::for_dim(dim).map_err(|_| Error::parse(1, format!("unsupported dimension {dim}")))?;
        let n = match wires {
            Some(n) => n,
            None => body
                .iter()
                .flat_map(|(_, t)| wire_tokens(t).iter().filter_map(|x| x.parse::<usize>().ok()).collect::<Vec<_>>())
                .max()
                .unwrap_or(1),
        };
        let mut c = Circuit::new(dim, n).map_err(|e| Error::parse(1, e.to_string()))?;
        let ring = c.ring();
        let mut open: Vec<(String, usize)> = Vec::new();
        for (ln, toks) in body {
            let wire = |s: &str| -> Result<usize> {
                match s.parse::<usize>() {
                    Ok(w) if w >= 1 && w <= n => Ok(w - 1),
                    _ => Err(Error::parse(ln, format!("bad wire `{s}`"))),
                }
            };
            let need = |k: usize| -> Result<()> {
                if toks.len() == k {
                    Ok(())
                } else {
                    Err(Error::parse(ln, format!("`{}` expects {} operands", toks[0], k - 1)))
                }
            };
            match toks[0] {
                "DIAGRAMMATIC" => c.diagrammatic = true,
                "LABELS" => {
                    let rest = &toks[1..];
                    let bar = rest.iter().position(|t| *t == "|").ok_or_else(|| Error::parse(ln, "LABELS needs `|`"))?;
                    c.labels = Some((
                        rest[..bar].iter().map(|s| s.to_string()).collect(),
                        rest[bar + 1..].iter().map(|s| s.to_string()).collect(),
                    ));
                }
                "BLOCK" => {
                    need(2)?;
                    open.push((toks[1].to_string(), c.gates.len()));
                }
                "END" => {
                    need(1)?;
                    let (label, start) = open.pop().ok_or_else(|| Error::parse(ln, "END without BLOCK"))?;
                    if start == c.gates.len() {
                        return Err(Error::parse(ln, "empty block"));
                    }
                    c.blocks.push(Block { label, start, end: c.gates.len() });
                }
                "CX" | "CXDG" | "SWAP" => {
                    need(3)?;
                    let (a, b) = (wire(toks[1])?, wire(toks[2])?);
                    let g = match toks[0] {
                        "CX" => Gate::CX { ctrl: a, tgt: b },
                        "CXDG" => Gate::CXdg { ctrl: a, tgt: b },
                        _ => Gate::Swap { a, b },
                    };
                    c.push(g).map_err(|e| Error::parse(ln, e.to_string()))?;
                }
                "LCTRL" => {
                    need(4)?;
                    let u = parse_single_token(toks[1], ring).ok_or_else(|| Error::parse(ln, "bad controlled gate"))?;
                    let g = Gate::LambdaCtrl { u, ctrl: wire(toks[2])?, tgt: wire(toks[3])? };
                    c.push(g).map_err(|e| Error::parse(ln, e.to_string()))?;
                }
                "KCTRL" => {
                    need(5)?;
                    let value: u8 = toks[1].parse().map_err(|_| Error::parse(ln, "bad control value"))?;
                    let u = parse_single_token(toks[2], ring).ok_or_else(|| Error::parse(ln, "bad controlled gate"))?;
                    let g = Gate::KetCtrl { value, u, ctrl: wire(toks[3])?, tgt: wire(toks[4])? };
                    c.push(g).map_err(|e| Error::parse(ln, e.to_string()))?;
                }
                "PREP" | "POST" => {
                    need(3)?;
                    let state = BasisState::parse(toks[1], dim, ln)?;
                    let w = wire(toks[2])?;
                    let g = if toks[0] == "PREP" { Gate::Prep { wire: w, state } } else { Gate::Postselect { wire: w, state } };
                    c.push(g).map_err(|e| Error::parse(ln, e.to_string()))?;
                }
                "ZPH" | "XPH" => {
                    need(4)?;
                    let k1: u32 = toks[1].parse().map_err(|_| Error::parse(ln, "bad exponent"))?;
                    let k2: u32 = toks[2].parse().map_err(|_| Error::parse(ln, "bad exponent"))?;
                    let op = if toks[0] == "ZPH" { Single::ZPhase(k1, k2) } else { Single::XPhase(k1, k2) };
                    c.push(Gate::Single { op, wire: wire(toks[3])? }).map_err(|e| Error::parse(ln, e.to_string()))?;
                }
                name => {
                    let op = parse_single_token(name, ring).ok_or_else(|| Error::parse(ln, format!("unknown gate `{name}`")))?;
                    need(2)?;
                    c.push(Gate::Single { op, wire: wire(toks[1])? }).map_err(|e| Error::parse(ln, e.to_string()))?;
                }
            }
        }
        if let Some((label, _)) = open.pop() {
            return Err(Error::parse(0, format!("unterminated block `{label}`")));
        }
        c.blocks.sort_by(|a, b| a.start.cmp(&b.start).then(b.end.cmp(&a.end)));
        c.validate().map_err(|e| Error::parse(0, e.to_string()))?;
        Ok(c)
    }
}

fn wire_tokens<'a>(toks: &'a [&'a str]) -> &'a [&'a str] {
    let range = match toks[0] {
        "BLOCK" | "END" | "LABELS" | "DIAGRAMMATIC" => 0..0,
        "CX" | "CXDG" | "SWAP" => 1..3,
        "LCTRL" => 2..4,
        "KCTRL" => 3..5,
        "PREP" | "POST" => 2..3,
        "ZPH" | "XPH" => 3..4,
        _ => 1..2,
    };
    let end = range.end.min(toks.len());
    &toks[range.start.min(end)..end]
}

fn single_token(op: Single, ring: Ring) -> String {
    match op {
        Single::PermX(p) => p.token().to_string(),
        Single::ZPhase(a, b) => match named_phases(ring).iter().find(|(_, x, y)| (*x, *y) == (a, b)) {
            Some((name, _, _)) => name.to_string(),
            None => format!("ZPH({a},{b})"),
        },
        Single::XPhase(a, b) => format!("XPH({a},{b})"),
        Single::H => "H".into(),
        Single::Hdg => "HDG".into(),
        Single::Dualizer => "DUAL".into(),
    }
}

fn parse_single_token(tok: &str, ring: Ring) -> Option<Single> {
    let perm = match tok {
        "X+1" => Some(Perm::Plus),
        "X-1" => Some(Perm::Minus),
        "X01" => Some(Perm::S01),
        "X02" => Some(Perm::S02),
        "X12" => Some(Perm::S12),
        _ => None,
    };
    if let Some(p) = perm {
        return Some(Single::PermX(p));
    }
    match tok {
        "H" => return Some(Single::H),
        "HDG" => return Some(Single::Hdg),
        "DUAL" => return Some(Single::Dualizer),
        _ => {}
    }
    if let Some((_, a, b)) = named_phases(ring).iter().find(|(n, _, _)| *n == tok) {
        return Some(Single::ZPhase(*a, *b));
    }
    for (prefix, is_z) in [("ZPH(", true), ("XPH(", false)] {
        if let Some(rest) = tok.strip_prefix(prefix).and_then(|r| r.strip_suffix(')')) {
            let (a, b) = rest.split_once(',')?;
            let (a, b) = (a.parse().ok()?, b.parse().ok()?);
            return Some(if is_z { Single::ZPhase(a, b) } else { Single::XPhase(a, b) });
        }
    }
    None
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = self.ring();
        writeln!(f, "DIM {}", self.dim)?;
        writeln!(f, "WIRES {}", self.n_wires)?;
        if self.diagrammatic {
            writeln!(f, "DIAGRAMMATIC")?;
        }
        if let Some((i, o)) = &self.labels {
            writeln!(f, "LABELS {} | {}", i.join(" "), o.join(" "))?;
        }
        for (idx, g) in self.gates.iter().enumerate() {
            for _ in self.blocks.iter().filter(|b| b.end == idx) {
                writeln!(f, "END")?;
            }
            for b in self.blocks.iter().filter(|b| b.start == idx) {
                writeln!(f, "BLOCK {}", b.label)?;
            }
            let w = |x: usize| x + 1;
            match *g {
                Gate::Single { op: Single::ZPhase(a, b), wire } if single_token(Single::ZPhase(a, b), ring).starts_with("ZPH(") => {
                    writeln!(f, "ZPH {a} {b} {}", w(wire))?
                }
                Gate::Single { op: Single::XPhase(a, b), wire } => writeln!(f, "XPH {a} {b} {}", w(wire))?,
                Gate::Single { op, wire } => writeln!(f, "{} {}", single_token(op, ring), w(wire))?,
                Gate::CX { ctrl, tgt } => writeln!(f, "CX {} {}", w(ctrl), w(tgt))?,
                Gate::CXdg { ctrl, tgt } => writeln!(f, "CXDG {} {}", w(ctrl), w(tgt))?,
                Gate::LambdaCtrl { u, ctrl, tgt } => writeln!(f, "LCTRL {} {} {}", single_token(u, ring), w(ctrl), w(tgt))?,
                Gate::KetCtrl { value, u, ctrl, tgt } => {
                    writeln!(f, "KCTRL {value} {} {} {}", single_token(u, ring), w(ctrl), w(tgt))?
                }
                Gate::Swap { a, b } => writeln!(f, "SWAP {} {}", w(a), w(b))?,
                Gate::Prep { wire, state } => writeln!(f, "PREP {} {}", state.token(), w(wire))?,
                Gate::Postselect { wire, state } => writeln!(f, "POST {} {}", state.token(), w(wire))?,
            }
        }
        for _ in self.blocks.iter().filter(|b| b.end == self.gates.len()) {
            writeln!(f, "END")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let text = "DIM 3\nWIRES 4\nLABELS a b | c d\nBLOCK and\nT 1\nTDG 3\nCX 1 2\nEND\nKCTRL 2 X+1 1 2\nZPH 12 23 1\nLCTRL Z 2 3\nPREP + 4\nPOST 0 4\n";
        let c = Circuit::parse(text).unwrap();
        assert_eq!(c.to_string(), text);
        assert_eq!(Circuit::parse(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn nested_blocks_roundtrip() {
        let text = "DIM 3\nWIRES 3\nBLOCK outer\nBLOCK inner\nCX 1 2\nEND\nCX 2 3\nEND\nBLOCK next\nH 1\nEND\n";
        let c = Circuit::parse(text).unwrap();
        assert_eq!(c.to_string(), text);
    }

    #[test]
    fn named_phases_parse() {
        let c = Circuit::parse("T 1\nTDG 1\nZ 1\nS 1\nR 1\n").unwrap();
        let ops: Vec<Single> =
            c.gates().iter().map(|g| if let Gate::Single { op, .. } = g { *op } else { unreachable!() }).collect();
        assert_eq!(
            ops,
            vec![Single::ZPhase(4, 32), Single::ZPhase(32, 4), Single::ZPhase(12, 24), Single::ZPhase(0, 12), Single::ZPhase(0, 18)]
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Circuit::parse("WIRES 2\nCX 1 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(Circuit::parse("FOO 1").is_err());
        assert!(Circuit::parse("WIRES 2\nBLOCK x\nCX 1 2\n").is_err());
    }

    #[test]
    fn boundary_placement_enforced() {
        assert!(Circuit::parse("WIRES 2\nCX 1 2\nPREP 0 2\n").is_err());
        assert!(Circuit::parse("WIRES 2\nDIAGRAMMATIC\nCX 1 2\nPREP 0 2\n").is_ok());
    }

    #[test]
    fn empty_counts_are_zero() {
        assert_eq!(Circuit::qutrit(3).counts(), Counts::default());
    }

    #[test]
    fn adjoint_is_involution_and_preserves_counts() {
        let mut c = Circuit::qutrit(2);
        c.t(0).cx(0, 1).tdg(1).add_single(Single::H, 0);
        c.mark_block("blk", 0, 2);
        let a = c.adjoint();
        assert_eq!(a.adjoint(), c);
        let (x, y) = (c.counts(), a.counts());
        assert_eq!((x.t_count, x.r_count, x.cx_count), (y.t_count, y.r_count, y.cx_count));
        assert_eq!(a.gates()[0], Gate::single(Single::Hdg, 0));
        assert_eq!(a.gates()[3], Gate::single(Single::ZPhase(32, 4), 0));
    }

    #[test]
    fn depth_layers() {
        let mut c = Circuit::qutrit(3);
        c.t(0).t(1).cx(0, 1).t(2).t(1);
        let k = c.counts();
        assert_eq!(k.depth, 3);
        assert_eq!(k.t_depth, 2);
        assert_eq!(k.raw_two_qudit_count, 1);
    }
}
