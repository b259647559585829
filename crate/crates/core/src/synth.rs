//! Builders for every emulation circuit, plus the small codes they induce.
//!
//! Wire 0 is the most significant qudit throughout. Two-wire composites are
//! recorded as blocks so that resource counts can treat each as one
//! two-qudit operation.

use crate::circuit::{BasisState, Circuit, Gate, Perm, Single};
use crate::codes::{self, StabilizerCode};
use crate::cyclo::Ring;
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::pauli::PauliOp;
use crate::phasepoly::{self, PhaseGadget};
use crate::sim::{BoolOutput, EmulationTarget};

/// `R = diag(1, 1, −1)`.
pub const R: Single = Single::ZPhase(0, 18);
/// `√R = diag(1, 1, i)`.
pub const SQRT_R: Single = Single::ZPhase(0, 9);
const X01: Single = Single::PermX(Perm::S01);
const X12: Single = Single::PermX(Perm::S12);

fn x_power(k: i32) -> Option<Single> {
    match k.rem_euclid(3) {
        0 => None,
        1 => Some(Single::PermX(Perm::Plus)),
        _ => Some(Single::PermX(Perm::Minus)),
    }
}

fn shift(c: &mut Circuit, wire: usize, k: i32) {
    if let Some(op) = x_power(k) {
        c.add_single(op, wire);
    }
}

/// Two-qutrit gadgets on parities `(1,0)`, `(0,1)`, `(1,1)`, `(1,2)`, laid out
/// as phases on wire 1 between three successive CX gates.
fn gadget_ladder(gadgets: &[PhaseGadget]) -> Result<Circuit> {
    let mut t = [0u8; 4];
    for g in gadgets {
        let slot = match g.parity.as_slice() {
            [1, 0] => 0,
            [0, 1] => 1,
            [1, 1] => 2,
            [1, 2] => 3,
            other => return Err(Error::Invalid(format!("parity {other:?} has no ladder slot"))),
        };
        t[slot] = (t[slot] + g.t_exp) % 9;
    }
    let lattice = |t: u8| Single::ZPhase(4 * t as u32 % 36, 32 * t as u32 % 36);
    let mut c = Circuit::qutrit(2);
    if t[0] != 0 {
        c.add_single(lattice(t[0]), 0);
    }
    if t[2] == 0 && t[3] == 0 {
        if t[1] != 0 {
            c.add_single(lattice(t[1]), 1);
        }
        return Ok(c);
    }
    // After k CX gates wire 1 holds j + k·i; parity (2,1) is (1,2) with the sign flipped.
    for e in [t[1], t[2], (9 - t[3]) % 9] {
        if e != 0 {
            c.add_single(lattice(e), 1);
        }
        c.cx(0, 1);
    }
    Ok(c)
}

fn zcz_table(sign: u8) -> Vec<u8> {
    (0..9u8)
        .map(|x| {
            let (i, j) = (x / 3, x % 3);
            3 * ((sign * j * u8::from(i == 0)) % 3)
        })
        .collect()
}

/// The `|0⟩`-controlled `Z^sign` gate on (control 0, target 1) from the gadget solver.
pub fn ctrl0_z(sign: i8) -> Result<Circuit> {
    let gadgets = phasepoly::solve_diagonal_gadgets(2, &zcz_table(1))?;
    let c = gadget_ladder(&gadgets)?;
    Ok(if sign >= 0 { c } else { c.adjoint() })
}

/// `|2⟩`-controlled `X^sign` on (control 0, target 1): T-count 3, CX-count 3.
pub fn ctrl2_x(sign: i8) -> Result<Circuit> {
    let mut c = Circuit::qutrit(2);
    shift(&mut c, 0, 1);
    c.add_single(Single::H, 1);
    c.append(&ctrl0_z(sign)?)?;
    c.add_single(Single::Hdg, 1);
    shift(&mut c, 0, -1);
    Ok(c)
}

/// `|value⟩`-controlled `X^sign` from `ctrl` to `tgt` on an `n`-wire register.
pub fn ket_ctrl_x(n: usize, value: u8, sign: i8, ctrl: usize, tgt: usize) -> Result<Circuit> {
    let mut c = Circuit::qutrit(n);
    let k = 2 - value as i32;
    shift(&mut c, ctrl, k);
    c.append_block("ctrl2_x", &ctrl2_x(sign)?, &[ctrl, tgt])?;
    shift(&mut c, ctrl, -k);
    Ok(c)
}

fn block_of(label: &str, inner: Circuit) -> Circuit {
    let mut c = Circuit::new(inner.dim(), inner.n_wires()).expect("supported dimension");
    let map: Vec<usize> = (0..inner.n_wires()).collect();
    c.append_block(label, &inner, &map).expect("same register");
    if let Some((i, o)) = inner.labels() {
        c.set_labels(i.clone(), o.clone());
    }
    c
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AndVariant {
    /// `CX†` from b onto a, then a `|2⟩`-controlled `X−1` back onto b.
    Eq5,
    /// The same followed by a CX from b onto a.
    Eq6,
    /// Outer Clifford around the three-qutrit `|0⟩`-controlled Z core.
    Symmetric3,
    /// The six-qutrit T-depth one form with three T and three T†.
    SymmetricTDepth1,
}

/// Binary AND on inputs (a, b); the AND'd value lands on wire 1.
pub fn build_and(variant: AndVariant) -> Result<Circuit> {
    let c = match variant {
        AndVariant::Eq5 | AndVariant::Eq6 => {
            let mut c = Circuit::qutrit(2);
            c.cxdg(1, 0);
            c.append_block("ctrl2_x", &ctrl2_x(-1)?, &[0, 1])?;
            if variant == AndVariant::Eq6 {
                c.cx(1, 0);
            }
            c.set_labels(strs(&["a", "b"]), strs(&["c", "a∧b"]));
            c
        }
        AndVariant::Symmetric3 => symmetric_circuit(&encoder_321()?, &layer_321()?)?,
        AndVariant::SymmetricTDepth1 => symmetric_circuit(&encoder_622_inner()?, &layer_622()?)?,
    };
    Ok(block_of("and", c))
}

/// OR by conjugating the Eq5 AND with `X01` on both inputs and the AND'd output.
pub fn build_or() -> Result<Circuit> {
    let and = build_and(AndVariant::Eq5)?;
    let mut c = Circuit::qutrit(2);
    c.add_single(X01, 0).add_single(X01, 1);
    c.append(&and)?;
    c.add_single(X01, 1);
    c.set_labels(strs(&["a", "b"]), strs(&["c", "a∨b"]));
    Ok(c)
}

/// n-ary AND as a binary tree of two-input ANDs; the result lands on wire `n−1`.
pub fn build_nary_and(n: usize) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::Invalid("n-ary AND needs n ≥ 2".into()));
    }
    let and = build_and(AndVariant::Eq5)?;
    let mut c = Circuit::qutrit(n);
    let mut live: Vec<usize> = (0..n).collect();
    while live.len() > 1 {
        let mut next = Vec::new();
        let offset = live.len() % 2;
        if offset == 1 {
            next.push(live[0]);
        }
        for pair in live[offset..].chunks(2) {
            c.append_mapped(&and, &[pair[0], pair[1]])?;
            next.push(pair[1]);
        }
        live = next;
    }
    let inputs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let mut outputs: Vec<String> = (1..=n).map(|i| format!("g{i}")).collect();
    outputs[n - 1] = "AND".into();
    c.set_labels(inputs, outputs);
    Ok(c)
}

/// The outer Clifford of the symmetric AND on the two data wires.
pub fn outer_clifford() -> Circuit {
    let mut v = Circuit::qutrit(2);
    v.cxdg(1, 0).add_single(Single::PermX(Perm::Plus), 0).add_single(Single::Hdg, 1);
    v
}

fn symmetric_circuit(core: &Circuit, layer: &str) -> Result<Circuit> {
    let n = core.n_wires();
    let layer = Circuit::parse(&format!("WIRES {n}\n{layer}"))?;
    let v = outer_clifford();
    let mut c = Circuit::qutrit(n);
    for g in core.gates() {
        if let Gate::Prep { .. } = g {
            c.push(g.clone())?;
        }
    }
    c.append_mapped(&v, &[0, 1])?;
    let body: Vec<Gate> = core.gates().iter().filter(|g| !g.is_boundary()).cloned().collect();
    for g in &body {
        c.push(g.clone())?;
    }
    c.append(&layer)?;
    for g in body.iter().rev() {
        c.push(g.adjoint(c.ring()))?;
    }
    c.append_mapped(&v.adjoint(), &[0, 1])?;
    for g in core.gates() {
        if let Gate::Prep { wire, state } = *g {
            c.push(Gate::Postselect { wire, state })?;
        }
    }
    c.set_labels(strs(&["a", "b"]), strs(&["a'", "a∧b"]));
    Ok(c)
}

/// CX encoder of the three-qutrit code read from the symmetric AND.
pub fn encoder_321() -> Result<Circuit> {
    codes::css_encoder(3, 3, 2, &[vec![1, 0, 2], vec![1, 1, 1]])
}

/// The inner CSS encoder of the six-qutrit code.
pub fn encoder_622_inner() -> Result<Circuit> {
    codes::css_encoder(3, 6, 2, &[vec![2, 1, 0, 2, 1, 0], vec![1, 1, 1, 0, 0, 0], vec![1, 1, 1, 1, 1, 1]])
}

/// The `|0⟩`-controlled Z phase table on two logical qutrits, in units of `ζ9`.
pub fn ctrl0_z_table() -> Vec<u8> {
    zcz_table(1)
}

/// Wire-local T-lattice layer implementing the logical phase table `f` on a code.
pub fn transversal_t_layer(code: &StabilizerCode, f: &[u8]) -> Result<Vec<u8>> {
    let n = code.n;
    let choices = [0u8, 1, 8];
    let mut best: Option<Vec<u8>> = None;
    for idx in 0..3usize.pow(n as u32) {
        let mut t = vec![0u8; n];
        let mut rem = idx;
        for slot in t.iter_mut().rev() {
            *slot = choices[rem % 3];
            rem /= 3;
        }
        let support = t.iter().filter(|&&v| v != 0).count();
        if let Some(b) = &best {
            if b.iter().filter(|&&v| v != 0).count() <= support {
                continue;
            }
        }
        if codes::transversal_phase_check(code, &t, f)? {
            best = Some(t);
        }
    }
    best.ok_or_else(|| Error::NotRealizable("no wire-local T layer realizes the logical table".into()))
}

fn layer_text(t: &[u8]) -> String {
    t.iter()
        .enumerate()
        .filter_map(|(w, &e)| match e {
            1 => Some(format!("T {}\n", w + 1)),
            8 => Some(format!("TDG {}\n", w + 1)),
            _ => None,
        })
        .collect()
}

fn layer_321() -> Result<String> {
    let code = codes::read_code_from_gpf(&encoder_321()?)?;
    Ok(layer_text(&transversal_t_layer(&code, &ctrl0_z_table())?))
}

fn layer_622() -> Result<String> {
    let code = codes::read_code_from_gpf(&encoder_622_inner()?)?;
    Ok(layer_text(&transversal_t_layer(&code, &ctrl0_z_table())?))
}

/// The wire-local layer of the six-qutrit code as a circuit.
pub fn layer_622_circuit() -> Result<Circuit> {
    Circuit::parse(&format!("WIRES 6\n{}", layer_622()?))
}

/// The six-qutrit code with logicals dressed by the outer Clifford.
pub fn code_622() -> Result<StabilizerCode> {
    let split = codes::code_from_symmetric_circuit(&build_and(AndVariant::SymmetricTDepth1)?)?;
    Ok(split.code)
}

/// The two-qutrit logical AND unitary `V† · CZ0 · V` in matrix order.
pub fn logical_and_unitary() -> Result<ExactMatrix> {
    let mut c = outer_clifford();
    c.append(&ctrl0_z(1)?)?;
    c.append(&outer_clifford().adjoint())?;
    crate::sim::unitary_of(&c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QubitGate {
    X,
    Z,
    S,
    CX,
    CZ,
    CCX,
    CCZ,
    CnXLinear(usize),
    CnXLog(usize),
    CnZLinear(usize),
    CnZLog(usize),
}

impl QubitGate {
    /// Number of qubits acted on.
    pub fn arity(self) -> usize {
        match self {
            QubitGate::X | QubitGate::Z | QubitGate::S => 1,
            QubitGate::CX | QubitGate::CZ => 2,
            QubitGate::CCX | QubitGate::CCZ => 3,
            QubitGate::CnXLinear(n) | QubitGate::CnXLog(n) | QubitGate::CnZLinear(n) | QubitGate::CnZLog(n) => n + 1,
        }
    }

    pub fn name(self) -> String {
        match self {
            QubitGate::X => "X".into(),
            QubitGate::Z => "Z".into(),
            QubitGate::S => "S".into(),
            QubitGate::CX => "CX".into(),
            QubitGate::CZ => "CZ".into(),
            QubitGate::CCX => "CCX".into(),
            QubitGate::CCZ => "CCZ".into(),
            QubitGate::CnXLinear(n) => format!("C^{n}X linear"),
            QubitGate::CnXLog(n) => format!("C^{n}X log"),
            QubitGate::CnZLinear(n) => format!("C^{n}Z linear"),
            QubitGate::CnZLog(n) => format!("C^{n}Z log"),
        }
    }

    /// The qubit unitary being emulated, with entries in the qutrit ring.
    pub fn target(self) -> ExactMatrix {
        let ring = Ring::Qutrit;
        let m = self.arity();
        let size = 1usize << m;
        let all_ones = size - 1;
        match self {
            QubitGate::S => ExactMatrix::diag_zeta(ring, &[0, 9]),
            QubitGate::Z => ExactMatrix::diag_zeta(ring, &[0, 18]),
            QubitGate::X => ExactMatrix::permutation(ring, &[1, 0]),
            QubitGate::CZ | QubitGate::CCZ | QubitGate::CnZLinear(_) | QubitGate::CnZLog(_) => {
                let exps: Vec<i64> = (0..size).map(|i| if i == all_ones { 18 } else { 0 }).collect();
                ExactMatrix::diag_zeta(ring, &exps)
            }
            _ => {
                let perm: Vec<usize> = (0..size).map(|i| if i | 1 == all_ones { i ^ 1 } else { i }).collect();
                ExactMatrix::permutation(ring, &perm)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Synthesized {
    pub circuit: Circuit,
    /// Set when the circuit uses a primitive that needs a probabilistic injection protocol.
    pub injection_required: bool,
}

/// Qubit CX on (control 0, target 1): T-count 6, CX-count 8.
pub fn qubit_cx() -> Result<Circuit> {
    let mut c = Circuit::qutrit(2);
    c.cx(0, 1);
    c.append(&ket_ctrl_x(2, 1, -1, 1, 0)?)?;
    c.append(&ket_ctrl_x(2, 1, 1, 0, 1)?)?;
    c.cx(1, 0);
    Ok(block_of("qubit_cx", c))
}

/// `|2⟩`-controlled qubit X on (qutrit control 0, qubit target 1): T-count 12, CX-count 13.
pub fn ctrl2_qubit_x() -> Result<Circuit> {
    let mut c = Circuit::qutrit(2);
    c.cx(0, 1);
    c.append(&ket_ctrl_x(2, 0, 1, 1, 0)?)?;
    c.append(&ket_ctrl_x(2, 2, -1, 0, 1)?)?;
    c.append(&ket_ctrl_x(2, 0, -1, 1, 0)?)?;
    c.append(&ket_ctrl_x(2, 1, -1, 0, 1)?)?;
    Ok(block_of("ctrl2_qubit_x", c))
}

/// `|2⟩`-controlled qubit Z: R-count 3, CX-count 3.
pub fn ctrl2_qubit_z() -> Circuit {
    let mut c = Circuit::qutrit(2);
    c.add_single(Single::PermX(Perm::Plus), 1).add_single(R, 1).add_single(Single::PermX(Perm::Minus), 1);
    c.cx(1, 0).add_single(R, 0).cx(1, 0).add_single(R, 0).cx(1, 0);
    block_of("ctrl2_qubit_z", c)
}

/// A `|2⟩`-controlled qubit Z with R-count 3 and CX-count 2.
pub fn ctrl2_qubit_z_compact() -> Circuit {
    let mut c = Circuit::qutrit(2);
    c.add_single(Single::PermX(Perm::Plus), 0).add_single(Single::PermX(Perm::Plus), 1);
    c.add_single(R, 0).add_single(Single::PermX(Perm::Minus), 0).add_single(R, 1);
    c.cx(0, 1).add_single(R, 1).add_single(Single::PermX(Perm::Minus), 1).cxdg(0, 1);
    block_of("ctrl2_qubit_z", c)
}

/// Qubit CZ using one R gate between a CX and its inverse.
pub fn qubit_cz() -> Circuit {
    let mut c = Circuit::qutrit(2);
    c.cx(0, 1).add_single(R, 1).cxdg(0, 1);
    block_of("qubit_cz", c)
}

/// Controls `0..n` raised so that wire `n−1` holds 2 exactly when all controls are 1.
fn control_chain(n: usize, width: usize) -> Result<Circuit> {
    let mut c = Circuit::qutrit(width);
    c.cx(0, 1);
    for k in 2..n {
        c.append(&ket_ctrl_x(width, 2, 1, k - 1, k)?)?;
    }
    Ok(c)
}

fn linear_controlled(n: usize, core: &Circuit) -> Result<Circuit> {
    if n < 2 {
        return Err(Error::Invalid("linear-depth construction needs n ≥ 2".into()));
    }
    let chain = control_chain(n, n + 1)?;
    let mut c = chain.clone();
    c.append_mapped(core, &[n - 1, n])?;
    c.append(&chain.adjoint())?;
    Ok(c)
}

fn labels_for(c: &mut Circuit, n: usize) {
    let mut names: Vec<String> = (1..=n).map(|i| format!("c{i}")).collect();
    names.push("t".into());
    c.set_labels(names.clone(), names);
}

pub fn build_qubit_gate(g: QubitGate) -> Result<Synthesized> {
    let mut injection_required = false;
    let mut c = match g {
        QubitGate::X => {
            let mut c = Circuit::qutrit(1);
            c.add_single(X01, 0);
            c
        }
        QubitGate::Z | QubitGate::S => {
            injection_required = g == QubitGate::S;
            let mut c = Circuit::qutrit(1);
            c.add_single(X12, 0).add_single(if g == QubitGate::Z { R } else { SQRT_R }, 0).add_single(X12, 0);
            c
        }
        QubitGate::CX => qubit_cx()?,
        QubitGate::CZ => qubit_cz(),
        QubitGate::CCX => linear_controlled(2, &ctrl2_qubit_x()?)?,
        QubitGate::CCZ => linear_controlled(2, &ctrl2_qubit_z())?,
        QubitGate::CnXLinear(n) => linear_controlled(n, &ctrl2_qubit_x()?)?,
        QubitGate::CnZLinear(n) => linear_controlled(n, &ctrl2_qubit_z())?,
        QubitGate::CnXLog(n) => {
            let and = build_nary_and(n)?;
            let mut c = Circuit::qutrit(n + 1);
            let map: Vec<usize> = (0..n).collect();
            c.append_mapped(&and, &map)?;
            c.append_mapped(&qubit_cx()?, &[n - 1, n])?;
            c.append_mapped(&and.adjoint(), &map)?;
            c
        }
        QubitGate::CnZLog(n) => {
            if n < 3 {
                return Err(Error::Invalid("log-depth CⁿZ needs n ≥ 3".into()));
            }
            let and = build_nary_and(n - 1)?;
            let map: Vec<usize> = (0..n - 1).collect();
            let mut c = Circuit::qutrit(n + 1);
            c.append_mapped(&and, &map)?;
            c.append_mapped(&linear_controlled(2, &ctrl2_qubit_z())?, &[n - 2, n - 1, n])?;
            c.append_mapped(&and.adjoint(), &map)?;
            c
        }
    };
    let m = g.arity();
    if m >= 2 {
        labels_for(&mut c, m - 1);
    }
    Ok(Synthesized { circuit: c, injection_required })
}

pub fn qubit_emulation_target(g: QubitGate) -> EmulationTarget {
    EmulationTarget::Unitary(g.target())
}

pub fn and_target(n: usize) -> EmulationTarget {
    EmulationTarget::Boolean(vec![BoolOutput::and(n, n - 1)])
}

pub fn or_target() -> EmulationTarget {
    EmulationTarget::Boolean(vec![BoolOutput::or(2, 1)])
}

/// Qubit `|+⟩` synthesis: data (wire 0) in `|+⟩`, ancilla (wire 1) in `|0⟩`;
/// measuring the ancilla with outcome 0 leaves the data in `(|0⟩+|1⟩)/√2`.
pub fn qubit_plus() -> Result<Circuit> {
    let mut c = Circuit::qutrit(2);
    c.add(Gate::Prep { wire: 0, state: BasisState::Plus });
    c.add(Gate::Prep { wire: 1, state: BasisState::Ket(0) });
    c.append_block("ctrl2_x", &ctrl2_x(1)?, &[0, 1])?;
    Ok(c)
}

/// The `|−⟩` variant: `diag(1, −1, 1)` on the data before measurement.
pub fn qubit_minus() -> Result<Circuit> {
    let mut c = qubit_plus()?;
    c.add_single(X12, 0).add_single(R, 0).add_single(X12, 0);
    Ok(c)
}

/// The qubit code on the corners of the cube, with the T/T† layer by vertex parity.
pub fn code_832() -> Result<StabilizerCode> {
    let d = 2u8;
    let n = 8;
    let vertex = |i: usize| [(i >> 2) & 1, (i >> 1) & 1, i & 1];
    let face = |axis: usize, val: usize| -> Vec<u8> { (0..n).map(|i| u8::from(vertex(i)[axis] == val)).collect() };
    let mut x_rows = vec![face(0, 1), face(1, 1), face(2, 1)];
    x_rows.push(vec![1; n]);
    let encoder = codes::css_encoder(d, n, 3, &x_rows)?;
    let mut code = codes::read_code_from_gpf(&encoder)?;
    code.provenance = "qubit [[8,3,2]] cube code; encoder synthesized from its X-type rows".into();
    Ok(code)
}

/// `T` on even-weight vertices and `T†` on odd-weight ones.
pub fn layer_832() -> Circuit {
    let mut c = Circuit::qubit(8);
    for i in 0..8usize {
        if i.count_ones() % 2 == 0 {
            c.t(i);
        } else {
            c.tdg(i);
        }
    }
    c
}

/// The qutrit Reed–Muller code on the eight nonzero points of `GF(3)²`.
pub fn code_812_qrm() -> Result<StabilizerCode> {
    let pts: Vec<(u8, u8)> = (0..9u8).map(|i| (i / 3, i % 3)).filter(|&p| p != (0, 0)).collect();
    let n = pts.len();
    let v1: Vec<u8> = pts.iter().map(|p| p.0).collect();
    let v2: Vec<u8> = pts.iter().map(|p| p.1).collect();
    let encoder = codes::css_encoder(3, n, 1, &[vec![1; n], v1, v2])?;
    let mut code = codes::read_code_from_gpf(&encoder)?;
    code.provenance = "qutrit quantum Reed-Muller [[8,1,2]] code on the nonzero points of GF(3)^2 (external literature data)".into();
    Ok(code)
}

/// The single-qutrit phase table of `T†` in units of `ζ9`.
pub fn tdg_table() -> Vec<u8> {
    vec![0, 8, 1]
}

/// The qubit CCZ matrix on three qubits.
pub fn qubit_ccz() -> ExactMatrix {
    ExactMatrix::diag_zeta(Ring::Qubit, &[0, 0, 0, 0, 0, 0, 0, 4])
}

/// The `|0⟩`-controlled Z matrix on two qutrits.
pub fn ctrl0_z_matrix() -> ExactMatrix {
    let mut c = Circuit::qutrit(2);
    c.add(Gate::KetCtrl { value: 0, u: Single::ZPhase(12, 24), ctrl: 0, tgt: 1 });
    crate::sim::unitary_of(&c).expect("two wires is within the cap")
}

/// Reference generators of the six-qutrit inner code, for span comparison.
pub fn reference_622_inner() -> Result<StabilizerCode> {
    let p = |s: &str| PauliOp::parse(3, 6, s);
    Ok(StabilizerCode {
        dim: 3,
        n: 6,
        k: 2,
        stabilizers: vec![p("X1 X2 X3 X4 X5 X6")?, p("Z1 Z2 Z3")?, p("Z2 Z3^2 Z4^2 Z5")?, p("Z4 Z5 Z6")?],
        logical_x: vec![p("X1^2 X2 X4^2 X5")?, p("X1 X2 X3")?],
        logical_z: vec![p("Z4 Z5^2")?, p("Z3 Z6^2")?],
        encoder: None,
        encoder_path: None,
        provenance: "reference generators".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{emulates, truth_table, unitary_of};

    #[test]
    fn ctrl2_x_is_exact() {
        for (sign, p) in [(1, Perm::Plus), (-1, Perm::Minus)] {
            let c = ctrl2_x(sign).unwrap();
            let mut want = Circuit::qutrit(2);
            want.add(Gate::KetCtrl { value: 2, u: Single::PermX(p), ctrl: 0, tgt: 1 });
            assert_eq!(unitary_of(&c).unwrap(), unitary_of(&want).unwrap());
            let k = c.counts();
            assert_eq!((k.t_count, k.cx_count), (3, 3));
        }
    }

    #[test]
    fn and_variants_emulate_and() {
        for v in [AndVariant::Eq5, AndVariant::Eq6, AndVariant::Symmetric3, AndVariant::SymmetricTDepth1] {
            let c = build_and(v).unwrap();
            assert!(emulates(&c, &and_target(2)).unwrap(), "{v:?}");
        }
        let k = build_and(AndVariant::Eq5).unwrap().counts();
        assert_eq!((k.t_count, k.cx_count, k.two_qudit_count), (3, 4, 1));
        let k = build_and(AndVariant::SymmetricTDepth1).unwrap().counts();
        assert_eq!((k.t_count, k.t_depth), (6, 1));
    }

    #[test]
    fn eq5_table_row() {
        let t = truth_table(&build_and(AndVariant::Eq5).unwrap()).unwrap();
        let row = t.rows.iter().find(|(i, _)| i == &vec![1, 1]).unwrap();
        assert_eq!(row.1, vec![0, 1]);
    }

    #[test]
    fn or_by_de_morgan() {
        let c = build_or().unwrap();
        assert!(emulates(&c, &or_target()).unwrap());
        assert_eq!(c.counts().t_count, 3);
    }

    #[test]
    fn qubit_cz_phase() {
        let c = build_qubit_gate(QubitGate::CZ).unwrap().circuit;
        assert!(emulates(&c, &qubit_emulation_target(QubitGate::CZ)).unwrap());
        assert_eq!(c.counts().r_count, 1);
    }

    #[test]
    fn compact_ctrl2_z_matches() {
        let a = unitary_of(&ctrl2_qubit_z()).unwrap();
        let b = unitary_of(&ctrl2_qubit_z_compact()).unwrap();
        for c in 0..3 {
            for t in 0..2 {
                let i = 3 * c + t;
                assert_eq!(a.get(i, i), b.get(i, i));
            }
        }
    }
}
