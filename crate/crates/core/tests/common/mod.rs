//! Seeded random suites shared by the property tests and the acceptance run.

use std::collections::HashSet;

use qand::circuit::{BasisState, Circuit, Gate, Perm, Single};
use qand::codes::{self, StabilizerCode};
use qand::cyclo::CycloNum;
use qand::diagram::Diagram;
use qand::pauli::{self, PauliOp};
use qand::phasepoly;
use qand::sim;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn digits(mut i: usize, d: usize, n: usize) -> Vec<usize> {
    let mut v = vec![0; n];
    for slot in v.iter_mut().rev() {
        *slot = i % d;
        i /= d;
    }
    v
}

fn undigits(v: &[usize], d: usize) -> usize {
    v.iter().fold(0, |acc, &x| acc * d + x)
}

/// Walks a CX+T circuit on one basis input: output word and accumulated `ζ9` exponent.
fn classical_walk(c: &Circuit, input: &[usize]) -> (Vec<usize>, u32) {
    let mut x = input.to_vec();
    let mut phase = 0u32;
    for g in c.gates() {
        match *g {
            Gate::CX { ctrl, tgt } => x[tgt] = (x[tgt] + x[ctrl]) % 3,
            Gate::CXdg { ctrl, tgt } => x[tgt] = (x[tgt] + 2 * x[ctrl]) % 3,
            Gate::Single { op: Single::ZPhase(4, 32), wire } => phase += [0, 1, 8][x[wire]],
            Gate::Single { op: Single::ZPhase(32, 4), wire } => phase += [0, 8, 1][x[wire]],
            _ => panic!("unexpected gate {g:?}"),
        }
    }
    (x, phase % 9)
}

fn random_cx_t(rng: &mut ChaCha8Rng, n: usize, len: usize) -> Circuit {
    let mut c = Circuit::qutrit(n);
    for _ in 0..len {
        let kind = if n == 1 { rng.gen_range(0..2) } else { rng.gen_range(0..4) };
        let a = rng.gen_range(0..n);
        match kind {
            0 => {
                c.t(a);
            }
            1 => {
                c.tdg(a);
            }
            _ => {
                let b = (a + rng.gen_range(1..n)) % n;
                if kind == 2 {
                    c.cx(a, b);
                } else {
                    c.cxdg(a, b);
                }
            }
        }
    }
    c
}

/// CX+T circuits on at most three qutrits: extract, resynthesize, compare with a classical walk.
pub fn phase_polynomial_round_trip(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let n = rng.gen_range(1..=3);
        let len = rng.gen_range(0..=12);
        let c = random_cx_t(&mut rng, n, len);
        let poly = phasepoly::phase_polynomial(&c).map_err(|e| format!("case {case}: {e}\n{c}"))?;
        let rebuilt = poly.synthesize().map_err(|e| format!("case {case}: {e}"))?;
        let u = sim::unitary_of(&rebuilt).map_err(|e| e.to_string())?;
        let ring = u.ring();
        for idx in 0..3usize.pow(n as u32) {
            let input = digits(idx, 3, n);
            let (out, phase) = classical_walk(&c, &input);
            let as_u8: Vec<u8> = input.iter().map(|&v| v as u8).collect();
            if poly.phase_at(&as_u8) as u32 % 9 != phase {
                return Err(format!("case {case} input {input:?}: phase differs\n{c}"));
            }
            let row = undigits(&out, 3);
            let want = CycloNum::zeta(ring, 4 * phase as i64);
            for r in 0..u.rows() {
                let expected = if r == row { want.clone() } else { CycloNum::zero(ring) };
                if u.get(r, idx) != &expected {
                    return Err(format!("case {case} column {idx}\n{c}\nrebuilt:\n{rebuilt}"));
                }
            }
        }
    }
    Ok(())
}

fn random_encoder(rng: &mut ChaCha8Rng, d: u32, n: usize) -> Circuit {
    let mut c = Circuit::new(d, n).unwrap();
    let k = rng.gen_range(1..n);
    let mut wires: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        wires.swap(i, rng.gen_range(0..=i));
    }
    for &w in &wires[k..] {
        let state = if rng.gen_bool(0.5) { BasisState::Plus } else { BasisState::Ket(0) };
        c.add(Gate::Prep { wire: w, state });
    }
    for _ in 0..rng.gen_range(0..3 * n) {
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        match rng.gen_range(0..3) {
            0 => c.cx(a, b),
            1 => c.cxdg(a, b),
            _ => c.add(Gate::Swap { a, b }),
        };
    }
    c
}

/// Minimum weight over the normalizer minus the stabilizer group, by listing every Pauli.
fn naive_distance(code: &StabilizerCode) -> usize {
    let d = code.dim as usize;
    let n = code.n;
    let mut group: HashSet<Vec<u8>> = HashSet::new();
    let r = code.stabilizers.len();
    for combo in 0..d.pow(r as u32) {
        let coeffs = digits(combo, d, r);
        let mut v = vec![0u8; 2 * n];
        for (s, &c) in code.stabilizers.iter().zip(&coeffs) {
            for (slot, val) in v.iter_mut().zip(s.x().iter().chain(s.z())) {
                *slot = ((*slot as usize + c * *val as usize) % d) as u8;
            }
        }
        group.insert(v);
    }
    let mut best = usize::MAX;
    for idx in 1..d.pow(2 * n as u32) {
        let v: Vec<u8> = digits(idx, d, 2 * n).into_iter().map(|x| x as u8).collect();
        let p = PauliOp::new(code.dim, v[..n].to_vec(), v[n..].to_vec(), 0).unwrap();
        if p.weight() >= best || group.contains(&v) {
            continue;
        }
        if code.stabilizers.iter().all(|s| pauli::symplectic(s, &p).unwrap() == 0) {
            best = p.weight();
        }
    }
    best
}

/// Random CSS codes from CX encoders: bounded search against listing every Pauli.
pub fn distance_matches_naive(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let (d, n) = if case % 2 == 0 { (3, rng.gen_range(2..=4)) } else { (2, rng.gen_range(2..=5)) };
        let enc = random_encoder(&mut rng, d, n);
        let code = codes::read_code_from_gpf(&enc).map_err(|e| format!("case {case}: {e}"))?;
        let want = naive_distance(&code);
        let got = code.distance(n).map_err(|e| e.to_string())?.map(|w| w.weight);
        if got != Some(want) {
            return Err(format!("case {case}: search {got:?}, oracle {want}\n{}", code.to_text()));
        }
        if want > 1 && code.distance(want - 1).map_err(|e| e.to_string())?.is_some() {
            return Err(format!("case {case}: logical lighter than {want}"));
        }
    }
    Ok(())
}

fn random_single(rng: &mut ChaCha8Rng, d: u32) -> Single {
    let m = if d == 3 { 36 } else { 8 };
    match rng.gen_range(0..6) {
        0 => Single::ZPhase(rng.gen_range(0..m), if d == 3 { rng.gen_range(0..m) } else { 0 }),
        1 if d == 3 => Single::XPhase(4 * rng.gen_range(0..9), 4 * rng.gen_range(0..9)),
        2 => Single::H,
        3 => Single::Hdg,
        4 => Single::PermX(if rng.gen_bool(0.5) { Perm::Plus } else { Perm::Minus }),
        _ => Single::ZPhase(if d == 3 { 4 } else { 1 }, if d == 3 { 32 } else { 0 }),
    }
}

fn random_circuit(rng: &mut ChaCha8Rng, d: u32) -> Circuit {
    let n = rng.gen_range(1..=3);
    let mut c = Circuit::new(d, n).unwrap();
    let mut opened = vec![false; n];
    for (w, slot) in opened.iter_mut().enumerate() {
        if n > 1 && rng.gen_bool(0.2) {
            let state = if rng.gen_bool(0.5) { BasisState::Plus } else { BasisState::Ket(rng.gen_range(0..d as u8)) };
            c.add(Gate::Prep { wire: w, state });
            *slot = true;
        }
    }
    for _ in 0..rng.gen_range(1..=10) {
        let a = rng.gen_range(0..n);
        if n == 1 || rng.gen_bool(0.5) {
            c.add(Gate::Single { op: random_single(rng, d), wire: a });
            continue;
        }
        let b = (a + rng.gen_range(1..n)) % n;
        let g = match rng.gen_range(0..5) {
            0 => Gate::CX { ctrl: a, tgt: b },
            1 => Gate::CXdg { ctrl: a, tgt: b },
            2 => Gate::Swap { a, b },
            3 => Gate::KetCtrl { value: rng.gen_range(0..d as u8), u: random_single(rng, d), ctrl: a, tgt: b },
            _ => Gate::LambdaCtrl { u: Single::ZPhase(if d == 3 { 12 } else { 4 }, if d == 3 { 24 } else { 0 }), ctrl: a, tgt: b },
        };
        c.add(g);
    }
    let open_wires = opened.iter().filter(|o| !**o).count();
    if n > 1 && open_wires > 0 && rng.gen_bool(0.3) {
        let w = rng.gen_range(0..n);
        c.add(Gate::Postselect { wire: w, state: BasisState::Ket(rng.gen_range(0..d as u8)) });
    }
    c
}

/// Random circuits with boundaries: diagram contraction against dense simulation, up to scalar.
pub fn diagram_matches_simulation(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    while checked < cases {
        let d = if checked % 4 == 3 { 2 } else { 3 };
        let c = random_circuit(&mut rng, d);
        if c.validate().is_err() {
            continue;
        }
        let u = sim::unitary_of(&c).map_err(|e| e.to_string())?;
        let v = Diagram::from_circuit(&c).and_then(|dg| dg.evaluate()).map_err(|e| format!("case {checked}: {e}\n{c}"))?;
        let agree = if u.is_zero() { v.is_zero() } else { v.equal_up_to_scalar(&u).is_some() };
        if !agree {
            return Err(format!("case {checked}\n{c}"));
        }
        checked += 1;
    }
    Ok(())
}
