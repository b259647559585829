use qand::circuit::{Circuit, Gate, Perm, Single};
use qand::codes;
use qand::pauli::PauliOp;
use qand::protocols::{self, Basis, CorrectionTable, MeasuredLogical, Verdict};
use qand::synth;

fn is_pauli_or_cx(g: &Gate) -> bool {
    match *g {
        Gate::CX { .. } | Gate::CXdg { .. } => true,
        Gate::Single { op: Single::PermX(Perm::Plus | Perm::Minus), .. } => true,
        Gate::Single { op: Single::ZPhase(a, b), .. } => a % 12 == 0 && (b + 36 - 2 * a % 36) % 36 == 0,
        _ => false,
    }
}

#[test]
fn zcz_injection_is_deterministic() {
    let cert = protocols::verify_zcz_injection().unwrap();
    assert!(cert.passed(), "{cert}");
    assert_eq!(cert.branches.len(), 18);
    for a in 0..3u8 {
        for b in 0..3u8 {
            let label = format!("outcome ({a},{b})");
            assert!(cert.branches.iter().any(|br| br.label.starts_with(&label) && br.verdict == Verdict::Pass), "{label}");
        }
    }
}

#[test]
fn zcz_corrupted_entry_is_caught() {
    let table = protocols::zcz_injection_setup().unwrap().derive_corrections().unwrap();
    for outcome in table.entries.keys() {
        let cert = protocols::verify_zcz_injection_with(&table.corrupted(outcome)).unwrap();
        let idx = cert.first_failure().expect("corruption must be caught");
        let want = outcome[0] as usize * 3 + outcome[1] as usize;
        assert_eq!(idx, want, "{outcome:?}");
    }
}

#[test]
fn correction_table_text_round_trips() {
    let table = protocols::and_injection_setup([Basis::Z, Basis::X]).unwrap().derive_corrections().unwrap();
    let back = CorrectionTable::parse(&table.to_text()).unwrap();
    assert_eq!(back, table);
}

#[test]
fn and_injection_selects_one_basis_assignment() {
    let cert = protocols::verify_and_injection().unwrap();
    assert!(cert.passed(), "{cert}");
    assert!(cert.notes.iter().any(|n| n.contains("wire 1 Z, wire 2 X selected")), "{cert}");
    assert!(cert.notes.iter().any(|n| n.contains("rejected")), "{cert}");
    assert_eq!(cert.branches.iter().filter(|b| b.label.starts_with("with CX: ")).count(), 9);
}

#[test]
fn and_injection_other_assignment_fails() {
    let setup = protocols::and_injection_setup([Basis::X, Basis::Z]).unwrap();
    let outcome = setup.derive_corrections().and_then(|t| protocols::verify_and_injection_with([Basis::X, Basis::Z], &t));
    if let Ok(cert) = outcome {
        assert!(!cert.passed());
    }
}

#[test]
fn and_corrections_are_pauli_cx_and_one_z2b2b() {
    let table = protocols::and_injection_setup([Basis::Z, Basis::X]).unwrap().derive_corrections().unwrap();
    for (outcome, c) in &table.entries {
        let b = outcome[1] as u32;
        let odd: Vec<&Gate> = c.gates().iter().filter(|g| !is_pauli_or_cx(g)).collect();
        if b == 0 {
            assert!(odd.is_empty(), "{outcome:?}: {c}");
            continue;
        }
        let [Gate::Single { op: Single::ZPhase(p, q), wire: 0 }] = odd.as_slice() else {
            panic!("{outcome:?}: expected one diagonal gate on wire 1, got {c}");
        };
        let z2b = (24 * b) % 36;
        let fits = (0..3u32).any(|j| (p + 12 * j) % 36 == z2b && (q + 24 * j) % 36 == z2b);
        assert!(fits, "{outcome:?}: ZPH({p},{q}) is not Z(2b,2b) up to a Pauli Z");
    }
}

#[test]
fn and_corrupted_entries_are_caught() {
    let bases = [Basis::Z, Basis::X];
    let table = protocols::and_injection_setup(bases).unwrap().derive_corrections().unwrap();
    for outcome in table.entries.keys() {
        let cert = protocols::verify_and_injection_with(bases, &table.corrupted(outcome)).unwrap();
        assert!(!cert.passed(), "{outcome:?}");
    }
}

#[test]
fn ccz_protocols_both_dimensions() {
    for d in [2u32, 3] {
        let cert = protocols::verify_ccz_protocols(d).unwrap();
        assert!(cert.passed(), "{cert}");
        let outcomes = cert.branches.iter().filter(|b| b.label.starts_with("outcome")).count();
        assert_eq!(outcomes, (d as usize).pow(3), "d={d}");
    }
}

#[test]
fn ccz_is_not_clifford_and_bad_tables_fail() {
    for d in [2u32, 3] {
        let ccz = protocols::ccz_matrix(d).unwrap();
        assert!(!protocols::is_clifford(&ccz, d as u8, 3));
        let table = protocols::ccz_injection_setup(d).unwrap().derive_corrections().unwrap();
        let first = table.entries.keys().last().unwrap().clone();
        assert!(!protocols::verify_ccz_injection_with(d, &table.corrupted(&first)).unwrap().passed());
    }
}

#[test]
fn distillation_identities() {
    assert!(protocols::distillation_832().unwrap().passed());
    assert!(protocols::distillation_622().unwrap().passed());
    assert!(protocols::distillation_trivial(2).unwrap().passed());
}

fn layer_832_flipped(flips: &[usize]) -> Circuit {
    let mut layer = Circuit::qubit(8);
    for i in 0..8usize {
        if (i.count_ones() % 2 == 0) != flips.contains(&i) {
            layer.t(i);
        } else {
            layer.tdg(i);
        }
    }
    layer
}

#[test]
fn single_flipped_input_is_filtered_by_postselection() {
    let code = synth::code_832().unwrap();
    for v in 0..8 {
        let cert = protocols::verify_distillation(&code, &layer_832_flipped(&[v]), &synth::qubit_ccz()).unwrap();
        assert!(cert.passed(), "vertex {v}");
    }
}

#[test]
fn double_flipped_input_fails() {
    let code = synth::code_832().unwrap();
    let cert = protocols::verify_distillation(&code, &layer_832_flipped(&[0, 1]), &synth::qubit_ccz()).unwrap();
    assert!(!cert.passed());
    let inner = codes::read_code_from_gpf(&synth::encoder_622_inner().unwrap()).unwrap();
    let identity = qand::matrix::ExactMatrix::identity(qand::cyclo::Ring::Qutrit, 9);
    assert!(!protocols::verify_distillation(&inner, &synth::layer_622_circuit().unwrap(), &identity).unwrap().passed());
}

#[test]
fn sp_gadget_on_support_three_six() {
    let cert = protocols::sp_gadget_622().unwrap();
    assert!(cert.passed(), "{cert}");
    assert!(cert.notes.iter().any(|n| n.contains("Z3 Z6^2")));
    assert!(cert.branch("Π² = Π").is_some());
}

#[test]
fn sp_gadget_on_wrong_support_fails_the_physical_check() {
    let code = codes::read_code_from_gpf(&synth::encoder_622_inner().unwrap()).unwrap();
    let wrong = PauliOp::parse(3, 6, "Z3 Z5^2").unwrap();
    let cert = protocols::verify_sp_gadget_support(&code, 1, &wrong).unwrap();
    let idx = cert.first_failure().expect("wrong support must fail");
    assert!(cert.branches[idx].label.starts_with("physical gadget"), "{cert}");
}

#[test]
fn logical_measurement_injection() {
    let c321 = codes::read_code_from_gpf(&synth::encoder_321().unwrap()).unwrap();
    let c622 = codes::read_code_from_gpf(&synth::encoder_622_inner().unwrap()).unwrap();
    for code in [&c321, &c622] {
        for which in [MeasuredLogical::ZFirst, MeasuredLogical::XLast] {
            let cert = protocols::verify_logical_measurement_injection(code, which).unwrap();
            assert!(cert.passed(), "[[{}]] {which}: {cert}", code.n);
            assert!(cert.branches.iter().any(|b| b.verdict == Verdict::Pass));
        }
    }
}

#[test]
fn logical_measurement_with_bad_decoder_fails() {
    let code = codes::read_code_from_gpf(&synth::encoder_321().unwrap()).unwrap();
    for which in [MeasuredLogical::ZFirst, MeasuredLogical::XLast] {
        let good = protocols::derive_decoder(&code, which).unwrap();
        let swapped: protocols::DecodeTable = good.iter().map(|(k, v)| (k.clone(), (2 * v) % 3)).collect();
        assert!(!protocols::verify_logical_measurement_with(&code, which, &swapped).unwrap().passed(), "{which}");
        let mut one = good.clone();
        let zero = vec![0u8; code.n];
        *one.get_mut(&zero).unwrap() = 1;
        assert!(!protocols::verify_logical_measurement_with(&code, which, &one).unwrap().passed(), "{which}");
    }
}

#[test]
fn every_named_protocol_passes() {
    for name in protocols::PROTOCOL_NAMES {
        let cert = protocols::run_named(name, None).unwrap();
        assert!(cert.passed(), "{name}: {cert}");
    }
    assert!(protocols::run_named("nope", None).is_err());
}
