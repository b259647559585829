//! The shipped `data/v1` tree must match what the builders produce.
//! Run with `QAND_WRITE_DATA=1` to regenerate it.

use std::path::{Path, PathBuf};

use qand::circuit::Circuit;
use qand::codes::{self, StabilizerCode};
use qand::phasepoly::{self, PhaseGadget};
use qand::protocols::{self, Basis, CorrectionTable};
use qand::sim;
use qand::synth::{self, AndVariant, QubitGate};

fn data_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/v1")
}

fn with_encoder(mut code: StabilizerCode, encoder: &str, provenance: &str) -> StabilizerCode {
    code.encoder_path = Some(format!("../circuits/{encoder}"));
    code.provenance = provenance.to_string();
    code
}

fn qubit_ccz_circuit() -> Circuit {
    let mut gadgets = Vec::new();
    for mask in 1u32..8 {
        let parity: Vec<u8> = (0..3).map(|i| ((mask >> (2 - i)) & 1) as u8).collect();
        let t = if mask.count_ones() % 2 == 1 { 1 } else { 7 };
        gadgets.push(PhaseGadget::new(2, parity, t).unwrap());
    }
    phasepoly::gadget_circuit(2, 3, &gadgets).unwrap()
}

fn all_t(n: usize) -> Circuit {
    let mut c = Circuit::qutrit(n);
    for w in 0..n {
        c.t(w);
    }
    c
}

fn artifacts() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    let mut circuit = |name: &str, c: Circuit| out.push((format!("circuits/{name}"), c.to_string()));

    circuit("and_eq5.qc", synth::build_and(AndVariant::Eq5).unwrap());
    circuit("and_eq6.qc", synth::build_and(AndVariant::Eq6).unwrap());
    circuit("and_symmetric3.qc", synth::build_and(AndVariant::Symmetric3).unwrap());
    circuit("and_tdepth1.qc", synth::build_and(AndVariant::SymmetricTDepth1).unwrap());
    circuit("or.qc", synth::build_or().unwrap());
    circuit("ctrl0_z.qc", synth::ctrl0_z(1).unwrap());
    circuit("ctrl2_x.qc", synth::ctrl2_x(1).unwrap());
    for g in [QubitGate::CX, QubitGate::CZ, QubitGate::CCX, QubitGate::CCZ] {
        let name = format!("qubit_{}.qc", g.name().to_lowercase());
        circuit(&name, synth::build_qubit_gate(g).unwrap().circuit);
    }
    circuit("qubit_plus.qc", synth::qubit_plus().unwrap());
    circuit("qubit_minus.qc", synth::qubit_minus().unwrap());

    circuit("encoder_321.qc", synth::encoder_321().unwrap());
    circuit("encoder_622_inner.qc", synth::encoder_622_inner().unwrap());
    circuit("encoder_622.qc", synth::code_622().unwrap().encoder.unwrap());
    circuit("encoder_832.qc", synth::code_832().unwrap().encoder.unwrap());
    circuit("encoder_812_qrm.qc", synth::code_812_qrm().unwrap().encoder.unwrap());

    let layer_321 = {
        let code = codes::read_code_from_gpf(&synth::encoder_321().unwrap()).unwrap();
        let t = synth::transversal_t_layer(&code, &synth::ctrl0_z_table()).unwrap();
        let mut c = Circuit::qutrit(3);
        for (w, &e) in t.iter().enumerate() {
            match e {
                1 => {
                    c.t(w);
                }
                8 => {
                    c.tdg(w);
                }
                _ => {}
            }
        }
        c
    };
    circuit("layer_321.qc", layer_321);
    circuit("layer_622.qc", synth::layer_622_circuit().unwrap());
    circuit("layer_832.qc", synth::layer_832());
    circuit("layer_812_t.qc", all_t(8));

    let mut logical_and = synth::outer_clifford();
    logical_and.append(&synth::ctrl0_z(1).unwrap()).unwrap();
    logical_and.append(&synth::outer_clifford().adjoint()).unwrap();
    circuit("logical_and.qc", logical_and);
    circuit("logical_ccz_qubit.qc", qubit_ccz_circuit());
    let mut tdg = Circuit::qutrit(1);
    tdg.tdg(0);
    circuit("logical_tdg.qc", tdg);

    let mut code = |name: &str, c: StabilizerCode| out.push((format!("codes/{name}"), c.to_text()));
    let c321 = codes::read_code_from_gpf(&synth::encoder_321().unwrap()).unwrap();
    code("321.code", with_encoder(c321, "encoder_321.qc", "three-qutrit code read off the symmetric AND encoder"));
    let inner = codes::read_code_from_gpf(&synth::encoder_622_inner().unwrap()).unwrap();
    code("622_inner.code", with_encoder(inner, "encoder_622_inner.qc", "six-qutrit inner CSS code"));
    code(
        "622.code",
        with_encoder(synth::code_622().unwrap(), "encoder_622.qc", "six-qutrit code with logicals dressed by the outer Clifford"),
    );
    code("832.code", with_encoder(synth::code_832().unwrap(), "encoder_832.qc", "qubit cube code"));
    code(
        "812_qrm.code",
        with_encoder(
            synth::code_812_qrm().unwrap(),
            "encoder_812_qrm.qc",
            "external literature data: qutrit quantum Reed-Muller [[8,1,2]] code\nnot derived in this repository; validated here only by the stabilizer and distance checks",
        ),
    );

    let mut table = |name: &str, t: CorrectionTable| out.push((format!("protocols/{name}"), t.to_text()));
    table("zcz.corrections", protocols::zcz_injection_setup().unwrap().derive_corrections().unwrap());
    table("and.corrections", protocols::and_injection_setup([Basis::Z, Basis::X]).unwrap().derive_corrections().unwrap());
    table("ccz_d2.corrections", protocols::ccz_injection_setup(2).unwrap().derive_corrections().unwrap());
    table("ccz_d3.corrections", protocols::ccz_injection_setup(3).unwrap().derive_corrections().unwrap());
    out
}

#[test]
fn shipped_data_matches_builders() {
    let root = data_root();
    let write = std::env::var_os("QAND_WRITE_DATA").is_some();
    let mut stale = Vec::new();
    for (rel, text) in artifacts() {
        let path = root.join(&rel);
        if write {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &text).unwrap();
        } else if std::fs::read_to_string(&path).ok().as_deref() != Some(text.as_str()) {
            stale.push(rel);
        }
    }
    assert!(stale.is_empty(), "stale data files (regenerate with QAND_WRITE_DATA=1): {stale:?}");
}

#[test]
fn shipped_codes_parse_and_validate() {
    let dir = data_root().join("codes");
    for name in ["321", "622_inner", "622", "832", "812_qrm"] {
        let text = std::fs::read_to_string(dir.join(format!("{name}.code"))).unwrap();
        let code = StabilizerCode::parse(&text, Some(&dir)).unwrap();
        assert!(code.validate().is_valid(), "{name}");
        assert!(code.encoder.is_some(), "{name}");
        assert!(codes::projector_matches_encoder(&code).unwrap(), "{name}");
    }
}

#[test]
fn shipped_circuits_round_trip() {
    for (rel, text) in artifacts().into_iter().filter(|(r, _)| r.starts_with("circuits/")) {
        let c = Circuit::parse(&text).unwrap_or_else(|e| panic!("{rel}: {e}"));
        assert_eq!(c.to_string(), text, "{rel}");
    }
}

#[test]
fn shipped_layers_implement_their_logicals() {
    let root = data_root();
    let load_code = |n: &str| {
        let dir = root.join("codes");
        StabilizerCode::parse(&std::fs::read_to_string(dir.join(n)).unwrap(), Some(&dir)).unwrap()
    };
    let load_circuit = |n: &str| Circuit::parse(&std::fs::read_to_string(root.join("circuits").join(n)).unwrap()).unwrap();
    for (code, layer, logical) in [
        ("321.code", "layer_321.qc", "ctrl0_z.qc"),
        ("622.code", "layer_622.qc", "logical_and.qc"),
        ("832.code", "layer_832.qc", "logical_ccz_qubit.qc"),
        ("812_qrm.code", "layer_812_t.qc", "logical_tdg.qc"),
    ] {
        let u = sim::unitary_of(&load_circuit(logical)).unwrap();
        let r = codes::transversal_check(&load_code(code), &load_circuit(layer), &u, false).unwrap();
        assert!(r.holds, "{code} with {layer}");
    }
}
