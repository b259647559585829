use std::path::Path;

use qand::codes::{self, StabilizerCode};
use qand::synth;
use qand::PauliOp;

fn load(name: &str) -> StabilizerCode {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/v1/codes");
    StabilizerCode::parse(&std::fs::read_to_string(dir.join(name)).unwrap(), Some(&dir)).unwrap()
}

fn distance(c: &StabilizerCode) -> usize {
    c.distance(c.n).unwrap().expect("some logical exists").weight
}

#[test]
fn toy_concatenation_multiplies_distance() {
    let (outer, inner) = (load("toy_422.code"), load("toy_412.code"));
    assert!(outer.validate().is_valid() && inner.validate().is_valid());
    let cat = codes::concatenate(&outer, &inner).unwrap();
    assert!(cat.validate().is_valid());
    assert_eq!((cat.n, cat.k), (16, 2));
    assert_eq!((distance(&outer), distance(&inner), distance(&cat)), (2, 2, 4));
}

#[test]
fn trivial_inner_code_changes_nothing() {
    let outer = synth::code_622().unwrap();
    let cat = codes::concatenate(&outer, &StabilizerCode::trivial(3, 1)).unwrap();
    assert!(cat.same_code(&outer));
}

#[test]
fn repetition_inner_code_keeps_outer_distance_one() {
    let outer = codes::read_code_from_gpf(&synth::encoder_321().unwrap()).unwrap();
    let p = |s: &str| PauliOp::parse(3, 2, s).unwrap();
    let rep = StabilizerCode {
        dim: 3,
        n: 2,
        k: 1,
        stabilizers: vec![p("Z1 Z2^2")],
        logical_x: vec![p("X1 X2")],
        logical_z: vec![p("Z1")],
        encoder: None,
        encoder_path: None,
        provenance: String::new(),
    };
    assert!(rep.validate().is_valid());
    let cat = codes::concatenate(&outer, &rep).unwrap();
    assert!(cat.validate().is_valid());
    assert_eq!(distance(&cat), 1);
}

#[test]
fn dropping_an_x_stabilizer_lowers_the_distance() {
    let mut code = codes::read_code_from_gpf(&synth::encoder_622_inner().unwrap()).unwrap();
    assert_eq!(distance(&code), 2);
    let i = code.stabilizers.iter().position(|s| s.is_x_type()).unwrap();
    code.stabilizers.remove(i);
    code.encoder = None;
    assert_eq!(distance(&code), 1);
}
