mod common;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use qand::circuit::{Circuit, Single};
use qand::codes::{self, StabilizerCode};
use qand::diagram;
use qand::protocols::{self, Basis, MeasuredLogical};
use qand::report::{self, Status};
use qand::sim::{self, MeasureBasis, Probability, SimConfig, StateVec};
use qand::synth;
use qand::{CycloNum, ExactMatrix, PauliOp, Ring};

type Check = Result<String, String>;

fn data_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/v1")
}

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let spent = start.elapsed();
    ensure(spent < limit, format!("took {spent:.2?}, limit {limit:?}"))?;
    Ok(format!("{spent:.2?}"))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let r = report::table1().map_err(e2s)?;
    ensure(r.passed() && r.statuses.len() == 2, format!("truth tables differ\n{}", r.text))?;
    let time = within(start, Duration::from_secs(1))?;
    Ok(format!("both AND truth tables match, 18 rows, {time}"))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let rows = report::table2_rows().map_err(e2s)?;
    let in_scope = |name: &str| !(name.starts_with("C^") && name.contains('Z'));
    let mut checked = 0;
    for r in rows.iter().filter(|r| in_scope(&r.name)) {
        ensure(r.emulates, format!("{}: emulation fails", r.name))?;
        ensure(r.status == Status::Pass, format!("{}: {} ({})", r.name, r.status, r.remark))?;
        checked += 1;
    }
    let must = ["AND", "OR", "6-ary AND", "CX", "CZ", "CCX", "CCZ", "C^5X linear", "C^5X log"];
    for name in must {
        ensure(rows.iter().any(|r| r.name == name), format!("row {name} missing"))?;
    }
    let time = within(start, Duration::from_secs(30))?;
    Ok(format!("{checked} rows emulate with printed counts, {time}"))
}

fn criterion_3() -> Check {
    let read = codes::read_code_from_gpf(&synth::encoder_321().map_err(e2s)?).map_err(e2s)?;
    let p = |s: &str| PauliOp::parse(3, 3, s).map_err(e2s);
    let printed = StabilizerCode {
        dim: 3,
        n: 3,
        k: 2,
        stabilizers: vec![p("Z1 Z2 Z3")?],
        logical_x: vec![p("X1 X3^2")?, p("X1 X2 X3")?],
        logical_z: vec![p("Z1 Z2^2")?, p("Z2")?],
        encoder: None,
        encoder_path: None,
        provenance: String::new(),
    };
    ensure(read.same_code(&printed), "read-off code differs from the printed one")?;
    let w = read.distance(3).map_err(e2s)?.ok_or("no logical up to weight 3")?;
    ensure(w.weight == 1, format!("distance {}", w.weight))?;
    let z2 = p("Z2")?;
    let commutes = read.stabilizers.iter().all(|s| qand::pauli::symplectic(s, &z2).unwrap_or(1) == 0);
    let nontrivial = !read.equivalent_mod_stabilizers(&z2, &PauliOp::identity(3, 3));
    ensure(commutes && nontrivial, "Z2 is not a nontrivial logical")?;
    Ok(format!("span equality holds, distance 1, Z2 is a weight-1 logical (search witness {})", w.operator))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let read = codes::read_code_from_gpf(&synth::encoder_622_inner().map_err(e2s)?).map_err(e2s)?;
    ensure(read.same_code(&synth::reference_622_inner().map_err(e2s)?), "inner code differs from the printed blocks")?;
    let code = synth::code_622().map_err(e2s)?;
    ensure(code.distance(1).map_err(e2s)?.is_none(), "weight-1 logical found")?;
    let w = code.distance(2).map_err(e2s)?.ok_or("no weight-2 logical")?;
    let layer = synth::layer_622_circuit().map_err(e2s)?;
    let r = codes::transversal_check(&code, &layer, &synth::logical_and_unitary().map_err(e2s)?, false).map_err(e2s)?;
    ensure(r.holds, "layer does not implement logical AND")?;
    let time = within(start, Duration::from_secs(60))?;
    Ok(format!("blocks match, distance 2 (witness {}), layer gives logical AND, {time}", w.operator))
}

fn criterion_5() -> Check {
    let code = synth::code_832().map_err(e2s)?;
    let r = codes::transversal_check(&code, &synth::layer_832(), &synth::qubit_ccz(), false).map_err(e2s)?;
    ensure(r.holds, "layer does not implement logical CCZ")?;
    let id = ExactMatrix::identity(Ring::Qubit, 16);
    let nest4 = diagram::spider_nest(4).and_then(|d| d.evaluate()).map_err(e2s)?;
    ensure(nest4.equal_up_to_scalar(&id).is_some(), "four-wire nest is not the identity")?;
    let nest3 = diagram::spider_nest(3).and_then(|d| d.evaluate()).map_err(e2s)?;
    let ccz = ExactMatrix::diag_zeta(Ring::Qubit, &[0, 0, 0, 0, 0, 0, 0, 4]);
    ensure(nest3.equal_up_to_scalar(&ccz).is_some(), "three-wire nest is not CCZ")?;
    Ok("layer gives logical CCZ; gadget nest is the identity on 4 wires (on 3 wires it is CCZ)".into())
}

fn load_code(name: &str) -> Option<Result<StabilizerCode, String>> {
    let dir = data_root().join("codes");
    let text = std::fs::read_to_string(dir.join(name)).ok()?;
    Some(StabilizerCode::parse(&text, Some(&dir)).map_err(e2s))
}

fn toy_distance_product() -> Result<(), String> {
    let outer = load_code("toy_422.code").ok_or("toy_422.code missing")??;
    let inner = load_code("toy_412.code").ok_or("toy_412.code missing")??;
    let d = |c: &StabilizerCode| c.distance(c.n).map_err(e2s)?.map(|w| w.weight).ok_or("no logical".to_string());
    let cat = codes::concatenate(&outer, &inner).map_err(e2s)?;
    ensure(cat.validate().is_valid(), "toy concatenation invalid")?;
    let (a, b, c) = (d(&outer)?, d(&inner)?, d(&cat)?);
    ensure(c == a * b, format!("toy distances {a} x {b} but concatenation has {c}"))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    toy_distance_product()?;
    let (Some(outer), Some(inner)) = (load_code("622.code"), load_code("812_qrm.code")) else {
        return Ok("external inner code absent; toy distance product 2 x 2 = 4 holds".into());
    };
    let (outer, inner) = (outer?, inner?);
    ensure(inner.validate().is_valid(), "inner data file does not validate")?;
    let tdg = synth::tdg_table();
    ensure(codes::transversal_phase_check(&inner, &[1; 8], &tdg).map_err(e2s)?, "T on every site is not logical T dagger")?;
    let cat = codes::concatenate(&outer, &inner).map_err(e2s)?;
    ensure(cat.n == 48 && cat.k == 2, format!("[[{}, {}]]", cat.n, cat.k))?;
    ensure(cat.validate().is_valid(), "[[48,2]] does not validate")?;
    if let Some(w) = cat.distance(3).map_err(e2s)? {
        return Err(format!("logical of weight {}: {}", w.weight, w.operator));
    }
    let time = within(start, Duration::from_secs(600))?;
    Ok(format!("[[48,2]] validates, no logical of weight <= 3, inner T layer gives T dagger, toy product holds, {time}"))
}

fn criterion_7() -> Check {
    let mut passed = 0;
    for name in protocols::PROTOCOL_NAMES {
        let cert = protocols::run_named(name, None).map_err(e2s)?;
        ensure(cert.passed(), format!("{name}\n{cert}"))?;
        passed += 1;
    }
    let mut caught = 0;
    let mut expect_fail = |what: &str, passed: bool| -> Result<(), String> {
        ensure(!passed, format!("negative control not caught: {what}"))?;
        caught += 1;
        Ok(())
    };
    let zcz = protocols::zcz_injection_setup().and_then(|s| s.derive_corrections()).map_err(e2s)?;
    for outcome in zcz.entries.keys() {
        let cert = protocols::verify_zcz_injection_with(&zcz.corrupted(outcome)).map_err(e2s)?;
        expect_fail("corrupted ZCZ entry", cert.passed())?;
    }
    let bases = [Basis::Z, Basis::X];
    let and = protocols::and_injection_setup(bases).and_then(|s| s.derive_corrections()).map_err(e2s)?;
    for outcome in and.entries.keys() {
        let cert = protocols::verify_and_injection_with(bases, &and.corrupted(outcome)).map_err(e2s)?;
        expect_fail("corrupted AND entry", cert.passed())?;
    }
    for d in [2u32, 3] {
        let ccz = protocols::ccz_matrix(d).map_err(e2s)?;
        expect_fail("CCZ taken for a Clifford", protocols::is_clifford(&ccz, d as u8, 3))?;
        let t = protocols::ccz_injection_setup(d).and_then(|s| s.derive_corrections()).map_err(e2s)?;
        let last = t.entries.keys().last().ok_or("empty table")?.clone();
        let cert = protocols::verify_ccz_injection_with(d, &t.corrupted(&last)).map_err(e2s)?;
        expect_fail("corrupted CCZ entry", cert.passed())?;
    }
    let mut layer = Circuit::qubit(8);
    for i in 0..8usize {
        if (i.count_ones() % 2 == 0) != (i < 2) {
            layer.t(i);
        } else {
            layer.tdg(i);
        }
    }
    let cube = synth::code_832().map_err(e2s)?;
    let cert = protocols::verify_distillation(&cube, &layer, &synth::qubit_ccz()).map_err(e2s)?;
    expect_fail("two flipped distillation inputs", cert.passed())?;
    let inner = codes::read_code_from_gpf(&synth::encoder_622_inner().map_err(e2s)?).map_err(e2s)?;
    let wrong = PauliOp::parse(3, 6, "Z3 Z5^2").map_err(e2s)?;
    expect_fail("SP gadget on the wrong support", protocols::verify_sp_gadget_support(&inner, 1, &wrong).map_err(e2s)?.passed())?;
    let c321 = codes::read_code_from_gpf(&synth::encoder_321().map_err(e2s)?).map_err(e2s)?;
    for which in [MeasuredLogical::ZFirst, MeasuredLogical::XLast] {
        let good = protocols::derive_decoder(&c321, which).map_err(e2s)?;
        let bad: protocols::DecodeTable = good.iter().map(|(k, v)| (k.clone(), (2 * v) % 3)).collect();
        expect_fail("scaled decoder", protocols::verify_logical_measurement_with(&c321, which, &bad).map_err(e2s)?.passed())?;
    }
    Ok(format!("{passed} protocol verifiers pass, {caught} negative controls caught"))
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn plus_variant(c: &Circuit, sign: i64) -> Result<(), String> {
    let one = CycloNum::one(Ring::Qutrit);
    let amps = sim::run(c, &[one], &SimConfig::default()).map_err(e2s)?;
    let state = StateVec::new(Ring::Qutrit, 2, amps).map_err(e2s)?;
    let (post, p) = sim::branch(&state, 1, 0, MeasureBasis::Z).map_err(e2s)?;
    let Probability::Rational(p) = p else {
        return Err(format!("probability {p} is irrational"));
    };
    ensure(p == BigRational::new(2.into(), 3.into()), format!("outcome-0 probability {p}"))?;
    let a = post.amps();
    let (a0, a1, a2) = (&a[0], &a[3], &a[6]);
    ensure(a2.is_zero(), "post-state has weight on |2>")?;
    ensure(*a1 == CycloNum::from_int(Ring::Qutrit, sign) * a0, "relative sign is wrong")?;
    let w0 = a0.norm_sq().to_rational().ok_or("irrational weight")? / &p;
    ensure(w0 == half(), format!("normalized |0> weight {w0}"))?;
    Ok(())
}

fn criterion_8() -> Check {
    plus_variant(&synth::qubit_plus().map_err(e2s)?, 1)?;
    plus_variant(&synth::qubit_minus().map_err(e2s)?, -1)?;
    Ok("probability 2/3, post-states (|0>+|1>)/sqrt2 and (|0>-|1>)/sqrt2".into())
}

fn criterion_9() -> Check {
    for op in [Single::ZPhase(4, 32), Single::ZPhase(32, 4)] {
        for row in sim::single_matrix(op, Ring::Qutrit) {
            ensure(row.iter().all(|x| x.in_clifford_t_ring()), format!("{op:?} entry rejected"))?;
        }
    }
    ensure(!CycloNum::inv_sqrt_dim(Ring::Qutrit).in_clifford_t_ring(), "1/sqrt3 accepted")?;
    let h = sim::single_matrix(Single::H, Ring::Qutrit);
    ensure(h.iter().flatten().all(|x| !x.in_clifford_t_ring()), "an H entry was accepted")?;
    let notes = report::structural_notes();
    ensure(notes.iter().any(|n| n.starts_with("qubit H")), "qubit H note missing")?;
    let t2 = report::table2().map_err(e2s)?;
    ensure(t2.text.contains("qubit H"), "table2 report omits the qubit H note")?;
    Ok("T entries accepted, 1/sqrt3 and H entries rejected, qubit H recorded as a structural note".into())
}

fn criterion_10() -> Check {
    common::phase_polynomial_round_trip(200, 0x5eed_0001)?;
    common::distance_matches_naive(50, 0x5eed_0002)?;
    common::diagram_matches_simulation(100, 0x5eed_0003)?;
    Ok("200 phase-polynomial round trips, 50 distance oracle agreements, 100 diagram agreements".into())
}

fn main() -> ExitCode {
    let criteria: [fn() -> Check; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let mut failed = 0;
    for (i, check) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
