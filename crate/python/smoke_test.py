"""Smoke test for the qand extension module; run after `pip install --no-build-isolation crates/py`."""

import pathlib

import qand

DATA = pathlib.Path(__file__).resolve().parent.parent / "data" / "v1"


def main() -> None:
    t = qand.Cyclo.zeta(4)
    assert (t ** 9) == qand.Cyclo(1)
    assert t.in_clifford_t_ring()
    assert not qand.Cyclo.inv_sqrt_dim().in_clifford_t_ring()

    and_eq5 = qand.Circuit.load(str(DATA / "circuits" / "and_eq5.qc"))
    rows = [tuple(i) + tuple(o) for i, o in and_eq5.truth_table()]
    assert rows[2] == (0, 2, 1, 2), rows
    assert len(rows) == 9

    counts = qand.synthesize("nary-and", 3).counts()
    assert (counts["T"], counts["CX"]) == (6, 8), counts

    code = qand.Code.load(str(DATA / "codes" / "622.code"))
    assert code.is_valid()
    assert code.distance(3)[0] == 2
    layer = qand.Circuit.load(str(DATA / "circuits" / "layer_622.qc"))
    logical = qand.Circuit.load(str(DATA / "circuits" / "logical_and.qc"))
    assert code.transversal(layer, logical)

    passed, _ = qand.reproduce("table1")
    assert passed
    passed, text = qand.verify_protocol("zcz")
    assert passed, text
    assert "zcz" in qand.protocol_names()
    print("python smoke test PASS")


if __name__ == "__main__":
    main()
