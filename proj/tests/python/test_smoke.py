import pytest

import cartan


def test_commands_listed():
    assert "roundtrip-c" in cartan.commands()
    assert len(cartan.commands()) == 10


def test_principal_roundtrips():
    g = cartan.random_instance("principal-groupoid", atoms=3, seed=5)
    rep, code = cartan.roundtrip_a(g)
    assert code == 0 and rep["pass"]
    assert rep["schema"] == cartan.REPORT_SCHEMA
    rep, code = cartan.roundtrip_b(g, seed=2)
    assert code == 0
    assert rep["max_residual"] < 1e-9


def test_crossed_product_then_extract():
    a = cartan.random_instance("coboundary-action", atoms=3, max_block=2, seed=4)
    rep, code = cartan.crossed_product(a)
    assert code == 0
    inc = rep["output"]
    assert inc["kind"] == "inclusion"
    rep, code = cartan.extract(inc)
    assert code == 0
    assert rep["output"]["groupoid"]["arrows"]


def test_subrelations():
    s = cartan.random_instance("subrelation", atoms=6, strongly_normal=True, ergodic=True, seed=3)
    rep, code = cartan.roundtrip_c(s)
    assert code == 0, rep.get("error")
    uneven = {
        "kind": "subrelation",
        "base": {"atoms": [{"id": "1"}, {"id": "2"}, {"id": "3"}]},
        "R": [["1", "2", "3"]],
        "S": [["1", "2"], ["3"]],
    }
    rep, code = cartan.quotient_rel(uneven)
    assert code == 1
    rep, code = cartan.validate(uneven)
    assert code == 0 and rep["output"]["refuting_pair"] == ["1", "3"]


def test_errors_and_determinism():
    rep, code = cartan.validate({"kind": "nothing"})
    assert code == 2 and rep["error"]["code"] == "MalformedInput"
    with pytest.raises(ValueError):
        cartan.run("validate", "{not json")
    with pytest.raises(ValueError):
        cartan.random_instance("bogus")
    g = cartan.random_instance("transformation-groupoid", atoms=4, group="s3", seed=9)
    a, _ = cartan.metric(g)
    b, _ = cartan.metric(g)
    a.pop("timings"), b.pop("timings")
    assert a == b
