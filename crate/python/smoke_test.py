"""Smoke test for the pyisac extension module.

Build and install first, e.g.
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o target/wheels
    pip install target/wheels/pyisac-*.whl
"""

import math

import pyisac


def main():
    ch = pyisac.Channel.example2(0.9, 0.2)

    cor = pyisac.Scheme.corollary_min(ch)
    assert abs(pyisac.distortion(ch, cor) - 0.02) < 1e-9

    comp = pyisac.Scheme.compression(ch, 0.1)
    assert abs(pyisac.distortion(ch, comp) - 0.009) < 1e-9

    region = pyisac.region(ch, comp)
    assert len(region.inequalities) == 13
    assert len(region.feasibility) == 5
    assert region.contains(0.0, 0.0)
    assert abs(region.max_sum_rate - 0.0174636602106) < 1e-9
    assert pyisac.verify_fme(ch, comp, grid=40, samples=100)

    joint = pyisac.Joint.assemble(ch, comp)
    terms = joint.info_terms()
    assert len(terms) == 16 and min(terms) >= 0.0
    assert abs(joint.cmi(["X1"], ["Z2"], ["X2"]) - joint.cmi(["Z2"], ["X1"], ["X2"])) < 1e-12

    copy = pyisac.Joint(["A", "B"], [2, 2], [0.5, 0.0, 0.0, 0.5])
    assert abs(copy.cmi(["A"], ["B"]) - 1.0) < 1e-12
    assert copy.marginalize(["A"]).weights == [0.5, 0.5]

    ex1 = pyisac.Channel.example1(0.3)
    assert pyisac.distortion(ex1, pyisac.Scheme.example1_copy(ex1)) == 0.0

    exact, mean, se = pyisac.simulate(ch, comp, n=100_000, seed=1)
    assert abs(mean - exact) <= 4 * se

    again = pyisac.Channel.from_json(ch.to_json())
    assert again.to_json() == ch.to_json()

    try:
        pyisac.Channel.example2(1.5, 0.2)
    except ValueError as e:
        assert "p_s" in str(e)
    else:
        raise AssertionError("out-of-range p_s accepted")

    fronts = dict(pyisac.trace_frontier(grid="0.02:0.08:0.02", mode="corollary", seeds=16))
    rows = fronts["corollary"]
    assert len(rows) == 4 and rows[0][2]
    assert all(not math.isnan(r[1]) for r in rows)

    print("pyisac smoke test passed")


if __name__ == "__main__":
    main()
