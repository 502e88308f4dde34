"""Smoke test for the ht_py extension module.

Build and install first, e.g. `maturin develop -m crates/py/Cargo.toml` or
`pip install crates/py`, then run `python python/smoke_test.py`.
"""

import json

import ht_py

X0 = json.dumps({
    "family": "F", "n": 2, "r": 1,
    "pieces": [
        {"left": "0", "slope": "1/2", "intercept": "0"},
        {"left": "1/2", "slope": "1", "intercept": "-1/4"},
        {"left": "3/4", "slope": "2", "intercept": "-1"},
    ],
})


def main():
    x0 = ht_py.Element.from_json(X0)
    assert x0("3/4") == "1/2"
    assert x0.compose(x0.inverse()).is_identity()
    assert x0.endpoint_slopes() == (-1, 1)

    g_star, branch = ht_py.map_interval(2, 1, ("3/8", "1/2"), ("1/4", "3/8"))
    assert branch == "exact-solve", branch
    assert g_star.fix_measure() == "7/16"
    assert g_star.compose(x0.inverse()).n == 2
    conjugate = x0.compose(g_star).compose(x0.inverse())
    assert conjugate.fix_measure() == "5/8"
    assert ht_py.cover(g_star) == ("1/16", "3/4")

    entries, min_eig = ht_py.gram("regular", [ht_py.Element.identity(2, 1, "F"), x0, g_star])
    assert entries == [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
    assert abs(min_eig - 1.0) < 1e-9

    report = json.loads(ht_py.axioms("fixmeasure", [g_star, x0]))
    assert report["centrality_pass"] is False

    tab = ht_py.Tabular.from_thompson(x0)
    assert tab.to_thompson().compose(x0.inverse()).is_identity()

    ok, _ = ht_py.verify_base(2, 1, samples=5, seed=1)
    assert ok

    try:
        ht_py.Element.from_json('{"family": "F", "n": 2, "r": 1, "pieces": []}')
    except ValueError:
        pass
    else:
        raise AssertionError("empty element accepted")

    print("ht_py smoke test passed")


if __name__ == "__main__":
    main()
