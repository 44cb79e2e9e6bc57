"""Smoke test for the Python bindings.

Build and install the extension first:

    pip install maturin
    maturin build --release -m crates/py/Cargo.toml -o dist
    pip install dist/appraisal_py-*.whl
    python python/smoke_test.py
"""

import appraisal_py as ap


def close(a, b, tol=1e-12):
    return all(abs(x - y) <= tol for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def main():
    x = ap.AppraisalMatrix([[1.0, 2.0], [3.0, 4.0]])
    assert x.n == 2
    assert x.is_nz_row()

    # one homophily step by hand: rows of X X^T divided by row l1 norms
    h = ap.step(x, "hbm")
    assert close(h.to_list(), [[5 / 3, 11 / 3], [11 / 7, 25 / 7]])
    assert h.is_s_symm_pos()

    # the influence map sends this matrix to zero in one step
    bad = ap.AppraisalMatrix([[1.0, 2.0], [-0.5, -1.0]])
    assert ap.step(bad, "ibm").max_norm() == 0.0
    try:
        ap.step(ap.step(bad, "ibm"), "ibm")
    except ArithmeticError:
        pass
    else:
        raise AssertionError("zero row should raise")

    start = ap.AppraisalMatrix([[1.0, 0.5, -0.2], [0.4, 1.0, -0.3], [-0.2, -0.1, 1.0]])
    run = ap.simulate(start, "hbm")
    assert run["stop_reason"] == "converged", run["stop_reason"]
    assert run["balance_time"] is not None
    final = run["final"]
    balanced, factions = ap.is_socially_balanced(final)
    assert balanced and sorted(factions) == [[0, 1], [2]]
    assert ap.classify_q_hbm(final)["member"]

    memory = ap.simulate(start, "hbm-memory", epsilon=0.5)
    assert memory["final"].is_s_symm_pos()

    assert ap.chernoff_sample_size(0.01, 0.01) == 26492
    p_hat, std_err, successes = ap.mc_probability(6, "hbm", 200, seed=7)
    assert p_hat == 1.0 and successes == 200 and std_err == 0.0
    again = ap.mc_probability(6, "ibm", 200, seed=7)
    assert again == ap.mc_probability(6, "ibm", 200, seed=7)

    assert ap.AppraisalMatrix.parse(final.to_text()) == final
    print("smoke test passed")


if __name__ == "__main__":
    main()
