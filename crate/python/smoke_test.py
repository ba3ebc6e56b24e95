"""Smoke test for the framesplit Python module.

Build and install first:  pip install -e crates/python --no-build-isolation
"""

import math

import framesplit as fs


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    mb3 = fs.Frame.named("mb3")
    lower, upper = mb3.bounds()
    assert close(lower, 1.0) and close(upper, 1.0), (lower, upper)
    assert mb3.parseval_deviation() < 1e-12

    weighted = fs.Frame.named("weighted_onb")
    assert all(close(x, y) for x, y in zip(weighted.bounds(), (1.0, 2.0))), weighted.bounds()

    assert fs.lambda_coefficients("complement_quadratic", 1.0) == (0.75, 0.75)
    assert fs.lambda_coefficients("quadratic_sum", 1.0) == (0.5, 0.5)
    assert fs.certificate_nonneg(1.0, -1.0, 0.25)
    assert not fs.certificate_nonneg(1.0, -1.0, 0.2)

    onb = fs.Frame.named("onb2")
    b = fs.scalar_breakdown(onb, [0], [1.0, 0.0])
    assert b == {"sum_j": 1.0, "sum_jc": 0.0, "sum_total": 1.0, "dual_energy_j": 1.0, "dual_energy_jc": 0.0}, b

    doubled = fs.SplitPair([[2, 0], [0, 2]], [[1, 0], [0, 1]], [[1, 0], [0, 1]])
    for family in ("complement_quadratic", "defect", "quadratic_sum"):
        reports = doubled.verify_family(family, 1.0)
        assert all(r["passed"] for r in reports), reports

    r = fs.verify_parseval_identity(mb3, [0], [1.0, 0.0])
    assert close(r["left"], 1.0) and close(r["right"], 1.0) and r["passed"], r

    frame = fs.Frame.random(4, 7, 11)
    assert frame.label == "random(4,7,11)"
    split = fs.SplitPair.from_subset(frame, [0, 2, 5])
    for part in range(1, 5):
        assert split.check_part(part)["passed"]
    assert split.check_part(5, p=-3.0, q=5.0)["outcome"] == "inapplicable"

    s = 1 / math.sqrt(2)
    f = [complex(0.5, 0.1), complex(-0.2, 0.7), s, 0.0]
    for lam in (-2.0, 0.0, 0.5, 1.7, 3.0):
        assert all(x["passed"] for x in fs.verify_scalar_family(frame, [1, 3], f, "defect", lam))
        d = fs.verify_dual_inequality(frame, [1, 3], f, lam, seed=3, perturbation=1.5)
        assert d["passed"], d
        w = fs.verify_weighted_dual_inequality(frame, [0.5j, 1, 2, -1, 0, 0.25, 1 + 1j], f, lam, seed=3)
        assert w["passed"], w

    half = fs.verify_dual_inequality(onb, [0], [1.0, 0.0], 0.5, perturbation=0.0)
    assert (half["lhs"], half["rhs"]) == (1.0, 0.75), half

    m = fs.resolution_margin([[1, 0], [0, 1]], [[0, 0], [0, 0]], 1.0)
    assert m["margin"] == 0.0

    again = fs.Frame.from_json(frame.to_json())
    assert again.to_json() == frame.to_json()

    try:
        fs.Frame.named("hexagon")
    except ValueError as e:
        assert "mb3" in str(e)
    else:
        raise AssertionError("unknown frame accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
