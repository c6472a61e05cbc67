"""Smoke test for the cyclematch extension module.

Build and install first:
    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/cyclematch-*.whl
"""

import math

import cyclematch as cm


def main():
    assert cm.stirling_unsigned(4, 2) == 11
    assert cm.stirling_unsigned(30, 1) == math.factorial(29)
    assert sum(cm.stirling_unsigned(9, k) for k in range(10)) == math.factorial(9)

    b = cm.emc_bound(5, 3, 2)
    assert b["value"] == 20 and b["terms"] == [22, -2] and not b["threshold_met"]
    assert cm.union_size_pie(36, 3, ["(1)", "(2)"]) == cm.emc_bound(36, 3, 2)["value"]
    assert cm.union_size_pie(36, 3, ["(1)", "(2 3)"]) < cm.emc_bound(36, 3, 2)["value"]

    assert len(cm.enumerate_snk(5, 3)) == 35
    assert cm.canonicalize([3, 1, 2, 4]) == "(1 3 2)(4)"

    ext = cm.Family.extremal(7, 3, [1, 2])
    assert len(ext) == 524
    nu, witness = ext.nu_p()
    assert nu == 2 and len(witness) == 2
    again = cm.Family.from_lines(7, 3, ext.to_lines())
    assert again == ext
    assert "(1)(2)(3 4 5 6 7)" in ext

    anchored = cm.Family.anchored(7, 3, "(1)")
    assert len(anchored) == cm.stirling_unsigned(6, 2)
    assert len(anchored.intersection(ext)) == len(anchored)

    r = cm.emc_exact(4, 3, 1)
    assert r["status"] == "exact" and r["exact"] == "3" and r["agreement"] == "equal"
    assert cm.emc_exact_s1(5, 3)["exact"] == cm.emc_exact(5, 3, 1)["exact"]

    capped = cm.emc_exact(10, 3, 2, ground_cap=10)
    assert capped["status"] == "unknown" and capped["lower"] == "214128"

    try:
        cm.emc_exact(3, 4, 1)
    except ValueError:
        pass
    else:
        raise AssertionError("k > n accepted")
    try:
        cm.enumerate_snk(12, 3)
    except cm.CapacityError:
        pass
    else:
        raise AssertionError("capacity not enforced")

    report = cm.verify("recurrence", 8)
    assert report["failures"] == 0 and report["instances"]

    print("python smoke test passed")


if __name__ == "__main__":
    main()
