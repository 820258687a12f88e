"""Smoke test for the `critval` extension module.

Builds the extension with cargo (unless CRITVAL_SO points at a built
library), copies it next to a temporary import path and exercises the main
entry points.
"""

import cmath
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build() -> Path:
    so = os.environ.get("CRITVAL_SO")
    if so:
        return Path(so)
    subprocess.run(
        ["cargo", "build", "--release", "-p", "critval-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    return ROOT / "target" / "release" / "libcritval.so"


def load(lib: Path):
    tmp = Path(tempfile.mkdtemp())
    shutil.copy(lib, tmp / "critval.so")
    sys.path.insert(0, str(tmp))
    import critval

    return critval


def main() -> None:
    cv = load(build())

    a = cv.MultiIndex("2,3")
    assert (a.n, a.m, a.parts) == (5, 2, [2, 3])
    assert a.multinomial() == 10

    rep = cv.verify_identity([2, 3])
    assert rep["equal"]
    assert rep["factored"] == "-1/10 * z1^2 * z2^3 * (z1 - z2)^5"
    assert cv.dyson(a) == 10
    assert cv.dyson("2,2,2,2") == 2520
    assert len(cv.jacobian("1,1,1")) == 3

    z = [1 + 0.5j, -0.7 + 0.2j]
    jac = cv.eval_jacobian(a, z)
    det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0]
    closed = cv.closed_form_det(a, z)
    assert abs(det - closed) <= 1e-12 * abs(closed)

    lam = cv.part_of([0.3 - 1j, 2 + 0.5j, 0.3 - 1j, 7 + 7j, 2 + 0.5j])
    assert str(lam) == "{{1,3},{2,5},{4}}"
    assert lam.multiplicities().parts == [2, 2, 1]

    cert = cv.certify(cv.SetPartition([[0], [1]]), [1, -1])
    assert cert["certified"] and abs(cert["det"] - 2) < 1e-12

    ts = [k / 16 for k in range(17)]
    target = [[-(1 + t) ** 2 / 2] for t in ts]
    lifted = cv.lift_path(cv.SetPartition([[0]]), [1], target)
    assert max(abs(p[0] - (1 + t)) for p, t in zip(lifted, ts)) < 1e-9

    try:
        cv.MultiIndex([2, 0])
    except ValueError:
        pass
    else:
        raise AssertionError("zero entry accepted")

    rows = cv.sweep(5, 2)
    assert all(r["passed"] for r in rows)
    assert cmath.isclose(cv.eval_theta([1], [1])[0], -0.5)
    print(f"critval smoke test passed ({len(rows)} sweep instances)")


if __name__ == "__main__":
    main()
