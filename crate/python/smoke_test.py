#!/usr/bin/env python3
"""Smoke test for the ctrwlab extension module.

Builds the extension if needed, copies the shared object next to this
script under the importable name, and exercises every exported surface
with frozen expected values. Exits 0 on success, 1 on the first failure.
"""

import json
import math
import shutil
import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
REPO = HERE.parent


def ensure_module():
    """Make `import ctrwlab` work, building the extension when missing."""
    candidates = [
        REPO / "target" / "release" / "libctrwlab.so",
        REPO / "target" / "debug" / "libctrwlab.so",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        subprocess.run(
            ["cargo", "build", "--release", "-p", "ctrw-lab-py"],
            cwd=REPO,
            check=True,
        )
        built = candidates[0]
    dest = HERE / "ctrwlab.so"
    if not dest.exists() or built.stat().st_mtime > dest.stat().st_mtime:
        shutil.copy2(built, dest)
    sys.path.insert(0, str(HERE))


ensure_module()
import ctrwlab  # noqa: E402

FAILURES = []


def check(name, cond, detail=""):
    if cond:
        print(f"ok      {name}")
    else:
        print(f"FAILED  {name}  {detail}")
        FAILURES.append(name)


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


# The worked pair used throughout: a ramp that pauses on [1, 2), jumps to 2,
# then ramps on, versus its stair-filled version (the straight diagonal).
plateau = ctrwlab.Path.from_knots(
    3.0,
    [
        (0.0, [0.0], "linear"),
        (1.0, [1.0], "hold"),
        (2.0, [2.0], "linear"),
        (3.0, [3.0], "hold"),
    ],
)

check("identity eval", ctrwlab.Path.identity(2.0).eval(1.25) == [1.25])
check("plateau dim/horizon", plateau.dim == 1 and plateau.horizon == 3.0)
check("plateau holds its level", plateau.eval(1.5) == [1.0])
check(
    "plateau jump list",
    plateau.jumps() == [(2.0, [1.0], [2.0], 1.0)],
    repr(plateau.jumps()),
)
check("plateau stretch start", plateau.eta(1.5) == 1.0)
check("plateau stretch end", plateau.theta(1.5) == 2.0)
check(
    "constant path never moves again",
    ctrwlab.Path.constant(2.0, [0.5]).theta(1.0) == math.inf,
)

filled = ctrwlab.stair_fill(plateau)
check("fill straightens the ramp", filled.eval(1.5) == [1.5])
check("fill removes the jump", filled.jumps() == [])

round_trip = ctrwlab.Path.from_json(plateau.to_json())
check("json round trip", round_trip.knots() == plateau.knots())

ident_clock = ctrwlab.Path.identity(3.0)
check(
    "identity clock leaves paths alone",
    ctrwlab.phi(plateau, ident_clock).knots() == plateau.knots(),
)
check(
    "inverse of the identity is the identity",
    ctrwlab.right_inverse(ident_clock).eval(1.7) == [1.7],
)

check("uniform distance", ctrwlab.uniform_distance(plateau, filled, 2.5) == 1.0)
check("j1 bracket", ctrwlab.j1_distance(plateau, filled, 2.5, 1 / 256) == (0.5, 0.5))
check("m1 bracket", ctrwlab.m1_distance(plateau, filled, 2.5, 1 / 256) == (0.5, 0.5))

check(
    "ks statistic on shifted samples",
    close(ctrwlab.ks_statistic([1.0, 2.0, 3.0], [1.5, 2.5, 3.5]), 1 / 3),
)
check(
    "ks critical value",
    close(ctrwlab.ks_critical_1pct(10_000, 10_000), 0.023018, 1e-4),
)

# Tightening approximants: plateau shrinks like 1/n, overshoot like 1/n.
members = [
    ctrwlab.Path.from_knots(
        3.0,
        [
            (0.0, [0.0], "linear"),
            (1.0, [1.0], "hold"),
            (2.0 - 1.0 / n, [1.0 + 1.0 / n], "hold"),
            (2.0, [2.0], "linear"),
            (3.0, [3.0], "hold"),
        ],
    )
    for n in (4, 8, 16, 32)
]
cert = json.loads(ctrwlab.certificate_json(plateau, members, 2.5, 0.2, 1 / 256))
check(
    "certificate found with a start index",
    "Found" in cert and isinstance(cert["Found"]["n1"], int),
    json.dumps(cert)[:120],
)

CONFIG = """
jump_dist = gaussian
wait_dist = exponential
n = 16
horizon = 1.0
replicates = 120
eval_times = 0.5, 1.0
seed = 11
limit_a = brownian
limit_d = linear-drift
delta = 0.05
"""
walk_a = ctrwlab.sample_walk(CONFIG, "cpctrw", 16, 3)
walk_b = ctrwlab.sample_walk(CONFIG, "cpctrw", 16, 3)
walk_c = ctrwlab.sample_walk(CONFIG, "cpctrw", 16, 4)
check("walk replicates are reproducible", walk_a.to_json() == walk_b.to_json())
check("walk replicates differ across indices", walk_a.to_json() != walk_c.to_json())
check("continuous walk has no jumps", walk_a.jumps() == [])
check(
    "plain walk does jump",
    len(ctrwlab.sample_walk(CONFIG, "ctrw", 16, 3).jumps()) > 0,
)

report = json.loads(ctrwlab.property_report_json(7, 40))
check(
    "randomized suites all pass",
    all(s["failures"] == 0 for s in report["suites"]),
    json.dumps([(s["name"], s["failures"]) for s in report["suites"]]),
)

if FAILURES:
    print(f"\n{len(FAILURES)} check(s) failed: {', '.join(FAILURES)}")
    sys.exit(1)
print("\nall smoke checks passed")
