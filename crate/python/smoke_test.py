#!/usr/bin/env python3
"""Smoke test for the fuzzmeas_py extension module.

Builds the cdylib with cargo if needed, loads it, and exercises the main
types and operations end to end. Exits nonzero on the first failure.

Usage: python3 python/smoke_test.py [--release]
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_and_import(release: bool):
    profile = "release" if release else "debug"
    lib = ROOT / "target" / profile / "libfuzzmeas_py.so"
    if not lib.exists():
        cmd = ["cargo", "build", "-p", "fuzzmeas-py"]
        if release:
            cmd.append("--release")
        subprocess.run(cmd, cwd=ROOT, check=True)
    if not lib.exists():
        sys.exit(f"expected {lib} after the build")
    stage = Path(tempfile.mkdtemp(prefix="fuzzmeas_py_"))
    shutil.copy2(lib, stage / "fuzzmeas_py.so")
    sys.path.insert(0, str(stage))
    import fuzzmeas_py

    return fuzzmeas_py


PASSED = 0


def check(name, ok, detail=""):
    global PASSED
    status = "ok" if ok else "FAIL"
    print(f"[{status:>4}] {name} {detail}")
    if not ok:
        sys.exit(1)
    PASSED += 1


def main():
    fm = build_and_import("--release" in sys.argv[1:])

    # theta sums and their plateaux
    check("psi0 small-sigma plateau", abs(fm.psi0(0.3) - 1.0) <= 1e-4)
    check(
        "psi0 linear growth",
        abs(fm.psi0(2.0) / (math.sqrt(math.pi) * 2.0) - 1.0) <= 1e-6,
    )
    check("psi_half small-sigma", fm.psi_half(0.15) <= 1e-4)

    window = fm.Window(10, "periodic")
    check("window dims", window.dim == 21 and window.half_width == 10)

    kernel = fm.Kernel.gaussian(1.0, window)
    check("kernel stochasticity", kernel.column_sum_gap() <= 1e-14)
    check("kernel homogeneous on cyclic window", kernel.homogeneous)

    rho = fm.State.random(window, seed=11)
    check("random state is valid", rho.validity()["passes"])

    # sharp limit: all three transformers coincide
    delta = fm.Kernel.delta(window)
    vn = fm.transform("von_neumann", delta, rho)
    for flavor in ("oqp", "epistemic"):
        out = fm.transform(flavor, delta, rho)
        gap = max(
            abs(out[i][j] - vn[i][j]) for i in range(len(vn)) for j in range(len(vn))
        )
        check(f"sharp limit collapses {flavor}", gap <= 1e-14, f"gap={gap:.2e}")

    # trace preservation and positivity of the fuzzy maps
    for flavor in ("oqp", "epistemic"):
        out = fm.transform(flavor, kernel, rho)
        tr = fm.matrix_trace(out)
        check(
            f"{flavor} preserves trace",
            abs(tr - 1.0) <= 1e-12,
            f"trace={tr.real:.15f}",
        )
        check(
            f"{flavor} output positive",
            fm.matrix_min_eigenvalue(out) >= -1e-10,
        )

    # the two fuzzy maps differ on coherent states
    plus = fm.State.uniform_superposition(window, [0, 1])
    oqp = fm.transform("oqp", kernel, plus)
    epi = fm.transform("epistemic", kernel, plus)
    dist = max(
        abs(oqp[i][j] - epi[i][j]) for i in range(len(oqp)) for j in range(len(oqp))
    )
    check("fuzzy flavors are distinct", dist > 1e-3, f"distance={dist:.3f}")

    # dedicated transformers match the generic Kraus route
    kr = fm.kraus_transform("oqp", kernel, rho, sites=[0, 1, 2])
    fast = fm.transform("oqp", kernel, rho, sites=[0, 1, 2])
    gap = max(
        abs(kr[i][j] - fast[i][j]) for i in range(len(kr)) for j in range(len(kr))
    )
    check("kraus route agrees", gap <= 1e-13, f"gap={gap:.2e}")

    # probabilities: normalization and the two routes
    check("p(all) = 1", abs(fm.probability(kernel, rho) - 1.0) <= 1e-12)
    gap = fm.probability_consistency_gap(kernel, rho, sites=[0, 1, 2])
    check("probability consistency", gap <= 1e-12, f"gap={gap:.2e}")

    # covariance on the cyclic window
    gap = fm.shift_covariance_gap("epistemic", kernel, rho, 3)
    check("discrete shift covariance", gap <= 1e-12, f"gap={gap:.2e}")

    # entropies: formulas vs brute force, fuzzy-state equality, closed form
    rep = fm.entropy_report(kernel, rho)
    check(
        "entropy formulas match brute force",
        abs(rep["formula_oqp"] - rep["brute_oqp"]) <= 1e-10
        and abs(rep["formula_epistemic"] - rep["brute_epistemic"]) <= 1e-10,
    )
    fuzzy = fm.State.fuzzy_gaussian(window, a=0, alpha=2.0)
    check("fuzzy state is pure", abs(fuzzy.purity() - 1.0) <= 1e-12)
    s_o = fm.entropy_formula_oqp(kernel, fuzzy)
    s_e = fm.entropy_formula_epistemic(kernel, fuzzy)
    check("fuzzy-state entropy equality", abs(s_o - s_e) <= 1e-10)
    check(
        "closed form plateau at 1/2",
        abs(fm.gaussian_entropy_closed_form(2.0, 100.0) - 0.5) <= 5e-3,
    )
    limits = fm.sharp_measurement_limits(2.0)
    check(
        "sharp-measurement routes disagree (reported)",
        limits["stated_asymptote"] < 0 < limits["direct_summation"],
        f"stated={limits['stated_asymptote']:.3f} direct={limits['direct_summation']:.3f}",
    )

    # moments
    check("sharp moment of |3><3|", fm.sharp_moment(fm.State.basis_state(window, 3), 1) == 3.0)
    m1_e = fm.moment_after("epistemic", kernel, fuzzy, 1)
    check(
        "symmetric kernel keeps the mean",
        abs(m1_e - fm.sharp_moment(fuzzy, 1)) <= 1e-11,
    )

    # continuous sector
    grid = fm.Grid(256, 40.0)
    check("grid spacing", grid.spacing == 0.15625)
    f = fm.Smearing.gaussian(1.0, grid)
    check(
        "smearing second moment",
        abs(f.second_moment() - 0.5) <= 5e-4,
        f"got {f.second_moment():.6f}",
    )
    packet = fm.gaussian_packet(grid, x0=0.0, k0=2.0, width=2.0)
    k_mean = fm.momentum_first_moment(packet)
    check("packet mean momentum", abs(k_mean - 2.0) <= 1e-6, f"<k>={k_mean:.9f}")

    momko = fm.momko_value(packet, f)
    oqp_out = fm.transform_continuous("oqp", f, packet)
    check(
        "momko matches direct transform",
        abs(momko - fm.momentum_first_moment(oqp_out)) <= 1e-6,
    )
    epi_out = fm.transform_continuous("epistemic", f, packet)
    check(
        "epistemic erases mean momentum",
        abs(fm.momentum_first_moment(epi_out)) <= 1e-10
        and abs(fm.momke_value(packet, f)) <= 1e-10,
    )
    check(
        "memory term is the initial momentum",
        abs((momko - fm.momke_value(packet, f)) - k_mean) <= 1e-6,
    )
    gap = fm.translation_covariance_gap("oqp", f, packet, 5 * grid.spacing)
    check("continuous translation covariance", gap <= 1e-11, f"gap={gap:.2e}")

    print(f"smoke test passed ({PASSED} checks)")


if __name__ == "__main__":
    main()
