#!/usr/bin/env python3
"""Cross-validates the extension module against an independent NumPy oracle.

Everything on the oracle side is rebuilt from scratch here — kernels, Kraus
matrices, the dense spectral momentum operator — with no shared code or
conventions, so a silent row/column or sign mix-up on either side would
show up as a mismatch. Requires numpy.

Usage: python3 python/cross_check.py [--release]
"""

import math
import sys

import numpy as np

from smoke_test import build_and_import


def main():
    fm = build_and_import("--release" in sys.argv[1:])

    # ---- discrete sector -------------------------------------------------
    half_width, sigma = 9, 1.3
    d = 2 * half_width + 1
    sites = np.arange(-half_width, half_width + 1)

    def wrap(u):
        return (u + half_width) % d - half_width

    weights = np.zeros((d, d))
    for ki, k in enumerate(sites):
        for mi, m in enumerate(sites):
            u = wrap(k - m)
            weights[ki, mi] = math.exp(-u * u / sigma**2)
    weights /= weights.sum(axis=0, keepdims=True)

    rng = np.random.default_rng(7)
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real

    # explicit Kraus families
    kraus_oqp = [np.diag(np.sqrt(weights[m, :])) for m in range(d)]
    fuzzifier = np.sqrt(weights)
    kraus_epi = [np.outer(fuzzifier[:, m], np.eye(d)[m]) for m in range(d)]
    for family in (kraus_oqp, kraus_epi):
        completeness = sum(a.conj().T @ a for a in family)
        assert np.abs(completeness - np.eye(d)).max() < 1e-12

    oqp_ref = sum(a @ rho @ a.conj().T for a in kraus_oqp)
    epi_ref = sum(a @ rho @ a.conj().T for a in kraus_epi)
    probs_ref = weights @ np.diag(rho).real
    s_oqp_ref = 1 - np.trace(oqp_ref @ oqp_ref).real
    s_epi_ref = 1 - np.trace(epi_ref @ epi_ref).real

    window = fm.Window(half_width, "periodic")
    kernel = fm.Kernel.gaussian(sigma, window)
    assert np.abs(np.array(kernel.weights()) - weights).max() < 1e-14

    state = fm.State.from_matrix(
        [[complex(rho[i, j]) for j in range(d)] for i in range(d)], window
    )

    oqp_rs = np.array(fm.transform("oqp", kernel, state))
    epi_rs = np.array(fm.transform("epistemic", kernel, state))
    assert np.abs(oqp_rs - oqp_ref).max() < 1e-13
    assert np.abs(epi_rs - epi_ref).max() < 1e-13
    print("[  ok] nonselective transformers match the Kraus oracle")

    for outcome_sites in ([0], [0, 1, 2], [-half_width, half_width]):
        p_rs = fm.probability(kernel, state, sites=outcome_sites)
        p_ref = sum(probs_ref[b + half_width] for b in outcome_sites)
        assert abs(p_rs - p_ref) < 1e-13
    print("[  ok] outcome probabilities match")

    sel_idx = [half_width, 3 + half_width]
    oqp_sel = sum(kraus_oqp[m] @ rho @ kraus_oqp[m].conj().T for m in sel_idx)
    epi_sel = sum(kraus_epi[m] @ rho @ kraus_epi[m].conj().T for m in sel_idx)
    assert np.abs(np.array(fm.transform("oqp", kernel, state, sites=[0, 3])) - oqp_sel).max() < 1e-13
    assert np.abs(np.array(fm.transform("epistemic", kernel, state, sites=[0, 3])) - epi_sel).max() < 1e-13
    print("[  ok] selective outputs match")

    report = fm.entropy_report(kernel, state)
    assert abs(report["formula_oqp"] - s_oqp_ref) < 1e-12
    assert abs(report["formula_epistemic"] - s_epi_ref) < 1e-12
    print("[  ok] entropy formulas match eigenvalue-free traces")

    # ---- continuous sector ------------------------------------------------
    n, length, width = 128, 30.0, 1.0
    dx = length / n
    x = -length / 2 + dx * np.arange(n)
    f = np.exp(-(x**2) / width**2)
    f /= f.sum() * dx
    offset = (np.subtract.outer(np.arange(n), np.arange(n)) + n // 2) % n
    omega = f[offset] * dx
    omega /= omega.sum(axis=0, keepdims=True)
    sqrt_omega = np.sqrt(omega)

    psi = np.exp(1j * 2.0 * x - x**2 / (4 * 2.0**2))
    psi /= np.linalg.norm(psi)
    rho_c = np.outer(psi, psi.conj())

    oqp_c_ref = sum(
        np.diag(sqrt_omega[xx, :]) @ rho_c @ np.diag(sqrt_omega[xx, :]) for xx in range(n)
    )
    epi_c_ref = sqrt_omega @ np.diag(np.diag(rho_c).real) @ sqrt_omega.T

    grid = fm.Grid(n, length)
    smearing = fm.Smearing.gaussian(width, grid)
    packet = fm.gaussian_packet(grid, x0=0.0, k0=2.0, width=2.0)
    oqp_c_rs = np.array(fm.transform_continuous("oqp", smearing, packet).matrix())
    epi_c_rs = np.array(fm.transform_continuous("epistemic", smearing, packet).matrix())
    assert np.abs(oqp_c_rs - oqp_c_ref).max() < 1e-12
    assert np.abs(epi_c_rs - epi_c_ref).max() < 1e-12
    print("[  ok] continuous transformers match the dense oracle")

    # dense spectral momentum operator, conventions rebuilt from scratch
    kvals = 2 * np.pi * np.fft.fftfreq(n, d=dx)
    dft = np.exp(-1j * np.outer(kvals, x)) / math.sqrt(n)
    k_op = dft.conj().T @ np.diag(kvals) @ dft
    m1_ref = np.trace(rho_c @ k_op).real
    assert abs(fm.momentum_first_moment(packet) - m1_ref) < 1e-9
    assert abs(fm.momko_value(packet, smearing) - np.trace(oqp_c_ref @ k_op).real) < 1e-9
    assert abs(fm.momke_value(packet, smearing) - np.trace(epi_c_ref @ k_op).real) < 1e-9
    print("[  ok] momentum conventions match the dense spectral operator")

    print("cross-check passed")


if __name__ == "__main__":
    main()
