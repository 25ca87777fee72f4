"""Named verification suites: randomized property checks over the core
constructions, runnable from the command line and reused by the test suite.

Each suite returns a dict with the checks performed, the worst residual seen
(or the failing counterexample) and a pass flag.  Suites are deterministic
given the seed.
"""

from __future__ import annotations

import numpy as np

from .cayley import (cayley, cayley_inv, graded_cayley, graded_cayley_inv,
                     skew_cayley, skew_cayley_inv)
from .clifford import PAULI_1, PAULI_3, build_clifford, eta
from .graded import Grading, assert_osu, check_osu
from .boundary import tanh_tan_identity_residual, vd_boundary
from .models import bloch, circle_spectral_triple, halfspace, ssh_model
from .numkit import dagger, norm
from .pairing import (UnitaryLoop, index_pairing, kasparov_product_rep,
                      winding_number)
from .vandaele import DkClass, dk_to_kk, kk_to_dk

__all__ = ["run_suite", "SUITES"]


def _admissible_pair(rng, cells):
    grading = Grading.from_operator(np.kron(np.eye(cells), PAULI_3))
    e = assert_osu(np.kron(np.eye(cells), PAULI_1), grading)
    m = rng.standard_normal((2 * cells, 2 * cells)) \
        + 1j * rng.standard_normal((2 * cells, 2 * cells))
    m = (m + dagger(m)) / 2.0
    m = (m - grading.gamma @ m @ grading.gamma) / 2.0
    t = (m - e.u @ m @ e.u) / 2.0
    return t, e


def suite_cayley_roundtrip(seed: int = 0, trials: int = 200) -> dict:
    """Round trips of all four transforms plus the forward identities."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 17))
        h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        t = (h + dagger(h)) / 2.0
        rest = cayley_inv(cayley(t))
        worst = max(worst, norm(rest.ambient - t))
        s = (h - dagger(h)) / 2.0
        rest2 = skew_cayley_inv(skew_cayley(s))
        worst = max(worst, norm(rest2.ambient - s))
    for _ in range(trials):
        cells = int(rng.integers(1, 9))
        t, e = _admissible_pair(rng, cells)
        u = graded_cayley(t, e)
        rest = graded_cayley_inv(u, e)
        worst = max(worst, norm(rest.ambient - t))
        worst = max(worst, norm((u.u - e.u) @ (t - e.u) - 2 * np.eye(e.dim)))
        q = rest.basis
        lhs = np.eye(rest.rank) + rest.compressed @ rest.compressed
        pinv2 = np.linalg.matrix_power(np.linalg.pinv(u.u - e.u, rcond=1e-10), 2)
        worst = max(worst, norm(lhs - 4.0 * (q.conj().T @ pinv2 @ q)))
    return {"suite": "cayley-roundtrip", "trials": 2 * trials,
            "worst_residual": worst, "passed": bool(worst < 1e-9)}


def suite_clifford(seed: int = 0) -> dict:
    """Generator relations for p+q <= 6 and the eta/graded-tensor identities."""
    worst = 0.0
    for p in range(7):
        for q in range(7 - p):
            alg = build_clifford(p, q)
            eye = np.eye(alg.matrix_size)
            gens = list(alg.e_gens) + list(alg.f_gens)
            signs = [1.0] * p + [-1.0] * q
            for i, (g, s) in enumerate(zip(gens, signs)):
                worst = max(worst, norm(g @ g - s * eye),
                            norm(alg.grading.gamma @ g @ alg.grading.gamma + g),
                            norm(alg.real_structure.apply(g) - g))
                for h in gens[i + 1:]:
                    worst = max(worst, norm(g @ h + h @ g))
    # eta on a full basis of M_2 (x)^ Cl_1
    g2 = Grading.from_operator(PAULI_3)
    basis = []
    for i in range(2):
        for j in range(2):
            m = np.zeros((2, 2), dtype=complex)
            m[i, j] = 1.0
            basis.append(m)
    from .clifford import graded_product_pair
    eta_worst = 0.0
    for b1 in basis:
        for b2 in basis:
            for k1 in (0, 1):
                for k2 in (0, 1):
                    pb, pk = graded_product_pair(b1, k1, b2, k2, g2)
                    lhs = eta(b1, k1, g2) @ eta(b2, k2, g2)
                    rhs = np.zeros_like(lhs) if norm(pb) < 1e-14 else eta(pb, pk, g2)
                    eta_worst = max(eta_worst, norm(lhs - rhs))
    return {"suite": "clifford", "worst_residual": max(worst, eta_worst),
            "relations_residual": worst, "eta_residual": eta_worst,
            "passed": bool(worst < 1e-12 and eta_worst < 1e-10)}


def suite_boundary_osu(seed: int = 0, trials: int = 100) -> dict:
    """Boundary-map OSU axioms, exact-lift triviality, tanh/tan identity."""
    rng = np.random.default_rng(seed)
    worst_osu = 0.0
    worst_identity = 0.0
    worst_trivial = 0.0
    for _ in range(trials):
        cells = int(rng.integers(1, 5))
        g = Grading.from_operator(np.kron(np.eye(cells), PAULI_3))
        m = rng.standard_normal((2 * cells, 2 * cells)) \
            + 1j * rng.standard_normal((2 * cells, 2 * cells))
        m = (m + dagger(m)) / 2.0
        x = (m - g.gamma @ m @ g.gamma) / 2.0
        x = 0.9 * x / max(1.0, norm(x) / 0.999)
        y, _ = vd_boundary(x, g)
        worst_osu = max(worst_osu, check_osu(y.u, y.grading).worst)
        worst_identity = max(worst_identity, tanh_tan_identity_residual(x, g))
        # exact-OSU lift: the boundary class collapses to the base point
        t, e = _admissible_pair(rng, cells)
        osu = graded_cayley(t, e)
        y2, rec = vd_boundary(osu.u, e.grading)
        worst_trivial = max(worst_trivial, rec["deviation_norm"])
    return {"suite": "boundary-osu", "trials": trials,
            "worst_osu_residual": worst_osu,
            "worst_tanh_tan_residual": worst_identity,
            "worst_exact_lift_deviation": worst_trivial,
            "worst_residual": max(worst_osu, worst_identity, worst_trivial),
            "passed": bool(worst_osu < 1e-9 and worst_identity < 1e-9
                           and worst_trivial < 1e-12)}


def suite_product_positivity(seed: int = 0, trials: int = 100) -> dict:
    """Kasparov-product positivity margin over random admissible pairs."""
    rng = np.random.default_rng(seed)
    worst_margin = np.inf
    worst_identity = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 9))
        h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        t = (h + dagger(h)) / 2.0
        u = cayley(t)
        d = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        d = (d + dagger(d)) / 2.0
        comm = norm(u @ d - d @ u)
        if comm >= 2.0:
            d = d * (1.8 / comm)
        rep = kasparov_product_rep(u, d)
        worst_margin = min(worst_margin, rep.positivity_margin)
        worst_identity = max(worst_identity, rep.identity_residual)
    return {"suite": "product-positivity", "trials": trials,
            "worst_margin": worst_margin,
            "worst_identity_residual": worst_identity,
            "worst_residual": max(-worst_margin, worst_identity),
            "passed": bool(worst_margin >= -1e-10 and worst_identity < 1e-7)}


def suite_vandaele_roundtrip(seed: int = 0, trials: int = 50) -> dict:
    """Class-map round trips preserve the loop pairing invariant exactly.

    Builds random OSU-valued loops with known winding, pushes them pointwise
    through dk_to_kk and back, and compares the corner windings.
    """
    rng = np.random.default_rng(seed)
    failures = []
    for trial in range(trials):
        n = int(rng.integers(1, 4))
        w_target = int(rng.integers(-3, 4))
        # random constant unitary frame around a winding phase; the grid is
        # offset so no sample hits v = 1 exactly (empty module)
        frame = np.linalg.qr(rng.standard_normal((n, n))
                             + 1j * rng.standard_normal((n, n)))[0]
        ks = np.linspace(0, 2 * np.pi, 96, endpoint=False) + np.pi / 97.0
        grading = Grading.from_operator(np.kron(PAULI_3, np.eye(n)))
        e_mat = np.kron(PAULI_1, np.eye(n))
        corner_samples_in, corner_samples_out = [], []
        for k in ks:
            phases = np.exp(1j * 0.2 * np.sin(k)) * np.ones(n, dtype=complex)
            phases[0] *= np.exp(1j * w_target * k - 1j * 0.2 * np.sin(k))
            v = frame @ np.diag(phases) @ dagger(frame)
            corner_samples_in.append(v)
            zeros = np.zeros((n, n))
            big = np.block([[zeros, dagger(v)], [v, zeros]])
            x = assert_osu(big, grading)
            y = assert_osu(e_mat, grading)
            cyc = dk_to_kk(DkClass(x_reps=(x,), y_reps=(y,)))
            if cyc.empty:
                # trivial class: the maps send zero to zero by convention
                corner_samples_out.append(np.eye(n, dtype=complex))
                continue
            back = kk_to_dk(cyc)
            # corner of the recovered representative, padded back to ambient
            # by the identity off the module (base point acts there)
            xb = back.x_sum()
            q = cyc.basis
            amb = q @ xb.u @ dagger(q) + (np.eye(2 * n) - q @ dagger(q)) @ \
                np.block([[zeros, np.eye(n)], [np.eye(n), zeros]]) @ \
                (np.eye(2 * n) - q @ dagger(q))
            corner_samples_out.append(amb[n:, :n])
        loop_in = UnitaryLoop.from_samples(corner_samples_in, ks)
        w_in = winding_number(loop_in)
        # recovered corners are unitary up to the module padding; re-phase
        outs = []
        for s in corner_samples_out:
            wq, sq, zq = np.linalg.svd(s)
            outs.append(wq @ zq)
        w_out = winding_number(UnitaryLoop.from_samples(outs, ks))
        if w_in != w_target or w_out != w_target:
            failures.append((trial, w_target, w_in, w_out))
    return {"suite": "vandaele-roundtrip", "trials": trials,
            "failures": failures, "worst_residual": float(len(failures)),
            "passed": not failures}


def suite_bulk_boundary(seed: int = 0) -> dict:
    """SSH winding against the signed chiral left-edge count on a 5x5 grid."""
    from .boundary import edge_invariants
    from .kasparov import chiral_reduction, flatten

    vals = [0.4, 0.7, 1.0, 1.3, 1.6]
    mismatches = []
    for t1 in vals:
        for t2 in vals:
            if abs(abs(t1) - abs(t2)) < 1e-9:
                continue
            model = ssh_model(t1, t2)
            e = assert_osu(PAULI_1, model.symmetry.grading)
            ks = np.linspace(0, 2 * np.pi, 257, endpoint=False)
            samples = []
            for k in ks:
                ins = flatten(bloch(model, k), symmetry=model.symmetry)
                samples.append(chiral_reduction(ins, e))
            w = winding_number(UnitaryLoop.from_samples(samples, ks))
            m = halfspace(model, 40)
            inv = edge_invariants(m, delta=0.8 * abs(abs(t1) - abs(t2)))
            if w != inv.signed_count_left:
                mismatches.append((t1, t2, w, inv.signed_count_left))
    return {"suite": "bulk-boundary", "grid": f"{len(vals)}x{len(vals)}",
            "mismatches": mismatches, "worst_residual": float(len(mismatches)),
            "passed": not mismatches}


def suite_circle_index(seed: int = 0) -> dict:
    """Circle index pairing at three truncations, by both methods."""
    results = {}
    for n in (16, 32, 64):
        rep = index_pairing(*_circle_pair(n))
        results[n] = rep.methods
    ok = all(v == {"sf": 1, "kernel": 1} for v in results.values())
    return {"suite": "circle-index", "results": {str(k): v for k, v in results.items()},
            "worst_residual": 0.0 if ok else 1.0, "passed": ok}


def _circle_pair(n):
    trip = circle_spectral_triple(n)
    return trip.u, trip.d


SUITES = {
    "cayley-roundtrip": suite_cayley_roundtrip,
    "clifford": suite_clifford,
    "boundary-osu": suite_boundary_osu,
    "product-positivity": suite_product_positivity,
    "vandaele-roundtrip": suite_vandaele_roundtrip,
    "bulk-boundary": suite_bulk_boundary,
    "circle-index": suite_circle_index,
}


def run_suite(name: str, seed: int = 0) -> dict:
    """Run one named suite, or all of them with name == "all"."""
    if name == "all":
        out = {"suite": "all", "results": {}, "passed": True}
        worst = 0.0
        for key, fn in SUITES.items():
            res = fn(seed)
            out["results"][key] = res
            out["passed"] = out["passed"] and res["passed"]
            worst = max(worst, res.get("worst_residual", 0.0))
        out["worst_residual"] = worst
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; known: {sorted(SUITES)} or 'all'")
    return SUITES[name](seed)
