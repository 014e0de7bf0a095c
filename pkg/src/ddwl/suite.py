"""Reproducible verification runs: a fixed list of checks per (q, suite),
each reported with a pass/fail/undetermined status and a data payload.

The full suite runs every check that is feasible at the given q at desk
scale; the fast suite replaces exhaustive pair loops with fixed-seed samples
and drops the search-heavy checks.  Identical invocations produce identical
reports (timings can be suppressed for byte-identical output).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import coherent, designs, isotest, srings
from .arith import euler_phi
from .construction import Construction

__version__ = "0.1.0"

DEFAULT_SEED = 20240


@dataclass
class CheckResult:
    name: str
    status: str   # "pass" | "fail" | "undetermined"
    data: dict = field(default_factory=dict)


@dataclass
class RunReport:
    q: int
    suite: str
    seed: int
    field_json: dict
    checks: list[CheckResult] = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def to_json(self, include_timings: bool = True) -> dict:
        out = {
            "tool": "ddwl",
            "version": __version__,
            "q": self.q,
            "suite": self.suite,
            "seed": self.seed,
            "field": self.field_json,
            "checks": [
                {"name": c.name, "status": c.status, "data": c.data} for c in self.checks
            ],
            "ok": self.ok,
        }
        if include_timings:
            out["timings"] = self.timings
        return out


def _check_field_axioms(cons: Construction) -> tuple[str, dict]:
    f = cons.field
    q = f.q
    a = np.arange(q)
    ok = True
    ok &= bool((f.add(a[:, None], a[None, :]) == f.add(a[None, :], a[:, None])).all())
    ok &= bool((f.mul(a[:, None], a[None, :]) == f.mul(a[None, :], a[:, None])).all())
    x, y, z = np.meshgrid(a, a, a, indexing="ij")
    ok &= bool((f.add(f.add(x, y), z) == f.add(x, f.add(y, z))).all())
    ok &= bool((f.mul(f.mul(x, y), z) == f.mul(x, f.mul(y, z))).all())
    ok &= bool((f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z))).all())
    nz = a[1:]
    ok &= bool((f.mul(nz, f.inv_t[nz]) == 1).all())
    squares = int(sum(f.is_square(int(v)) for v in nz))
    ok &= squares == (q - 1) // 2
    return ("pass" if ok else "fail"), {"q": q, "nonzero_squares": squares}


def _check_group_axioms(cons: Construction, seed: int) -> tuple[str, dict]:
    t = cons.table
    mult, inv, n = t.mult, t.inv, t.n
    ok = bool((mult[0] == np.arange(n)).all() and (mult[:, 0] == np.arange(n)).all())
    ok &= bool((mult[np.arange(n), inv] == 0).all())
    rng = np.random.default_rng(seed)
    if n <= 27:
        grid = np.arange(n)
        aa, bb, cc = (x.ravel() for x in np.meshgrid(grid, grid, grid, indexing="ij"))
        samples = n**3
    else:
        samples = 10_000
        aa = rng.integers(0, n, samples)
        bb = rng.integers(0, n, samples)
        cc = rng.integers(0, n, samples)
    ok &= bool((mult[mult[aa, bb], cc] == mult[aa, mult[bb, cc]]).all())
    center = np.flatnonzero(t.center_mask)
    ok &= len(center) == cons.q
    ok &= bool((mult[np.ix_(center, np.arange(n))] == mult[np.ix_(np.arange(n), center)].T).all())
    return ("pass" if ok else "fail"), {"n": n, "sampled_triples": int(samples)}


def _check_k_automorphisms(cons: Construction) -> tuple[str, dict]:
    ks = cons.build_K()   # constructor re-verifies the homomorphism property
    gens = cons.generators_I()
    ok = len(ks) == cons.q**2 - 1
    checked = 0
    for i in gens:
        arcs = cons.build_cayley(i).arcs
        for k in ks:
            perm = k.perm
            if not np.array_equal(arcs[np.ix_(perm, perm)], arcs):
                ok = False
            checked += 1
    return ("pass" if ok else "fail"), {"k_order": len(ks), "graph_checks": checked}


def _check_orbits(cons: Construction) -> tuple[str, dict]:
    orbits = cons.k_orbits()   # raises if the partition disagrees with the cells
    return "pass", {"cells": len(orbits)}


def _check_psi_group(cons: Construction) -> tuple[str, dict]:
    from .construction import INFINITY

    els = [INFINITY] + list(range(cons.q))
    ok = all(cons.psi(i, INFINITY) is i or cons.psi(i, INFINITY) == i for i in els)
    for i in els:
        ok &= cons.psi(i, cons.chi(i)) is INFINITY
        for j in els:
            for k in els:
                if cons.psi(cons.psi(i, j), k) != cons.psi(i, cons.psi(j, k)):
                    ok = False
    gens = cons.generators_I()
    ok &= len(gens) == euler_phi(cons.q + 1)
    ok &= all(cons.psi_order(i) == cons.q + 1 for i in gens)
    return ("pass" if ok else "fail"), {"order": cons.q + 1, "generators": gens}


def _check_transversal(ring: srings.SRing) -> tuple[str, dict]:
    cons = ring.cons
    results = {i: srings.verify_transversal(ring, i).ok for i in range(cons.q)}
    ok = all(results.values())
    return ("pass" if ok else "fail"), {"per_i": {str(k): bool(v) for k, v in results.items()}}


def _check_structure_constants(ring: srings.SRing, tensor) -> tuple[str, dict]:
    report = srings.verify_consts(ring, tensor)
    data = srings.constants_report(ring, tensor)
    data["checked"] = report.checked
    return ("pass" if report.ok else "fail"), data


def _check_tensor_identities(tensor) -> tuple[str, dict]:
    ok = srings.triangle_identity_holds(tensor) and srings.mass_conservation_holds(tensor)
    return ("pass" if ok else "fail"), {}


def _check_ddd(cons: Construction) -> tuple[str, dict]:
    q = cons.q
    data = {}
    ok = True
    for i in cons.generators_I()[:1]:
        loopy = cons.build_cayley(i, include_identity=True)
        loopless = cons.build_cayley(i, include_identity=False)
        rep = designs.verify_ddd(loopy, cons.table.coset_ids, expected=(0, q))
        rep_ll = designs.verify_ddd(loopless, cons.table.coset_ids, expected=(0, q))
        ok &= rep.ok
        witness = dict(rep_ll.witness) if rep_ll.witness else None
        if witness:
            witness["pair_elements"] = [
                cons.table.element_to_json(v) for v in witness["pair"]
            ]
        data[f"i={i}"] = {
            "graph_with_loops": {
                "ok": rep.ok,
                "cross_in": rep.cross_in,
                "cross_out": rep.cross_out,
            },
            "loopless_companion": {
                "counts_match": rep_ll.counts_match,
                "cross_in": rep_ll.cross_in,
                "cross_out": rep_ll.cross_out,
                "regular": rep_ll.regular,
                "asymmetric": rep_ll.asymmetric,
                "witness": witness,
            },
        }
    return ("pass" if ok else "fail"), data


def _check_wl_closure(cons: Construction, closures: dict) -> tuple[str, dict]:
    q = cons.q
    data = {}
    ok = True
    for i, cc in closures.items():
        cells = coherent.as_sring_partition(cc, cons.table)
        want = {cons.build_Y(j).tobytes() for j in range(q)}
        want.add(np.array([0], dtype=np.int64).tobytes())
        want.add(cons.punctured_center().tobytes())
        got = {c.astype(np.int64).tobytes() for c in cells}
        good = cc.rank == q + 2 and got == want
        ok &= good
        data[f"i={i}"] = {"rank": cc.rank, "partition_matches": good, "rounds": cc.rounds}
    return ("pass" if ok else "fail"), data


def _check_wl_equivalence(cons: Construction, pairs) -> tuple[str, dict]:
    data = {}
    ok = True
    for i, j in pairs:
        eq = coherent.wl_equivalent(cons.build_cayley(i), cons.build_cayley(j))
        ok &= eq
        data[f"{i},{j}"] = bool(eq)
    return ("pass" if ok else "fail"), data


def tau_hat_color_map(cons, ring, closures, i, j):
    """Color bijection between the closures of the i- and j-labelled graphs
    induced by a power map sending i to j."""
    q1 = cons.q + 1
    m = next(
        m for m in range(1, q1 + 1)
        if np.gcd(m, q1) == 1 and cons.psi_pow(i, m) == j
    )
    sigma_cells = srings.tau_hat(ring, m)
    cc_i, cc_j = closures[i], closures[j]
    cells = [np.array([0])] + [cons.build_Y(k) for k in range(cons.q)] + [cons.punctured_center()]
    sigma = np.empty(cc_i.rank, dtype=np.int64)
    for cell_idx, members in enumerate(cells):
        color_i = int(cc_i.color[0, members[0]])
        image = cells[int(sigma_cells[cell_idx])]
        color_j = int(cc_j.color[0, image[0]])
        sigma[color_i] = color_j
    return sigma, m


def _check_tau_hat(cons, ring, closures) -> tuple[str, dict]:
    gens = cons.generators_I()
    data = {}
    ok = True
    for j in gens[1:]:
        i = gens[0]
        sigma, m = tau_hat_color_map(cons, ring, closures, i, j)
        good = coherent.verify_algebraic_map(closures[i], closures[j], sigma)
        # the arc colors of graph i must land on the arc colors of graph j
        arcs_i = np.unique(closures[i].color[cons.build_cayley(i).arcs])
        arcs_j = np.unique(closures[j].color[cons.build_cayley(j).arcs])
        good &= set(int(sigma[c]) for c in arcs_i) == {int(c) for c in arcs_j}
        ok &= good
        data[f"{i}->{j}"] = {"exponent": m, "transports": bool(good)}
    return ("pass" if ok else "fail"), data


def _check_algebraic_automorphisms(cons, tensor) -> tuple[str, dict]:
    autos = srings.algebraic_automorphisms(tensor)
    want = euler_phi(cons.q + 1)
    ok = len(autos) >= want and srings.is_group_closed(autos)
    return ("pass" if ok else "fail"), {"count": len(autos), "phi_bound": want}


def _check_design_iso(cons: Construction, sample: int | None) -> tuple[str, dict]:
    data = {}
    ok = True
    for i in range(cons.q):
        rep = designs.verify_design_iso(cons, i, sample=sample)
        ok &= rep.crit_holds and rep.det_a_nonzero
        data[f"i={i}"] = rep.to_json()
    return ("pass" if ok else "fail"), data


def _check_one_point_extension(cons, closures) -> tuple[str, dict]:
    i = cons.generators_I()[0]
    cc = closures[i]
    ext = coherent.one_point_extension(cc, cons.table.identity)
    cells = [np.array([0])] + [cons.build_Y(k) for k in range(cons.q)] + [cons.punctured_center()]
    got = {np.sort(f).astype(np.int64).tobytes() for f in ext.fibers}
    want = {c.astype(np.int64).tobytes() for c in cells}
    fibers_ok = got == want

    y0 = cons.build_Y(0)
    valency_ok = True
    for j in range(1, cons.q):
        yj = cons.build_Y(j)
        block = ext.color[np.ix_(y0, yj)]
        row0 = np.bincount(block[0], minlength=ext.rank)
        valency_ok &= any(int(row0[c]) == 1 for c in np.unique(block))
    block00 = ext.color[np.ix_(y0, y0)]
    per_row = np.stack([np.bincount(row, minlength=ext.rank) for row in block00])
    regular_ok = bool(((per_row == 0) | (per_row == 1)).all())

    ok = fibers_ok and valency_ok and regular_ok
    return ("pass" if ok else "fail"), {
        "fibers_match_cells": bool(fibers_ok),
        "valency_one_colors": bool(valency_ok),
        "regular_on_Y0": bool(regular_ok),
        "extension_rank": ext.rank,
    }


def _check_iso_classes(cons, closures, budget) -> tuple[str, dict]:
    gens = cons.generators_I()
    graphs = [cons.build_cayley(i) for i in gens]
    result = isotest.iso_class_count(graphs, [closures[i] for i in gens], budget)
    bound = max(1, euler_phi(cons.q + 1) // (2 * cons.field.l))
    status = "pass" if result.exact and result.count >= bound else (
        "undetermined" if not result.exact else "fail"
    )
    return status, {
        "labels": gens,
        "classes": result.count,
        "exact": result.exact,
        "lower_bound_required": bound,
        "pairs": {f"{gens[i]},{gens[j]}": v for (i, j), v in sorted(result.pair_results.items())},
    }


def _check_automorphism_order(cons, closures, budget) -> tuple[str, dict]:
    i = cons.generators_I()[0]
    g = cons.build_cayley(i)
    want = cons.q**3 * (cons.q**2 - 1)
    try:
        order = isotest.automorphism_order(g, closures[i], budget)
    except isotest.BudgetExceeded:
        return "undetermined", {"expected": want}
    return ("pass" if order == want else "fail"), {"order": order, "expected": want}


def _check_reverse_pair(cons, closures, budget) -> tuple[str, dict]:
    i = cons.generators_I()[0]
    j = cons.chi(i)
    cert = isotest.are_isomorphic(
        cons.build_cayley(i),
        cons.build_cayley(j),
        closures.get(i),
        closures.get(j),
        budget,
    )
    status = "undetermined" if cert.kind == "undetermined" else "pass"
    return status, {"i": i, "chi_i": j, "result": cert.kind}


def run_suite(q: int, suite: str = "full", seed: int = DEFAULT_SEED) -> RunReport:
    if suite not in ("full", "fast"):
        raise ValueError("suite must be 'full' or 'fast'")
    cons = Construction(q)
    report = RunReport(q=q, suite=suite, seed=seed, field_json=cons.field.to_json())
    full = suite == "full"
    budget = isotest.NODE_BUDGET_DEFAULT

    gens = cons.generators_I()
    wl_labels = gens if full else gens[:1]
    if q > 7:
        wl_labels = gens[:1]

    plan: list[tuple[str, object]] = [
        ("field_axioms", lambda: _check_field_axioms(cons)),
        ("group_axioms", lambda: _check_group_axioms(cons, seed)),
        ("k_automorphisms", lambda: _check_k_automorphisms(cons)),
        ("orbit_partition", lambda: _check_orbits(cons)),
        ("psi_group", lambda: _check_psi_group(cons)),
    ]

    ring = srings.SRing.from_construction(cons)
    tensor = srings.structure_constants(ring)
    plan += [
        ("dds_transversal", lambda: _check_transversal(ring)),
        ("structure_constants", lambda: _check_structure_constants(ring, tensor)),
        ("tensor_identities", lambda: _check_tensor_identities(tensor)),
        ("ddd_parameters", lambda: _check_ddd(cons)),
    ]

    closures: dict[int, coherent.CoherentConfiguration] = {}

    def get_closures():
        for i in wl_labels:
            if i not in closures:
                closures[i] = coherent.wl_close(cons.build_cayley(i))
        return closures

    plan += [("wl_closure", lambda: _check_wl_closure(cons, get_closures()))]
    if len(wl_labels) >= 2:
        pairs = (
            [(a, b) for ai, a in enumerate(wl_labels) for b in wl_labels[ai + 1:]]
            if full and q <= 7
            else [(wl_labels[0], wl_labels[1])]
        )
        plan += [("wl_equivalence", lambda: _check_wl_equivalence(cons, pairs))]
        plan += [("tau_hat_transport", lambda: _check_tau_hat(cons, ring, get_closures()))]
    plan += [("algebraic_automorphisms", lambda: _check_algebraic_automorphisms(cons, tensor))]

    sample = None if (full and q <= 5) else (1_000_000 if full else 100_000)
    plan += [("design_isomorphism", lambda: _check_design_iso(cons, sample))]

    if q <= 5:
        plan += [("one_point_extension", lambda: _check_one_point_extension(cons, get_closures()))]
    if full and q <= 7:
        plan += [("iso_classes", lambda: _check_iso_classes(cons, get_closures(), budget))]
        plan += [("reverse_pair_isomorphism", lambda: _check_reverse_pair(cons, get_closures(), budget))]
    if full and q <= 5:
        plan += [("automorphism_order", lambda: _check_automorphism_order(cons, get_closures(), budget))]

    for name, fn in plan:
        t0 = time.perf_counter()
        try:
            status, data = fn()
        except Exception as exc:  # a crashed check is a failed check, loudly
            status, data = "fail", {"error": f"{type(exc).__name__}: {exc}"}
        report.checks.append(CheckResult(name, status, data))
        report.timings[name] = round(time.perf_counter() - t0, 3)
    return report
