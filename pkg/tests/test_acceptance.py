"""Acceptance suite: each test checks one release criterion end to end at
its stated tolerance and prints one PASS/FAIL line (run with -s to see them
as they complete)."""

import math
import time
from itertools import combinations

import numpy as np

from learnwidth.clique import (
    Graph,
    brute_force_clique,
    decide_clique,
    gap_parameters,
)
from learnwidth.incoherence import (
    Certificate,
    Verdict,
    caratheodory_reduce,
    factor_width,
    interior_point_instance,
    low_rank_membership,
    low_rank_subspaces,
    mu_oracle,
    mu_sdp,
    rank_one_vectors,
    subset_decomposition,
    verify_certificate,
    wmem,
)
from learnwidth.learnability import (
    Povm,
    extract_povm,
    fixture_states,
    learning_width,
    min_error_value,
    states_to_gram,
    verify_povm,
)
from learnwidth.matrices import StateList, Subspace

WORKED = np.array([
    [2.0, 1.0, 1.0, -1.0],
    [1.0, 2.0, 0.0, 1.0],
    [1.0, 0.0, 2.0, -1.0],
    [-1.0, 1.0, -1.0, 2.0],
])


def _report(number: int, ok: bool, label: str, elapsed: float | None = None) -> None:
    timing = f" [{elapsed:.1f}s]" if elapsed is not None else ""
    print(f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {label}{timing}")
    assert ok, f"criterion {number}: {label}"


def test_criterion_1_worked_example():
    start = time.perf_counter()
    ok = factor_width(WORKED) == 3

    subs3 = low_rank_subspaces(WORKED, 3)
    printed3 = [
        [(0, 1, -1, 1), (0, 1, -3, 1)],
        [(1, 0, 2, -1), (3, 0, 2, -3)],
        [(1, 2, 0, 1), (3, 2, 0, -1)],
        [(1, 1, 1, 0), (3, 3, 1, 0)],
    ]
    ok &= len(subs3) == 4
    for span in printed3:
        target = Subspace.from_span(4, span).projection()
        ok &= any(np.linalg.norm(s.projection() - target) <= 1e-8 for s in subs3)

    subs2 = low_rank_subspaces(WORKED, 2)
    printed2 = [(0, 0, 1, 0), (0, 1, 0, 1), (1, 0, 0, -1), (1, 1, 0, 0)]
    ok &= len(subs2) == 4 and all(s.dim == 1 for s in subs2)
    for v in printed2:
        target = Subspace.from_span(4, [v]).projection()
        ok &= any(np.linalg.norm(s.projection() - target) <= 1e-8 for s in subs2)
    ok &= low_rank_membership(WORKED / np.trace(WORKED), 2, 1e-7) is None

    elapsed = time.perf_counter() - start
    ok &= elapsed < 5.0
    _report(1, ok, "worked 4x4 example: width 3, printed subspace families", elapsed)


def test_criterion_2_fixture_widths():
    start = time.perf_counter()
    ok = learning_width(fixture_states("trine")) == 2
    ok &= learning_width(fixture_states("tetrahedral")) == 2
    ok &= learning_width(fixture_states("repeated_basis", k=1, n=4)) == 1
    for k in (1, 2, 3):
        for n in range(1, 10):
            width = learning_width(fixture_states("repeated_basis", k=k, n=n))
            ok &= width <= k
    elapsed = time.perf_counter() - start
    ok &= elapsed < 30.0
    _report(2, ok, "fixture widths: trine 2, tetrahedral 2, basis 1, blocks <= k", elapsed)


def test_criterion_3_reference_povm():
    start = time.perf_counter()
    states = fixture_states("tetrahedral")
    s = 1.0 / math.sqrt(2.0)
    phis = {
        (0, 1): [0.0, s, s], (0, 2): [s, s, 0.0], (0, 3): [s, 0.0, s],
        (1, 2): [s, 0.0, -s], (1, 3): [s, -s, 0.0], (2, 3): [0.0, s, -s],
    }
    reference = Povm(4, 2, 3, {k: 0.5 * np.outer(v, np.conj(v)) for k, v in phis.items()})
    ok = bool(verify_povm(states, reference, 1e-9))

    decomposition = subset_decomposition(states_to_gram(states).entries / 4, 2, 1e-8)
    extracted = extract_povm(states, decomposition)
    ok &= bool(verify_povm(states, extracted, 1e-6))
    _report(3, ok, "printed tetrahedral POVM at 1e-9 and extracted POVM at 1e-6",
            time.perf_counter() - start)


def test_criterion_4_oracle_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    eps = 1e-6
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(2, 8))
        a = rng.standard_normal((n, n))
        if rng.uniform() < 0.5:
            a = a + 1j * rng.standard_normal((n, n))
        c = (a + a.conj().T) / 2
        for k in range(1, n + 1):
            diff = abs(mu_sdp(c, k, eps) - mu_oracle(c, k).value)
            worst = max(worst, diff)
    elapsed = time.perf_counter() - start
    ok = worst <= 2 * eps and elapsed < 600.0
    _report(4, ok, f"oracle vs SDP optimum on 500 matrices (worst {worst:.2e})", elapsed)


def _random_low_rank_instance(rng):
    n = int(rng.integers(3, 9))
    rank = int(rng.integers(1, 4))
    if rng.uniform() < 0.5:
        v = rng.standard_normal((n, rank))
        x = v @ v.T
    else:
        x = np.zeros((n, n))
        for _ in range(rank):
            size = int(rng.integers(1, n + 1))
            vec = np.zeros(n)
            idx = rng.choice(n, size=size, replace=False)
            vec[idx] = rng.standard_normal(size)
            x += np.outer(vec, vec)
    return x / (np.trace(x) * float(rng.uniform(1.0, 1.3)))


def test_criterion_5_path_agreement():
    start = time.perf_counter()
    rng = np.random.default_rng(55)
    eps = 1e-6
    disagreements = 0
    for _ in range(200):
        x = _random_low_rank_instance(rng)
        n = x.shape[0]
        for k in range(1, n + 1):
            via_subsets = subset_decomposition(x, k, eps) is not None
            via_rank = low_rank_membership(x, k, eps) is not None
            if via_subsets != via_rank:
                disagreements += 1
    elapsed = time.perf_counter() - start
    ok = disagreements == 0 and elapsed < 600.0
    _report(5, ok, f"subset and low-rank membership agree ({disagreements} disagreements)",
            elapsed)


def test_criterion_6_clique_reduction():
    start = time.perf_counter()
    rng = np.random.default_rng(66)
    graphs = 0
    ok = True
    while graphs < 300:
        n = int(rng.integers(2, 8))
        edges = set()
        p = float(rng.uniform(0.2, 0.95))
        for u, v in combinations(range(1, n + 1), 2):
            if rng.uniform() < p:
                edges.add((u, v))
        if not edges:
            continue
        graphs += 1
        g = Graph(n, frozenset(edges))
        adjacency = g.adjacency()
        for k in range(2, n + 1):
            truth = brute_force_clique(g, k)
            ok &= decide_clique(g, k, "ORACLE") == truth
            value = mu_oracle(adjacency, k).value
            if truth:
                ok &= abs(value - (k - 1)) <= 1e-9
            else:
                ok &= value <= k - 1 - gap_parameters(g, k).eps_k + 1e-9
    elapsed = time.perf_counter() - start
    ok &= elapsed < 300.0
    _report(6, ok, "clique threshold matches brute force on 300 graphs", elapsed)


def test_criterion_7_reduction_value_equality():
    start = time.perf_counter()
    rng = np.random.default_rng(77)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 6))
        d = int(rng.integers(1, 5))
        a = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        a /= np.linalg.norm(a, axis=1, keepdims=True)
        a *= rng.uniform(0.2, 1.0, size=(n, 1))
        for i in range(n):
            if rng.uniform() < 0.2:
                a[i] = 0.0
        states = StateList(a)
        k = int(rng.integers(1, n + 1))
        raw = min_error_value(states, k, route="gram")
        unit = min_error_value(states, k, route="unit")
        worst = max(worst, abs(raw - unit))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-5 and elapsed < 300.0
    _report(7, ok, f"raw-Gram and normalized-path SDP values agree (worst {worst:.2e})",
            elapsed)


def _planted_incoherent_instance(rng):
    n = int(rng.integers(2, 6))
    k = int(rng.integers(1, n)) if n > 1 else 1
    x = np.zeros((n, n))
    for _ in range(int(rng.integers(2, 5))):
        vec = np.zeros(n)
        size = int(rng.integers(1, k + 1))
        idx = rng.choice(n, size=size, replace=False)
        vec[idx] = rng.standard_normal(size)
        x += np.outer(vec, vec)
    x /= np.trace(x) * float(rng.uniform(1.05, 1.5))
    return x, n, k


def test_criterion_8_certificate_roundtrip():
    start = time.perf_counter()
    rng = np.random.default_rng(88)
    ok = True
    tol = 1e-7
    for _ in range(50):
        x, n, k = _planted_incoherent_instance(rng)
        decomposition = subset_decomposition(x, k, 1e-8)
        ok &= decomposition is not None
        if decomposition is None:
            continue
        certificate = caratheodory_reduce(rank_one_vectors(decomposition), k=k)
        ok &= len(certificate) <= n * n + 1
        ok &= bool(verify_certificate(x, certificate, tol))

        # support tamper: one vector gains a coordinate beyond k
        vectors = [v.copy() for v in certificate.vectors]
        target = max(range(len(vectors)), key=lambda i: np.linalg.norm(vectors[i]))
        grown = vectors[target].copy()
        outside = [i for i in range(n) if abs(grown[i]) <= 1e-12]
        donor = grown.copy()
        idx = int(np.argmax(np.abs(donor)))
        if outside:
            grown[outside[0]] = 1e-3
            needed = k - int(np.sum(np.abs(grown) > tol)) + 1
            for extra in outside[1:max(0, needed) + 1]:
                grown[extra] = 1e-3
            support_cert = Certificate(n, k, vectors[:target] + [grown] + vectors[target + 1:])
            if int(np.sum(np.abs(grown) > tol)) > k:
                check = verify_certificate(x, support_cert, tol)
                ok &= (not check.ok) and check.clause == "support"

        # sum tamper: zero the heaviest vector
        zeroed = [v.copy() for v in certificate.vectors]
        zeroed[target] = np.zeros(n, dtype=complex)
        check = verify_certificate(x, Certificate(n, k, zeroed), tol)
        ok &= (not check.ok) and check.clause == "sum"

        # count tamper: split vectors until the cap is exceeded
        split = [v.copy() for v in certificate.vectors]
        while len(split) <= n * n + 1:
            v = split.pop(int(np.argmax([np.linalg.norm(w) for w in split])))
            split.extend([v / math.sqrt(2.0), v / math.sqrt(2.0)])
        check = verify_certificate(x, Certificate(n, k, split), tol)
        ok &= (not check.ok) and check.clause == "count"

        # trace tamper: scale matrix and vectors together past the bound
        scale = 1.5 / np.trace(x).real
        scaled_vectors = [math.sqrt(scale) * v for v in certificate.vectors]
        check = verify_certificate(scale * x, Certificate(n, k, scaled_vectors), tol)
        ok &= (not check.ok) and check.clause == "trace"
    elapsed = time.perf_counter() - start
    ok &= elapsed < 300.0
    _report(8, ok, "certificates verify and all four tampers name their clause", elapsed)


def _haar_unitary(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_criterion_9_invariance_suite():
    start = time.perf_counter()
    rng = np.random.default_rng(99)
    ok = True
    for trial in range(200):
        kind = trial % 3
        if kind == 0:   # permutation invariance of factor width
            n = int(rng.integers(2, 6))
            x, _, _ = _planted_incoherent_instance_with_size(rng, n)
            perm = rng.permutation(n)
            p = np.eye(n)[perm]
            ok &= factor_width(x) == factor_width(p @ x @ p.T)
        elif kind == 1:   # positive diagonal congruence
            n = int(rng.integers(2, 6))
            x, _, _ = _planted_incoherent_instance_with_size(rng, n)
            d = np.diag(rng.uniform(0.3, 2.0, size=n))
            y = d @ x @ d
            y = y / max(1.0, np.trace(y).real)
            ok &= factor_width(x) == factor_width(y)
        else:   # global unitary rotation of an ensemble
            n = int(rng.integers(2, 5))
            d = int(rng.integers(1, 4))
            a = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
            a /= np.linalg.norm(a, axis=1, keepdims=True)
            states = StateList(a)
            rotated = StateList(a @ _haar_unitary(rng, d).T)
            ok &= learning_width(states) == learning_width(rotated)
        if trial % 10 == 0:   # monotonicity of membership in k
            n = int(rng.integers(2, 6))
            x, _, _ = _planted_incoherent_instance_with_size(rng, n)
            answers = [subset_decomposition(x, k, 1e-6) is not None
                       for k in range(1, n + 1)]
            ok &= answers == sorted(answers) and answers[-1]
    elapsed = time.perf_counter() - start
    ok &= elapsed < 600.0
    _report(9, ok, "permutation/diagonal/unitary invariances and k-monotonicity", elapsed)


def _planted_incoherent_instance_with_size(rng, n):
    k = int(rng.integers(1, n + 1))
    x = np.zeros((n, n))
    for _ in range(int(rng.integers(1, 5))):
        vec = np.zeros(n)
        size = int(rng.integers(1, k + 1))
        idx = rng.choice(n, size=size, replace=False)
        vec[idx] = rng.standard_normal(size)
        x += np.outer(vec, vec)
    if np.trace(x) <= 0:
        x = np.eye(n)
    x /= np.trace(x) * float(rng.uniform(1.05, 1.5))
    return x, n, k


def test_criterion_10_interior_points():
    start = time.perf_counter()
    rng = np.random.default_rng(1010)
    ok = True
    for _ in range(50):
        n = int(rng.integers(2, 7))
        support = int(rng.integers(1, min(3, n) + 1))
        u = np.zeros(n, dtype=complex)
        idx = rng.choice(n, size=support, replace=False)
        u[idx] = rng.standard_normal(support) + 1j * rng.standard_normal(support)
        u /= np.linalg.norm(u)
        x = float(rng.uniform(0.25, 1.0))
        k = max(2, support)
        instance = interior_point_instance(u, x, n)
        delta = x / (2.0 * n)
        verdict = wmem(instance, k, delta)
        ok &= verdict.answer is Verdict.INSIDE
    elapsed = time.perf_counter() - start
    ok &= elapsed < 120.0
    _report(10, ok, "smoothed interior instances classified INSIDE", elapsed)
