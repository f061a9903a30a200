"""Zero-error classification of indexed pure-state lists: Gram construction,
k-learnability decisions through the incoherent-set machinery, measurement
extraction and verification, and the standard fixture ensembles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .conic import ConicProgram, PrecisionLimitError, Status, solve
from .incoherence import (
    DEFAULT_CAP,
    IncoherentDecomposition,
    Verdict,
    _basis_elements,
    _check_k,
    _inner,
    low_rank_membership,
    subset_decomposition,
    wmem,
)
from .matrices import HermitianMatrix, StateList, min_eigenvalue

POVM_EXTRACTION_TOL = 1e-6


class LearnVerdict(str, Enum):
    LEARNABLE = "LEARNABLE"
    NOT_LEARNABLE = "NOT_LEARNABLE"
    BOUNDARY = "BOUNDARY"


class Povm:
    """Measurement with one PSD operator per k-subset of state indices.

    Subsets are kept 0-based and sorted in memory; file formats are 1-based.
    """

    __slots__ = ("n", "k", "dim", "elements")

    def __init__(self, n: int, k: int, dim: int, elements: dict):
        clean: dict[tuple[int, ...], np.ndarray] = {}
        for subset, matrix in elements.items():
            key = tuple(sorted(int(i) for i in subset))
            if len(key) != k or len(set(key)) != k:
                raise ValueError(f"POVM outcome {key} is not a {k}-subset")
            if any(not 0 <= i < n for i in key):
                raise ValueError(f"POVM outcome {key} has indices outside 0..{n - 1}")
            m = np.asarray(matrix, dtype=np.complex128)
            if m.shape != (dim, dim):
                raise ValueError(f"POVM element for {key} has shape {m.shape}, expected {(dim, dim)}")
            clean[key] = (m + m.conj().T) / 2.0
        self.n = n
        self.k = k
        self.dim = dim
        self.elements = dict(sorted(clean.items()))

    def total(self) -> np.ndarray:
        acc = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for m in self.elements.values():
            acc += m
        return acc

    def __len__(self):
        return len(self.elements)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "d": self.dim,
            "elements": [
                {
                    "subset": [i + 1 for i in subset],
                    "matrix": HermitianMatrix(matrix).to_json_dict(),
                }
                for subset, matrix in self.elements.items()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Povm":
        elements = {
            tuple(int(i) - 1 for i in item["subset"]):
                HermitianMatrix.from_json_dict(item["matrix"]).entries
            for item in data["elements"]
        }
        return cls(int(data["n"]), int(data["k"]), int(data["d"]), elements)


@dataclass(frozen=True)
class PovmCheck:
    ok: bool
    clause: str | None
    max_violation: float

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class LearnReport:
    verdict: LearnVerdict
    width: int | None = None
    max_violation: float = float("nan")
    povm: Povm | None = None


def states_to_gram(states: StateList) -> HermitianMatrix:
    """Gram matrix of pairwise inner products <psi_i | psi_j>."""
    a = states.array
    gram = HermitianMatrix(a.conj() @ a.T)
    lam = min_eigenvalue(gram)
    if lam < -1e-9 * (1.0 + gram.norm_frobenius()):
        raise AssertionError(f"Gram matrix unexpectedly indefinite ({lam:.3e})")
    return gram


def default_delta(states: StateList) -> float:
    """Decision accuracy used when the caller does not supply one.

    Scaled so the induced squared-distance threshold stays well above the
    float64 interior-point noise floor.
    """
    gram = states_to_gram(states)
    return 1e-4 * (1.0 + gram.norm_frobenius()) / states.n


def _decompose_gram(x: HermitianMatrix, k: int, eps: float, cap: int):
    n = x.dim
    if math.comb(n, k) > cap:
        return low_rank_membership(x, k, eps)
    return subset_decomposition(x, k, eps, cap)


def is_k_learnable(states: StateList, k: int, delta: float,
                   cap: int = DEFAULT_CAP, extract: bool = True) -> LearnReport:
    """Decide k-learnability by weak membership of the normalized Gram
    matrix; on a positive verdict a witnessing measurement is extracted and
    attached when the decomposition solve succeeds (pass extract=False to
    skip that step in bulk sweeps)."""
    _check_k(states.n, k)
    gram = states_to_gram(states)
    x = HermitianMatrix(gram.entries / states.n)
    verdict = wmem(x, k, delta, cap=cap)
    if verdict.answer is Verdict.OUTSIDE:
        return LearnReport(LearnVerdict.NOT_LEARNABLE)
    if verdict.answer is Verdict.BOUNDARY:
        return LearnReport(LearnVerdict.BOUNDARY)
    report = LearnReport(LearnVerdict.LEARNABLE)
    if not extract:
        return report
    try:
        decomposition = _decompose_gram(x, k, 1e-7 * (1.0 + x.norm_frobenius()), cap)
    except PrecisionLimitError:
        decomposition = None
    if decomposition is not None:
        povm = extract_povm(states, decomposition)
        check = verify_povm(states, povm, POVM_EXTRACTION_TOL)
        if check.ok:
            report.povm = povm
            report.max_violation = check.max_violation
    return report


def learning_width(states: StateList, delta: float | None = None,
                   cap: int = DEFAULT_CAP):
    """Smallest k for which the list is k-learnable.

    Binary search over k; a BOUNDARY verdict at the pivotal k is reported as
    the interval (k, k+1) instead of being resolved arbitrarily.
    """
    if delta is None:
        delta = default_delta(states)
    n = states.n
    verdicts: dict[int, LearnVerdict] = {}

    def verdict_at(k: int) -> LearnVerdict:
        if k not in verdicts:
            verdicts[k] = is_k_learnable(states, k, delta, cap=cap,
                                         extract=False).verdict
        return verdicts[k]

    lo, hi = 1, n
    while lo < hi:
        mid = (lo + hi) // 2
        if verdict_at(mid) is LearnVerdict.LEARNABLE:
            hi = mid
        else:
            lo = mid + 1
    if verdict_at(lo) is not LearnVerdict.LEARNABLE:
        raise RuntimeError(f"no learnable k found up to n={n}; delta={delta} too tight")
    # the verdict sequence in k is OUTSIDE*, BOUNDARY*, LEARNABLE*; widen the
    # answer over any undecided band instead of guessing
    first_undecided = lo
    while first_undecided > 1 and verdict_at(first_undecided - 1) is LearnVerdict.BOUNDARY:
        first_undecided -= 1
    if first_undecided < lo:
        return (first_undecided, lo)
    return lo


def extract_povm(states: StateList, decomposition: IncoherentDecomposition) -> Povm:
    """Turn a decomposition of (1/n) Gram into a zero-error measurement.

    With V the matrix of state columns, each term W maps to
    n (V^+)* W V^+ and the projector complement of range(V) is spread
    uniformly so the elements sum to the identity. Correctness is always
    re-checked with verify_povm rather than assumed.
    """
    n, d = states.n, states.dim
    gram = states_to_gram(states)
    target = gram.entries / n
    mismatch = float(np.linalg.norm(decomposition.total().entries - target))
    if mismatch > 1e-6 * (1.0 + np.linalg.norm(target)):
        raise ValueError(
            f"decomposition does not sum to Gram/n: mismatch {mismatch:.3e}")
    k = decomposition.k
    v = states.column_matrix()            # d x n
    v_pinv = np.linalg.pinv(v)             # n x d
    lift = v_pinv.conj().T                 # d x n

    elements: dict[tuple[int, ...], np.ndarray] = {}
    for term in decomposition.terms:
        key = _pad_subset(term.support, k, n)
        m = n * (lift @ term.matrix.entries @ v_pinv)
        elements[key] = elements.get(key, 0) + m
    if not elements:
        elements[tuple(range(k))] = np.zeros((d, d), dtype=np.complex128)
    leftover = np.eye(d) - v @ v_pinv
    share = leftover / len(elements)
    for key in list(elements):
        elements[key] = elements[key] + share
    return Povm(n, k, d, elements)


def _pad_subset(support: tuple[int, ...], k: int, n: int) -> tuple[int, ...]:
    """Grow a support to exactly k indices with the smallest unused ones."""
    extra = (i for i in range(n) if i not in support)
    padded = list(support)
    while len(padded) < k:
        padded.append(next(extra))
    return tuple(sorted(padded))


def verify_povm(states: StateList, povm: Povm, tol: float) -> PovmCheck:
    """Check positivity, completeness and the zero-error condition.

    Reports the magnitude of the worst violation together with the first
    failing clause ('psd', 'sum', 'zero_error').
    """
    if povm.dim != states.dim or povm.n != states.n:
        raise ValueError("POVM dimensions do not match the state list")
    for subset, m in povm.elements.items():
        lam = float(np.linalg.eigvalsh(m)[0])
        if lam < -tol:
            return PovmCheck(False, "psd", -lam)
    completeness = float(np.linalg.norm(povm.total() - np.eye(povm.dim)))
    if completeness > tol:
        return PovmCheck(False, "sum", completeness)
    worst = 0.0
    for subset, m in povm.elements.items():
        for i in range(states.n):
            if i in subset:
                continue
            val = float(np.real(states.array[i].conj() @ m @ states.array[i]))
            worst = max(worst, val)
    if worst > tol:
        return PovmCheck(False, "zero_error", worst)
    return PovmCheck(True, None, worst)


# ---------------------------------------------------------------------------
# fixtures


def fixture_states(name: str, k: int | None = None, n: int | None = None,
                   d: int | None = None, seed: int | None = None) -> StateList:
    """Named state ensembles used across examples and tests.

    trine: three symmetric qubit states; tetrahedral: four states in
    dimension 3; repeated_basis(k, n): computational-basis states repeated
    k times each; random(seed, n, d): seeded unit vectors.
    """
    if name == "trine":
        s = math.sqrt(3.0) / 2.0
        return StateList([[1.0, 0.0], [-0.5, -s], [-0.5, s]])
    if name == "tetrahedral":
        r = 1.0 / math.sqrt(3.0)
        return StateList([
            [r, r, r],
            [r, -r, -r],
            [-r, -r, r],
            [-r, r, -r],
        ])
    if name == "repeated_basis":
        if not (k and n) or k < 1 or n < 1:
            raise ValueError("repeated_basis requires positive k and n")
        dim = math.ceil(n / k)
        vecs = np.zeros((n, dim))
        for i in range(n):
            vecs[i, i // k] = 1.0
        return StateList(vecs)
    if name == "random":
        if seed is None or not (n and d):
            raise ValueError("random requires seed, n and d")
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        a /= np.linalg.norm(a, axis=1, keepdims=True)
        return StateList(a)
    raise ValueError(
        f"unknown fixture {name!r}; available: trine, tetrahedral, "
        "repeated_basis(k, n), random(seed, n, d)")


def normalize_ensemble(states: StateList, tol: float = 1e-12):
    """Split the ensemble into unit states and a diagonal of norms.

    Zero-norm states are replaced with fresh pairwise-orthogonal directions
    (the dimension is extended as needed); returns (normalized, D, padding)
    with G = D G_unit D and padding listing the replaced indices.
    """
    a = states.array
    n, d = a.shape
    norms = np.linalg.norm(a, axis=1)
    padding = tuple(int(i) for i in np.nonzero(norms <= tol)[0])
    extra = len(padding)
    out = np.zeros((n, d + extra), dtype=np.complex128)
    slot = d
    for i in range(n):
        if i in padding:
            out[i, slot] = 1.0
            slot += 1
        else:
            out[i, :d] = a[i] / norms[i]
    diag = HermitianMatrix(np.diag(np.where(norms > tol, norms, 0.0)))
    return StateList(out), diag, padding


# ---------------------------------------------------------------------------
# zero-error SDP value along both reduction routes


def min_error_value(states: StateList, k: int, eps: float = 1e-7,
                    route: str = "gram", cap: int = DEFAULT_CAP) -> float:
    """Minimal average misclassification weight over subset measurements.

    Zero exactly when the list is k-learnable. route='gram' works on the raw
    Gram matrix; route='unit' on unit-normalized states with squared-norm
    weights. Both routes provably share the same value, which the test suite
    exercises on ensembles with subnormalized and zero states.
    """
    _check_k(states.n, k)
    n = states.n
    if math.comb(n, k) > cap:
        raise ValueError(f"binomial({n},{k}) exceeds cap {cap}")
    if route == "gram":
        gram = states_to_gram(states)
        weights = np.ones(n)
    elif route == "unit":
        unit_states, diag, _ = normalize_ensemble(states)
        gram = states_to_gram(unit_states)
        r = np.real(np.diag(diag.entries))
        weights = r * r
    else:
        raise ValueError("route must be 'gram' or 'unit'")
    target = gram.entries / n

    # Every PSD summand of the target lives inside its range, so the program
    # is compressed onto an orthonormal range basis; this restores a strictly
    # feasible interior point on singular Gram matrices.
    w_eig, v_eig = np.linalg.eigh(target)
    rank = int(np.sum(w_eig > 1e-12 * max(float(w_eig[-1]), 1e-300)))
    if rank == 0:
        return 0.0
    basis = v_eig[:, -rank:]
    compressed = basis.conj().T @ target @ basis

    real = bool(np.max(np.abs(target.imag)) == 0.0
                and np.max(np.abs(basis.imag)) == 0.0)
    subsets = list(combinations(range(n), k))
    program = ConicProgram(norm_bound=n + 2.0)
    blocks = [program.add_block(rank) for _ in subsets]
    for bi, s in enumerate(subsets):
        outside = np.ones(n)
        outside[list(s)] = 0.0
        cost = basis.conj().T @ np.diag(weights * outside) @ basis
        program.set_objective(blocks[bi], -(cost + cost.conj().T) / 2.0)
    for e, _, _ in _basis_elements(rank, real):
        program.add_equality({b: e for b in blocks}, _inner(e, compressed))
    sol = solve(program, eps)
    if sol.status is not Status.OPTIMAL:
        raise PrecisionLimitError(
            f"misclassification SDP for n={n}, k={k} did not converge",
            -sol.value, sol.certified_gap)
    return max(-float(sol.value), 0.0)
