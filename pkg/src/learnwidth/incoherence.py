"""Membership, distance, decomposition and optimization over the set of
trace-bounded k-incoherent matrices (PSD matrices expressible as sums of
rank-one terms supported on at most k coordinates), plus succinct
certificates and the constant-rank fast path."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np

from .conic import ConicProgram, PrecisionLimitError, Status, solve, solve_feasibility
from .matrices import (
    HermitianMatrix,
    NotPositiveSemidefinite,
    Subspace,
    as_hermitian,
    eig_hermitian,
    min_eigenvalue,
)

DEFAULT_CAP = 20_000


class EnumerationCapExceeded(RuntimeError):
    """Subset enumeration would exceed the configured cap."""


def _check_k(n: int, k: int) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= {n}, got {k}")


def _check_cap(n: int, k: int, cap: int) -> None:
    if math.comb(n, k) > cap:
        raise EnumerationCapExceeded(
            f"binomial({n}, {k}) = {math.comb(n, k)} exceeds the enumeration cap "
            f"{cap}; use low_rank_membership instead"
        )


def _basis_elements(n: int, real: bool):
    """Hermitian basis elements (E, p, q) with <E, M> = Re M_pq (and Im M_pq
    when complex data is present); spans the space the equalities live in."""
    for p in range(n):
        for q in range(p, n):
            e = np.zeros((n, n), dtype=np.complex128)
            if p == q:
                e[p, p] = 1.0
            else:
                e[p, q] = 0.5
                e[q, p] = 0.5
            yield e, p, q
    if not real:
        for p in range(n):
            for q in range(p + 1, n):
                e = np.zeros((n, n), dtype=np.complex128)
                e[p, q] = 0.5j
                e[q, p] = -0.5j
                yield e, p, q


def _inner(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.real(np.vdot(a, b)))


# ---------------------------------------------------------------------------
# domain types


class Verdict(str, Enum):
    INSIDE = "INSIDE"
    OUTSIDE = "OUTSIDE"
    BOUNDARY = "BOUNDARY"


@dataclass(frozen=True)
class MembershipVerdict:
    answer: Verdict
    distance: float
    precision: float


@dataclass(frozen=True)
class DecompositionTerm:
    support: tuple[int, ...]
    matrix: HermitianMatrix


class IncoherentDecomposition:
    """A family of PSD matrices, each supported on at most k coordinates,
    summing to the decomposed matrix."""

    def __init__(self, n: int, k: int, terms: Sequence[DecompositionTerm], tol: float = 1e-8):
        _check_k(n, max(k, 1))
        for term in terms:
            support = term.support
            if len(support) > k or any(not 0 <= i < n for i in support):
                raise ValueError(f"term support {support} is not a valid <=k subset")
            if tuple(sorted(set(support))) != support:
                raise ValueError(f"term support {support} must be sorted and duplicate-free")
            m = term.matrix
            if m.dim != n:
                raise ValueError("term matrix dimension does not match n")
            outside = np.ones(n, dtype=bool)
            outside[list(support)] = False
            if np.any(outside) and np.max(np.abs(m.entries[outside, :])) > tol:
                raise ValueError("term matrix has weight outside its support")
            if min_eigenvalue(m) < -tol:
                raise ValueError("term matrix is not PSD within tolerance")
        self.n = n
        self.k = k
        self.terms = list(terms)

    def total(self) -> HermitianMatrix:
        acc = np.zeros((self.n, self.n), dtype=np.complex128)
        for term in self.terms:
            acc += term.matrix.entries
        return HermitianMatrix(acc)

    def __len__(self):
        return len(self.terms)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "terms": [
                {
                    "support": [i + 1 for i in term.support],
                    "matrix": term.matrix.to_json_dict(),
                }
                for term in self.terms
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "IncoherentDecomposition":
        terms = [
            DecompositionTerm(
                tuple(sorted(int(i) - 1 for i in item["support"])),
                HermitianMatrix.from_json_dict(item["matrix"]),
            )
            for item in data["terms"]
        ]
        return cls(int(data["n"]), int(data["k"]), terms)


class Certificate:
    """Succinct membership witness: at most n^2 + 1 vectors, each with at
    most k nonzero entries, whose outer products sum to the matrix.

    The container itself is unvalidated so that verify_certificate can
    examine broken certificates; the generation pipeline produces valid ones.
    """

    __slots__ = ("n", "k", "vectors")

    def __init__(self, n: int, k: int, vectors: Sequence):
        vs = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in vectors]
        for v in vs:
            if v.shape != (n,):
                raise ValueError(f"certificate vector has length {v.shape[0]}, expected {n}")
        self.n = n
        self.k = k
        self.vectors = vs

    def __len__(self):
        return len(self.vectors)

    def total(self) -> np.ndarray:
        acc = np.zeros((self.n, self.n), dtype=np.complex128)
        for v in self.vectors:
            acc += np.outer(v, v.conj())
        return acc

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "vectors": [[[z.real, z.imag] for z in v] for v in self.vectors],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Certificate":
        vectors = [
            [complex(entry[0], entry[1]) if isinstance(entry, list) else complex(entry, 0.0)
             for entry in vec]
            for vec in data["vectors"]
        ]
        return cls(int(data["n"]), int(data["k"]), vectors)


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    clause: str | None
    detail: str

    def __bool__(self) -> bool:
        return self.ok


class MuResult(NamedTuple):
    value: float
    subset: tuple[int, ...]


# ---------------------------------------------------------------------------
# distance and weak membership


def distance_to_Ik(X, k: int, eps: float, cap: int = DEFAULT_CAP) -> float:
    """Frobenius distance from X to the trace-bounded k-incoherent set.

    Returns an estimate a with |a^2 - min ||X - Y||_F^2| <= eps, computed by
    the Schur-complement trace gadget; far inputs are rejected early by the
    reverse-triangle bound and get the certified lower bound ||X||_F - 1.
    """
    x = as_hermitian(X)
    n = x.dim
    _check_k(n, k)
    if eps <= 0:
        raise ValueError("eps must be positive")
    _check_cap(n, k, cap)
    delta_eff = math.sqrt(3.0 * eps)
    norm_x = x.norm_frobenius()
    if norm_x > 1.0 + 2.0 * delta_eff:
        return norm_x - 1.0

    # One PSD block W holds the gadget [[I, Y-X], [Y-X, Z]]; the auxiliary
    # Y = sum of the lifted subset blocks and Z = W_22 need no blocks of
    # their own, only the coupling equalities below.
    real = x.is_real()
    subsets = list(combinations(range(n), k))
    program = ConicProgram(norm_bound=n * (delta_eff + 2.0) ** 2 + n + 2)
    w_big = program.add_block(2 * n)
    sub_blocks = [program.add_block(k) for _ in subsets]
    t_blk = program.add_block(1)
    s_blk = program.add_block(1)
    z_mask = np.zeros((2 * n, 2 * n))
    z_mask[n:, n:] = np.eye(n)
    program.set_objective(w_big, -z_mask)

    # W_11 = I
    for e, p, q in _basis_elements(n, real):
        top = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        top[:n, :n] = e
        program.add_equality({w_big: top}, _inner(e, np.eye(n)))

    # W_12 - sum lift(w_S) = -X, through basis elements on the off block
    containing = _pair_to_subsets(subsets)
    corners = [(p, q, False) for p in range(n) for q in range(n)]
    if not real:
        corners += [(p, q, True) for p in range(n) for q in range(n)]
    for p, q, imag in corners:
        e = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        e[p, n + q] = 0.5j if imag else 0.5
        e[n + q, p] = -0.5j if imag else 0.5
        coupling = e[:n, n:] + e[n:, :n]   # Hermitian coefficient of Y
        key = (p, q) if p <= q else (q, p)
        coeffs: dict[int, np.ndarray] = {w_big: e}
        for bi in containing.get(key, []):
            s = subsets[bi]
            coeffs[sub_blocks[bi]] = -coupling[np.ix_(s, s)]
        program.add_equality(coeffs, -_inner(coupling, x.entries))

    trace_coeffs: dict[int, np.ndarray] = {b: np.eye(k) for b in sub_blocks}
    trace_coeffs[t_blk] = np.array([[1.0]])
    program.add_equality(trace_coeffs, 1.0)
    program.add_equality({w_big: z_mask, s_blk: [[1.0]]}, (delta_eff + 2.0) ** 2)

    sol = solve(program, eps / 3.0)
    if sol.status is not Status.OPTIMAL:
        raise PrecisionLimitError(
            f"distance SDP for n={n}, k={k} did not reach the requested precision",
            -sol.value, sol.certified_gap,
        )
    return math.sqrt(max(-sol.value, 0.0))


def _pair_to_subsets(subsets: list[tuple[int, ...]]) -> dict[tuple[int, int], list[int]]:
    """Map each index pair (p <= q) to the subsets containing both."""
    containing: dict[tuple[int, int], list[int]] = {}
    for bi, s in enumerate(subsets):
        for p in s:
            for q in s:
                if p <= q:
                    containing.setdefault((p, q), []).append(bi)
    return containing


def wmem(X, k: int, delta: float, cap: int = DEFAULT_CAP) -> MembershipVerdict:
    """Weak membership in the k-incoherent set at accuracy delta.

    Promise inputs (delta-deep inside, or more than delta outside) are never
    misclassified; undecidable inputs near the boundary get BOUNDARY.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    eps = delta * delta / 3.0
    distance = distance_to_Ik(X, k, eps, cap=cap)
    precision = delta * (1.0 - 1.0 / math.sqrt(3.0))
    if distance <= delta - precision:
        answer = Verdict.INSIDE
    elif distance > delta + precision:
        answer = Verdict.OUTSIDE
    else:
        answer = Verdict.BOUNDARY
    return MembershipVerdict(answer, distance, precision)


# ---------------------------------------------------------------------------
# decomposition paths


def subset_decomposition(X, k: int, eps: float, cap: int = DEFAULT_CAP):
    """Decompose X as a sum of PSD matrices supported on the k-subsets,
    or return None when no such decomposition exists within residual eps."""
    x = as_hermitian(X)
    n = x.dim
    _check_k(n, k)
    lam = min_eigenvalue(x)
    if lam < -eps:
        raise NotPositiveSemidefinite(
            f"not positive semidefinite: minimum eigenvalue {lam:.3e}", lam)
    if x.trace() > 1.0 + eps:
        raise ValueError(f"trace {x.trace():.6f} exceeds 1 + eps; rescale first")
    _check_cap(n, k, cap)

    real = x.is_real()
    subsets = list(combinations(range(n), k))
    program = ConicProgram(norm_bound=n + 2.0)
    sub_blocks = [program.add_block(k) for _ in subsets]
    containing = _pair_to_subsets(subsets)
    uncovered = 0.0   # entries no subset block can reach are pure residual
    for e, p, q in _basis_elements(n, real):
        rhs = _inner(e, x.entries)
        blocks = containing.get((p, q), [])
        if not blocks:
            uncovered += abs(rhs)
            continue
        coeffs = {
            sub_blocks[bi]: e[np.ix_(subsets[bi], subsets[bi])]
            for bi in blocks
        }
        program.add_equality(coeffs, rhs)
    if uncovered > eps:
        return None

    sol = solve_feasibility(program, eps)
    if sol.status is Status.INFEASIBLE or sol.residual + uncovered > eps:
        if sol.status is Status.PRECISION_LIMIT:
            raise PrecisionLimitError(
                f"subset feasibility SDP for n={n}, k={k} failed to certify",
                sol.residual, sol.certified_gap,
            )
        return None
    if sol.status is not Status.OPTIMAL:
        raise PrecisionLimitError(
            f"subset feasibility SDP for n={n}, k={k} failed to certify",
            sol.residual, sol.certified_gap,
        )
    terms = []
    drop = 1e-10 * (1.0 + x.norm_frobenius())
    for bi, s in enumerate(subsets):
        small = sol.blocks[bi]
        if np.linalg.norm(small) <= drop:
            continue
        lifted = np.zeros((n, n), dtype=np.complex128)
        lifted[np.ix_(s, s)] = small
        terms.append(DecompositionTerm(tuple(s), HermitianMatrix(lifted)))
    return IncoherentDecomposition(n, k, terms)


def low_rank_subspaces(X, k: int, tol: float = 1e-9) -> list[Subspace]:
    """Subspace family covering every vector of range(X) with at most k
    nonzero coordinates.

    The range is intersected with coordinate hyperplanes for n - k rounds,
    deduplicating by projection matrices; the set of already-zeroed
    coordinates is tracked so each returned subspace is an exact
    (n - k)-fold cut and hence k-sparse throughout.
    """
    x = as_hermitian(X)
    n = x.dim
    _check_k(n, k)
    w, v = eig_hermitian(x)
    lmax = max(float(w[0]), 0.0)
    rank = int(np.sum(w > tol * max(lmax, 1e-300)))
    if rank == 0:
        return []
    level: list[tuple[np.ndarray, frozenset[int]]] = [(v[:, :rank], frozenset())]
    for _ in range(n - k):
        nxt_proj: list[np.ndarray] = []
        nxt: list[tuple[np.ndarray, frozenset[int]]] = []
        for basis, zeroed in level:
            for i in range(n):
                if i in zeroed:
                    continue
                cut = _intersect_coordinate_zero(basis, i)
                if cut.shape[1] == 0:
                    continue
                proj = cut @ cut.conj().T
                if any(np.linalg.norm(proj - p) <= 1e-8 for p in nxt_proj):
                    continue
                nxt_proj.append(proj)
                nxt.append((cut, zeroed | {i}))
        level = nxt
        if not level:
            break
    return [Subspace(n, b) for b, _ in level]


def _intersect_coordinate_zero(basis: np.ndarray, i: int) -> np.ndarray:
    """Orthonormal basis of span(basis) intersected with {v : v_i = 0}."""
    row = basis[i, :]
    if np.linalg.norm(row) <= 1e-12:
        return basis
    _, _, vh = np.linalg.svd(row.reshape(1, -1))
    null = vh[1:].conj().T
    return basis @ null


def low_rank_membership(X, k: int, eps: float, tol: float = 1e-9):
    """Rank-based membership: decompose X over the subspace family of
    low_rank_subspaces, or return None when infeasible.

    Each unknown is held in the coordinates of its subspace, which enforces
    the projection identity for that subspace exactly.
    """
    x = as_hermitian(X)
    n = x.dim
    _check_k(n, k)
    lam = min_eigenvalue(x)
    if lam < -eps:
        raise NotPositiveSemidefinite(
            f"not positive semidefinite: minimum eigenvalue {lam:.3e}", lam)
    subspaces = low_rank_subspaces(x, k, tol)
    if not subspaces:
        if x.norm_frobenius() <= eps:
            return IncoherentDecomposition(n, k, [])
        return None

    real = x.is_real() and all(np.max(np.abs(s.basis.imag)) == 0.0 for s in subspaces)
    program = ConicProgram(norm_bound=n + 2.0)
    blocks = [program.add_block(s.dim) for s in subspaces]
    uncovered = 0.0
    for e, _, _ in _basis_elements(n, real):
        rhs = _inner(e, x.entries)
        coeffs = {}
        for bi, s in enumerate(subspaces):
            c = s.basis.conj().T @ e @ s.basis
            c = (c + c.conj().T) / 2.0
            if np.max(np.abs(c)) > 0.0:
                coeffs[blocks[bi]] = c
        if not coeffs:
            uncovered += abs(rhs)
            continue
        program.add_equality(coeffs, rhs)
    if uncovered > eps:
        return None

    sol = solve_feasibility(program, eps)
    if sol.status is Status.INFEASIBLE or sol.residual + uncovered > eps:
        if sol.status is Status.PRECISION_LIMIT:
            raise PrecisionLimitError(
                f"low-rank feasibility SDP for n={n}, k={k} failed to certify",
                sol.residual, sol.certified_gap,
            )
        return None
    if sol.status is not Status.OPTIMAL:
        raise PrecisionLimitError(
            f"low-rank feasibility SDP for n={n}, k={k} failed to certify",
            sol.residual, sol.certified_gap,
        )
    terms = []
    drop = 1e-10 * (1.0 + x.norm_frobenius())
    for bi, s in enumerate(subspaces):
        full = s.basis @ sol.blocks[bi] @ s.basis.conj().T
        if np.linalg.norm(full) <= drop:
            continue
        support = s.support()
        mask = np.zeros(n, dtype=bool)
        mask[list(support)] = True
        full[~mask, :] = 0.0
        full[:, ~mask] = 0.0
        terms.append(DecompositionTerm(support, HermitianMatrix(full)))
    return IncoherentDecomposition(n, k, terms)


def factor_width(X, eps: float = 1e-6, cap: int = DEFAULT_CAP,
                 method: str = "AUTO", tol: float = 1e-9) -> int:
    """Smallest k for which X (rescaled to trace at most 1) is k-incoherent.

    Binary search over k, valid since k-incoherence is monotone in k;
    membership per k uses subset enumeration when it fits under the cap and
    the rank-based path otherwise.
    """
    x = as_hermitian(X)
    scale = max(1.0, x.trace())
    x = HermitianMatrix(x.entries / scale)
    lam = min_eigenvalue(x)
    if lam < -eps:
        raise NotPositiveSemidefinite(
            f"not positive semidefinite: minimum eigenvalue {lam:.3e}", lam)
    n = x.dim

    def member(k: int) -> bool:
        if method == "LOWRANK" or (method == "AUTO" and math.comb(n, k) > cap):
            return low_rank_membership(x, k, eps, tol) is not None
        return subset_decomposition(x, k, eps, cap) is not None

    lo, hi = 1, n
    while lo < hi:
        mid = (lo + hi) // 2
        if member(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


# ---------------------------------------------------------------------------
# spectral sufficient condition and interior points


def spectral_2_incoherent(M) -> bool:
    """Sufficient eigenvalue test for 2-incoherence.

    True guarantees the (PSD) input is 2-incoherent; False is inconclusive.
    """
    m = as_hermitian(M)
    if m.dim == 1:
        raise ValueError("the sufficient condition is undefined for 1x1 matrices")
    w, _ = eig_hermitian(m)
    trace = float(np.sum(w))
    lhs = float(np.sum(w * w))
    rhs = trace * trace / (m.dim - 1)
    return lhs <= rhs + 1e-12 * max(1.0, rhs)


def interior_point_instance(u, x: float, n: int) -> HermitianMatrix:
    """Matrix guaranteed to lie x/(2n)-deep inside the k-incoherent set for
    every k covering the support of the unit vector u (and k >= 2)."""
    vec = np.asarray(u, dtype=np.complex128).reshape(-1)
    if vec.shape != (n,):
        raise ValueError(f"u must have length {n}")
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"u must be a unit vector, got norm {norm:.12f}")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    delta = x / (2.0 * n)
    mat = (1.0 - delta / n) * (x * np.eye(n) / n + (1.0 - x) * np.outer(vec, vec.conj()))
    return HermitianMatrix(mat)


# ---------------------------------------------------------------------------
# certificates


def verify_certificate(X, certificate: Certificate, tol: float) -> CertificateCheck:
    """Check a succinct membership certificate clause by clause.

    Clauses, in order: vector count, per-vector support size, sum equality,
    trace bound. The first violated clause is reported.
    """
    x = as_hermitian(X)
    n = x.dim
    if certificate.n != n:
        raise ValueError(f"certificate dimension {certificate.n} does not match matrix {n}")
    limit = n * n + 1
    if len(certificate) > limit:
        return CertificateCheck(False, "count",
                                f"{len(certificate)} vectors exceed n^2+1 = {limit}")
    for idx, v in enumerate(certificate.vectors):
        nnz = int(np.sum(np.abs(v) > tol))
        if nnz > certificate.k:
            return CertificateCheck(False, "support",
                                    f"vector {idx} has {nnz} entries above {tol:.1e}, "
                                    f"limit k = {certificate.k}")
    gap = float(np.linalg.norm(x.entries - certificate.total()))
    bound = tol * (1.0 + x.norm_frobenius())
    if gap > bound:
        return CertificateCheck(False, "sum",
                                f"reconstruction error {gap:.3e} exceeds {bound:.3e}")
    if x.trace() > 1.0 + tol:
        return CertificateCheck(False, "trace", f"trace {x.trace():.6f} exceeds 1 + tol")
    return CertificateCheck(True, None, "certificate accepted")


def rank_one_vectors(decomposition: IncoherentDecomposition,
                     tol: float = 1e-10) -> list[np.ndarray]:
    """Expand a decomposition into rank-one vectors, preserving supports."""
    out = []
    for term in decomposition.terms:
        s = list(term.support)
        if not s:
            continue
        small = term.matrix.entries[np.ix_(s, s)]
        w, v = np.linalg.eigh((small + small.conj().T) / 2.0)
        for lam, col in zip(w, v.T):
            if lam > tol:
                vec = np.zeros(decomposition.n, dtype=np.complex128)
                vec[s] = math.sqrt(float(lam)) * col
                out.append(vec)
    return out


def caratheodory_reduce(vectors: Sequence, k: int | None = None,
                        support_tol: float = 1e-12) -> Certificate:
    """Reduce rank-one terms to at most n^2 + 1 with the same sum.

    While more terms remain, a null combination of the (realified) outer
    products is found and the largest-coefficient direction is eliminated;
    coefficients stay nonnegative so supports only ever shrink.
    """
    vs = [np.asarray(v, dtype=np.complex128).reshape(-1).copy() for v in vectors]
    if not vs:
        raise ValueError("at least one term is required")
    n = vs[0].shape[0]
    if any(v.shape != (n,) for v in vs):
        raise ValueError("all vectors must have equal length")
    if k is None:
        k = max(int(np.sum(np.abs(v) > support_tol)) for v in vs)
    limit = n * n + 1

    def realvec(v: np.ndarray) -> np.ndarray:
        outer = np.outer(v, v.conj())
        iu = np.triu_indices(n, 1)
        return np.concatenate([
            np.real(np.diag(outer)),
            math.sqrt(2.0) * np.real(outer[iu]),
            math.sqrt(2.0) * np.imag(outer[iu]),
        ])

    while len(vs) > limit:
        a = np.column_stack([realvec(v) for v in vs])
        _, svals, vh = np.linalg.svd(a)
        smallest = svals[-1] if len(svals) == a.shape[1] else 0.0
        scale = max(float(svals[0]), 1e-300)
        if smallest > 1e-7 * scale:
            raise RuntimeError(
                "failed to find an affine dependency among "
                f"{len(vs)} terms; tolerance configuration is inconsistent")
        c = np.real(vh[-1])
        c = c / np.max(np.abs(c))
        if not np.any(c > 1e-12):
            c = -c
        positive = c > 1e-12
        ratios = 1.0 / c[positive]
        t = float(np.min(ratios))
        weights = 1.0 - t * c
        # pivot on the largest coefficient among those driven to zero
        hit = np.where(weights <= 1e-10)[0]
        if hit.size == 0:
            hit = np.array([int(np.argmin(weights))])
        keep = np.ones(len(vs), dtype=bool)
        keep[hit] = False
        vs = [math.sqrt(max(float(w), 0.0)) * v
              for w, v, kept in zip(weights, vs, keep) if kept]

    cleaned = []
    for v in vs:
        vv = v.copy()
        vv[np.abs(vv) <= support_tol] = 0.0
        cleaned.append(vv)
    return Certificate(n, k, cleaned)


# ---------------------------------------------------------------------------
# linear optimization over the k-incoherent set


def mu_oracle(C, k: int, cap: int = DEFAULT_CAP) -> MuResult:
    """Exact optimum of <C, X> over the k-incoherent trace-bounded set.

    Equals the largest maximal eigenvalue over principal submatrices of size
    at most k, floored at zero (the extreme point 0); ties go to the
    lexicographically smallest subset.
    """
    c = as_hermitian(C)
    n = c.dim
    _check_k(n, k)
    _check_cap(n, k, cap)
    best_value = 0.0
    best_subset: tuple[int, ...] = ()
    for size in range(1, k + 1):
        for subset in combinations(range(n), size):
            sub = c.entries[np.ix_(subset, subset)]
            lam = float(np.linalg.eigvalsh(sub)[-1])
            if lam > best_value:
                best_value = lam
                best_subset = subset
    return MuResult(best_value, best_subset)


def mu_sdp(C, k: int, eps: float, cap: int = DEFAULT_CAP) -> float:
    """SDP value of the same optimization, via one PSD block per k-subset
    and a unit trace cap."""
    c = as_hermitian(C)
    n = c.dim
    _check_k(n, k)
    _check_cap(n, k, cap)
    if eps <= 0:
        raise ValueError("eps must be positive")
    subsets = list(combinations(range(n), k))
    program = ConicProgram(norm_bound=2.0)
    blocks = [program.add_block(k) for _ in subsets]
    for bi, s in enumerate(subsets):
        program.set_objective(blocks[bi], c.entries[np.ix_(s, s)])
    t_blk = program.add_block(1)
    coeffs: dict[int, np.ndarray] = {b: np.eye(k) for b in blocks}
    coeffs[t_blk] = np.array([[1.0]])
    program.add_equality(coeffs, 1.0)
    sol = solve(program, eps)
    if sol.status is not Status.OPTIMAL:
        raise PrecisionLimitError(
            f"mu SDP for n={n}, k={k} did not reach precision {eps:.1e}",
            sol.value, sol.certified_gap)
    return float(sol.value)
