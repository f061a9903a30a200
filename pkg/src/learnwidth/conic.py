"""Block-structured semidefinite programs in standard form and a solve
contract with certified additive precision.

A program is  maximize  sum_b <A_b, X_b>
              subject to sum_b <C_{j,b}, X_b> = rhs_j   for each equality j,
                         every block X_b positive semidefinite,
with Hermitian cost and coefficient matrices. Inequalities are modeled by
the callers with explicit 1x1 slack blocks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from cvxopt import matrix as cvx_matrix
from cvxopt import spmatrix as cvx_spmatrix
from cvxopt import solvers as cvx_solvers


class Status(str, Enum):
    OPTIMAL = "OPTIMAL"
    INFEASIBLE = "INFEASIBLE"
    PRECISION_LIMIT = "PRECISION_LIMIT"


class PrecisionLimitError(RuntimeError):
    """Raised by callers that cannot proceed without certified precision.

    Carries the best available objective estimate and its error bound so the
    failure is never a silent wrong answer.
    """

    def __init__(self, message: str, value: float, gap: float):
        super().__init__(f"{message} (best value {value:.6e}, gap {gap:.2e})")
        self.value = value
        self.gap = gap


def _as_coeff(dim: int, m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.shape != (dim, dim):
        raise ValueError(f"coefficient shape {a.shape} does not match block dimension {dim}")
    if np.max(np.abs(a - a.conj().T)) > 1e-10:
        raise ValueError("coefficient matrices must be Hermitian")
    return (a + a.conj().T) / 2.0


class ConicProgram:
    """Container for one standard-form SDP; built incrementally.

    Block variables are addressed by the integer returned from add_block.
    """

    def __init__(self, norm_bound: float):
        if not (norm_bound > 0 and np.isfinite(norm_bound)):
            raise ValueError("norm_bound must be positive and finite")
        self.norm_bound = float(norm_bound)
        self.block_dims: list[int] = []
        self.objective: dict[int, np.ndarray] = {}
        self.equalities: list[tuple[dict[int, np.ndarray], float]] = []

    def add_block(self, dim: int) -> int:
        if dim < 1:
            raise ValueError("block dimension must be positive")
        self.block_dims.append(int(dim))
        return len(self.block_dims) - 1

    def set_objective(self, block: int, cost) -> None:
        self.objective[block] = _as_coeff(self.block_dims[block], cost)

    def add_equality(self, coeffs: dict[int, "np.ndarray"], rhs: float) -> None:
        clean = {
            b: _as_coeff(self.block_dims[b], c)
            for b, c in coeffs.items()
            if np.max(np.abs(np.asarray(c))) > 0.0
        }
        if not clean:
            if abs(rhs) > 0.0:
                raise ValueError(f"constraint 0 = {rhs} has no variable coefficients")
            return   # vacuous 0 = 0 row; keep G full rank
        self.equalities.append((clean, float(rhs)))

    @property
    def num_equalities(self) -> int:
        return len(self.equalities)

    def is_real(self) -> bool:
        mats = list(self.objective.values())
        for coeffs, _ in self.equalities:
            mats.extend(coeffs.values())
        return all(np.max(np.abs(m.imag)) == 0.0 for m in mats) if mats else True

    def to_json(self) -> str:
        """Debug serialization; not a stability-guaranteed format."""

        def mat(m):
            return [[[z.real, z.imag] for z in row] for row in m]

        payload = {
            "blocks": list(self.block_dims),
            "objective": [
                mat(self.objective[b]) if b in self.objective else None
                for b in range(len(self.block_dims))
            ],
            "equalities": [
                {
                    "coeffs": [
                        mat(coeffs[b]) if b in coeffs else None
                        for b in range(len(self.block_dims))
                    ],
                    "rhs": rhs,
                }
                for coeffs, rhs in self.equalities
            ],
            "norm_bound": self.norm_bound,
        }
        return json.dumps(payload, sort_keys=True)


@dataclass
class ConicSolution:
    status: Status
    value: float
    blocks: list[np.ndarray] = field(default_factory=list)
    certified_gap: float = float("inf")
    dual_bound: float = float("nan")
    residual: float = float("nan")   # total equality violation (feasibility solves)


def _realify(h: np.ndarray) -> np.ndarray:
    """Hermitian d x d -> symmetric 2d x 2d with <A,B> = (1/2)<T(A),T(B)>."""
    return np.block([[h.real, -h.imag], [h.imag, h.real]])


def _derealify(m: np.ndarray, d: int) -> np.ndarray:
    re = (m[:d, :d] + m[d:, d:]) / 2.0
    im = (m[d:, :d] - m[:d, d:]) / 2.0
    h = re + 1j * im
    return (h + h.conj().T) / 2.0


_SOLVER_OPTIONS = {
    "show_progress": False,
    "abstol": 1e-10,
    "reltol": 1e-10,
    "feastol": 1e-9,
    "refinement": 1,
}

# Deterministic attempt ladder. Degenerate boundary optima can make the
# interior-point scaling collapse when pushed past its numerical floor, so
# later attempts use the rank-tolerant LDL solver and fewer iterations.
_ATTEMPTS = ((None, 100), ("ldl", 60), ("ldl", 30))

_FAILED = {
    "status": "unknown", "primal objective": None, "dual objective": None,
    "gap": None, "primal infeasibility": None, "dual infeasibility": None,
    "z": None,
}


def _residuals_ok(sol, tol: float = 1e-6) -> bool:
    pinf = sol.get("primal infeasibility")
    dinf = sol.get("dual infeasibility")
    return (pinf is not None and dinf is not None
            and pinf <= tol and dinf <= tol)


def _run_conelp(c, G, h, dims, eps_hint: float):
    best = None
    for kkt, iters in _ATTEMPTS:
        options = dict(_SOLVER_OPTIONS, maxiters=iters)
        kwargs = {"kktsolver": kkt} if kkt else {}
        try:
            sol = cvx_solvers.conelp(c, G, h, dims=dims, options=options, **kwargs)
        except (ValueError, ArithmeticError):
            continue
        if sol["status"] in ("optimal", "primal infeasible", "dual infeasible"):
            return sol
        # 'unknown' can still carry a certified answer: feasible iterates
        # on both sides plus a small surrogate gap
        if _residuals_ok(sol) and sol["gap"] is not None:
            if sol["gap"] <= eps_hint:
                return sol
            if best is None or sol["gap"] < best["gap"]:
                best = sol
    return best if best is not None else dict(_FAILED)


def _assemble_and_solve(program: ConicProgram, objective: dict[int, np.ndarray],
                        equalities, eps_hint: float,
                        extra_nonneg: int = 0,
                        nonneg_cost: float = 0.0,
                        slack_equalities=None):
    """Map the program onto cvxopt's conelp, with our SDP in the dual slot.

    conelp primal: min c'x st Gx + s = h, s in K; dual: max -h'z st G'z + c = 0.
    Our variable is z = (nonneg slacks, vectorized PSD blocks); our value is
    the conelp dual objective. Complex data is embedded as real symmetric
    blocks of twice the size; restriction to real blocks is exact because the
    real part of any feasible complex block is feasible with equal objective.
    """
    real = program.is_real()
    dims = [d if real else 2 * d for d in program.block_dims]

    def emit(matrix_):
        # <A, X> = (1/2) <T(A), T(X)> under the real embedding
        return matrix_.real if real else 0.5 * _realify(matrix_)

    lin = extra_nonneg
    offsets = []
    off = lin
    for d in dims:
        offsets.append(off)
        off += d * d
    total = off

    h = np.zeros(total)
    if extra_nonneg:
        h[:lin] = -nonneg_cost
    for b, cost in objective.items():
        d = dims[b]
        # h = -A so that the cvxopt dual objective -h'z equals <A, X>.
        h[offsets[b]:offsets[b] + d * d] = -emit(cost).flatten(order="F")

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    rhs: list[float] = []
    m = 0
    for j, (coeffs, b_j) in enumerate(equalities):
        for blk, coeff in coeffs.items():
            d = dims[blk]
            flat = emit(coeff).flatten(order="F")
            nz = np.nonzero(flat)[0]
            rows.extend((offsets[blk] + nz).tolist())
            cols.extend([j] * len(nz))
            vals.extend(flat[nz].tolist())
        if slack_equalities is not None:
            u_idx, v_idx = slack_equalities[j]
            rows.extend([u_idx, v_idx])
            cols.extend([j, j])
            vals.extend([1.0, -1.0])
        rhs.append(b_j)
        m += 1

    G = cvx_spmatrix(vals, rows, cols, (total, m))
    c = cvx_matrix(-np.asarray(rhs, dtype=float))
    sol = _run_conelp(c, G, cvx_matrix(h), {"l": lin, "q": [], "s": dims}, eps_hint)

    blocks: list[np.ndarray] = []
    if sol["z"] is not None:
        z = np.asarray(sol["z"]).ravel()
        for b, d in enumerate(dims):
            raw = z[offsets[b]:offsets[b] + d * d].reshape(d, d, order="F")
            raw = (raw + raw.T) / 2.0
            if real:
                blocks.append(raw.astype(np.complex128))
            else:
                blocks.append(_derealify(raw, program.block_dims[b]))
        slacks = z[:lin]
    else:
        slacks = np.zeros(lin)
    return sol, blocks, slacks


def solve(program: ConicProgram, eps: float) -> ConicSolution:
    """Maximize the program objective to certified additive precision eps.

    Deterministic for fixed inputs. Returns PRECISION_LIMIT with the best
    bounds attached when the interior-point run cannot certify eps.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    sol, blocks, _ = _assemble_and_solve(
        program, program.objective, program.equalities, eps_hint=eps / 2.0)
    status = sol["status"]
    if status == "dual infeasible":
        return ConicSolution(Status.INFEASIBLE, float("nan"), [], float("inf"))
    if status == "primal infeasible":
        # our objective is unbounded above; report as a precision failure
        return ConicSolution(Status.PRECISION_LIMIT, float("inf"), [], float("inf"))
    value = sol["dual objective"]
    bound = sol["primal objective"]
    if value is None or bound is None:
        return ConicSolution(Status.PRECISION_LIMIT, float("nan"), blocks, float("inf"))
    gap = abs(bound - value)
    if sol["gap"] is not None:
        gap = max(gap, float(sol["gap"]))
    certified = status == "optimal" or _residuals_ok(sol)
    final = Status.OPTIMAL if (certified and gap <= eps) else Status.PRECISION_LIMIT
    return ConicSolution(final, float(value), blocks, float(gap), dual_bound=float(bound))


def solve_feasibility(program: ConicProgram, eps: float) -> ConicSolution:
    """Find a PSD point satisfying the equalities within total residual eps.

    Solved as minimization of the total (L1) equality residual with a pair of
    nonnegative slacks per constraint; OPTIMAL means the minimized residual is
    at most eps, INFEASIBLE that it provably exceeds eps. A trace term far
    below eps is added to the objective to break the (often massive)
    degeneracy of the block split, which would otherwise stall the
    interior-point iteration; it biases the reported residual by less than
    eps/100.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    m = program.num_equalities
    if m == 0:
        zeros = [np.zeros((d, d), dtype=np.complex128) for d in program.block_dims]
        return ConicSolution(Status.OPTIMAL, 0.0, zeros, 0.0, dual_bound=0.0, residual=0.0)
    sigma = min(1e-8, eps / 100.0)
    regularizer = {
        b: -sigma * np.eye(d) for b, d in enumerate(program.block_dims)
    }
    slack_pairs = [(j, m + j) for j in range(m)]
    sol, blocks, slacks = _assemble_and_solve(
        program, regularizer, program.equalities, eps_hint=min(eps / 10.0, 1e-8),
        extra_nonneg=2 * m, nonneg_cost=-1.0, slack_equalities=slack_pairs,
    )
    status = sol["status"]
    if status in ("primal infeasible", "dual infeasible"):
        # cannot happen for the always-feasible residual program; be loud
        return ConicSolution(Status.PRECISION_LIMIT, float("nan"), [], float("inf"))
    value = sol["dual objective"]
    bound = sol["primal objective"]
    if value is None:
        return ConicSolution(Status.PRECISION_LIMIT, float("nan"), [], float("inf"))
    residual = max(-float(value), 0.0)
    gap = abs(float(bound) - float(value)) if bound is not None else float("inf")
    certified = status == "optimal" or _residuals_ok(sol)
    if not certified or gap > max(0.1 * eps, 1e-7):
        return ConicSolution(Status.PRECISION_LIMIT, 0.0, blocks, gap, residual=residual)
    verdict = Status.OPTIMAL if residual <= eps else Status.INFEASIBLE
    return ConicSolution(verdict, 0.0, blocks, float(gap), dual_bound=float(bound),
                         residual=residual)
