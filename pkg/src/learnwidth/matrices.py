"""Dense complex Hermitian linear algebra: validated matrix/state/subspace
containers, eigendecomposition, positivity tests and rank-revealing
factorization of Gram matrices."""

from __future__ import annotations

import numpy as np

# Tolerance ladder; every operation accepts an override.
SYMMETRY_TOL = 1e-8
PSD_TOL = 1e-9
PIVOT_TOL = 1e-10


class LinAlgFailure(RuntimeError):
    """An iterative LAPACK routine failed to converge."""


class NotPositiveSemidefinite(ValueError):
    """Input matrix has an eigenvalue below the allowed slack."""

    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


def _entry_from_json(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value, 0.0)
    re, im = value
    return complex(re, im)


def _entry_to_json(value: complex, real: bool):
    return value.real if real else [value.real, value.imag]


class HermitianMatrix:
    """Square complex matrix with conjugate symmetry.

    Construction symmetrizes the input and rejects asymmetry above `tol`.
    Instances are treated as immutable; operations never mutate `entries`.
    """

    __slots__ = ("entries",)

    def __init__(self, entries, tol: float = SYMMETRY_TOL):
        a = np.array(entries, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        deviation = float(np.max(np.abs(a - a.conj().T)))
        if deviation > tol:
            raise ValueError(
                f"matrix is not Hermitian: asymmetry {deviation:.3e} exceeds {tol:.1e}"
            )
        self.entries = (a + a.conj().T) / 2.0

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> float:
        return float(np.real(np.trace(self.entries)))

    def norm_frobenius(self) -> float:
        return float(np.linalg.norm(self.entries))

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.max(np.abs(self.entries.imag)) <= tol)

    def __repr__(self):
        return f"HermitianMatrix(dim={self.dim})"

    @classmethod
    def identity(cls, n: int) -> "HermitianMatrix":
        return cls(np.eye(n))

    @classmethod
    def zeros(cls, n: int) -> "HermitianMatrix":
        return cls(np.zeros((n, n)))

    def to_json_dict(self) -> dict:
        real = self.is_real()
        return {
            "n": self.dim,
            "entries": [
                [_entry_to_json(z, real) for z in row] for row in self.entries
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "HermitianMatrix":
        n = int(data["n"])
        rows = data["entries"]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"entries do not form an {n}x{n} matrix")
        a = np.array([[_entry_from_json(v) for v in row] for row in rows])
        return cls(a)


def as_hermitian(matrix) -> HermitianMatrix:
    """Coerce an array-like or HermitianMatrix to HermitianMatrix."""
    if isinstance(matrix, HermitianMatrix):
        return matrix
    return HermitianMatrix(matrix)


class StateList:
    """Indexed list of complex amplitude vectors of common dimension.

    Vectors may be subnormalized or zero; norms above 1 + 1e-9 are rejected.
    """

    __slots__ = ("dim", "array")

    def __init__(self, states, dim: int | None = None):
        a = np.array(states, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] < 1:
            raise ValueError(f"expected a nonempty list of equal-length vectors, got shape {a.shape}")
        if dim is not None and a.shape[1] != dim:
            raise ValueError(f"declared dimension {dim} does not match vectors of length {a.shape[1]}")
        norms = np.linalg.norm(a, axis=1)
        worst = float(norms.max())
        if worst > 1.0 + 1e-9:
            raise ValueError(f"state norm {worst:.12f} exceeds 1 + 1e-9")
        self.array = a          # shape (n, d); row i is state i
        self.dim = a.shape[1]

    @property
    def n(self) -> int:
        return self.array.shape[0]

    def state(self, i: int) -> np.ndarray:
        return self.array[i]

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.array, axis=1)

    def column_matrix(self) -> np.ndarray:
        """d x n matrix whose columns are the states."""
        return self.array.T.copy()

    def __repr__(self):
        return f"StateList(n={self.n}, dim={self.dim})"

    def to_json_dict(self) -> dict:
        real = bool(np.max(np.abs(self.array.imag)) == 0.0)
        return {
            "d": self.dim,
            "states": [[_entry_to_json(z, real) for z in row] for row in self.array],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "StateList":
        d = int(data["d"])
        rows = data["states"]
        if any(len(r) != d for r in rows):
            raise ValueError(f"every state must have length {d}")
        return cls([[_entry_from_json(v) for v in row] for row in rows], dim=d)


class Subspace:
    """Linear subspace of coordinate space, held as an orthonormal basis.

    `basis` has shape (ambient_dim, dim); the zero subspace has an empty
    basis. Orthonormality is enforced at 1e-10.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis):
        b = np.array(basis, dtype=np.complex128)
        if b.size == 0:
            b = b.reshape(ambient_dim, 0)
        if b.ndim != 2 or b.shape[0] != ambient_dim:
            raise ValueError(f"basis shape {b.shape} does not match ambient dimension {ambient_dim}")
        if b.shape[1] > ambient_dim:
            raise ValueError("basis has more vectors than the ambient dimension")
        if b.shape[1] > 0:
            gram = b.conj().T @ b
            if np.max(np.abs(gram - np.eye(b.shape[1]))) > 1e-10:
                raise ValueError("basis vectors are not orthonormal within 1e-10")
        self.ambient_dim = ambient_dim
        self.basis = b

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projection(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def support(self, tol: float = 1e-9) -> tuple[int, ...]:
        """Coordinates on which some vector of the subspace is nonzero."""
        if self.dim == 0:
            return ()
        mask = np.linalg.norm(self.basis, axis=1) > tol
        return tuple(int(i) for i in np.nonzero(mask)[0])

    @classmethod
    def from_span(cls, ambient_dim: int, vectors, tol: float = 1e-9) -> "Subspace":
        """Orthonormalize a spanning set (SVD based, rank-revealing)."""
        a = np.array(vectors, dtype=np.complex128).reshape(-1, ambient_dim)
        if a.size == 0 or np.max(np.abs(a)) == 0:
            return cls(ambient_dim, np.zeros((ambient_dim, 0)))
        u, s, vh = np.linalg.svd(a, full_matrices=False)
        rank = int(np.sum(s > tol * s[0]))
        return cls(ambient_dim, vh[:rank].conj().T)

    def __repr__(self):
        return f"Subspace(ambient={self.ambient_dim}, dim={self.dim})"


def eig_hermitian(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues, eigenvectors) with eigenvalues real and sorted in
    descending order and eigenvectors as the matching orthonormal columns.
    """
    m = as_hermitian(matrix)
    try:
        w, v = np.linalg.eigh(m.entries)
    except np.linalg.LinAlgError as exc:
        raise LinAlgFailure(
            f"eigendecomposition did not converge for a {m.dim}x{m.dim} matrix"
        ) from exc
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def is_psd(matrix, tol: float = PSD_TOL) -> bool:
    """True iff the minimum eigenvalue is at least -tol."""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    w, _ = eig_hermitian(matrix)
    return bool(w[-1] >= -tol)


def min_eigenvalue(matrix) -> float:
    w, _ = eig_hermitian(matrix)
    return float(w[-1])


def gram_factorize(gram, tol: float = PIVOT_TOL) -> StateList:
    """Factor a PSD Gram matrix G into states with v_i* v_j = G_ij.

    Rank-revealing pivoted Cholesky; pivots at or below `tol` are treated as
    zero, so singular inputs (subnormalized or zero states) are handled.
    The returned dimension equals the numerical rank of G.
    """
    g = as_hermitian(gram)
    lam = min_eigenvalue(g)
    if lam < -max(tol, PSD_TOL):
        raise NotPositiveSemidefinite(
            f"not positive semidefinite: minimum eigenvalue {lam:.3e}", lam
        )
    a = g.entries.copy()
    n = g.dim
    perm = np.arange(n)
    rank = 0
    for i in range(n):
        d = np.real(np.diag(a)).copy()   # diag view would alias the swap below
        j = i + int(np.argmax(d[i:]))
        if d[j] <= tol:
            break
        if j != i:
            a[:, [i, j]] = a[:, [j, i]]
            a[[i, j], :] = a[[j, i], :]
            perm[[i, j]] = perm[[j, i]]
        pivot = np.sqrt(d[j])
        a[i, i] = pivot
        a[i + 1:, i] /= pivot
        a[i + 1:, i + 1:] -= np.outer(a[i + 1:, i], a[i + 1:, i].conj())
        a[i, i + 1:] = 0.0
        rank += 1
    factor = np.tril(a)[:, :rank]
    inverse_perm = np.empty(n, dtype=int)
    inverse_perm[perm] = np.arange(n)
    factor = factor[inverse_perm, :]
    # G = L L^*, so v_i = conj(row i of L) gives v_i* v_j = G_ij.
    if rank == 0:
        return StateList(np.zeros((n, 1)), dim=1)
    return StateList(factor.conj(), dim=rank)


def pseudo_inverse_diag(diagonal, tol: float = 0.0) -> HermitianMatrix:
    """Moore-Penrose inverse of a nonnegative diagonal matrix.

    Entries strictly above `tol` are inverted, the rest are zeroed.
    """
    d = as_hermitian(diagonal)
    off = d.entries - np.diag(np.diag(d.entries))
    if np.max(np.abs(off)) > 1e-10:
        raise ValueError("input must be diagonal")
    values = np.real(np.diag(d.entries))
    if np.min(values) < -1e-12:
        raise ValueError("diagonal entries must be nonnegative")
    inverted = np.where(values > tol, 1.0 / np.where(values > tol, values, 1.0), 0.0)
    return HermitianMatrix(np.diag(inverted))
