"""Minimal sparse-matrix container and the linear solvers used by the schemes.

Storage and factorization are delegated to scipy (CSR + SuperLU); the
conjugate-gradient path is written out explicitly so its iteration count
and stopping rule are part of this package's contract.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DimensionMismatch, SingularMatrix, SolverDiverged


@dataclass
class SolveReport:
    iterations: int
    residual_norm: float
    method: str


class SparseMatrix:
    """Compressed-row matrix with sorted, duplicate-free columns per row.

    Construct with :meth:`from_coo`; duplicate (row, col) pairs are summed
    and explicit zeros dropped, so an all-zero assembly finalizes to an
    empty matrix.
    """

    def __init__(self, csr: sp.csr_matrix):
        csr.sum_duplicates()
        csr.eliminate_zeros()
        csr.sort_indices()
        if csr.nnz and not np.isfinite(csr.data).all():
            raise ValueError("non-finite value in sparse matrix")
        self._csr = csr

    @classmethod
    def from_coo(cls, n_rows, n_cols, rows, cols, values):
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.asarray(values, dtype=float)
        if not (rows.shape == cols.shape == values.shape):
            raise DimensionMismatch("rows/cols/values must have matching shapes")
        if rows.size and (rows.min() < 0 or rows.max() >= n_rows or cols.min() < 0 or cols.max() >= n_cols):
            raise DimensionMismatch("entry index outside matrix shape")
        coo = sp.coo_matrix((values, (rows, cols)), shape=(n_rows, n_cols))
        return cls(coo.tocsr())

    @classmethod
    def identity(cls, n):
        return cls(sp.identity(n, format="csr"))

    @property
    def csr(self) -> sp.csr_matrix:
        return self._csr

    @property
    def n_rows(self):
        return self._csr.shape[0]

    @property
    def n_cols(self):
        return self._csr.shape[1]

    @property
    def nnz(self):
        return self._csr.nnz

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_cols,):
            raise DimensionMismatch(f"vector of length {x.shape} against {self.n_rows}x{self.n_cols} matrix")
        return self._csr @ x

    def zero_rows(self):
        """Indices of rows with no stored entries."""
        counts = np.diff(self._csr.indptr)
        return np.nonzero(counts == 0)[0]

    def toarray(self):
        return self._csr.toarray()


def matvec(A: SparseMatrix, x):
    return A.matvec(x)


class DirectFactorization:
    """Cached sparse LU of a square matrix, reusable across right-hand sides."""

    def __init__(self, A: SparseMatrix):
        if A.n_rows != A.n_cols:
            raise DimensionMismatch("direct factorization requires a square matrix")
        if A.zero_rows().size:
            raise SingularMatrix(f"structurally singular: empty row(s) {A.zero_rows()[:5]}")
        self._A = A
        try:
            self._lu = spla.splu(A.csr.tocsc())
        except RuntimeError as exc:  # SuperLU signals exact singularity this way
            raise SingularMatrix(str(exc)) from exc

    def solve(self, b, tol=1e-12):
        b = np.asarray(b, dtype=float)
        if b.shape != (self._A.n_rows,):
            raise DimensionMismatch("right-hand side length mismatch")
        b_norm = np.linalg.norm(b)
        if b_norm == 0.0:
            return np.zeros_like(b), SolveReport(0, 0.0, "direct")
        x = self._lu.solve(b)
        resid = np.linalg.norm(b - self._A.matvec(x)) / b_norm
        # one round of iterative refinement is plenty for these systems
        for _ in range(2):
            if resid <= tol:
                break
            x = x + self._lu.solve(b - self._A.matvec(x))
            resid = np.linalg.norm(b - self._A.matvec(x)) / b_norm
        if resid > tol:
            raise SolverDiverged(f"direct solve stalled at relative residual {resid:.3e} (tol {tol:.1e})")
        return x, SolveReport(0, float(resid), "direct")


def conjugate_gradient(A: SparseMatrix, b, tol=1e-12, max_iter=None):
    """Plain CG for symmetric positive definite systems.

    Stops when ||b - A x||_2 <= tol * ||b||_2; raises SolverDiverged if the
    iteration cap (default 10n) is hit first.
    """
    b = np.asarray(b, dtype=float)
    if b.shape != (A.n_rows,):
        raise DimensionMismatch("right-hand side length mismatch")
    n = A.n_rows
    if max_iter is None:
        max_iter = 10 * n
    b_norm = np.linalg.norm(b)
    if b_norm == 0.0:
        return np.zeros(n), SolveReport(0, 0.0, "cg")
    x = np.zeros(n)
    r = b.copy()
    p = r.copy()
    rr = r @ r
    target = tol * b_norm
    for it in range(1, max_iter + 1):
        Ap = A.matvec(p)
        alpha = rr / (p @ Ap)
        x += alpha * p
        r -= alpha * Ap
        rr_new = r @ r
        if np.sqrt(rr_new) <= target:
            # recompute once to guard against drift in the recurrence
            true_res = np.linalg.norm(b - A.matvec(x))
            if true_res <= target:
                return x, SolveReport(it, float(true_res / b_norm), "cg")
            r = b - A.matvec(x)
            rr_new = r @ r
            p = r.copy()
            rr = rr_new
            continue
        beta = rr_new / rr
        p = r + beta * p
        rr = rr_new
    raise SolverDiverged(f"cg hit the iteration cap ({max_iter}) at residual {np.sqrt(rr) / b_norm:.3e}")


def solve_linear(A: SparseMatrix, b, tol=1e-12, method="direct"):
    """Solve A x = b to a relative residual of tol.

    method "direct" factorizes once and solves; "iterative" runs conjugate
    gradient and is intended for symmetric positive definite systems (the
    pressure module rescales its operator before calling this path).
    """
    if A.n_rows != A.n_cols:
        raise DimensionMismatch("solve_linear requires a square matrix")
    if method == "direct":
        return DirectFactorization(A).solve(b, tol=tol)
    if method == "iterative":
        return conjugate_gradient(A, b, tol=tol)
    raise ValueError(f"unknown method {method!r}")
