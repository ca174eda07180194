"""Direct solvers and small dense kernels.

Everything the discretizations need to solve their linear systems lives
here: the scalar Thomas algorithm, its block version with dense LU pivots,
dense LU with partial pivoting, and a cyclic Jacobi eigendecomposition for
small symmetric matrices.  numpy is used for storage and BLAS-level
products only; the factorizations themselves are written out so the test
suite can check them against independent dense solves.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SingularMatrixError",
    "BlockTridiag",
    "EigenPair",
    "thomas",
    "block_thomas",
    "dense_lu_factor",
    "dense_lu_solve",
    "dense_inverse",
    "jacobi_eigh",
]

TINY_PIVOT = 1e-300


class SingularMatrixError(RuntimeError):
    """Elimination hit a zero or subnormal pivot."""


def thomas(
    lower: np.ndarray, diag: np.ndarray, upper: np.ndarray, rhs: np.ndarray
) -> np.ndarray:
    """Solve a scalar tridiagonal system.

    ``lower[i]`` couples row i+1 to column i, ``upper[i]`` couples row i to
    column i+1.  No pivoting: rows are eliminated in order and a pivot with
    magnitude below 1e-300 raises SingularMatrixError naming the row.
    """
    n = len(diag)
    if len(lower) != n - 1 or len(upper) != n - 1 or len(rhs) != n:
        raise ValueError(
            f"inconsistent tridiagonal shapes: n={n}, lower={len(lower)}, "
            f"upper={len(upper)}, rhs={len(rhs)}"
        )
    piv = np.empty(n)
    y = np.empty(n)
    piv[0] = diag[0]
    if abs(piv[0]) < TINY_PIVOT:
        raise SingularMatrixError("zero pivot in row 0")
    y[0] = rhs[0]
    # Orderings below mirror block_thomas with 1x1 blocks exactly.
    for i in range(1, n):
        piv[i] = diag[i] - lower[i - 1] * (upper[i - 1] / piv[i - 1])
        if abs(piv[i]) < TINY_PIVOT:
            raise SingularMatrixError(f"zero pivot in row {i}")
        y[i] = rhs[i] - lower[i - 1] * (y[i - 1] / piv[i - 1])
    x = np.empty(n)
    x[n - 1] = y[n - 1] / piv[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = (y[i] - upper[i] * x[i + 1]) / piv[i]
    return x


@dataclass(frozen=True)
class BlockTridiag:
    """Block tridiagonal matrix with n diagonal blocks of size m x m.

    ``sub[i]`` couples block row i+1 to block column i, ``sup[i]`` couples
    block row i to block column i+1.
    """

    sub: np.ndarray  # (n-1, m, m)
    diag: np.ndarray  # (n, m, m)
    sup: np.ndarray  # (n-1, m, m)

    def __post_init__(self) -> None:
        d = np.asarray(self.diag, dtype=float)
        if d.ndim != 3 or d.shape[1] != d.shape[2]:
            raise ValueError(f"diag must be (n, m, m), got {d.shape}")
        n, m, _ = d.shape
        for name, arr in (("sub", self.sub), ("sup", self.sup)):
            a = np.asarray(arr, dtype=float)
            if a.shape != (n - 1, m, m):
                raise ValueError(f"{name} must be {(n - 1, m, m)}, got {a.shape}")

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    @property
    def m(self) -> int:
        return self.diag.shape[1]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.n, self.m):
            raise ValueError(f"vector must be {(self.n, self.m)}, got {v.shape}")
        out = np.einsum("nij,nj->ni", self.diag, v)
        out[1:] += np.einsum("nij,nj->ni", self.sub, v[:-1])
        out[:-1] += np.einsum("nij,nj->ni", self.sup, v[1:])
        return out

    def to_dense(self) -> np.ndarray:
        n, m = self.n, self.m
        dense = np.zeros((n * m, n * m))
        for i in range(n):
            dense[i * m:(i + 1) * m, i * m:(i + 1) * m] = self.diag[i]
            if i + 1 < n:
                dense[(i + 1) * m:(i + 2) * m, i * m:(i + 1) * m] = self.sub[i]
                dense[i * m:(i + 1) * m, (i + 1) * m:(i + 2) * m] = self.sup[i]
        return dense


def dense_lu_factor(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """LU factorization with partial (row) pivoting, PA = LU packed in place."""
    lu = np.array(a, dtype=float)
    if lu.ndim != 2 or lu.shape[0] != lu.shape[1]:
        raise ValueError(f"matrix must be square, got {lu.shape}")
    n = lu.shape[0]
    piv = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) < TINY_PIVOT:
            raise SingularMatrixError(f"zero pivot in column {k}")
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            piv[[k, p]] = piv[[p, k]]
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv


def _lu_apply(lu: np.ndarray, piv: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = lu.shape[0]
    x = np.array(b[piv], dtype=float)
    for k in range(1, n):
        x[k] -= lu[k, :k] @ x[:k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - lu[k, k + 1:] @ x[k + 1:]) / lu[k, k]
    return x


def dense_lu_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a dense system (vector or matrix right-hand side)."""
    lu, piv = dense_lu_factor(a)
    return _lu_apply(lu, piv, np.asarray(b, dtype=float))


def dense_inverse(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return dense_lu_solve(a, np.eye(a.shape[0]))


def block_thomas(mat: BlockTridiag, rhs: np.ndarray) -> np.ndarray:
    """Solve a block tridiagonal system by block elimination.

    Each pivot block is factorized with dense partial-pivoted LU.  With
    m = 1 the arithmetic reduces to thomas() operation for operation.
    """
    rhs = np.asarray(rhs, dtype=float)
    n, m = mat.n, mat.m
    if rhs.shape != (n, m):
        raise ValueError(f"rhs must be {(n, m)}, got {rhs.shape}")
    factors = []
    y = np.empty((n, m))
    y[0] = rhs[0]
    pivot = np.array(mat.diag[0], dtype=float)
    try:
        factors.append(dense_lu_factor(pivot))
    except SingularMatrixError as err:
        raise SingularMatrixError(f"block row 0: {err}") from None
    for i in range(1, n):
        lu, piv = factors[i - 1]
        f = _lu_apply(lu, piv, mat.sup[i - 1])  # pivot^{-1} @ sup
        z = _lu_apply(lu, piv, y[i - 1])
        pivot = mat.diag[i] - mat.sub[i - 1] @ f
        y[i] = rhs[i] - mat.sub[i - 1] @ z
        try:
            factors.append(dense_lu_factor(pivot))
        except SingularMatrixError as err:
            raise SingularMatrixError(f"block row {i}: {err}") from None
    x = np.empty((n, m))
    lu, piv = factors[n - 1]
    x[n - 1] = _lu_apply(lu, piv, y[n - 1])
    for i in range(n - 2, -1, -1):
        lu, piv = factors[i]
        x[i] = _lu_apply(lu, piv, y[i] - mat.sup[i] @ x[i + 1])
    return x


@dataclass(frozen=True)
class EigenPair:
    """Eigendecomposition of a small symmetric matrix.

    values ascend; vectors holds orthonormal columns, each normalized so its
    largest-magnitude entry is positive (first such entry on ties).
    """

    values: np.ndarray
    vectors: np.ndarray


def jacobi_eigh(a: np.ndarray, max_sweeps: int = 50) -> EigenPair:
    """Cyclic Jacobi eigendecomposition for a symmetric matrix."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a))))
    sym_residual = float(np.max(np.abs(a - a.T)))
    if sym_residual > 1e-10 * scale:
        raise ValueError(f"matrix is not symmetric: residual {sym_residual!r}")
    m = a.shape[0]
    w = 0.5 * (a + a.T)
    v = np.eye(m)
    if m == 1:
        return EigenPair(values=w[0].copy(), vectors=v)
    fro = np.sqrt(np.sum(w * w))
    stop = 1e-15 * max(fro, 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(w, -1) ** 2) * 2.0)
        if off <= stop:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = w[p, q]
                if abs(apq) <= 1e-18 * max(fro, 1e-300):
                    continue
                tau = (w[q, q] - w[p, p]) / (2.0 * apq)
                # stable root of t^2 - 2*tau*t - 1 = 0 (annihilates w[p, q])
                t = -np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0.0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                w[[p, q], :] = rot @ w[[p, q], :]
                w[:, [p, q]] = w[:, [p, q]] @ rot.T
                v[:, [p, q]] = v[:, [p, q]] @ rot.T
    else:
        raise RuntimeError(f"jacobi_eigh did not converge in {max_sweeps} sweeps")
    vals = np.diag(w).copy()
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = v[:, order]
    for j in range(m):
        k = int(np.argmax(np.abs(vecs[:, j])))
        if vecs[k, j] < 0.0:
            vecs[:, j] = -vecs[:, j]
    return EigenPair(values=vals, vectors=vecs)
