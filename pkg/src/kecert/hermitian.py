"""Pointwise linear algebra relating real and complex Hessian data.

For a C2 function on C^n with coordinates z_p = x_p + i y_p, the real
Hessian H (blocks U, V, W in the x/y axis order) and the complex Hessian
pair (A, B) with A = (u_{i jbar}) Hermitian and B = (u_{ij}) symmetric
carry the same information:

    A = (U + W + i (V - V^T)) / 4
    B = (U - W - i (V + V^T)) / 4

Doubling A and B into Q = [[A, B], [conj B, conj A]] gives the congruence
4 Q = P H P* with P = [[I, -iI], [I, iI]], so H > 0 iff Q > 0, and a block
triangular congruence reduces Q to diag(M, conj A) with the Schur
complement M = A - B conj(A)^{-1} conj(B). Together: H is positive
definite iff A > 0 and M > 0, which is the strict convexity test this
package certifies on grids.

Everything here is an immutable value or a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularMatrixError

STRICTNESS_COEFFICIENT = 1e-9


def _maxabs(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def strictness_tolerance(matrix) -> float:
    """Default margin for "strictly positive": scale relative, 1e-9*(1+max|entry|)."""
    return STRICTNESS_COEFFICIENT * (1.0 + _maxabs(matrix))


def _require(cond, message):
    if not cond:
        raise ValueError(message)


def _frozen(arr, dtype):
    out = np.array(arr, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class RealHessian:
    """Real Hessian of a function of (x_1..x_n, y_1..y_n), split into blocks.

    U = d2/dx dx, V = d2/dx dy, W = d2/dy dy. The assembled 2n x 2n matrix
    [[U, V], [V^T, W]] is symmetric, so U and W must each be symmetric.
    """

    U: np.ndarray
    V: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        U = _frozen(self.U, np.float64)
        V = _frozen(self.V, np.float64)
        W = _frozen(self.W, np.float64)
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "W", W)
        n = U.shape[0] if U.ndim == 2 else -1
        _require(U.ndim == 2 and U.shape == (n, n), "U must be square")
        _require(V.shape == (n, n) and W.shape == (n, n), "block dimension mismatch")
        _require(np.all(np.isfinite(U)) and np.all(np.isfinite(V)) and np.all(np.isfinite(W)),
                 "Hessian entries must be finite")
        tol = 1e-12 * (1.0 + max(_maxabs(U), _maxabs(W)))
        _require(_maxabs(U - U.T) <= tol, "U must be symmetric")
        _require(_maxabs(W - W.T) <= tol, "W must be symmetric")

    @property
    def n(self) -> int:
        return self.U.shape[0]

    def full(self) -> np.ndarray:
        """Assembled 2n x 2n symmetric matrix [[U, V], [V^T, W]]."""
        return np.block([[self.U, self.V], [self.V.T, self.W]])

    @classmethod
    def from_full(cls, H) -> "RealHessian":
        H = np.asarray(H, dtype=np.float64)
        _require(H.ndim == 2 and H.shape[0] == H.shape[1] and H.shape[0] % 2 == 0,
                 "full Hessian must be square with even dimension")
        tol = 1e-12 * (1.0 + _maxabs(H))
        _require(_maxabs(H - H.T) <= tol, "full Hessian must be symmetric")
        n = H.shape[0] // 2
        return cls(U=H[:n, :n], V=H[:n, n:], W=H[n:, n:])


@dataclass(frozen=True)
class WirtingerHessian:
    """The pair (A, B): mixed Hermitian and holomorphic symmetric Hessians."""

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A = _frozen(self.A, np.complex128)
        B = _frozen(self.B, np.complex128)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        n = A.shape[0] if A.ndim == 2 else -1
        _require(A.ndim == 2 and A.shape == (n, n), "A must be square")
        _require(B.shape == (n, n), "A and B dimension mismatch")
        _require(np.all(np.isfinite(A)) and np.all(np.isfinite(B)),
                 "entries must be finite")
        tol = 1e-12 * (1.0 + max(_maxabs(A), _maxabs(B)))
        _require(_maxabs(A - A.conj().T) <= tol, "A must be Hermitian")
        _require(_maxabs(B - B.T) <= tol, "B must be complex symmetric")

    @property
    def n(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class BlockMatrixQ:
    """The doubled matrix Q = [[A, B], [conj B, conj A]]; Hermitian."""

    Q: np.ndarray

    def __post_init__(self):
        Q = _frozen(self.Q, np.complex128)
        object.__setattr__(self, "Q", Q)
        _require(Q.ndim == 2 and Q.shape[0] == Q.shape[1] and Q.shape[0] % 2 == 0,
                 "Q must be square with even dimension")
        tol = 1e-12 * (1.0 + _maxabs(Q))
        _require(_maxabs(Q - Q.conj().T) <= tol, "Q must be Hermitian")

    @property
    def n(self) -> int:
        return self.Q.shape[0] // 2


@dataclass(frozen=True)
class EigenReport:
    """Positive-definiteness verdict for one Hermitian matrix.

    ``is_positive_definite`` holds exactly when ``min_eigenvalue`` exceeds
    ``tolerance``.
    """

    min_eigenvalue: float
    is_positive_definite: bool
    tolerance: float

    def __post_init__(self):
        _require(self.is_positive_definite == (self.min_eigenvalue > self.tolerance),
                 "report inconsistent with its own tolerance")


@dataclass(frozen=True)
class ConvexityTriple:
    """Eigen reports for H, A and M; ``m_report`` is None when A is not
    positive definite so the Schur complement was not computed."""

    h_report: EigenReport
    a_report: EigenReport
    m_report: EigenReport | None
    m_status: str  # "computed" | "not-computed"


def eigen_report(matrix, tol: float | None = None) -> EigenReport:
    """Smallest eigenvalue and strict positivity of a Hermitian matrix.

    A Cholesky factorization would certify positivity more cheaply, but the
    report needs the eigenvalue as a diagnostic either way, so eigvalsh is
    the single source of truth here. ``is_positive_definite`` of the solver
    hot path uses the cheap factorization route instead.
    """
    X = np.asarray(matrix, dtype=np.complex128)
    X = 0.5 * (X + X.conj().T)
    if tol is None:
        tol = strictness_tolerance(X)
    lam = float(np.linalg.eigvalsh(X)[0]) if X.size else 0.0
    return EigenReport(min_eigenvalue=lam, is_positive_definite=lam > tol, tolerance=float(tol))


def is_positive_definite(matrix, tol: float | None = None) -> bool:
    """Cheap strict-positivity certificate via Cholesky of X - tol*I."""
    X = np.asarray(matrix, dtype=np.complex128)
    X = 0.5 * (X + X.conj().T)
    if tol is None:
        tol = strictness_tolerance(X)
    try:
        np.linalg.cholesky(X - tol * np.eye(X.shape[0]))
        return True
    except np.linalg.LinAlgError:
        return False


def real_to_wirtinger(H: RealHessian) -> WirtingerHessian:
    """Convert real Hessian blocks to the complex pair (A, B)."""
    U, V, W = H.U, H.V, H.W
    A = 0.25 * (U + W + 1j * (V - V.T))
    B = 0.25 * (U - W - 1j * (V + V.T))
    return WirtingerHessian(A=A, B=B)


def wirtinger_to_real(AB: WirtingerHessian) -> RealHessian:
    """Invert ``real_to_wirtinger``.

    From A + B = (U - i V^T)/2 and A - B = (W + i V)/2:
    U = 2 Re(A+B), W = 2 Re(A-B), V = 2 Im(A-B).
    """
    A, B = AB.A, AB.B
    U = 2.0 * (A + B).real
    W = 2.0 * (A - B).real
    V = 2.0 * (A - B).imag
    return RealHessian(U=U, V=V, W=W)


def _checked_conj_inverse(A: np.ndarray, tol: float | None):
    """Inverse of conj(A) with an explicit singularity guard on A."""
    if tol is None:
        tol = strictness_tolerance(A)
    min_abs = float(np.min(np.abs(np.linalg.eigvalsh(0.5 * (A + A.conj().T)))))
    if min_abs <= tol:
        raise SingularMatrixError(
            f"A is singular to tolerance {tol:.3e} (min |eigenvalue| = {min_abs:.3e})",
            min_abs_eigenvalue=min_abs,
        )
    return np.linalg.inv(np.conj(A))


def schur_complement_M(AB: WirtingerHessian, tol: float | None = None) -> np.ndarray:
    """M = A - B conj(A)^{-1} conj(B), symmetrized to exact Hermitian form."""
    A, B = AB.A, AB.B
    M = A - B @ _checked_conj_inverse(A, tol) @ np.conj(B)
    return 0.5 * (M + M.conj().T)


def assemble_Q(AB: WirtingerHessian) -> BlockMatrixQ:
    """Stack (A, B) into the doubled Hermitian matrix Q."""
    A, B = AB.A, AB.B
    Q = np.block([[A, B], [np.conj(B), np.conj(A)]])
    return BlockMatrixQ(Q=Q)


def doubling_matrices(n: int):
    """The pair (P, P_R) with 4 Q = P H P_R; P_R equals P conjugate transposed."""
    I = np.eye(n)
    P = np.block([[I, -1j * I], [I, 1j * I]])
    PR = np.block([[I, I], [1j * I, -1j * I]])
    return P, PR


def q_assembly_residual(H: RealHessian) -> float:
    """max |4 Q - P H P_R| for Q assembled from the converted (A, B).

    The doubling congruence needs the 1/4 factor: P P* = 2 I, so
    P H P* = 4 Q, and positivity of H and Q remain equivalent.
    """
    AB = real_to_wirtinger(H)
    Q = assemble_Q(AB).Q
    P, PR = doubling_matrices(H.n)
    return _maxabs(4.0 * Q - P @ H.full() @ PR)


def congruence_factorization_check(AB: WirtingerHessian, tol: float | None = None) -> float:
    """Residual of the block triangular congruence reducing Q.

    With L = [[I, -B conj(A)^{-1}], [0, I]] the product L Q L* equals
    diag(M, conj A); returns max |diag(M, conj A) - L Q L*|.
    """
    n = AB.n
    A, B = AB.A, AB.B
    conj_inv = _checked_conj_inverse(A, tol)
    M = A - B @ conj_inv @ np.conj(B)
    Q = assemble_Q(AB).Q
    I = np.eye(n)
    Z = np.zeros((n, n))
    L = np.block([[I, -B @ conj_inv], [Z, I]])
    target = np.block([[M, Z], [Z, np.conj(A)]])
    return _maxabs(target - L @ Q @ L.conj().T)


def convexity_triple(H: RealHessian, tol: float | None = None) -> ConvexityTriple:
    """Eigen reports for (H, A, M); the backbone of the convexity test.

    When A fails strict positivity the Schur complement is not formed and
    the M slot reports "not-computed" rather than guessing through a
    near-singular inverse.
    """
    AB = real_to_wirtinger(H)
    h_report = eigen_report(H.full(), tol)
    a_report = eigen_report(AB.A, tol)
    if a_report.is_positive_definite:
        M = schur_complement_M(AB, tol)
        return ConvexityTriple(h_report, a_report, eigen_report(M, tol), "computed")
    return ConvexityTriple(h_report, a_report, None, "not-computed")


def random_real_hessian(rng: np.random.Generator, n: int, scale: float = 5.0) -> RealHessian:
    """Symmetric 2n x 2n matrix with entries uniform in [-scale, scale]."""
    d = 2 * n
    H = np.zeros((d, d))
    iu = np.triu_indices(d)
    H[iu] = rng.uniform(-scale, scale, size=len(iu[0]))
    H = H + np.triu(H, 1).T
    return RealHessian.from_full(H)


@dataclass(frozen=True)
class LemmaFuzzSummary:
    """Outcome of the randomized equivalence check (H>0) <=> (A>0 and M>0)."""

    count: int
    seed: int
    dims: tuple
    margin: float
    agree: int
    undetermined: int
    disagree: int
    first_disagreement: dict | None

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "seed": self.seed,
            "dims": list(self.dims),
            "margin": self.margin,
            "agree": self.agree,
            "undetermined": self.undetermined,
            "disagree": self.disagree,
            "first_disagreement": self.first_disagreement,
        }


def lemma_fuzz(count: int, seed: int, dims=(1, 2, 3), margin: float = 1e-6) -> LemmaFuzzSummary:
    """Fuzz the convexity equivalence on ``count`` random H per dimension.

    Samples whose H, A or M has an eigenvalue within ``margin`` of zero are
    counted undetermined and not compared (the strict inequalities are not
    decidable at working precision there). Everything else must agree
    exactly.
    """
    rng = np.random.default_rng(seed)
    agree = undetermined = disagree = 0
    witness = None
    for n in dims:
        for _ in range(count):
            H = random_real_hessian(rng, n)
            lam_h = np.linalg.eigvalsh(H.full())
            AB = real_to_wirtinger(H)
            lam_a = np.linalg.eigvalsh(AB.A)
            if min(abs(lam_h).min(), abs(lam_a).min()) <= margin:
                undetermined += 1
                continue
            M = schur_complement_M(AB, tol=0.5 * margin)
            lam_m = np.linalg.eigvalsh(M)
            if abs(lam_m).min() <= margin:
                undetermined += 1
                continue
            h_pd = lam_h.min() > 0.0
            pair_pd = (lam_a.min() > 0.0) and (lam_m.min() > 0.0)
            if h_pd == pair_pd:
                agree += 1
            else:
                disagree += 1
                if witness is None:
                    witness = {
                        "n": n,
                        "H": H.full().tolist(),
                        "lambda_min_H": float(lam_h.min()),
                        "lambda_min_A": float(lam_a.min()),
                        "lambda_min_M": float(lam_m.min()),
                    }
    return LemmaFuzzSummary(
        count=count, seed=seed, dims=tuple(dims), margin=margin,
        agree=agree, undetermined=undetermined, disagree=disagree,
        first_disagreement=witness,
    )
