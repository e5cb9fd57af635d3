"""Finite difference Wirtinger calculus on masked tensor grids.

Scalar fields live on uniform tensor grids over R^{2n} with axes ordered
(x_1..x_n, y_1..y_n). Second order central stencils produce the complex
Hessian pair (A, B) at grid nodes, first Wirtinger differences of those
matrix fields produce the third order jet, and contractions against the
inverse metric u^{i jbar} = conj(A^{-1}) produce the residuals of the
differential identities satisfied by solutions of

    log det A(u) = (n+1) u.

Five identities are checked (names state what is differentiated and which
factors appear on the right hand side):

* GRAD:    tr(A^{-1} d_p A) = (n+1) u_p
* DDA_BB:  u^{ij~} d_{ij~} A = u^{ij~} (d_j~ B) conj(A^{-1}) (d_i conj B) + (n+1) A
* DDA_AA:  u^{ij~} d_{ij~} A = u^{ij~} (d_i A) A^{-1} (d_j~ A) + (n+1) A
* DDB_AB:  u^{ij~} d_{ij~} B = u^{ij~} (d_i A) A^{-1} (d_j~ B) + (n+1) B
* DDB_BA:  u^{ij~} d_{ij~} B = u^{ij~} (d_j~ B) conj(A^{-1}) (d_i conj A) + (n+1) B

plus the elliptic image of the Schur complement M = A - B conj(A^{-1}) conj(B):

    u^{ij~} d_{ij~} M - (n+1) M = - u^{ij~} S_i conj(A^{-1}) S_j*

with the obstruction tensor S_i = d_i B - B conj(A^{-1}) d_i conj(A), whose
right hand side is negative semidefinite by construction.

Third and fourth order derivatives are always formed as first and second
central differences of the A, B, M fields, never as wide one-shot stencils,
which keeps every check within stencil radius 2 at second order accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np
from scipy import ndimage

from ._backend import kernels
from .errors import SingularMatrixError, StencilError
from .hermitian import WirtingerHessian

MASK_EXTERIOR = 0
MASK_INTERIOR = 1
MASK_DIRICHLET = 2

_PD_TINY = 1e-12


class IdentityKind(str, Enum):
    GRAD = "grad"
    DDA_BB = "dda_bb"
    DDA_AA = "dda_aa"
    DDB_AB = "ddb_ab"
    DDB_BA = "ddb_ba"


ALL_KINDS = tuple(IdentityKind)


@dataclass(frozen=True)
class ScalarField:
    """Discrete sample of a real scalar on a masked uniform tensor grid.

    ``values`` carries finite numbers on interior and dirichlet nodes and
    NaN elsewhere; ``mask`` uses the MASK_* codes. ``origin`` is the
    coordinate of grid index (0, ..., 0) and ``h`` the common spacing.
    """

    n: int
    h: float
    origin: np.ndarray
    mask: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        origin = np.array(self.origin, dtype=np.float64, copy=True)
        mask = np.array(self.mask, dtype=np.int8, copy=True)
        values = np.array(self.values, dtype=np.float64, copy=True)
        for arr in (origin, mask, values):
            arr.setflags(write=False)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "values", values)
        d = 2 * self.n
        if self.h <= 0:
            raise ValueError("grid spacing must be positive")
        if mask.ndim != d or origin.shape != (d,):
            raise ValueError("mask/origin rank does not match 2n axes")
        if values.shape != mask.shape:
            raise ValueError("values shape does not match mask")
        active = mask != MASK_EXTERIOR
        if not np.all(np.isfinite(values[active])):
            raise ValueError("values must be finite on interior and dirichlet nodes")

    @property
    def dims(self) -> tuple:
        return self.mask.shape

    @cached_property
    def strides(self) -> np.ndarray:
        d = len(self.dims)
        s = np.empty(d, np.int64)
        acc = 1
        for a in range(d - 1, -1, -1):
            s[a] = acc
            acc *= self.dims[a]
        return s

    @cached_property
    def interior_idx(self) -> np.ndarray:
        return np.flatnonzero(self.mask.ravel() == MASK_INTERIOR).astype(np.int64)

    @cached_property
    def dirichlet_idx(self) -> np.ndarray:
        return np.flatnonzero(self.mask.ravel() == MASK_DIRICHLET).astype(np.int64)

    @cached_property
    def _core_cache(self) -> dict:
        return {}

    def core_mask(self, depth: int) -> np.ndarray:
        """Interior nodes at Chebyshev distance > depth from any non-interior node."""
        if depth not in self._core_cache:
            m = self.mask == MASK_INTERIOR
            if depth > 0:
                structure = np.ones((3,) * len(self.dims), bool)
                m = ndimage.binary_erosion(m, structure=structure, iterations=depth)
            self._core_cache[depth] = m
        return self._core_cache[depth]

    def core_idx(self, depth: int) -> np.ndarray:
        return np.flatnonzero(self.core_mask(depth).ravel()).astype(np.int64)

    def coords(self, idx) -> np.ndarray:
        """Real coordinates of the given flat node indices, shape (m, 2n)."""
        idx = np.atleast_1d(np.asarray(idx, dtype=np.int64))
        multi = np.unravel_index(idx, self.dims)
        return self.origin + self.h * np.stack(multi, axis=-1).astype(np.float64)

    def flat_index(self, node) -> int:
        node = tuple(int(c) for c in node)
        if len(node) != len(self.dims):
            raise ValueError("node must have one index per grid axis")
        return int(np.ravel_multi_index(node, self.dims))

    def with_values(self, values) -> "ScalarField":
        return ScalarField(n=self.n, h=self.h, origin=self.origin,
                           mask=self.mask, values=np.asarray(values).reshape(self.dims))


@dataclass(frozen=True)
class WirtingerJet:
    """Derivative data of a field at one node, through third order.

    ``dA``/``dB`` hold the holomorphic Wirtinger derivatives of the A and B
    fields (leading axis is the direction), ``dB_bar_side`` the conjugate
    direction derivatives of B, and ``dAbar`` equals d_i conj(A), which for
    the Hermitian A field is the transpose of ``dA[i]``.
    """

    point: tuple
    grad: np.ndarray
    AB: WirtingerHessian
    A_inv: np.ndarray
    dA: np.ndarray
    dB: np.ndarray
    dB_bar_side: np.ndarray
    dAbar: np.ndarray


@dataclass(frozen=True)
class ObstructionTensor:
    """S_i = d_i B - B conj(A^{-1}) d_i conj(A), one matrix per direction."""

    scriptB: np.ndarray  # (n, n, n), leading axis is the direction


def compose_wirtinger(d1, d2, n):
    """Assemble (grad, A, B) from real first/second derivative tables."""
    U = d2[:, :n, :n]
    V = d2[:, :n, n:]
    W = d2[:, n:, n:]
    Vt = np.swapaxes(V, 1, 2)
    A = 0.25 * ((U + W).astype(np.complex128) + 1j * (V - Vt))
    B = 0.25 * ((U - W).astype(np.complex128) - 1j * (V + Vt))
    grad = 0.5 * (d1[:, :n] - 1j * d1[:, n:])
    return grad, A, B


def hermitian_inverse_logdet(A):
    """Batched strict-positivity test, inverse and log det of Hermitian A.

    Returns (pd, inv, logdet); inv and logdet are NaN where the positivity
    test fails. Closed forms for n in {1, 2}, LAPACK otherwise.
    """
    m, n, _ = A.shape
    scale = 1.0 + np.abs(A).reshape(m, -1).max(axis=1)
    if n == 1:
        a = A[:, 0, 0].real
        pd = a > _PD_TINY * scale
        inv = np.full_like(A, np.nan)
        logdet = np.full(m, np.nan)
        inv[pd, 0, 0] = 1.0 / a[pd]
        logdet[pd] = np.log(a[pd])
        return pd, inv, logdet
    if n == 2:
        a00 = A[:, 0, 0].real
        a11 = A[:, 1, 1].real
        a01 = A[:, 0, 1]
        det = a00 * a11 - (a01.real ** 2 + a01.imag ** 2)
        pd = (a00 > _PD_TINY * scale) & (det > (_PD_TINY * scale) ** 2)
        inv = np.full_like(A, np.nan)
        logdet = np.full(m, np.nan)
        d = det[pd]
        inv[pd, 0, 0] = a11[pd] / d
        inv[pd, 1, 1] = a00[pd] / d
        inv[pd, 0, 1] = -a01[pd] / d
        inv[pd, 1, 0] = -np.conj(a01[pd]) / d
        logdet[pd] = np.log(d)
        return pd, inv, logdet
    lam = np.linalg.eigvalsh(A)
    pd = lam[:, 0] > _PD_TINY * scale
    inv = np.full_like(A, np.nan)
    logdet = np.full(m, np.nan)
    if pd.any():
        inv[pd] = np.linalg.inv(A[pd])
        logdet[pd] = np.log(lam[pd]).sum(axis=1)
    return pd, inv, logdet


@dataclass(frozen=True)
class HessianFields:
    idx: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    grad: np.ndarray
    A: np.ndarray
    B: np.ndarray


def hessian_fields(field: ScalarField, idx=None) -> HessianFields:
    """Gradient and (A, B) at the given nodes (default: all interior)."""
    if idx is None:
        idx = field.interior_idx
    idx = np.asarray(idx, dtype=np.int64)
    d1, d2 = kernels.real_jet2(field.values.ravel(), idx, field.strides, field.h)
    grad, A, B = compose_wirtinger(d1, d2, field.n)
    return HessianFields(idx=idx, d1=d1, d2=d2, grad=grad, A=A, B=B)


class SweepContext:
    """Grid-wide Hessian data shared by the sweep routines.

    Builds the A, B, M and inverse-metric fields once per scalar field;
    every sweep then gathers from these flat arrays. ``valid`` marks nodes
    where A passed the strict positivity test, and nodes whose radius-1
    neighborhood is not fully valid are flagged out of checks instead of
    failing the whole sweep.
    """

    def __init__(self, field: ScalarField):
        self.field = field
        n = field.n
        K = n * n
        N = int(np.prod(field.dims))
        self.n = n
        self.N = N
        u = field.values.ravel()
        self.u = u
        interior = field.interior_idx
        jets = hessian_fields(field)
        pd, inv, logdet = hermitian_inverse_logdet(jets.A)

        self.interior = interior
        self.jets = jets
        self.pd_interior = pd

        def scatter(rows, width, data):
            buf = np.full((N, width), np.nan, dtype=np.complex128)
            buf[rows] = data.reshape(len(rows), width)
            return buf

        self.A_full = scatter(interior, K, jets.A)
        self.B_full = scatter(interior, K, jets.B)
        self.Ainv_full = scatter(interior, K, inv)
        self.grad_full = scatter(interior, n, jets.grad)

        M = jets.A - np.matmul(np.matmul(jets.B, np.conj(inv)), np.conj(jets.B))
        self.M_full = scatter(interior, K, M)

        eq = np.full(N, np.nan)
        eq[interior] = logdet - (n + 1.0) * u[interior]
        self.equation_residual_full = eq

        valid = np.zeros(field.dims, dtype=bool)
        valid.ravel()[interior[pd]] = True
        self.valid_mask = valid
        structure = np.ones((3,) * len(field.dims), bool)
        self.valid_core = ndimage.binary_erosion(valid, structure=structure)

    def checked_idx(self, depth: int = 2):
        """Safe sweep nodes plus the flagged ones excluded by degenerate A.

        A node participates when it sits ``depth`` cells inside the interior
        mask and its whole radius-1 neighborhood carries valid (A positive
        definite) data.
        """
        core = self.field.core_mask(depth)
        ok = core & self.valid_core
        flagged = core & ~self.valid_core
        return (np.flatnonzero(ok.ravel()).astype(np.int64),
                np.flatnonzero(flagged.ravel()).astype(np.int64))

    # gathered per-node blocks

    def blocks(self, idx, need):
        """Gather the per-node matrices the identity assemblies consume.

        ``need`` is a set of names from {grad, A, B, M, Ainv, G, dA, dB,
        dBb, lapA, lapB, lapM}; G is the inverse metric conj(A^{-1}).
        """
        f = self.field
        n, K = self.n, self.n * self.n
        out = {}
        take = lambda buf: buf[idx].reshape(len(idx), n, n)
        if "A" in need:
            out["A"] = take(self.A_full)
        if "B" in need:
            out["B"] = take(self.B_full)
        if "M" in need:
            out["M"] = take(self.M_full)
        if "Ainv" in need or "G" in need:
            Ainv = take(self.Ainv_full)
            out["Ainv"] = Ainv
            out["G"] = np.conj(Ainv)
        if "grad" in need:
            out["grad"] = self.grad_full[idx]
        if "dA" in need:
            out["dA"] = kernels.wirt_d1(self.A_full, idx, f.strides, f.h, n, False) \
                .reshape(len(idx), n, n, n)
        if "dB" in need:
            out["dB"] = kernels.wirt_d1(self.B_full, idx, f.strides, f.h, n, False) \
                .reshape(len(idx), n, n, n)
        if "dBb" in need:
            out["dBb"] = kernels.wirt_d1(self.B_full, idx, f.strides, f.h, n, True) \
                .reshape(len(idx), n, n, n)
        if "lapA" in need:
            out["lapA"] = kernels.wirt_lap(self.A_full, idx, f.strides, f.h, n, out["G"]) \
                .reshape(len(idx), n, n)
        if "lapB" in need:
            out["lapB"] = kernels.wirt_lap(self.B_full, idx, f.strides, f.h, n, out["G"]) \
                .reshape(len(idx), n, n)
        if "lapM" in need:
            out["lapM"] = kernels.wirt_lap(self.M_full, idx, f.strides, f.h, n, out["G"]) \
                .reshape(len(idx), n, n)
        return out


_KIND_NEEDS = {
    IdentityKind.GRAD: {"grad", "Ainv", "dA"},
    IdentityKind.DDA_BB: {"A", "G", "Ainv", "dBb", "lapA"},
    IdentityKind.DDA_AA: {"A", "G", "Ainv", "dA", "lapA"},
    IdentityKind.DDB_AB: {"B", "G", "Ainv", "dA", "dBb", "lapB"},
    IdentityKind.DDB_BA: {"B", "G", "Ainv", "dBb", "dA", "lapB"},
}


def _maxabs_rows(x):
    return np.abs(x).reshape(x.shape[0], -1).max(axis=1)


def _contract(G, left, mid, right):
    """sum_{ij} G[:, i, j] * left[:, i] @ mid @ right[:, j] for per-direction stacks."""
    m, n = G.shape[0], G.shape[1]
    acc = np.zeros((m, left.shape[2], right.shape[3]), np.complex128)
    for i in range(n):
        Li = np.matmul(left[:, i], mid)
        for j in range(n):
            acc += G[:, i, j][:, None, None] * np.matmul(Li, right[:, j])
    return acc


def _identity_residual_arrays(ctx: SweepContext, kinds, idx):
    n = ctx.n
    need = set().union(*(_KIND_NEEDS[k] for k in kinds))
    b = ctx.blocks(idx, need)
    out = {}
    for kind in kinds:
        if kind is IdentityKind.GRAD:
            tr = np.einsum("mpk,mikp->mi", b["Ainv"], b["dA"])
            res = tr - (n + 1.0) * b["grad"]
            out[kind] = np.abs(res).max(axis=1) if n > 1 else np.abs(res)[:, 0]
        elif kind is IdentityKind.DDA_BB:
            # left stack carries the jbar index, right stack the i index
            r1 = _contract(np.swapaxes(b["G"], 1, 2), b["dBb"], np.conj(b["Ainv"]),
                           np.conj(b["dBb"]))
            out[kind] = _maxabs_rows(b["lapA"] - r1 - (n + 1.0) * b["A"])
        elif kind is IdentityKind.DDA_AA:
            right = np.conj(np.swapaxes(b["dA"], 2, 3))
            r1 = _contract(b["G"], b["dA"], b["Ainv"], right)
            out[kind] = _maxabs_rows(b["lapA"] - r1 - (n + 1.0) * b["A"])
        elif kind is IdentityKind.DDB_AB:
            r1 = _contract(b["G"], b["dA"], b["Ainv"], b["dBb"])
            out[kind] = _maxabs_rows(b["lapB"] - r1 - (n + 1.0) * b["B"])
        elif kind is IdentityKind.DDB_BA:
            right = np.swapaxes(b["dA"], 2, 3)
            r1 = _contract(np.swapaxes(b["G"], 1, 2), b["dBb"], np.conj(b["Ainv"]), right)
            out[kind] = _maxabs_rows(b["lapB"] - r1 - (n + 1.0) * b["B"])
        else:  # pragma: no cover
            raise ValueError(f"unknown identity kind {kind}")
    return out


@dataclass(frozen=True)
class IdentitySweep:
    idx: np.ndarray
    residuals: dict
    flagged_idx: np.ndarray
    h: float
    n: int


def identity_sweep(ctx: SweepContext, kinds=None, idx=None) -> IdentitySweep:
    """Residual of the selected identities at every safe interior node."""
    kinds = tuple(IdentityKind(k) for k in (kinds or ALL_KINDS))
    if idx is None:
        idx, flagged = ctx.checked_idx()
    else:
        idx = np.asarray(idx, dtype=np.int64)
        flagged = np.empty(0, np.int64)
    res = _identity_residual_arrays(ctx, kinds, idx)
    return IdentitySweep(idx=idx, residuals=res, flagged_idx=flagged,
                         h=ctx.field.h, n=ctx.n)


def obstruction_blocks(ctx: SweepContext, idx):
    """Per-node obstruction tensors S_i stacked as (m, n, n, n)."""
    b = ctx.blocks(idx, {"B", "Ainv", "G", "dA", "dB"})
    n = ctx.n
    m = len(idx)
    sB = np.empty((m, n, n, n), np.complex128)
    BG = np.matmul(b["B"], b["G"])  # B conj(A^{-1})
    for i in range(n):
        dAbar_i = np.swapaxes(b["dA"][:, i], 1, 2)
        sB[:, i] = b["dB"][:, i] - np.matmul(BG, dAbar_i)
    return sB, b


@dataclass(frozen=True)
class ObstructionSweep:
    idx: np.ndarray
    script_b: np.ndarray
    script_b_max: np.ndarray
    relation_residual: np.ndarray


def obstruction_sweep(ctx: SweepContext, idx=None) -> ObstructionSweep:
    """Obstruction tensor plus the residual of its defining relation.

    The relation d_i (B conj(A^{-1})) = S_i conj(A^{-1}) is checked by
    differencing the product field directly.
    """
    if idx is None:
        idx, _ = ctx.checked_idx()
    sB, b = obstruction_blocks(ctx, idx)
    n = ctx.n
    f = ctx.field
    prod_full = np.full_like(ctx.A_full, np.nan)
    rows = ctx.interior[ctx.pd_interior]
    Bv = ctx.B_full[rows].reshape(-1, n, n)
    Gv = np.conj(ctx.Ainv_full[rows].reshape(-1, n, n))
    prod_full[rows] = np.matmul(Bv, Gv).reshape(-1, n * n)
    dP = kernels.wirt_d1(prod_full, idx, f.strides, f.h, n, False).reshape(len(idx), n, n, n)
    diff = np.empty_like(sB)
    for i in range(n):
        diff[:, i] = dP[:, i] - np.matmul(sB[:, i], b["G"])
    rel = _maxabs_rows(diff)
    return ObstructionSweep(idx=idx, script_b=sB, script_b_max=_maxabs_rows(sB),
                            relation_residual=rel)


@dataclass(frozen=True)
class EllipticMSweep:
    idx: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    residual: np.ndarray
    rhs_lambda_max: np.ndarray
    flagged_idx: np.ndarray


def elliptic_m_sweep(ctx: SweepContext, idx=None) -> EllipticMSweep:
    """Check u^{ij~} d_{ij~} M - (n+1) M against its obstruction image.

    The right hand side is assembled as minus a Gram-type sum, so its
    largest eigenvalue must sit at rounding level below zero wherever A is
    positive definite; the residual measures how well the discretized left
    hand side matches it.
    """
    if idx is None:
        idx, flagged = ctx.checked_idx()
    else:
        idx = np.asarray(idx, dtype=np.int64)
        flagged = np.empty(0, np.int64)
    sB, b = obstruction_blocks(ctx, idx)
    extra = ctx.blocks(idx, {"M", "G", "lapM"})
    n = ctx.n
    rhs = -_contract(b["G"], sB, b["G"], np.conj(np.swapaxes(sB, 2, 3)))
    lhs = extra["lapM"] - (n + 1.0) * extra["M"]
    resid = _maxabs_rows(lhs - rhs)
    rhs_h = 0.5 * (rhs + np.conj(np.swapaxes(rhs, 1, 2)))
    lam_max = np.linalg.eigvalsh(rhs_h)[:, -1]
    return EllipticMSweep(idx=idx, lhs=lhs, rhs=rhs, residual=resid,
                          rhs_lambda_max=lam_max, flagged_idx=flagged)


# single node entry points


def _single_context(field: ScalarField, node) -> tuple:
    flat = field.flat_index(node)
    core2 = field.core_mask(2)
    if not core2.ravel()[flat]:
        raise StencilError(
            f"node {tuple(node)} lacks the radius-2 interior stencil the check needs"
        )
    return SweepContext(field), flat


def identity_residual(field: ScalarField, node, kind) -> float:
    """Residual of one identity at one node (see module docstring for kinds)."""
    ctx, flat = _single_context(field, node)
    if not ctx.valid_core.ravel()[flat]:
        raise SingularMatrixError(
            f"A is not positive definite on the stencil of node {tuple(node)}"
        )
    sweep = identity_sweep(ctx, kinds=[IdentityKind(kind)], idx=np.array([flat]))
    return float(sweep.residuals[IdentityKind(kind)][0])


def elliptic_M_residual(field: ScalarField, node):
    """(LHS, RHS, max|LHS-RHS|) of the elliptic identity for M at one node."""
    ctx, flat = _single_context(field, node)
    if not ctx.valid_core.ravel()[flat]:
        raise SingularMatrixError(
            f"A is not positive definite on the stencil of node {tuple(node)}"
        )
    sweep = elliptic_m_sweep(ctx, idx=np.array([flat]))
    return sweep.lhs[0], sweep.rhs[0], float(sweep.residual[0])


def wirtinger_jet(field: ScalarField, node) -> WirtingerJet:
    """Full derivative jet at one node, using only axis neighbors of radius 2.

    The node and its 4n axis neighbors must be interior so the A and B
    fields exist there; A must be positive definite at the node itself.
    """
    flat = field.flat_index(node)
    maskf = field.mask.ravel()
    if maskf[flat] != MASK_INTERIOR:
        raise StencilError(f"node {tuple(node)} is not interior")
    n = field.n
    strides = field.strides
    nbrs = [flat]
    for a in range(2 * n):
        nbrs.extend((flat + strides[a], flat - strides[a]))
    nbrs = np.asarray(nbrs, dtype=np.int64)
    if not np.all(maskf[nbrs] == MASK_INTERIOR):
        raise StencilError(
            f"node {tuple(node)} needs interior axis neighbors for third derivatives"
        )
    jets = hessian_fields(field, nbrs)
    pd, inv, _ = hermitian_inverse_logdet(jets.A[:1])
    if not pd[0]:
        raise SingularMatrixError(f"A is singular at node {tuple(node)}")

    def wdiff(stack, conj_dir):
        out = np.empty((n, n, n), np.complex128)
        for p in range(n):
            dx = (stack[1 + 2 * p] - stack[2 + 2 * p]) / (2.0 * field.h)
            dy = (stack[1 + 2 * (n + p)] - stack[2 + 2 * (n + p)]) / (2.0 * field.h)
            sign = 1.0j if conj_dir else -1.0j
            out[p] = 0.5 * (dx + sign * dy)
        return out

    dA = wdiff(jets.A, False)
    dB = wdiff(jets.B, False)
    dBb = wdiff(jets.B, True)
    dAbar = np.swapaxes(dA, 1, 2)
    return WirtingerJet(
        point=tuple(int(c) for c in node),
        grad=jets.grad[0],
        AB=WirtingerHessian(A=jets.A[0], B=jets.B[0]),
        A_inv=inv[0],
        dA=dA,
        dB=dB,
        dB_bar_side=dBb,
        dAbar=dAbar,
    )


def obstruction_tensor(jet: WirtingerJet) -> ObstructionTensor:
    """S_i from a jet: d_i B - B conj(A^{-1}) d_i conj(A)."""
    n = jet.AB.n
    BG = jet.AB.B @ np.conj(jet.A_inv)
    out = np.empty((n, n, n), np.complex128)
    for i in range(n):
        out[i] = jet.dB[i] - BG @ jet.dAbar[i]
    return ObstructionTensor(scriptB=out)
