"""Bounded analytic extension from a distinguished variety to the bidisk.

Given the refined representation data (Phi, Q, Qvec) of a torus-smooth
variety, every polynomial f extends to the rational function

    F(z, w) = (1, 0, ..., 0) Q(z)^{-1} f(zI_m, Phi(z)) Qvec(z, w),

equal to f on the variety because Qvec is a w-eigenvector of Phi(z) there,
and bounded by C * sup_V |f| with C = sqrt(m) sup_z ||Q(z)^{-1}|| ||Q(z)||.
The sup is attained on the boundary circle (log-subharmonicity of operator
norms of analytic matrix functions); interior points are spot-checked only
to guard against implementation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classify import batched_fiber_roots
from .dvrep import DvCertificate, UnitaryRealization, VarietySample, phi_evaluate
from .poly2 import BivariatePolynomial, disk_spiral

__all__ = [
    "ExtensionOperator",
    "BoundReport",
    "ExtensionReport",
    "eval_f_of_pair",
    "extension_bound",
    "sup_norm_on_variety",
    "verify_extension",
]


def eval_f_of_pair(f: BivariatePolynomial, z: complex, phi: np.ndarray) -> np.ndarray:
    """f(z I_m, Phi) = sum_k (sum_j c_jk z^j) Phi^k, Horner in the matrix."""
    m = phi.shape[0]
    n_deg, m_deg = f.degree
    zp = np.asarray(z, dtype=np.complex128) ** np.arange(n_deg + 1)
    wcoeffs = zp @ f.coeffs  # scalar coefficient of each Phi power
    acc = np.zeros((m, m), dtype=np.complex128)
    for k in range(m_deg, -1, -1):
        acc = acc @ phi + wcoeffs[k] * np.eye(m)
    return acc


@dataclass(frozen=True)
class ExtensionOperator:
    """Evaluator for the extension F of f off the variety of cert.p."""

    rep: UnitaryRealization
    cert: DvCertificate
    f: BivariatePolynomial

    def __post_init__(self):
        if len(self.cert.vec_q) != self.rep.m:
            raise ValueError("certificate and realization disagree on m")

    def __call__(self, z, w):
        return self.evaluate(z, w)

    def evaluate(self, z: complex, w) -> complex | np.ndarray:
        """F(z, w); ``w`` may be an array (shared z), via one linear solve."""
        qmat = self.cert.qmatrix.evaluate(z)
        row = np.linalg.solve(qmat.T, np.eye(self.rep.m)[0])
        fmat = eval_f_of_pair(self.f, z, phi_evaluate(self.rep, z))
        qvec = self.cert.vec_q.evaluate(z, w)
        out = (row @ fmat) @ qvec
        if np.ndim(w) == 0:
            return complex(out)
        return out

    def evaluate_grid(self, zs, ws) -> np.ndarray:
        """F on the product grid zs x ws, batched over z through stacked
        linear solves and matrix Horner."""
        zs = np.asarray(zs, dtype=np.complex128).ravel()
        ws = np.asarray(ws, dtype=np.complex128).ravel()
        m, n = self.rep.m, self.rep.n
        qmats = self.cert.qmatrix.evaluate(zs)  # (K, m, m)
        e1 = np.zeros((m, 1), dtype=np.complex128)
        e1[0, 0] = 1.0
        rows = np.linalg.solve(
            np.swapaxes(qmats, 1, 2), np.broadcast_to(e1, (len(zs), m, 1))
        )[..., 0]
        core = np.linalg.solve(
            np.eye(n) - zs[:, None, None] * self.rep.D,
            np.broadcast_to(self.rep.C, (len(zs), n, m)),
        )
        phis = self.rep.A + zs[:, None, None] * (self.rep.B @ core)
        fn, fm = self.f.degree
        wcoeffs = (zs[:, None] ** np.arange(fn + 1)) @ self.f.coeffs  # (K, fm+1)
        acc = np.zeros((len(zs), m, m), dtype=np.complex128)
        eye = np.eye(m)
        for k in range(fm, -1, -1):
            acc = acc @ phis + wcoeffs[:, k, None, None] * eye
        rowf = np.einsum("km,kmj->kj", rows, acc)
        qvec = self.cert.vec_q.evaluate(zs[:, None], ws[None, :])  # (m, K, L)
        return np.einsum("kj,jkl->kl", rowf, qvec)


@dataclass(frozen=True)
class BoundReport:
    """Extension constant C = sqrt(m) sup ||Q^{-1}|| ||Q|| and the sharper
    per-point bound sup ||Q(z)^{-1}|| |Qvec(z, w)|."""

    C: float
    per_point_bound: float
    sup_f_on_variety: float
    sup_F_on_bidisk: float

    @property
    def ratio(self) -> float:
        if self.sup_f_on_variety == 0:
            return 0.0
        return self.sup_F_on_bidisk / self.sup_f_on_variety


def _condition_sup(qmatrix, zs) -> float:
    vals = qmatrix.evaluate(np.asarray(zs))
    svals = np.linalg.svd(vals, compute_uv=False)
    return float(np.max(svals[..., 0] / svals[..., -1]))


def extension_bound(op: ExtensionOperator, grid_n: int = 256) -> BoundReport:
    """Compute C on a boundary grid of grid_n angles (with an interior spot
    grid), and the per-point bound over a bidisk grid."""
    m = op.rep.m
    circle = np.exp(2j * np.pi * np.arange(grid_n) / grid_n)
    interior = 0.6 * np.exp(2j * np.pi * np.arange(16) / 16)
    cond = max(_condition_sup(op.cert.qmatrix, circle), _condition_sup(op.cert.qmatrix, interior))
    c_const = math.sqrt(m) * cond
    sub = circle[:: max(1, grid_n // 32)]
    per_point = 0.0
    for z in sub:
        qmat = op.cert.qmatrix.evaluate(z)
        inv_norm = 1.0 / float(np.linalg.svd(qmat, compute_uv=False)[-1])
        qnorm = np.sqrt(op.cert.vec_q.norm_sq(z, sub))
        per_point = max(per_point, inv_norm * float(np.max(qnorm)))
    sup_f = sup_norm_on_variety(op.f, op.cert.p, max(grid_n, 128))
    pts = disk_spiral(max(grid_n, 64))
    sup_F = float(np.max(np.abs(op.evaluate_grid(pts, pts))))
    return BoundReport(c_const, per_point, sup_f, sup_F)


def sup_norm_on_variety(
    f: BivariatePolynomial, p: BivariatePolynomial, grid_n: int = 256
) -> float:
    """sup of |f| over the variety of p inside the closed bidisk.

    A distinguished variety meets the boundary only in the torus, so the sup
    is attained among the unimodular fiber roots over unimodular z; interior
    fiber samples are folded in as a safety net (they cannot exceed the
    boundary value beyond numerical error for honest inputs)."""
    best = 0.0
    circle = np.exp(2j * np.pi * np.arange(grid_n) / grid_n)
    sweeps = [(circle, lambda w: np.abs(np.abs(w) - 1.0) < 1e-6)]
    inner = np.exp(2j * np.pi * np.arange(max(grid_n // 4, 8)) / max(grid_n // 4, 8))
    for r in (0.5, 0.9):
        sweeps.append((r * inner, lambda w: np.abs(w) <= 1.0))
    for zs, keep in sweeps:
        roots = batched_fiber_roots(p, zs)
        if isinstance(roots, np.ndarray):
            mask = keep(roots)
            if mask.any():
                vals = np.abs(f.evaluate(zs[:, None], roots))
                best = max(best, float(np.max(vals[mask])))
        else:
            for z, rts in zip(zs, roots):
                for w in rts[keep(rts)] if len(rts) else ():
                    best = max(best, abs(f.evaluate(complex(z), complex(w))))
    return best


def expand_extension(op: ExtensionOperator, trim_tol: float = 1e-12):
    """Numerator/denominator display form of F: a bivariate numerator and a
    one-variable denominator det(Q(z)) det(I - zD)^K, K the w-degree of f.

    F itself stays an evaluator; this expansion exists for inspection and
    serialization only.  Both parts are recovered by evaluation on
    roots-of-unity nodes and exact inverse DFT, then trimmed of trailing
    zero coefficients."""
    m, n = op.rep.m, op.rep.n
    fz, fw = op.f.degree
    dz_deg = m * n + fw * n
    nz_deg = n * m + fw * (n + 1) + fz + n

    def denom_at(z):
        qdet = np.linalg.det(op.cert.qmatrix.evaluate(z))
        core = np.linalg.det(np.eye(n) - np.asarray(z)[..., None, None] * op.rep.D)
        return qdet * core**fw

    zs = np.exp(2j * np.pi * np.arange(dz_deg + 1) / (dz_deg + 1))
    den_coeffs = np.fft.fft(denom_at(zs)) / (dz_deg + 1)
    zs2 = np.exp(2j * np.pi * np.arange(nz_deg + 1) / (nz_deg + 1))
    ws2 = np.exp(2j * np.pi * np.arange(m) / max(m, 1))
    fvals = op.evaluate_grid(zs2, ws2) * denom_at(zs2)[:, None]
    num_coeffs = np.fft.fft2(fvals) / ((nz_deg + 1) * max(m, 1))
    numerator = BivariatePolynomial(num_coeffs)
    denominator = BivariatePolynomial(den_coeffs[:, None])
    tn = numerator.true_degree(trim_tol)
    td = denominator.true_degree(trim_tol)
    numerator = BivariatePolynomial(numerator.coeffs[: tn[0] + 1, : tn[1] + 1])
    denominator = BivariatePolynomial(denominator.coeffs[: td[0] + 1, :1])
    return numerator, denominator


@dataclass(frozen=True)
class ExtensionReport:
    on_variety_residual: float
    sup_F_on_bidisk: float
    sup_f_on_variety: float
    bound_C: float
    ratio: float
    passed: bool


def verify_extension(
    op: ExtensionOperator,
    sample: VarietySample,
    grid_n: int = 64,
    tol: float = 1e-6,
) -> ExtensionReport:
    """Check F = f at variety samples and the norm inflation against C."""
    z, w = sample.arrays()
    fv = np.asarray(op.f.evaluate(z, w))
    ev = np.array([op.evaluate(complex(a), complex(b)) for a, b in zip(z, w)])
    scale = 1.0 + float(np.max(np.abs(fv)))
    on_var = float(np.max(np.abs(ev - fv))) / scale
    bound = extension_bound(op, grid_n=max(grid_n, 128))
    pts = disk_spiral(grid_n)
    sup_F = float(np.max(np.abs(op.evaluate_grid(pts, pts))))
    sup_f = bound.sup_f_on_variety
    ratio = sup_F / sup_f if sup_f > 0 else 0.0
    passed = on_var <= 1e-7 and sup_F <= bound.C * sup_f + tol * max(1.0, op.f.scale)
    return ExtensionReport(on_var, sup_F, sup_f, bound.C, ratio, passed)
