"""Sums-of-squares certificates for polynomials without bidisk zeros.

Construction route: the density c^2 / |q|^2 on the two-torus is a probability
measure once c is chosen to normalize it, and its monomial moments define an
inner product on polynomial spaces.  Two orthogonal complements taken in that
inner product,

    S1 = {degree <= (n-1, m)}  minus  w * {degree <= (n-1, m-1)}
    S2 = {degree <= (n, m-1)}  minus  {degree <= (n-1, m-1)},

have dimensions exactly n and m, and orthonormal bases E, F of them satisfy

    |q|^2 - |reflect(q)|^2 = c^2 [ (1-|z|^2) |E|^2 + (1-|w|^2) |F|^2 ],

which after absorbing c into the vectors is the two-square decomposition for
a polynomial with no zeros on the closed bidisk.  Polynomials that are only
zero-free on the open bidisk (torus zeros allowed) are handled by dilating
q_r(z, w) = q(rz, rw), building certificates along r -> 1, and extrapolating
the (unitary-invariant) kernel coefficient tensors to r = 1.

Moments are two-dimensional Fourier coefficients; they are computed by FFT
on a torus grid, or -- when zeros sit too close to the torus for any
affordable grid -- by exact residue summation in w followed by a single
1-D quadrature in z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .classify import QuadratureError, ZeroLabel, classify_zero_set
from .poly2 import (
    BivariatePolynomial,
    MatrixPolynomial,
    VectorPolynomial,
    disk_spiral,
    reflect,
    reflected_derivatives,
    symmetry_analysis,
)

__all__ = [
    "MomentTable",
    "SosCertificate",
    "CertKind",
    "GwReport",
    "VerificationReport",
    "TorusZeroError",
    "SubspaceError",
    "StabilityError",
    "compute_moments",
    "subspace_kernel_pair",
    "sos_certificate",
    "gw_invertibility",
    "sym_sos_certificate",
    "verify_certificate",
    "dilate",
]

EIG_CLIP = 1e-12
# Certificate coefficients of the dilated family q(rz, rw) approach the
# boundary-zero limit like sqrt(1 - r) (measured, and stable across the
# corpus), so extrapolation runs in h = sqrt(1 - r); the radii are geometric
# in h, which makes polynomial extrapolation to h = 0 well conditioned.
DILATION_RADII = (0.9, 0.97, 0.99, 0.997, 0.999, 0.9997, 0.9999)


class TorusZeroError(ValueError):
    """q vanishes on the torus grid; the density 1/|q|^2 is not integrable."""


class SubspaceError(ValueError):
    pass


class StabilityError(ValueError):
    pass


class CertKind(Enum):
    COLE_WERMER = "ColeWermer"
    SYMMETRIC = "Symmetric"
    DV = "DV"


@dataclass(frozen=True)
class MomentTable:
    """Window of torus moments mu(a, b) of the normalized 1/|q|^2 density.

    ``window[a + n, b + m]`` holds mu(a, b) for |a| <= n, |b| <= m, scaled so
    mu(0, 0) = 1; ``normalizer_c`` is the positive constant with
    d rho = c^2/|q|^2 d(normalized Lebesgue).
    """

    q: BivariatePolynomial
    normalizer_c: float
    window: np.ndarray
    grid_size: int

    def mu(self, a: int, b: int) -> complex:
        n, m = self.q.degree
        if abs(a) > n or abs(b) > m:
            raise KeyError(f"moment ({a},{b}) outside stored window")
        return complex(self.window[a + n, b + m])


def dilate(q: BivariatePolynomial, r: float) -> BivariatePolynomial:
    """q(rz, rw): every zero moves radially outward by 1/r in each variable."""
    n, m = q.degree
    scale = np.power(r, np.arange(n + 1))[:, None] * np.power(r, np.arange(m + 1))
    return BivariatePolynomial(q.coeffs * scale)


def _window_from_raw(raw_fn, n, m):
    win = np.empty((2 * n + 1, 2 * m + 1), dtype=np.complex128)
    for a in range(-n, n + 1):
        for b in range(-m, m + 1):
            win[a + n, b + m] = raw_fn(a, b)
    return win


def _fft_window(q, size):
    nodes = np.exp(2j * np.pi * np.arange(size) / size)
    vals = np.abs(q.evaluate(nodes[:, None], nodes[None, :])) ** 2
    if np.min(vals) <= (1e-12 * max(q.scale, 1e-300)) ** 2:
        raise TorusZeroError("zero on torus: |q| vanishes on the quadrature grid")
    raw = np.fft.ifft2(1.0 / vals)
    n, m = q.degree
    return _window_from_raw(lambda a, b: raw[a % size, b % size], n, m)


def _poly_eval_batch(coeffs, x):
    """Horner for per-row coefficient lists: coeffs (N, d+1) low-to-high at
    x (N, K) -> (N, K)."""
    acc = np.zeros_like(x)
    for t in range(coeffs.shape[1] - 1, -1, -1):
        acc = acc * x + coeffs[:, t : t + 1]
    return acc


def _residue_column(q, nodes, bmax):
    """J_b(z) = (1/2 pi) int w^b / |q(z, w)|^2 dtheta for b = 0..bmax.

    On the circle 1/|q(z, w)|^2 = w^M / (q(z, w) r(w)) with r the degree-M
    reflection of the fiber, whose roots v_k = 1/conj(w_k) are the poles
    inside the disk; each residue is v_k^{b+M-1} / (q(z, v_k) r'(v_k)).
    Stable fibers keep r at full degree (r's leading coefficient is
    conj(q(z, 0))), so fiber degree drops in w cost nothing here."""
    n, m = q.degree
    powers = nodes[:, None] ** np.arange(n + 1)
    fiber = powers @ q.coeffs  # (N, m+1) low-to-high in w
    if m == 0:
        dens = 1.0 / np.abs(fiber[:, 0]) ** 2
        return np.stack([dens] + [np.zeros_like(dens)] * bmax, axis=0)
    refl_c = np.conj(fiber[:, ::-1])  # coefficients of r, low-to-high
    lead = np.abs(refl_c[:, -1])
    if np.min(lead) <= 1e-12 * np.max(np.abs(refl_c)):
        raise StabilityError("fiber vanishes at w = 0 on the contour; q is not stable")
    monic = refl_c / refl_c[:, -1:]
    comp = np.zeros((len(nodes), m, m), dtype=np.complex128)
    comp[:, 1:, :-1] = np.eye(m - 1)
    comp[:, :, -1] = -monic[:, :-1]
    v = np.linalg.eigvals(comp)  # (N, m) poles, should lie inside the disk
    if np.max(np.abs(v)) >= 1.0:
        raise StabilityError("fiber root inside the closed disk on the contour")
    pair = np.abs(v[:, :, None] - v[:, None, :]) + np.eye(m)
    if np.min(pair) < 1e-8:
        raise QuadratureError("colliding fiber roots; residue backend assumes simple poles")
    dref_c = refl_c[:, 1:] * np.arange(1, m + 1)
    denom = _poly_eval_batch(fiber, v) * _poly_eval_batch(dref_c, v)
    out = np.empty((bmax + 1, len(nodes)), dtype=np.complex128)
    base = v ** (m - 1)
    for b in range(bmax + 1):
        out[b] = np.sum(base / denom, axis=1)
        base = base * v
    return out


def _residue_window(q, size):
    n, m = q.degree
    nodes = np.exp(2j * np.pi * np.arange(size) / size)
    cols = _residue_column(q, nodes, m)
    spectra = np.fft.ifft(cols, axis=1)  # spectra[b, a % size] = raw mu(a, b)

    def raw(a, b):
        if b < 0:
            return np.conj(spectra[-b, (-a) % size])
        return spectra[b, a % size]

    return _window_from_raw(raw, n, m)


def _converged_window(q, start, builder, rtol=1e-9, max_size=None):
    size = start
    win = builder(q, size)
    while max_size is None or size < max_size:
        nxt = builder(q, 2 * size)
        err = np.max(np.abs(nxt - win)) / max(np.max(np.abs(nxt)), 1e-300)
        win, size = nxt, 2 * size
        if err <= rtol:
            return win, size
    raise QuadratureError("quadrature unresolved: moment window did not converge")


def compute_moments(
    q: BivariatePolynomial,
    grid_size: int | None = None,
    method: str = "auto",
) -> MomentTable:
    """Moment table of the normalized density c^2/|q|^2 on the torus.

    ``grid_size`` of None picks the smallest power of two >= max(256,
    16(n+m)) and doubles until the window agrees with the doubled grid to
    1e-9 relative.  ``method`` is "fft", "residue", or "auto" (fft first,
    residue rescue for near-torus zeros).
    """
    n, m = q.degree
    if grid_size is None:
        grid_size = 1 << max(8, math.ceil(math.log2(max(1, 16 * (n + m)))))
    if method == "fft":
        win, used = _converged_window(q, grid_size, _fft_window, max_size=4096)
    elif method == "residue":
        win, used = _converged_window(q, max(grid_size, 4096), _residue_window, max_size=1 << 20)
    else:
        try:
            win, used = _converged_window(q, grid_size, _fft_window, max_size=4096)
        except QuadratureError:
            win, used = _converged_window(q, 1 << 14, _residue_window, max_size=1 << 20)
    mu00 = win[n, m].real
    if not mu00 > 0:
        raise TorusZeroError("density has nonpositive mass; q vanishes on the torus")
    return MomentTable(q, math.sqrt(1.0 / mu00), win / mu00, used)


def _monomials(imax, jmax):
    return [(i, j) for i in range(imax + 1) for j in range(jmax + 1)]


def _gram(moments, rows, cols):
    n, m = moments.q.degree
    g = np.empty((len(rows), len(cols)), dtype=np.complex128)
    for r, (ir, jr) in enumerate(rows):
        for c, (ic, jc) in enumerate(cols):
            g[r, c] = moments.window[ic - ir + n, jc - jr + m]
    return g


def _complement_basis(moments, family, shifted, expect_dim, order=None):
    """Orthonormal basis (w.r.t. the moment inner product) of the orthogonal
    complement of span(shifted) inside span(family).

    Projection coefficients come from a linear solve against the shifted
    block's Gram; the complement vectors are then orthonormalized through a
    Hermitian eigendecomposition with eigenvalue clipping, so near-rank-
    deficiency degrades detectably instead of catastrophically.
    """
    rest = [mono for mono in family if mono not in set(shifted)]
    if order is not None:
        rest = [rest[k] for k in order]
    if len(rest) != expect_dim:
        raise SubspaceError("subspace degenerate: complement dimension mismatch")
    gram_jj = _gram(moments, shifted, shifted)
    gram_jr = _gram(moments, shifted, rest)
    if shifted:
        proj = np.linalg.solve(gram_jj, gram_jr)  # (|J|, |rest|)
    else:
        proj = np.zeros((0, len(rest)), dtype=np.complex128)
    index = {mono: k for k, mono in enumerate(family)}
    vecs = np.zeros((len(family), len(rest)), dtype=np.complex128)
    for t, mono in enumerate(rest):
        vecs[index[mono], t] = 1.0
        for s, smono in enumerate(shifted):
            vecs[index[smono], t] -= proj[s, t]
    gram_ff = _gram(moments, family, family)
    small = vecs.conj().T @ gram_ff @ vecs
    small = 0.5 * (small + small.conj().T)
    evals, evecs = np.linalg.eigh(small)
    keep = evals > EIG_CLIP * max(np.trace(small).real, 1e-300)
    if int(np.sum(keep)) != expect_dim:
        raise SubspaceError(
            f"subspace degenerate: rank {int(np.sum(keep))}, expected {expect_dim}"
        )
    order_desc = np.argsort(evals[keep])[::-1]
    basis = (vecs @ evecs[:, keep] / np.sqrt(evals[keep]))[:, order_desc]
    for k in range(basis.shape[1]):
        piv = int(np.argmax(np.abs(basis[:, k])))
        phase = basis[piv, k] / abs(basis[piv, k])
        basis[:, k] /= phase
    return basis, index


def _basis_to_vector(basis, index, degree):
    n, m = degree
    comps = []
    for k in range(basis.shape[1]):
        grid = np.zeros((n + 1, m + 1), dtype=np.complex128)
        for mono, pos in index.items():
            grid[mono] = basis[pos, k]
        comps.append(BivariatePolynomial(grid))
    return VectorPolynomial(tuple(comps))


def subspace_kernel_pair(
    q: BivariatePolynomial,
    moments: MomentTable,
    order_first=None,
    order_second=None,
):
    """Orthonormal bases (E, F) of the two complements whose kernels build the
    certificate; E has exactly n components of degree <= (n-1, m), F exactly
    m of degree <= (n, m-1)."""
    n, m = q.degree
    fam1 = _monomials(n - 1, m)
    shift1 = [(i, j) for i in range(n) for j in range(1, m + 1)]
    basis1, idx1 = _complement_basis(moments, fam1, shift1, n, order_first)
    vec_e = _basis_to_vector(basis1, idx1, (max(n - 1, 0), m))
    fam2 = _monomials(n, m - 1)
    shift2 = [(i, j) for i in range(n) for j in range(m)]
    basis2, idx2 = _complement_basis(moments, fam2, shift2, m, order_second)
    vec_f = _basis_to_vector(basis2, idx2, (n, max(m - 1, 0)))
    return vec_e, vec_f


@dataclass(frozen=True)
class SosCertificate:
    """Vector-polynomial pair (with weights, for the symmetric/DV kinds)
    witnessing a two-square identity; matrix forms are the one-variable
    matrix polynomials reproducing the vectors against monomial columns."""

    kind: CertKind
    vec_first: VectorPolynomial
    vec_second: VectorPolynomial
    weights: tuple[float, float] | None = None
    matrix_first: MatrixPolynomial | None = None
    matrix_second: MatrixPolynomial | None = None
    residual: float | None = None

    @property
    def degree(self):
        n1, m1 = self.vec_first.degree_bound() if len(self.vec_first) else (0, 0)
        n2, m2 = self.vec_second.degree_bound() if len(self.vec_second) else (0, 0)
        return max(n1 + 1, n2), max(m1, m2 + 1)


def _matrix_form_in_w(vec: VectorPolynomial, n: int, m: int) -> MatrixPolynomial:
    arr = np.zeros((len(vec), n, m + 1), dtype=np.complex128)
    for k, comp in enumerate(vec):
        g = comp.with_degree((n - 1, m)).coeffs
        arr[k, :, :] = g
    return MatrixPolynomial(arr)


def _matrix_form_in_z(vec: VectorPolynomial, m: int, n: int) -> MatrixPolynomial:
    arr = np.zeros((len(vec), m, n + 1), dtype=np.complex128)
    for k, comp in enumerate(vec):
        g = comp.with_degree((n, m - 1)).coeffs
        arr[k, :, :] = g.T
    return MatrixPolynomial(arr)


def _attach_matrix_forms(kind, vec_a, vec_b, n, m, weights=None, residual=None):
    mat_a = _matrix_form_in_w(vec_a, n, m) if n > 0 else None
    mat_b = _matrix_form_in_z(vec_b, m, n) if m > 0 else None
    return SosCertificate(kind, vec_a, vec_b, weights, mat_a, mat_b, residual)


def _stability_route(q, grid_n=32, tol=1e-7):
    label = classify_zero_set(q, grid_n=grid_n, tol=tol).label
    if label is ZeroLabel.STABLE_CLOSED:
        return "direct"
    if label is ZeroLabel.STABLE_OPEN:
        return "dilation"
    if label is ZeroLabel.SYMMETRIC_NONVANISHING_OFF_TORUS:
        nodes = np.exp(2j * np.pi * np.arange(512) / 512)
        min_torus = np.min(np.abs(q.evaluate(nodes[:, None], nodes[None, :])))
        return "direct" if min_torus > 1e-6 * q.scale else "dilation"
    raise StabilityError(
        f"polynomial has zeros on the open bidisk (classified {label.value}); "
        "no sums-of-squares certificate exists"
    )


def _direct_certificate(q, grid_size=None, method="auto"):
    n, m = q.degree
    mom = compute_moments(q, grid_size, method=method)
    vec_e, vec_f = subspace_kernel_pair(q, mom)
    c = mom.normalizer_c
    return vec_e.scaled(c), vec_f.scaled(c)


def _refactor_kernel_tensor(tensor, rank, degree):
    """Recover a component list from a kernel coefficient tensor: eigh of the
    PSD Gram-in-coefficient-space form, keeping the leading ``rank`` modes."""
    n, m = degree
    d = (n + 1) * (m + 1)
    gram = tensor.reshape(d, d)
    gram = 0.5 * (gram + gram.conj().T)
    evals, evecs = np.linalg.eigh(gram)
    order = np.argsort(evals)[::-1]
    comps = []
    for k in order[:rank]:
        lam = max(evals[k], 0.0)
        comps.append(
            BivariatePolynomial((evecs[:, k] * math.sqrt(lam)).reshape(n + 1, m + 1))
        )
    return VectorPolynomial(tuple(comps))


def _neville_to_zero(hs, tables):
    """Polynomial extrapolation of table-valued data to h = 0."""
    tab = list(tables)
    for lev in range(1, len(hs)):
        tab = [
            (hs[i] * tab[i + 1] - hs[i + lev] * tab[i]) / (hs[i] - hs[i + lev])
            for i in range(len(hs) - lev)
        ]
    return tab[0]


def _dilation_certificate(q, grid_size=None):
    """Certificate for q stable on the open bidisk with torus zeros.

    Certificates for the dilates q(rz, rw) exist by closed-bidisk stability;
    their kernel coefficient tensors (invariant under the per-radius unitary
    freedom of the orthonormal bases) are extrapolated to r = 1 in the
    variable sqrt(1 - r) and refactored into vectors of the right rank.
    """
    n, m = q.degree
    hs, ta_list, tb_list = [], [], []
    for r in DILATION_RADII:
        qr = dilate(q, r)
        method = "auto" if 1.0 - r > 5e-3 else "residue"
        vec_a, vec_b = _direct_certificate(qr, grid_size, method=method)
        pad_a = VectorPolynomial(tuple(c.with_degree((max(n - 1, 0), m)) for c in vec_a))
        pad_b = VectorPolynomial(tuple(c.with_degree((n, max(m - 1, 0))) for c in vec_b))
        hs.append(math.sqrt(1.0 - r))
        ta_list.append(pad_a.kernel_tensor())
        tb_list.append(pad_b.kernel_tensor())
    gaps = [float(np.max(np.abs(ta_list[k + 1] - ta_list[k]))) for k in range(len(hs) - 1)]
    if gaps[-1] > gaps[0]:
        raise QuadratureError("dilation certificates are not converging toward r = 1")
    ta0 = _neville_to_zero(hs, ta_list)
    tb0 = _neville_to_zero(hs, tb_list)
    vec_a = _refactor_kernel_tensor(ta0, n, (max(n - 1, 0), m))
    vec_b = _refactor_kernel_tensor(tb0, m, (n, max(m - 1, 0)))
    return vec_a, vec_b


def sos_certificate(
    q: BivariatePolynomial,
    grid_size: int | None = None,
    route: str | None = None,
) -> SosCertificate:
    """Two-square certificate q qbar - reflect(q) reflect(q)bar =
    (1-|z|^2)|A|^2 + (1-|w|^2)|B|^2 for q with no zeros on the bidisk.

    Zero-free on the closed bidisk goes through the moment construction
    directly; torus zeros take the dilation route.  ``route`` of "direct" /
    "dilation" skips the classification step when the caller already knows.
    """
    n, m = q.degree
    if route is None:
        route = _stability_route(q)
    if route == "direct":
        vec_a, vec_b = _direct_certificate(q, grid_size)
    elif route == "dilation":
        vec_a, vec_b = _dilation_certificate(q, grid_size)
    else:
        raise ValueError(f"unknown route {route!r}")
    cert = _attach_matrix_forms(CertKind.COLE_WERMER, vec_a, vec_b, n, m)
    report = verify_certificate(q, cert, grid_n=32)
    return _attach_matrix_forms(
        CertKind.COLE_WERMER, vec_a, vec_b, n, m, residual=report.max_residual
    )


@dataclass(frozen=True)
class GwReport:
    """Minimum singular values of A(w) on the closed disk and of the
    z-reflected B(z) matrix; both must stay away from zero for polynomials
    with no zeros on the closed bidisk."""

    min_sv_first: float
    min_sv_second: float
    threshold: float
    passed: bool


def gw_invertibility(cert: SosCertificate, grid_n: int = 32, threshold: float = 1e-6) -> GwReport:
    if cert.matrix_first is None or cert.matrix_second is None:
        raise ValueError("certificate carries no matrix forms")
    n = cert.matrix_second.var_degree
    sv_a = cert.matrix_first.min_singular_value_on_disk(grid_n)
    sv_b = cert.matrix_second.reflected(n).min_singular_value_on_disk(grid_n)
    return GwReport(sv_a, sv_b, threshold, sv_a > threshold and sv_b > threshold)


def sym_sos_certificate(
    q: BivariatePolynomial,
    a: float,
    b: float,
    grid_size: int | None = None,
    sym_tol: float = 1e-8,
) -> SosCertificate:
    """Certificate of (an+bm)|q|^2 - 2 Re[(a z q_z + b w q_w) conj(q)] =
    (1-|z|^2)|A|^2 + (1-|w|^2)|B|^2 for torus-symmetric q without bidisk
    zeros.

    The combination g = a * reflect(q_z) + b * reflect(q_w) reflects back to
    a z q_z + b w q_w, so the plain certificate of g divided by (an + bm)
    is exactly the stated identity.
    """
    if a < 0 or b < 0 or (a == 0 and b == 0):
        raise ValueError("weights must be non-negative and not both zero")
    n, m = q.degree
    sym = symmetry_analysis(q, tol=sym_tol)
    if not (sym.is_symmetric and abs(sym.constant - 1.0) <= 100 * sym_tol):
        raise ValueError("polynomial is not torus-symmetric; symmetrize it first")
    qz_ref, qw_ref = reflected_derivatives(q)
    g = (a * qz_ref).with_degree((n, m)) + (b * qw_ref).with_degree((n, m))
    try:
        route = _stability_route(g)
    except StabilityError as exc:
        raise StabilityError(
            "reflected-derivative combination vanishes on the closed bidisk"
        ) from exc
    base = sos_certificate(g, grid_size, route=route)
    scale = 1.0 / math.sqrt(a * n + b * m)
    vec_a = base.vec_first.scaled(scale)
    vec_b = base.vec_second.scaled(scale)
    cert = _attach_matrix_forms(CertKind.SYMMETRIC, vec_a, vec_b, n, m, weights=(a, b))
    report = verify_certificate(q, cert, grid_n=32)
    return _attach_matrix_forms(
        CertKind.SYMMETRIC, vec_a, vec_b, n, m, weights=(a, b),
        residual=report.max_residual,
    )


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class VerificationReport:
    kind: CertKind
    max_residual: float
    polarized_residual: float
    grid_n: int
    threshold: float

    @property
    def passed(self) -> bool:
        return (
            self.max_residual <= self.threshold
            and self.polarized_residual <= self.threshold
        )


def _pair_residual(kind, q, cert, z, w, zz, ww, weights):
    """Residual of the polarized identity at point pairs (z,w) x (Z,W)."""
    qz, qw = q.partial_z(), q.partial_w()
    ka = cert.vec_first.kernel(z, w, zz, ww) if len(cert.vec_first) else 0.0
    kb = cert.vec_second.kernel(z, w, zz, ww) if len(cert.vec_second) else 0.0
    sq = np.asarray(q.evaluate(z, w))
    sq2 = np.conj(np.asarray(q.evaluate(zz, ww)))
    za = 1.0 - z * np.conj(zz)
    wa = 1.0 - w * np.conj(ww)
    if kind is CertKind.COLE_WERMER:
        qr = reflect(q)
        lhs = sq * sq2 - np.asarray(qr.evaluate(z, w)) * np.conj(
            np.asarray(qr.evaluate(zz, ww))
        )
        rhs = za * ka + wa * kb
        terms = [lhs, za * ka, wa * kb]
    elif kind is CertKind.SYMMETRIC:
        a, b = weights
        n, m = q.degree
        d1 = a * z * np.asarray(qz.evaluate(z, w)) + b * w * np.asarray(qw.evaluate(z, w))
        d2 = a * zz * np.asarray(qz.evaluate(zz, ww)) + b * ww * np.asarray(qw.evaluate(zz, ww))
        lhs = (a * n + b * m) * sq * sq2 - d1 * sq2 - sq * np.conj(d2)
        rhs = za * ka + wa * kb
        terms = [(a * n + b * m) * sq * sq2, d1 * sq2, za * ka, wa * kb]
    elif kind is CertKind.DV:
        a, b = weights
        n, m = q.degree
        d1 = a * z * np.asarray(qz.evaluate(z, w)) - b * w * np.asarray(qw.evaluate(z, w))
        d2 = b * ww * np.asarray(qw.evaluate(zz, ww)) - a * zz * np.asarray(qz.evaluate(zz, ww))
        lhs = (b * m - a * n) * sq * sq2 + d1 * sq2 + za * ka
        rhs = sq * np.conj(d2) + wa * kb
        terms = [lhs, sq * np.conj(d2), wa * kb, za * ka]
    else:
        raise ValueError(kind)
    denom = max(float(np.max(np.abs(np.stack(np.broadcast_arrays(*terms))))), 1.0)
    return float(np.max(np.abs(lhs - rhs))) / denom


def verify_certificate(
    q: BivariatePolynomial,
    cert: SosCertificate,
    grid_n: int = 64,
    threshold: float = 1e-7,
    seed: int = 2026,
) -> VerificationReport:
    """Grid-plus-random-point residual report for a certificate's identity.

    Evaluates the diagonal form on a grid_n x grid_n closed-bidisk grid and
    500 random points, and the polarized two-point form on 100 random pairs;
    residuals are relative to the largest participating term.
    """
    rng = np.random.default_rng(seed)
    zg = disk_spiral(grid_n)
    wg = disk_spiral(grid_n)
    z, w = np.meshgrid(zg, wg, indexing="ij")
    diag = _pair_residual(cert.kind, q, cert, z, w, z, w, cert.weights)
    zr = (rng.uniform(-1, 1, 500) + 1j * rng.uniform(-1, 1, 500)) * 0.9
    wr = (rng.uniform(-1, 1, 500) + 1j * rng.uniform(-1, 1, 500)) * 0.9
    diag_r = _pair_residual(cert.kind, q, cert, zr, wr, zr, wr, cert.weights)
    pz = (rng.uniform(-1, 1, (4, 100)) + 1j * rng.uniform(-1, 1, (4, 100))) * 0.9
    polar = _pair_residual(cert.kind, q, cert, pz[0], pz[1], pz[2], pz[3], cert.weights)
    return VerificationReport(
        cert.kind, max(diag, diag_r), polar, grid_n, threshold
    )
