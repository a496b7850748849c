"""Locate zero sets of bivariate polynomials relative to the bidisk.

The tests here are sampling-based: a witness (a near-zero in a forbidden
region) certifies failure, while affirmative labels are certified only at
the resolution of the grid, which the report records.  Fibers p(z, .) are
analyzed through companion-matrix roots, and the number of fiber roots
inside the unit disk is measured by the argument-principle contour integral
N(z) = (1/2 pi i) contour_int p_w / p dw, which is constant in z exactly
when the zero set stays clear of the disk-times-circle region.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .poly2 import BivariatePolynomial, symmetry_analysis

__all__ = [
    "ZeroLabel",
    "ZeroClass",
    "SingularityReport",
    "FiberError",
    "fiber_polynomial",
    "fiber_roots",
    "root_count_in_disk",
    "classify_zero_set",
    "torus_singularities",
    "is_squarefree",
]

# Sample points closer than this to the torus (max metric) are excluded from
# forbidden-region sweeps: zeros of honest variety-defining polynomials
# legitimately accumulate at the torus.
TORUS_MARGIN = 0.02


class FiberError(ValueError):
    pass


class QuadratureError(ValueError):
    pass


class ZeroLabel(Enum):
    STABLE_OPEN = "StableOpen"
    STABLE_CLOSED = "StableClosed"
    DV_DEFINING = "DVDefining"
    SYMMETRIC_NONVANISHING_OFF_TORUS = "SymmetricNonvanishingOffTorus"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class ZeroClass:
    label: ZeroLabel
    witnesses: tuple = ()
    grid_n: int = 0
    tol: float = 0.0

    def __post_init__(self):
        if self.label is not ZeroLabel.INDETERMINATE and self.witnesses:
            raise ValueError("affirmative label cannot carry witnesses")


@dataclass(frozen=True)
class SingularityReport:
    points: tuple
    smooth_on_torus: bool

    def __post_init__(self):
        if self.smooth_on_torus != (len(self.points) == 0):
            raise ValueError("smooth_on_torus must mirror emptiness of points")


def fiber_polynomial(p: BivariatePolynomial, z: complex, trim_tol: float = 1e-12):
    """Coefficients (low to high in w) of p(z, .), trailing near-zeros trimmed."""
    n, m = p.degree
    zp = np.asarray(z, dtype=np.complex128) ** np.arange(n + 1)
    coeffs = zp @ p.coeffs
    top = np.max(np.abs(coeffs))
    if top == 0.0:
        raise FiberError("fiber degenerate: p(z, .) is identically zero")
    k = m
    while k > 0 and abs(coeffs[k]) <= trim_tol * top:
        k -= 1
    return coeffs[: k + 1]


def _companion_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots of a univariate polynomial, low-to-high coefficients, via the
    eigenvalues of its companion matrix."""
    deg = len(coeffs) - 1
    if deg == 0:
        return np.zeros(0, dtype=np.complex128)
    monic = coeffs / coeffs[-1]
    comp = np.zeros((deg, deg), dtype=np.complex128)
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -monic[:-1]
    return np.linalg.eigvals(comp)


def fiber_roots(p: BivariatePolynomial, z: complex) -> np.ndarray:
    """All w with p(z, w) = 0, multiplicities included.

    The w-degree is reduced at this fiber when leading coefficients vanish;
    an identically zero fiber raises :class:`FiberError`.
    """
    return _companion_roots(fiber_polynomial(p, z))


def batched_fiber_roots(p: BivariatePolynomial, zs: np.ndarray):
    """Fiber roots over many z at once; (K, m) array when the w-degree stays
    full across the batch, else a per-z list."""
    zs = np.asarray(zs, dtype=np.complex128).ravel()
    n, m = p.degree
    if m == 0:
        return [np.zeros(0, dtype=np.complex128) for _ in zs]
    powers = zs[:, None] ** np.arange(n + 1)
    fibers = powers @ p.coeffs  # (K, m+1)
    top = np.max(np.abs(fibers), axis=1)
    lead = np.abs(fibers[:, -1])
    if np.min(top) > 0 and np.min(lead) > 1e-10 * np.max(top):
        monic = fibers / fibers[:, -1:]
        comp = np.zeros((len(zs), m, m), dtype=np.complex128)
        comp[:, 1:, :-1] = np.eye(m - 1)
        comp[:, :, -1] = -monic[:, :-1]
        return np.linalg.eigvals(comp)
    return [fiber_roots(p, complex(z)) for z in zs]


def cluster_roots(roots: np.ndarray, radius: float = 1e-6):
    """Group near-coincident roots; returns (representative, multiplicity) pairs."""
    remaining = list(roots)
    clusters = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        keep = []
        for r in remaining:
            if abs(r - seed) <= radius:
                members.append(r)
            else:
                keep.append(r)
        remaining = keep
        clusters.append((np.mean(members), len(members)))
    return clusters


def root_count_in_disk(
    p: BivariatePolynomial,
    z: complex,
    quad_points: int | None = None,
    zero_tol: float = 1e-9,
) -> int:
    """Number of roots of p(z, .) inside the unit disk, by contour integral.

    Trapezoidal quadrature of p_w/p * w over uniform circle nodes; the node
    count doubles until two successive values agree, and the final value
    must sit within 0.25 of an integer.
    """
    n, m = p.degree
    pw = p.partial_w()
    scale = p.scale
    profile = {}

    def quad(npts: int) -> complex:
        w = np.exp(2j * np.pi * np.arange(npts) / npts)
        pv = p.evaluate(z, w)
        absv = np.abs(pv)
        profile["min"], profile["max"] = float(np.min(absv)), float(np.max(absv))
        if profile["min"] <= zero_tol * max(scale, 1e-300):
            raise FiberError("zero on fiber circle: p(z, .) vanishes near |w| = 1")
        return np.mean(pw.evaluate(z, w) / pv * w)

    if quad_points is not None:
        val = quad(quad_points)
    else:
        npts = max(256, 16 * (n + m))
        val = quad(npts)
        while npts <= 2**16:
            nxt = quad(2 * npts)
            if abs(nxt - val) < 1e-6:
                val = nxt
                break
            val, npts = nxt, 2 * npts
    nearest = round(val.real)
    if abs(val - nearest) > 0.25 or nearest < 0 or nearest > m:
        if profile["min"] <= 1e-3 * profile["max"]:
            raise FiberError("zero on fiber circle: p(z, .) vanishes near |w| = 1")
        raise QuadratureError(
            f"quadrature unresolved, increase quad_points (got {val})"
        )
    return int(nearest)


def _disk_z_samples(grid_n: int, rmax: float) -> np.ndarray:
    """grid_n angles x grid_n radii covering [0, rmax], plus the center."""
    radii = np.linspace(rmax / grid_n, rmax, grid_n)
    angles = np.exp(2j * np.pi * np.arange(grid_n) / grid_n)
    return np.concatenate([[0.0 + 0.0j], np.outer(radii, angles).ravel()])


def _fiber_sweep(p, zs):
    """(z, roots) pairs over the sample; fibers that lose all degree yield ()."""
    out = []
    for z in zs:
        try:
            roots = fiber_roots(p, complex(z))
        except FiberError:
            roots = None
        out.append((complex(z), roots))
    return out


def _boundary_witnesses(p, grid_n, tol):
    """Near-zeros on (T x D) u (D x T), staying TORUS_MARGIN away from T^2."""
    scale = p.scale
    circ = np.exp(2j * np.pi * np.arange(grid_n) / grid_n)
    radial = _disk_z_samples(max(grid_n // 2, 8), 1.0 - TORUS_MARGIN)
    witnesses = []
    for zs, ws in ((circ, radial), (radial, circ)):
        vals = np.abs(p.evaluate(zs[:, None], ws[None, :]))
        bad = np.argwhere(vals <= tol * scale)
        for i, j in bad[:8]:
            witnesses.append((complex(zs[i]), complex(ws[j])))
    return witnesses


def classify_zero_set(
    p: BivariatePolynomial, grid_n: int = 64, tol: float = 1e-7
) -> ZeroClass:
    """Label the zero set of p relative to the bidisk.

    Tested in order: DVDefining (zeros confined to disk^2 u torus^2 u
    exterior^2), SymmetricNonvanishingOffTorus, StableClosed, StableOpen;
    anything else is Indeterminate with witnesses.  Affirmative labels are
    certified at resolution ``grid_n`` only.
    """
    sym = symmetry_analysis(p, tol=1e-8)
    interior = _disk_z_samples(grid_n, 1.0 - TORUS_MARGIN)
    closure = _disk_z_samples(grid_n, 1.0)
    sweep_interior = _fiber_sweep(p, interior)
    sweep_closure = _fiber_sweep(p, closure)
    boundary_wit = _boundary_witnesses(p, grid_n, tol)

    def result(label, witnesses=()):
        return ZeroClass(label, tuple(witnesses), grid_n, tol)

    # --- distinguished variety: symmetric, fibers over the inner disk fully
    # inside the disk at full w-degree, constant disk root count, and no
    # zeros escaping through the bidisk boundary off the torus.
    if sym.is_symmetric and not boundary_wit:
        m = p.degree[1]
        dv_wit = []
        for z, roots in sweep_interior:
            if roots is None or len(roots) != m or np.any(np.abs(roots) >= 1.0 - tol):
                if roots is not None:
                    dv_wit.extend(
                        (z, complex(w)) for w in roots if abs(w) >= 1.0 - tol
                    )
                else:
                    dv_wit.append((z, 0.0 + 0.0j))
                if len(dv_wit) >= 8:
                    break
        if not dv_wit and m > 0:
            counts = set()
            step = max(1, len(interior) // 20)
            try:
                for z in interior[1::step][:20]:
                    counts.add(root_count_in_disk(p, complex(z)))
            except (FiberError, QuadratureError):
                counts = {-1, -2}
            if len(counts) == 1:
                return result(ZeroLabel.DV_DEFINING)

    # --- symmetric and zero-free on the closed bidisk off the torus:
    # interior fibers must have every root strictly outside the disk.
    if sym.is_symmetric and not boundary_wit:
        off_wit = []
        for z, roots in sweep_interior:
            if roots is not None and len(roots):
                inside = roots[np.abs(roots) <= 1.0 + tol]
                off_wit.extend((z, complex(w)) for w in inside[:4])
            if len(off_wit) >= 8:
                break
        if not off_wit:
            return result(ZeroLabel.SYMMETRIC_NONVANISHING_OFF_TORUS)

    # --- stable labels: no fiber roots meeting the closed (resp. open) disk
    # for z sweeping the closed disk.
    closed_wit = []
    open_wit = []
    for z, roots in sweep_closure:
        if roots is None or not len(roots):
            continue
        closed_hits = roots[np.abs(roots) <= 1.0 + tol]
        closed_wit.extend((z, complex(w)) for w in closed_hits[:4])
        if abs(z) <= 1.0 - TORUS_MARGIN:
            open_hits = roots[np.abs(roots) < 1.0 - tol]
            open_wit.extend((z, complex(w)) for w in open_hits[:4])
    if not closed_wit:
        return result(ZeroLabel.STABLE_CLOSED)
    if not open_wit:
        return result(ZeroLabel.STABLE_OPEN)

    witnesses = [(z, w) for z, w in (boundary_wit + closed_wit + open_wit)[:16]]
    return result(ZeroLabel.INDETERMINATE, witnesses)


def _newton_refine(p, fz, fw, z, w, steps=30):
    """Newton iteration on the 2x2 system (p, g) for g in {p_z, p_w}."""
    best = (z, w)
    for g in (fz, fw):
        gz, gw = g.partial_z(), g.partial_w()
        zz, ww = z, w
        for _ in range(steps):
            f1, f2 = p.evaluate(zz, ww), g.evaluate(zz, ww)
            jac = np.array(
                [
                    [fz.evaluate(zz, ww), fw.evaluate(zz, ww)],
                    [gz.evaluate(zz, ww), gw.evaluate(zz, ww)],
                ],
                dtype=np.complex128,
            )
            try:
                step = np.linalg.solve(jac, np.array([f1, f2]))
            except np.linalg.LinAlgError:
                break
            zz, ww = zz - step[0], ww - step[1]
            if abs(step[0]) + abs(step[1]) < 1e-14:
                break
        def score(a, b):
            return abs(p.evaluate(a, b)) + abs(fz.evaluate(a, b)) + abs(fw.evaluate(a, b))

        if score(zz, ww) < score(*best):
            best = (zz, ww)
    return best


def torus_singularities(
    p: BivariatePolynomial, grid_n: int = 128, tol: float = 1e-8
) -> SingularityReport:
    """Points of the torus where p, p_z and p_w vanish together.

    Sweeps z over roots of unity, takes near-unimodular fiber roots as
    candidates, Newton-refines against (p, p_z) and (p, p_w), and keeps the
    points where all three functions are below ``tol * scale``.
    """
    fz, fw = p.partial_z(), p.partial_w()
    scale = p.scale
    found = []
    for theta in 2 * np.pi * np.arange(grid_n) / grid_n:
        z = complex(np.exp(1j * theta))
        try:
            roots = fiber_roots(p, z)
        except FiberError:
            continue
        for w in roots:
            if abs(abs(w) - 1.0) > 1e-2:
                continue
            zz, ww = _newton_refine(p, fz, fw, z, complex(w))
            if (
                abs(abs(zz) - 1.0) < 1e-6
                and abs(abs(ww) - 1.0) < 1e-6
                and abs(p.evaluate(zz, ww)) <= tol * scale
                and abs(fz.evaluate(zz, ww)) <= tol * scale
                and abs(fw.evaluate(zz, ww)) <= tol * scale
            ):
                if all(abs(zz - a) + abs(ww - b) > 1e-5 for a, b in found):
                    found.append((complex(zz), complex(ww)))
    return SingularityReport(tuple(found), smooth_on_torus=not found)


def is_squarefree(
    p: BivariatePolynomial, trials: int = 5, tol: float = 1e-9, seed: int = 11
) -> bool:
    """Probabilistic squarefreeness check via the w-resultant of (p, p_w).

    Evaluates res_w(p, p_w)(z) at random z; a polynomial with a repeated
    factor makes the resultant vanish identically.  Fibers are normalized so
    the verdict is scale-free.
    """
    rng = np.random.default_rng(seed)
    n, m = p.degree
    if m == 0:
        return True
    pw = p.partial_w()
    hits = 0
    for _ in range(trials):
        z = complex(0.7 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform()))
        try:
            fc = fiber_polynomial(p, z)
        except FiberError:
            hits += 1
            continue
        fc = fc / np.max(np.abs(fc))
        if len(fc) < 2:
            continue
        roots = _companion_roots(fc)
        circle = np.exp(2j * np.pi * np.arange(32) / 32) * max(
            1.0, np.max(np.abs(roots))
        )
        ref = max(float(np.max(np.abs(pw.evaluate(z, circle)))), 1e-300)
        res = np.prod(np.asarray(pw.evaluate(z, roots)) / ref)
        if abs(res) <= tol:
            hits += 1
    return hits < trials
