"""JSON wire formats (schema family "dvkit/1").

Complex numbers are [re, im] pairs of IEEE doubles throughout.  Polynomials
are {"degree": [n, m], "coeffs": row-major grid}; matrix polynomials are
rows x cols arrays of one-variable coefficient lists.  Dumps are sorted and
compact so identical inputs produce byte-identical reports.
"""

from __future__ import annotations

import json

import numpy as np

from .dvrep import DvCertificate, UnitaryRealization
from .poly2 import BivariatePolynomial, MatrixPolynomial, VectorPolynomial
from .soscert import CertKind, SosCertificate

SCHEMA = "dvkit/1"


class SchemaError(ValueError):
    """Input JSON does not match the expected schema."""


def _c2pair(c) -> list[float]:
    c = complex(c)
    return [float(c.real), float(c.imag)]


def _pair2c(pair, where: str) -> complex:
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise SchemaError(f"{where}: expected [re, im] pair, got {pair!r}")
    try:
        return complex(float(pair[0]), float(pair[1]))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{where}: non-numeric entry") from exc


def poly_to_obj(p: BivariatePolynomial) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "polynomial",
        "degree": list(p.degree),
        "coeffs": [[_c2pair(c) for c in row] for row in p.coeffs],
    }


def poly_from_obj(obj: dict, where: str = "polynomial") -> BivariatePolynomial:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    if "coeffs" not in obj:
        raise SchemaError(f"{where}.coeffs: missing")
    if "degree" not in obj:
        raise SchemaError(f"{where}.degree: missing")
    degree = obj["degree"]
    if not (isinstance(degree, list) and len(degree) == 2):
        raise SchemaError(f"{where}.degree: expected [n, m]")
    n, m = int(degree[0]), int(degree[1])
    rows = obj["coeffs"]
    if len(rows) != n + 1 or any(len(r) != m + 1 for r in rows):
        raise SchemaError(
            f"{where}.coeffs: grid must be {n + 1} x {m + 1} for degree [{n}, {m}]"
        )
    grid = [
        [_pair2c(c, f"{where}.coeffs[{i}][{j}]") for j, c in enumerate(row)]
        for i, row in enumerate(rows)
    ]
    return BivariatePolynomial(np.array(grid, dtype=np.complex128))


def _vec_to_obj(vec: VectorPolynomial) -> list:
    return [poly_to_obj(c) for c in vec]


def _vec_from_obj(items, where: str) -> VectorPolynomial:
    return VectorPolynomial(
        tuple(poly_from_obj(o, f"{where}[{k}]") for k, o in enumerate(items))
    )


def _matrix_to_obj(mat: MatrixPolynomial | None):
    if mat is None:
        return None
    rows, cols, _ = mat.coeffs.shape
    return [
        [[_c2pair(c) for c in mat.coeffs[r, s]] for s in range(cols)]
        for r in range(rows)
    ]


def _matrix_from_obj(obj, where: str) -> MatrixPolynomial | None:
    if obj is None:
        return None
    arr = np.array(
        [
            [[_pair2c(c, f"{where}[{r}][{s}]") for c in entry] for s, entry in enumerate(row)]
            for r, row in enumerate(obj)
        ],
        dtype=np.complex128,
    )
    return MatrixPolynomial(arr)


def cert_to_obj(cert: SosCertificate, poly: BivariatePolynomial | None = None) -> dict:
    obj = {
        "schema": SCHEMA,
        "kind": cert.kind.value,
        "weights": list(cert.weights) if cert.weights is not None else None,
        "vec_first": _vec_to_obj(cert.vec_first),
        "vec_second": _vec_to_obj(cert.vec_second),
        "matrix_first": _matrix_to_obj(cert.matrix_first),
        "matrix_second": _matrix_to_obj(cert.matrix_second),
        "residual": cert.residual,
    }
    if poly is not None:
        obj["poly"] = poly_to_obj(poly)
    return obj


def cert_from_obj(obj: dict, where: str = "certificate") -> SosCertificate:
    try:
        kind = CertKind(obj["kind"])
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"{where}.kind: unknown certificate kind") from exc
    weights = obj.get("weights")
    return SosCertificate(
        kind,
        _vec_from_obj(obj["vec_first"], f"{where}.vec_first"),
        _vec_from_obj(obj["vec_second"], f"{where}.vec_second"),
        tuple(weights) if weights is not None else None,
        _matrix_from_obj(obj.get("matrix_first"), f"{where}.matrix_first"),
        _matrix_from_obj(obj.get("matrix_second"), f"{where}.matrix_second"),
        obj.get("residual"),
    )


def dv_cert_to_obj(cert: DvCertificate) -> dict:
    obj = cert_to_obj(cert.as_sos(), poly=cert.p)
    obj["smooth_on_torus"] = cert.smooth_on_torus
    return obj


def dv_cert_from_obj(obj: dict, where: str = "certificate") -> DvCertificate:
    if obj.get("kind") != CertKind.DV.value:
        raise SchemaError(f"{where}.kind: expected a DV certificate")
    if "poly" not in obj:
        raise SchemaError(f"{where}.poly: missing defining polynomial")
    sos = cert_from_obj(obj, where)
    qmat = sos.matrix_second
    if qmat is None:
        raise SchemaError(f"{where}.matrix_second: DV certificate needs Qmatrix")
    return DvCertificate(
        poly_from_obj(obj["poly"], f"{where}.poly"),
        tuple(sos.weights),
        sos.vec_first,
        sos.vec_second,
        qmat,
        bool(obj.get("smooth_on_torus", True)),
    )


def realization_to_obj(
    rep: UnitaryRealization, cert: DvCertificate, report_obj: dict
) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "realization",
        "m": rep.m,
        "n": rep.n,
        "U": [[_c2pair(c) for c in row] for row in rep.U],
        "cert": dv_cert_to_obj(cert),
        "report": report_obj,
    }


def realization_from_obj(obj: dict, where: str = "realization"):
    if obj.get("kind") != "realization":
        raise SchemaError(f"{where}.kind: expected a realization document")
    try:
        m, n = int(obj["m"]), int(obj["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{where}.m/n: missing block sizes") from exc
    u = np.array(
        [
            [_pair2c(c, f"{where}.U[{r}][{s}]") for s, c in enumerate(row)]
            for r, row in enumerate(obj["U"])
        ],
        dtype=np.complex128,
    )
    rep = UnitaryRealization(m, n, u)
    cert = dv_cert_from_obj(obj["cert"], f"{where}.cert")
    return rep, cert


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def load_path(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
