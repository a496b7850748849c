import numpy as np
import pytest

from dvkit.poly2 import BivariatePolynomial, reflect


def poly(terms, degree=None):
    return BivariatePolynomial.from_terms(terms, degree)


def z3_minus_w2():
    return poly({(3, 0): 1, (0, 2): -1})


def w3_minus_z2():
    return poly({(0, 3): 1, (2, 0): -1})


def one_minus_z3w2():
    return poly({(0, 0): 1, (3, 2): -1})


def two_minus_z_minus_w():
    return poly({(0, 0): 2, (1, 0): -1, (0, 1): -1})


def four_minus_z_minus_w():
    return poly({(0, 0): 4, (1, 0): -1, (0, 1): -1})


def random_poly(rng, n, m, scale=1.0):
    grid = rng.normal(size=(n + 1, m + 1)) + 1j * rng.normal(size=(n + 1, m + 1))
    return BivariatePolynomial(scale * grid)


def random_symmetric_poly(rng, n, m):
    """Torus-symmetric by construction: r + reflect(r)."""
    r = random_poly(rng, n, m)
    return r + reflect(r, (n, m))


def poly1d_to_grid(coeffs):
    return np.array(coeffs, dtype=np.complex128)


def blaschke_dv(m, alphas, phase=1.0):
    """w^m * prod(1 - conj(a) z) - phase * prod(z - a): the denominator-cleared
    curve w^m = phase * B(z) for the Blaschke product with zeros ``alphas``."""
    denom = np.array([1.0 + 0.0j])
    numer = np.array([1.0 + 0.0j])
    for a in alphas:
        denom = np.convolve(denom, np.array([1.0, -np.conj(a)]))
        numer = np.convolve(numer, np.array([-a, 1.0]))
    k = len(alphas)
    grid = np.zeros((k + 1, m + 1), dtype=np.complex128)
    grid[:, m] = denom
    grid[:, 0] -= phase * numer
    return BivariatePolynomial(grid)


@pytest.fixture(scope="session")
def pipeline_z3w2():
    from dvkit.dvrep import represent

    return represent(z3_minus_w2(), seed=7)


@pytest.fixture(scope="session")
def pipeline_w3z2():
    from dvkit.dvrep import represent

    return represent(w3_minus_z2(), seed=11)


@pytest.fixture(scope="session")
def cert_four():
    from dvkit.soscert import sos_certificate

    return sos_certificate(four_minus_z_minus_w())


@pytest.fixture(scope="session")
def cert_two():
    from dvkit.soscert import sos_certificate

    return sos_certificate(two_minus_z_minus_w())


@pytest.fixture(scope="session")
def sym_cert_z3w2():
    from dvkit.poly2 import symmetrize
    from dvkit.soscert import sym_sos_certificate

    q = symmetrize(one_minus_z3w2())
    return q, sym_sos_certificate(q, 1.0, 1.0)
