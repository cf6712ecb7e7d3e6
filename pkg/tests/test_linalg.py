"""Jacobi eigensolver, spectrum clustering and matching."""

import numpy as np
import pytest

from speclap.linalg import (
    DEFAULT_CLUSTER_TOL,
    PredictedSpectrum,
    Spectrum,
    as_symmetric,
    cluster_spectrum,
    format_value,
    jacobi_eigen,
    kronecker,
    quadratic_roots,
    spectra_match,
)


def random_symmetric(n, rng):
    a = rng.standard_normal((n, n))
    return (a + a.T) / 2


def test_jacobi_matches_lapack():
    rng = np.random.default_rng(7)
    for n in [1, 2, 3, 5, 8, 13, 20]:
        a = random_symmetric(n, rng)
        dec = jacobi_eigen(a)
        expected = np.linalg.eigvalsh(a)
        assert np.allclose(np.sort(dec.values), expected, atol=1e-10)


def test_jacobi_eigenvectors_satisfy_equation():
    rng = np.random.default_rng(11)
    a = random_symmetric(9, rng)
    dec = jacobi_eigen(a)
    for i in range(9):
        v = dec.vectors[:, i]
        assert np.linalg.norm(a @ v - dec.values[i] * v) < 1e-10
    # orthonormal basis
    assert np.allclose(dec.vectors.T @ dec.vectors, np.eye(9), atol=1e-12)


def test_jacobi_diagonal_is_exact():
    d = np.diag([3.0, -1.0, 0.5])
    dec = jacobi_eigen(d)
    assert sorted(dec.values) == [-1.0, 0.5, 3.0]


def test_jacobi_rejects_asymmetric():
    with pytest.raises(ValueError):
        jacobi_eigen(np.array([[0.0, 1.0], [0.5, 0.0]]))


def test_as_symmetric_is_exact():
    # bitwise symmetry required; near-symmetry is the caller's bug
    with pytest.raises(ValueError):
        as_symmetric(np.array([[1.0, 2.0], [2.0 + 1e-15, 1.0]]))
    a = np.array([[1.0, 2.0], [2.0, 1.0]])
    assert np.array_equal(as_symmetric(a), a)


def test_cluster_merges_near_duplicates():
    spec = cluster_spectrum([1.0000001, 0.9999999, 0.0], cluster_tol=1e-5)
    assert spec.pairs == ((pytest.approx(1.0, abs=1e-6), 2), (0.0, 1))
    assert spec.distinct_count == 2
    assert spec.order == 3


def test_cluster_keeps_separated_values():
    spec = cluster_spectrum([2.0, 1.0, 1.0, 0.0])
    assert spec.multiplicities == (1, 2, 1)
    assert spec.values == (2.0, 1.0, 0.0)


def test_cluster_is_idempotent():
    rng = np.random.default_rng(3)
    vals = np.repeat(rng.uniform(0, 2, 6), [1, 3, 2, 1, 1, 4])
    vals = vals + rng.uniform(-1e-9, 1e-9, vals.size)
    spec = cluster_spectrum(vals)
    again = cluster_spectrum(spec.expand(), spec.cluster_tol)
    assert again.pairs == spec.pairs


def test_spectrum_validates_ordering():
    with pytest.raises(ValueError):
        Spectrum(pairs=((1.0, 1), (1.0 - 1e-9, 1)), cluster_tol=1e-6)
    with pytest.raises(ValueError):
        Spectrum(pairs=((1.0, 0),), cluster_tol=1e-6)


def test_spectrum_multiplicity_lookup():
    spec = cluster_spectrum([2.0, 1.0, 1.0, 0.0])
    assert spec.multiplicity_of(1.0) == 2
    assert spec.multiplicity_of(0.5) == 0
    assert spec.multiplicity_of(1.0 + 5e-7) == 2


def test_spectra_match_requires_exact_multiplicities():
    computed = cluster_spectrum([2.0, 1.0 + 1e-10, 1.0, 0.0])
    good = PredictedSpectrum(pairs=((2.0, 1), (1.0, 2), (0.0, 1)))
    bad = PredictedSpectrum(pairs=((2.0, 2), (1.0, 1), (0.0, 1)))
    ok, dev = spectra_match(computed, good, 1e-8)
    assert ok and dev < 1e-9
    ok, _ = spectra_match(computed, bad, 1e-8)
    assert not ok


def test_spectra_match_value_deviation():
    computed = cluster_spectrum([1.001, 0.0])
    predicted = PredictedSpectrum(pairs=((1.0, 1), (0.0, 1)))
    ok, dev = spectra_match(computed, predicted, 1e-2)
    assert ok and dev == pytest.approx(1e-3, rel=1e-6)
    ok, _ = spectra_match(computed, predicted, 1e-4)
    assert not ok


def test_spectra_match_distinct_count_mismatch():
    computed = cluster_spectrum([2.0, 0.0])
    predicted = PredictedSpectrum(pairs=((2.0, 1), (1.0, 1), (0.0, 1)))
    ok, _ = spectra_match(computed, predicted, 1e-6)
    assert not ok


def test_quadratic_roots():
    hi, lo = quadratic_roots(1.0, -3.0, 2.0)
    assert (hi, lo) == (2.0, 1.0)
    with pytest.raises(ValueError):
        quadratic_roots(1.0, 0.0, 1.0)  # negative discriminant


def test_kronecker_matches_numpy():
    rng = np.random.default_rng(5)
    a, b = rng.standard_normal((2, 3)), rng.standard_normal((4, 2))
    assert np.array_equal(kronecker(a, b), np.kron(a, b))


def test_format_value_precisions():
    assert format_value(4 / 3) == "1.333333333"
    assert format_value(4 / 3, paper_precision=True) == "1.3333"
    assert format_value(0.0) == "0"
    assert format_value(-0.0) == "0"
    assert format_value(-1e-17, paper_precision=True) == "0.0000"
    assert format_value(-0.5, paper_precision=True) == "-0.5000"
