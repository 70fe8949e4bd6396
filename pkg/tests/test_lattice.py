import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellipsidist.lattice import (
    Lattice,
    LatticeFrequency,
    degenerate_family,
    family_frequencies,
    fourier_atom,
    frequency_window,
    geometric_bound,
    is_integer,
    k_value,
    lattice_weyl_sum,
    parse_complex,
    reduce_mod_lattice,
    weyl_window,
)

SQ = Lattice(1j)
SKEW = Lattice(0.3 + 1.1j)


def test_lattice_validation():
    with pytest.raises(ValueError):
        Lattice(0.5 - 1j)
    with pytest.raises(ValueError):
        Lattice(2.0)
    with pytest.raises(ValueError):
        LatticeFrequency(0, 0)
    assert np.allclose(SKEW.basis_matrix @ SKEW.basis_matrix_inv, np.eye(2), atol=1e-14)


def test_parse_complex():
    assert parse_complex("0.3+1.1i") == 0.3 + 1.1j
    assert parse_complex("2i") == 2j
    assert parse_complex(" -1.5 ") == -1.5
    with pytest.raises(ValueError):
        parse_complex("tau")


def test_reduce_examples():
    assert abs(reduce_mod_lattice(SQ, 2.5 + 3.25j) - (0.5 + 0.25j)) < 1e-14
    assert abs(reduce_mod_lattice(SKEW, SKEW.tau)) < 1e-14
    assert abs(reduce_mod_lattice(SKEW, 1.6 + 2.2j)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.floats(-50, 50), st.floats(-50, 50), st.floats(-1, 1), st.floats(0.2, 3))
def test_reduce_lands_in_parallelogram(x, y, tx, ty):
    lat = Lattice(complex(tx, ty))
    z = complex(x, y)
    r = reduce_mod_lattice(lat, z)
    x1, x2 = lat.coords(r)
    assert -1e-9 <= x1 < 1 + 1e-9 and -1e-9 <= x2 < 1 + 1e-9
    d1, d2 = lat.coords(z - r)
    assert abs(d1 - round(d1)) < 1e-7 and abs(d2 - round(d2)) < 1e-7


def test_k_value_families():
    for n in (1, 2, -3):
        assert k_value(SKEW, 0.37, LatticeFrequency(0, n)) == pytest.approx(0, abs=1e-15)
        assert k_value(SKEW, 0.41 * SKEW.tau, LatticeFrequency(n, 0)) == pytest.approx(0, abs=1e-14)
        assert k_value(SKEW, 0.2 * (SKEW.tau + 1), LatticeFrequency(n, -n)) == pytest.approx(0, abs=1e-14)


def test_degenerate_family_examples():
    assert degenerate_family(SQ, 0.3) == {"real-axis"}
    assert degenerate_family(SKEW, 0.3 * SKEW.tau) == {"tau-axis"}
    assert degenerate_family(SKEW, 0.2 * (SKEW.tau + 1)) == {"diagonal"}
    assert degenerate_family(SKEW, 0.123 + 0.456j) == {"none"}
    assert len(family_frequencies("diagonal", 3)) == 6
    with pytest.raises(ValueError):
        family_frequencies("spiral")


def test_weyl_sum_integer_k_is_one():
    z = 0.2 * (SKEW.tau + 1)
    for f in family_frequencies("diagonal", 4):
        assert abs(lattice_weyl_sum(SKEW, z, f, 5000) - 1) < 1e-9


def test_weyl_sum_single_term():
    s = lattice_weyl_sum(SKEW, 0.7 + 0.3j, LatticeFrequency(1, 2), 1)
    assert abs(abs(s) - 1) < 1e-15


def test_weyl_sum_geometric_oracle():
    z = (math.sqrt(2) - 1) + (math.sqrt(3) - 1) * 1j
    f = LatticeFrequency(1, 0)
    N = 100_000
    k = k_value(SQ, z, f)
    s = lattice_weyl_sum(SQ, z, f, N)
    closed = (1 - cmath.exp(2j * math.pi * k * N)) / (1 - cmath.exp(2j * math.pi * k)) / N
    assert abs(s - closed) < 1e-9
    assert abs(s) <= geometric_bound(k, N)


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(-5, 5), st.integers(-5, 5))
def test_atoms_are_doubly_periodic(x, y, n1, n2):
    if n1 == 0 and n2 == 0:
        return
    f = LatticeFrequency(n1, n2)
    z = complex(x, y)
    a = fourier_atom(SKEW, f, z)
    assert abs(a - fourier_atom(SKEW, f, z + 1)) < 1e-12
    assert abs(a - fourier_atom(SKEW, f, z + SKEW.tau)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_transformation_lipschitz(px, py, qx, qy):
    A = SKEW.basis_matrix
    p, q = np.array([px, py]), np.array([qx, qy])
    lhs = np.linalg.norm(p @ A - q @ A)
    assert lhs <= (2 + abs(SKEW.tau) ** 2) * np.linalg.norm(p - q) + 1e-12


@pytest.mark.parametrize("N", [1000, 10_000, 100_000])
def test_generic_point_within_bound(N):
    z = 0.1234567 + 0.7654321j
    entries = weyl_window(SKEW, z, N, frequency_window(3))
    assert all(not e.k_integer for e in entries)
    assert all(e.within_bound for e in entries)


def test_window_size_and_threads(monkeypatch):
    monkeypatch.setenv("ELLIPSIDIST_THREADS", "1")
    assert len(frequency_window(2)) == 24
    entries = weyl_window(SQ, 0.25, 100, frequency_window(1))
    assert {(e.freq.n1, e.freq.n2) for e in entries if e.k_integer} >= {(0, 1), (0, -1)}
    assert is_integer(2.0 + 1e-12) and not is_integer(2.1)
