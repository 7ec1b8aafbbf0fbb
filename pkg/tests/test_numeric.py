"""Unit tests for the shared numeric helpers."""

import math
from fractions import Fraction

import numpy as np
import pytest

from nearwise.numeric import (
    atom_products_dense,
    binom_or_zero,
    close,
    format_scientific,
    is_exact,
    poisson_binomial_pmf,
    popcount_table,
    prefix_atom,
    subset_products_dense,
    superset_sums,
    tail_from_pmf,
)


def test_binom_or_zero_extends_by_zero():
    assert binom_or_zero(5, 2) == 10
    assert binom_or_zero(5, 0) == 1
    assert binom_or_zero(0, 0) == 1
    assert binom_or_zero(5, -1) == 0
    assert binom_or_zero(5, 6) == 0
    assert binom_or_zero(7, 7) == 1


def test_close_modes():
    assert close(0.1 + 0.2, 0.3, exact=False)
    assert not close(1.0, 1.0 + 1e-9, exact=False)
    assert close(0.0, 5e-13, exact=False)  # absolute floor near zero
    assert close(Fraction(1, 3), Fraction(1, 3), exact=True)
    assert not close(Fraction(1, 3), Fraction(1, 3) + Fraction(1, 10**30), exact=True)


def test_is_exact():
    assert is_exact(Fraction(1, 2))
    assert not is_exact(0.5)
    assert not is_exact(1)


def test_prefix_atom_float():
    values = [0.1, 0.2, 0.3]
    assert prefix_atom(values, 0) == ((1.0 * 0.9) * 0.8) * 0.7
    assert prefix_atom(values, 2) == ((1.0 * 0.1) * 0.2) * 0.7
    assert prefix_atom(values, 3) == ((1.0 * 0.1) * 0.2) * 0.3
    assert prefix_atom([], 0) == 1.0


def test_prefix_atom_exact():
    values = [Fraction(1, 10), Fraction(1, 5)]
    assert prefix_atom(values, 1) == Fraction(1, 10) * Fraction(4, 5)
    assert isinstance(prefix_atom(values, 0), Fraction)


def test_atom_products_dense_matches_prefix_atoms_bitwise():
    """The dense table and the prefix helper must agree bit for bit."""
    values = [0.13, 0.37, 0.52, 0.81]
    atoms = atom_products_dense(values)
    assert atoms.shape == (16,)
    assert math.isclose(float(np.sum(atoms)), 1.0, rel_tol=1e-15)
    for t in range(5):
        mask = (1 << t) - 1
        assert atoms[mask] == prefix_atom(values, t)


def test_atom_products_dense_exact_normalizes():
    values = [Fraction(1, 3), Fraction(2, 7)]
    atoms = atom_products_dense(values)
    assert isinstance(atoms, list)
    assert sum(atoms, Fraction(0)) == 1
    assert atoms[0b11] == Fraction(1, 3) * Fraction(2, 7)


def test_subset_products_dense():
    values = [0.5, 0.25, 0.125]
    prods = subset_products_dense(values)
    assert prods[0] == 1.0
    assert prods[0b011] == 0.5 * 0.25
    assert prods[0b111] == (1.0 * 0.5) * 0.25 * 0.125
    exact = subset_products_dense([Fraction(1, 2), Fraction(1, 4)])
    assert exact[0b10] == Fraction(1, 4)


def test_popcount_table():
    pc = popcount_table(4)
    assert list(np.bincount(pc)) == [1, 4, 6, 4, 1]
    assert pc[0b1011] == 3
    assert not pc.flags.writeable


@pytest.mark.parametrize("n", [0, 1, 3, 5])
def test_superset_sums_against_direct_enumeration(n):
    rng = np.random.default_rng(12)
    atoms = rng.random(1 << n)
    sums = superset_sums(atoms, n)
    for j in range(1 << n):
        direct = sum(atoms[i] for i in range(1 << n) if i & j == j)
        assert math.isclose(sums[j], direct, rel_tol=1e-12)


def test_superset_sums_exact_and_inclusive():
    atoms = [Fraction(i, 7) for i in range(8)]
    sums = superset_sums(atoms, 3)
    # Inclusive: the subset's own atom is part of its sum.
    assert sums[0b111] == atoms[0b111]
    assert sums[0b101] == atoms[0b101] + atoms[0b111]
    assert sums[0] == sum(atoms, Fraction(0))


def test_poisson_binomial_pmf_known_values():
    pmf = poisson_binomial_pmf([0.5, 0.5])
    assert np.allclose(pmf, [0.25, 0.5, 0.25])
    exact = poisson_binomial_pmf([Fraction(1, 2)] * 3)
    assert exact == [Fraction(1, 8), Fraction(3, 8), Fraction(3, 8), Fraction(1, 8)]


def test_poisson_binomial_pmf_heterogeneous():
    pmf = poisson_binomial_pmf([0.1, 0.7])
    assert math.isclose(pmf[0], 0.9 * 0.3)
    assert math.isclose(pmf[1], 0.1 * 0.3 + 0.9 * 0.7)
    assert math.isclose(pmf[2], 0.1 * 0.7)
    assert math.isclose(float(np.sum(pmf)), 1.0)


def test_poisson_binomial_pmf_edge_entries_are_ascending_products():
    values = [0.3, 0.6, 0.9]
    pmf = poisson_binomial_pmf(values)
    assert pmf[0] == prefix_atom(values, 0)
    assert pmf[3] == prefix_atom(values, 3)


def test_tail_from_pmf():
    pmf = poisson_binomial_pmf([0.5, 0.5])
    assert tail_from_pmf(pmf, 0) == 1.0
    assert math.isclose(tail_from_pmf(pmf, 1), 0.75)
    assert tail_from_pmf(pmf, 3) == 0.0
    exact = poisson_binomial_pmf([Fraction(1, 2)] * 2)
    assert tail_from_pmf(exact, 2) == Fraction(1, 4)
    assert tail_from_pmf(exact, 5) == 0
    assert tail_from_pmf(exact, -1) == 1


def test_format_scientific():
    assert format_scientific(0.56953279) == "5.6953e-01"
    assert format_scientific(1e-7) == "1.0000e-07"
    assert format_scientific(1.0) == "1.0000e+00"
    assert format_scientific(0.0) == "0.0000e+00"
    assert format_scientific(-0.0) == "0.0000e+00"
    assert format_scientific(Fraction(1, 8)) == "1.2500e-01"
    assert format_scientific(0.56953279, 3) == "5.70e-01"
    assert format_scientific(-0.0024) == "-2.4000e-03"
    assert format_scientific(Fraction(0)) == "0.0000e+00"


def test_format_scientific_half_way_rationals():
    # exact rationals round from the true decimal value, ties away from zero
    assert format_scientific(Fraction(1, 256)) == "3.9063e-03"
    assert format_scientific(Fraction(105219, 2000000)) == "5.2610e-02"
    assert format_scientific(-Fraction(1, 256)) == "-3.9063e-03"
    # a rounding carry that ripples through every digit
    assert format_scientific(Fraction(999995, 10**7)) == "1.0000e-01"
    # the float formatter keeps its own convention (ties to even on the
    # binary value); 1/256 is exactly representable, so the two paths split
    assert format_scientific(1 / 256) == "3.9062e-03"
