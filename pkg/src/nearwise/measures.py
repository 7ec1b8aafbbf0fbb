"""The one-parameter family of measures under which n events are
(n-1)-wise independent.

For sorted marginals ``a_1 <= ... <= a_n``, every probability measure that
makes the n events (n-1)-wise independent with those marginals assigns to
the atom "exactly the events in J occur" the probability::

    P(atom J) = prod_{j in J} a_j * prod_{j not in J} (1 - a_j)  +  (-1)^|J| * s

for a single real parameter ``s``.  Mutual independence is ``s = 0``.  The
parameter is feasible exactly on a closed interval ``[s_min, s_max]`` whose
endpoints are signed prefix-atom products located by two integer invariants
``p`` and ``m`` computed from consecutive-pair sums of the sorted marginals.

Atoms are stored densely, indexed by bitmask in sorted index space (bit ``j``
set means sorted event ``j+1`` occurs), which keeps exhaustive enumeration
trivially addressable.  Dense storage caps ``n`` at 20 (about a million
atoms).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .marginals import MarginalProfile
from .numeric import (
    ABS_TOL,
    ENUMERATION_CAP,
    atom_products_dense,
    close,
    popcount_table,
    prefix_atom,
    subset_products_dense,
    superset_sums,
)

#: An event subset encoded as an n-bit mask in sorted index space:
#: bit j (0-based) set means sorted event j+1 occurs.
SubsetMask = int


class FeasibilityError(ValueError):
    """The requested parameter s lies outside the feasible interval."""


class CapExceededError(ValueError):
    """Dense atom enumeration was requested for n beyond the supported cap."""


def _check_cap(n: int) -> None:
    if n > ENUMERATION_CAP:
        raise CapExceededError(
            f"dense enumeration supports n <= {ENUMERATION_CAP}, got n = {n}"
        )


def subset_mask(indices: Iterable[int]) -> SubsetMask:
    """Mask for a subset given by 1-based sorted-space event indices."""
    mask = 0
    for i in indices:
        if i < 1:
            raise ValueError(f"event indices are 1-based, got {i}")
        mask |= 1 << (i - 1)
    return mask


def mask_indices(mask: SubsetMask) -> tuple[int, ...]:
    """1-based sorted-space event indices of the set bits of ``mask``."""
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j + 1)
        mask >>= 1
        j += 1
    return tuple(out)


def original_subset(profile: MarginalProfile, mask: SubsetMask) -> tuple[int, ...]:
    """Translate a sorted-space mask to 1-based indices in the input order."""
    return tuple(sorted(profile.permutation[i - 1] + 1 for i in mask_indices(mask)))


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """A probability assignment to all 2^n atoms.

    ``atom_probs[mask]`` is the probability that exactly the events in
    ``mask`` occur.  ``s`` records the family parameter that generated the
    measure; it is ``None`` for externally supplied measures.
    """

    n: int
    atom_probs: object  # np.ndarray (floating) or tuple[Fraction, ...] (exact)
    s: object = None

    @property
    def exact(self) -> bool:
        return not isinstance(self.atom_probs, np.ndarray)

    def atom(self, mask: SubsetMask):
        return self.atom_probs[mask]

    def total(self):
        if self.exact:
            return sum(self.atom_probs, Fraction(0))
        return float(np.sum(self.atom_probs))


@dataclass(frozen=True)
class SInterval:
    """Feasible range of the family parameter, with its locating invariants.

    ``s_min = -prefix_atom(a, 2m)`` and ``s_max = prefix_atom(a, 2p+1)``;
    both collapse to 0 when any marginal is degenerate (0 or 1), and for a
    single event, where the marginal constraint pins s = 0.
    """

    s_min: object
    s_max: object
    p: int
    m: int

    @property
    def is_collapsed(self) -> bool:
        """True when the interval is the single point {0}."""
        return self.s_min == self.s_max


def atom_product(profile: MarginalProfile, mask: SubsetMask):
    """Product-measure probability of the atom ``mask``.

    ``prod_{j in J} a_j * prod_{j not in J} (1 - a_j)`` over sorted values;
    empty products are 1.  Accumulated in ascending index order, matching the
    dense table built by :func:`build_measure` bit for bit.
    """
    values = profile.sorted_values
    if mask < 0 or mask >> len(values):
        raise ValueError(f"mask {mask:#x} is not an {len(values)}-bit subset mask")
    one = Fraction(1) if profile.exact else 1.0
    out = one
    for j, a in enumerate(values):
        out = out * (a if (mask >> j) & 1 else one - a)
    return out


def invariant_p(profile: MarginalProfile) -> int:
    """Largest p with ``a_{2i} + a_{2i+1} <= 1`` for every i in 1..p.

    Ranges over {0, ..., floor((n-1)/2)}; 0 when n < 3 or the first such
    pair already violates the condition.  Locates the smallest atom product
    of odd cardinality, at the prefix subset of size 2p+1.
    """
    a = profile.sorted_values
    p = 0
    for i in range(1, (profile.n - 1) // 2 + 1):
        if a[2 * i - 1] + a[2 * i] <= 1:
            p = i
        else:
            break
    return p


def invariant_m(profile: MarginalProfile) -> int:
    """Largest m with ``a_{2i-1} + a_{2i} <= 1`` for every i in 1..m.

    Ranges over {0, ..., floor(n/2)}; 0 when n < 2 or ``a_1 + a_2 > 1``.
    Locates the smallest atom product of even cardinality, at the prefix
    subset of size 2m.
    """
    a = profile.sorted_values
    m = 0
    for i in range(1, profile.n // 2 + 1):
        if a[2 * i - 2] + a[2 * i - 1] <= 1:
            m = i
        else:
            break
    return m


def s_interval(profile: MarginalProfile) -> SInterval:
    """Feasible interval of the family parameter.

    The endpoints are the signed minimal atom products of even and odd
    cardinality.  For n = 1 the marginal constraint alone pins s = 0, so the
    interval is the single point [0, 0].
    """
    p = invariant_p(profile)
    m = invariant_m(profile)
    values = profile.sorted_values
    zero = Fraction(0) if profile.exact else 0.0
    if profile.n == 1:
        return SInterval(s_min=zero, s_max=zero, p=p, m=m)
    s_min = -prefix_atom(values, 2 * m)
    s_max = prefix_atom(values, 2 * p + 1)
    if s_min == 0:
        s_min = zero  # canonicalize -0.0
    return SInterval(s_min=s_min, s_max=s_max, p=p, m=m)


def _signed_offsets(n: int, s):
    """Vector of (-1)^|J| * s over all masks, matching atom storage order."""
    if isinstance(s, Fraction):
        pc = popcount_table(n)
        return [(-s if int(c) & 1 else s) for c in pc]
    pc = popcount_table(n)
    signs = 1.0 - 2.0 * (pc & 1).astype(float)
    return signs * float(s)


def build_measure(profile: MarginalProfile, s, *, validate: bool = True) -> AtomicMeasure:
    """Construct the family measure with parameter ``s``.

    Atom ``J`` receives ``atom_product(J) + (-1)^|J| * s``.  With
    ``validate=True`` (the default), ``s`` must lie in the feasible interval
    — within an absolute slack of 1e-12 in floating mode, exactly in exact
    mode — and negative rounding dust in (-slack, 0) is clamped to exact
    zero, since endpoint measures legitimately contain zero atoms.  With
    ``validate=False`` the atoms are returned as computed, which is how the
    infeasibility of out-of-interval parameters is demonstrated.
    """
    n = profile.n
    _check_cap(n)
    exact = profile.exact
    if exact:
        if isinstance(s, bool) or not isinstance(s, (int, Fraction)):
            raise TypeError("exact profiles require an exact s (int or Fraction)")
        s = Fraction(s)
    else:
        s = float(s)

    base = atom_products_dense(profile.sorted_values)
    offsets = _signed_offsets(n, s)
    if exact:
        atoms = [b + o for b, o in zip(base, offsets)]
    else:
        atoms = base + offsets

    if validate:
        iv = s_interval(profile)
        slack = 0 if exact else ABS_TOL
        if s < iv.s_min - slack or s > iv.s_max + slack:
            endpoint = ("s_min", iv.s_min) if s < iv.s_min else ("s_max", iv.s_max)
            if exact:
                first_bad = min(mask for mask, v in enumerate(atoms) if v < 0)
            else:
                bad = np.flatnonzero(atoms < -slack)
                first_bad = int(bad[0]) if bad.size else int(np.argmin(atoms))
            raise FeasibilityError(
                f"s = {s} lies outside the feasible interval: violates "
                f"{endpoint[0]} = {endpoint[1]}; atom {set(mask_indices(first_bad)) or '{}'} "
                f"would be negative"
            )
        if not exact:
            atoms[(atoms > -slack) & (atoms < 0.0)] = 0.0
            atoms.setflags(write=False)

    if exact:
        atoms = tuple(atoms)
    elif atoms.flags.writeable:
        atoms.setflags(write=False)
    return AtomicMeasure(n=n, atom_probs=atoms, s=s)


def parity_construction(n: int, parity: str) -> AtomicMeasure:
    """The classical extremal example on uniform-1/2 marginals.

    Uniform mass 1/2^(n-1) on the outcome patterns whose total number of
    occurrences has the given parity, zero on the rest.  Equals the family
    measure at ``s = +1/2^n`` (parity "even": all odd-cardinality atoms
    vanish) or ``s = -1/2^n`` (parity "odd"); its independence order is
    n-1, never n.
    """
    if n < 2:
        raise ValueError(f"parity construction needs n >= 2, got n = {n}")
    if parity not in ("even", "odd"):
        raise ValueError(f'parity must be "even" or "odd", got {parity!r}')
    from .marginals import from_raw

    profile = from_raw([0.5] * n)
    s = 2.0 ** -n
    return build_measure(profile, s if parity == "even" else -s)


def joint_probability(measure: AtomicMeasure, mask: SubsetMask):
    """P(all events in ``mask`` occur): the sum of atoms over supersets."""
    n = measure.n
    if mask < 0 or mask >> n:
        raise ValueError(f"mask {mask:#x} is not an {n}-bit subset mask")
    if measure.exact:
        return sum(
            (v for m, v in enumerate(measure.atom_probs) if m & mask == mask),
            Fraction(0),
        )
    sel = (np.arange(1 << n) & mask) == mask
    return float(np.sum(measure.atom_probs[sel]))


def _order_from_joints(joints, products, n: int, exact: bool) -> int:
    """Largest l such that every subset of size <= l obeys the product rule."""
    pc = popcount_table(n)
    if not exact:
        joints = np.asarray(joints)
        products = np.asarray(products)
    for level in range(1, n + 1):
        masks = np.flatnonzero(pc == level)
        for mask in masks:
            mask = int(mask)
            if not close(joints[mask], products[mask], exact=exact):
                return level - 1
    return n


def independence_order(measure: AtomicMeasure, profile: MarginalProfile) -> int:
    """Largest l for which all l-subsets satisfy the product rule.

    Checks ``P(intersection of J) == prod_{j in J} a_j`` for every subset J,
    by increasing cardinality, stopping at the first failure; returns n for
    mutual independence.  A marginal mismatch reports order 0 rather than
    raising.  Comparison tolerance follows the arithmetic mode.
    """
    n = measure.n
    _check_cap(n)
    if profile.n != n:
        raise ValueError(f"profile has n = {profile.n} but measure has n = {n}")
    joints = superset_sums(measure.atom_probs, n)
    products = subset_products_dense(profile.sorted_values)
    return _order_from_joints(joints, products, n, measure.exact)


def measure_to_dict(measure: AtomicMeasure, profile: MarginalProfile) -> dict:
    """JSON-ready form: atoms in mask order, subsets in original input indices."""
    return {
        "n": measure.n,
        "s": None if measure.s is None else float(measure.s),
        "atoms": [
            {
                "subset": list(original_subset(profile, mask)),
                "prob": float(measure.atom_probs[mask]),
            }
            for mask in range(1 << measure.n)
        ],
    }
