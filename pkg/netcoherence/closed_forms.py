"""Exact Kirchhoff indices and coherence of the pseudofractal and 4-clique families.

Everything is evaluated in ``fractions.Fraction``; the 2^g, 3^g and 6^g
terms cancel heavily, so floats only appear at the interface.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import List, NamedTuple, Optional, Union

import numpy as np

from .const import (
    CLIQUE4_INITIAL,
    CLIQUE4_LIMIT,
    FAMILY_CLIQUE4,
    FAMILY_PSEUDOFRACTAL,
    PSEUDOFRACTAL_LIMIT,
)
from .exceptions import NetCoherenceDimensionError, NetCoherenceUsageError
from .generators import GrowthStep, clique4_order, pseudofractal_order
from .spectral import ResistanceMatrix

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExactValue:
    """Rational value with its nearest float."""

    value: Fraction

    @property
    def float_view(self) -> float:
        return float(self.value)

    def __float__(self) -> float:
        return self.float_view

    def __str__(self) -> str:
        return str(self.value)


Exact = Union[ExactValue, Fraction, int]


def _fraction(value: Exact) -> Fraction:
    if isinstance(value, ExactValue):
        return value.value
    return Fraction(value)


class KirchhoffTriple(NamedTuple):
    """(R, R*, R+) of one 4-clique network."""

    r: ExactValue
    r_mul: ExactValue
    r_add: ExactValue


def _check_g(g: int) -> int:
    if g < 0:
        raise NetCoherenceUsageError(f"iteration index must be >= 0, got g={g}")
    return int(g)


def _pseudofractal_bracket(g: int) -> int:
    return (
        50 * 3 ** (3 * g + 3)
        - 35 * 3 ** (2 * g + 2) * 2 ** (g + 1)
        + 48 * 3 ** (2 * g + 2)
        + 30 * 3 ** (g + 2) * 2 ** (g + 1)
        - 14 * 3 ** (g + 2)
        + 225 * 2 ** (g + 1)
    )


def pseudofractal_kirchhoff(g: int) -> ExactValue:
    """Kirchhoff index R(F_g)."""
    g = _check_g(g)
    return ExactValue(Fraction(_pseudofractal_bracket(g), 112 * 3 ** (g + 2)))


def pseudofractal_coherence(g: int, printed: bool = False) -> ExactValue:
    """H_FO(F_g) = R(F_g) / (2 N_g^2).

    ``printed=True`` divides by 4 N_g^2 instead of 2 N_g^2, the form often
    quoted for this family; it is exactly half (1/18 for the triangle).
    """
    g = _check_g(g)
    n, _ = pseudofractal_order(g)
    if printed:
        return ExactValue(
            Fraction(_pseudofractal_bracket(g), 112 * 3 ** (g + 2) * (3 ** (g + 1) + 3) ** 2)
        )
    return ExactValue(pseudofractal_kirchhoff(g).value / (2 * n * n))


def _clique4_r_bracket(g: int) -> Fraction:
    return (
        13 * 2 ** (2 * g + 1) * 3 ** (2 * g + 2)
        - 11 * 2**g * 3 ** (2 * g + 2)
        + 13 * 2 ** (g + 2) * 3**g
        + 7 * 3 ** (g + 2)
        - 11
        + Fraction(36, 2**g)
    )


def clique4_kirchhoff_indices(g: int) -> KirchhoffTriple:
    """Closed forms of R(T_g), R*(T_g) and R+(T_g)."""
    g = _check_g(g)
    r_mul = Fraction(2**g * 3 ** (g + 2) * (13 * 2 ** (g + 1) * 3**g - 5 * 3 ** (g + 1) + 4), 5)
    r_add = Fraction(9, 275) * (
        169 * 2 ** (2 * g + 2) * 3 ** (2 * g)
        - 55 * 2 ** (g + 1) * 3 ** (2 * g + 1)
        + 11 * 2 ** (g + 3) * 3**g
        + 35 * 3 ** (g + 1)
        + 11
    )
    r = Fraction(3, 275) * _clique4_r_bracket(g)
    return KirchhoffTriple(ExactValue(r), ExactValue(r_mul), ExactValue(r_add))


def clique4_kirchhoff_recursion_step(prev, g: int) -> KirchhoffTriple:
    """Advance (R, R*, R+) of T_g to T_{g+1}."""
    g = _check_g(g)
    r, r_mul, r_add = (_fraction(value) for value in prev)
    n, m = (Fraction(x) for x in clique4_order(g))
    quarter = Fraction(1, 4)
    half = Fraction(1, 2)
    next_r = (
        Fraction(3, 2) * m * m
        - quarter * n * (n - 1)
        + quarter * m * (n - 2)
        + half * (r + r_add + r_mul)
    )
    next_mul = 9 * (3 * m * m - m * n) + 18 * r_mul
    next_add = (
        Fraction(27, 2) * m * m
        - Fraction(3, 2) * m
        - Fraction(3, 4) * n * (n - 1)
        - Fraction(9, 4) * m * n
        + 3 * r_add
        + 6 * r_mul
    )
    return KirchhoffTriple(ExactValue(next_r), ExactValue(next_mul), ExactValue(next_add))


def clique4_kirchhoff_by_recursion(g: int) -> KirchhoffTriple:
    """Iterate the recursion from T_0 = K_4."""
    g = _check_g(g)
    triple = KirchhoffTriple(*(ExactValue(value) for value in CLIQUE4_INITIAL))
    for level in range(g):
        triple = clique4_kirchhoff_recursion_step(triple, level)
    return triple


def clique4_coherence(g: int) -> ExactValue:
    """H_FO(T_g) = R(T_g) / (2 N_g^2)."""
    g = _check_g(g)
    n, _ = clique4_order(g)
    return ExactValue(clique4_kirchhoff_indices(g).r.value / (2 * n * n))


def clique4_coherence_printed(g: int) -> ExactValue:
    """H_FO(T_g) from the 6^(g+1) form of the denominator; equals clique4_coherence."""
    g = _check_g(g)
    return ExactValue(Fraction(3, 88) * _clique4_r_bracket(g) / (6 ** (g + 1) + 4) ** 2)


def limit_gap(value: Exact, limit: Exact) -> Fraction:
    return abs(_fraction(value) - _fraction(limit))


def resistance_recursion_step(omega: ResistanceMatrix, step: GrowthStep) -> ResistanceMatrix:
    """Resistances of T_{g+1} from those of T_g.

    Old pairs halve, twin pairs are 1/2, a new vertex i with parent edge
    (k, l) sits at (3 + 2 O_jl + 2 O_jk - O_kl) / 8 from old j (its own
    parents included), and non-adjacent new pairs with parents (k, l),
    (p, q) at (6 + O_kq + O_kp + O_lp + O_lq - O_kl - O_pq) / 8.
    """
    if step.twins is None:
        raise NetCoherenceDimensionError("growth step carries no twin map")
    if omega.n != step.old_n:
        raise NetCoherenceDimensionError(
            f"resistance matrix has {omega.n} vertices, growth step starts from {step.old_n}"
        )
    if step.twins.shape[0] != step.parents.shape[0]:
        raise NetCoherenceDimensionError("twin map and parent map differ in length")

    old = omega.entries
    k, l = step.parents[:, 0], step.parents[:, 1]
    o_kl = old[k, l]
    size = step.new_n

    entries = np.zeros((size, size))
    entries[: step.old_n, : step.old_n] = old / 2.0

    to_old = (3.0 + 2.0 * old[l, :] + 2.0 * old[k, :] - o_kl[:, None]) / 8.0
    entries[step.old_n:, : step.old_n] = to_old
    entries[: step.old_n, step.old_n:] = to_old.T

    new_new = (
        6.0
        + old[np.ix_(k, l)]
        + old[np.ix_(k, k)]
        + old[np.ix_(l, k)]
        + old[np.ix_(l, l)]
        - o_kl[:, None]
        - o_kl[None, :]
    ) / 8.0
    rows = np.arange(step.parents.shape[0])
    new_new[rows, step.twins - step.old_n] = 0.5
    new_new[rows, rows] = 0.0
    entries[step.old_n:, step.old_n:] = new_new
    return ResistanceMatrix(entries)


@dataclass(frozen=True)
class ClosedFormRow:
    g: int
    n: int
    m: int
    r: ExactValue
    r_mul: Optional[ExactValue]
    r_add: Optional[ExactValue]
    h_fo: ExactValue
    limit: Fraction

    @property
    def gap(self) -> Fraction:
        return limit_gap(self.h_fo, self.limit)


def closed_form_table(family: str, g_max: int) -> List[ClosedFormRow]:
    """One row per iteration 0..g_max."""
    g_max = _check_g(g_max)
    rows = []
    for g in range(g_max + 1):
        if family == FAMILY_PSEUDOFRACTAL:
            n, m = pseudofractal_order(g)
            rows.append(
                ClosedFormRow(
                    g, n, m, pseudofractal_kirchhoff(g), None, None,
                    pseudofractal_coherence(g), PSEUDOFRACTAL_LIMIT,
                )
            )
        elif family == FAMILY_CLIQUE4:
            n, m = clique4_order(g)
            triple = clique4_kirchhoff_indices(g)
            rows.append(
                ClosedFormRow(
                    g, n, m, triple.r, triple.r_mul, triple.r_add,
                    clique4_coherence(g), CLIQUE4_LIMIT,
                )
            )
        else:
            raise NetCoherenceUsageError(
                f"closed forms exist for {FAMILY_PSEUDOFRACTAL} and {FAMILY_CLIQUE4}, not {family!r}"
            )
    _LOGGER.debug("Closed form table %s up to g=%s", family, g_max)
    return rows
