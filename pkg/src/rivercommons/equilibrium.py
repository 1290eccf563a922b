"""Finite-game solvers: Lemke-Howson, pure-equilibrium enumeration, and a
symmetric solver for the N-player common pool resource game.

The Lemke-Howson implementation pivots with exact rational arithmetic and a
lexicographic ratio test, so it terminates on degenerate inputs and the
returned profile is exact up to the final float conversion.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidGameError


@dataclass(frozen=True)
class BimatrixGame:
    """Two-player normal-form game. Row and column matrices share a shape."""

    row_payoffs: np.ndarray
    col_payoffs: np.ndarray
    row_actions: tuple = ()
    col_actions: tuple = ()

    def __post_init__(self):
        a = np.asarray(self.row_payoffs, dtype=float)
        b = np.asarray(self.col_payoffs, dtype=float)
        if a.ndim != 2 or a.shape != b.shape:
            raise InvalidGameError(
                f"payoff matrices must be 2-d and share a shape, "
                f"got {np.shape(self.row_payoffs)} and {np.shape(self.col_payoffs)}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise InvalidGameError("payoff matrices must be at least 1x1")
        if not (np.isfinite(a).all() and np.isfinite(b).all()):
            raise InvalidGameError("payoffs must be finite")
        object.__setattr__(self, "row_payoffs", a)
        object.__setattr__(self, "col_payoffs", b)
        object.__setattr__(self, "row_actions",
                           tuple(self.row_actions) or tuple(range(a.shape[0])))
        object.__setattr__(self, "col_actions",
                           tuple(self.col_actions) or tuple(range(a.shape[1])))
        if len(self.row_actions) != a.shape[0] or len(self.col_actions) != a.shape[1]:
            raise InvalidGameError("action labels do not match matrix shape")

    @property
    def shape(self):
        return self.row_payoffs.shape


@dataclass(frozen=True)
class MixedProfile:
    """A (possibly degenerate) mixed-strategy profile."""

    row_dist: np.ndarray
    col_dist: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.row_dist, dtype=float)
        c = np.asarray(self.col_dist, dtype=float)
        for v in (r, c):
            if v.ndim != 1 or (v < 0).any() or abs(v.sum() - 1.0) > 1e-12:
                raise InvalidGameError("distributions must be non-negative and sum to 1")
        object.__setattr__(self, "row_dist", r)
        object.__setattr__(self, "col_dist", c)

    @classmethod
    def pure(cls, i, j, m, n):
        r = np.zeros(m)
        c = np.zeros(n)
        r[i] = 1.0
        c[j] = 1.0
        return cls(r, c)

    def support(self):
        return (tuple(np.flatnonzero(self.row_dist > 0)),
                tuple(np.flatnonzero(self.col_dist > 0)))


class _Tableau:
    """One of the two Lemke-Howson tableaux, with exact Fraction entries.

    Rows are [coeff_0 .. coeff_{m+n-1} | rhs]; `basis[i]` is the label of the
    variable currently basic in row i. The ratio test compares the full row
    (rhs first) lexicographically, which both breaks ties deterministically
    and guarantees termination on degenerate games.
    """

    def __init__(self, rows, basis):
        self.rows = rows
        self.basis = basis

    def pivot(self, entering):
        candidates = [i for i, r in enumerate(self.rows) if r[entering] > 0]
        if not candidates:
            raise InvalidGameError("unbounded pivot ray (non-positive column)")

        def ratio_key(i):
            r = self.rows[i]
            p = r[entering]
            return tuple(v / p for v in [r[-1]] + r[:-1])

        i = min(candidates, key=ratio_key)
        prow = self.rows[i]
        p = prow[entering]
        self.rows[i] = prow = [v / p for v in prow]
        for j, r in enumerate(self.rows):
            if j != i and r[entering] != 0:
                f = r[entering]
                self.rows[j] = [a - f * b for a, b in zip(r, prow)]
        leaving = self.basis[i]
        self.basis[i] = entering
        return leaving


def lemke_howson(game: BimatrixGame, initial_label: int = 0) -> MixedProfile:
    """Compute one Nash equilibrium by complementary pivoting.

    Labels 0..m-1 are row strategies, m..m+n-1 column strategies. The walk
    starts by dropping `initial_label` from the artificial equilibrium.
    """
    a = game.row_payoffs
    b = game.col_payoffs
    m, n = a.shape
    if not 0 <= initial_label < m + n:
        raise InvalidGameError(f"initial label {initial_label} out of range for {m}x{n} game")

    # Positive payoffs keep both polytopes bounded.
    low = min(a.min(), b.min())
    offset = Fraction(0)
    if low <= 0:
        offset = Fraction(1) - Fraction(low)
    af = [[Fraction(a[i, j]) + offset for j in range(n)] for i in range(m)]
    bf = [[Fraction(b[i, j]) + offset for j in range(n)] for i in range(m)]

    zero, one = Fraction(0), Fraction(1)
    # Row-player polytope: B^T x + s = 1 (n rows; slacks carry column labels).
    tx = _Tableau(
        rows=[[bf[i][j] for i in range(m)]
              + [one if k == j else zero for k in range(n)] + [one]
              for j in range(n)],
        basis=[m + j for j in range(n)])
    # Column-player polytope: A y + r = 1 (m rows; slacks carry row labels).
    ty = _Tableau(
        rows=[[one if k == i else zero for k in range(m)]
              + [af[i][j] for j in range(n)] + [one]
              for i in range(m)],
        basis=list(range(m)))

    entering = initial_label
    tab = tx if initial_label < m else ty
    while True:
        leaving = tab.pivot(entering)
        if leaving == initial_label:
            break
        entering = leaving
        tab = ty if tab is tx else tx

    x = [zero] * m
    y = [zero] * n
    for label, row in zip(tx.basis, tx.rows):
        if label < m:
            x[label] = row[-1]
    for label, row in zip(ty.basis, ty.rows):
        if label >= m:
            y[label - m] = row[-1]
    sx, sy = sum(x), sum(y)
    if sx == 0 or sy == 0:
        raise InvalidGameError("pivoting ended on an empty support")
    return MixedProfile(np.array([float(v / sx) for v in x]),
                        np.array([float(v / sy) for v in y]))


def enumerate_pure_ne(game: BimatrixGame) -> frozenset:
    """All pure-strategy equilibria as (row, col) index pairs; ties count."""
    a = game.row_payoffs
    b = game.col_payoffs
    row_best = a >= a.max(axis=0, keepdims=True)
    col_best = b >= b.max(axis=1, keepdims=True)
    cells = np.argwhere(row_best & col_best)
    return frozenset((int(i), int(j)) for i, j in cells)


def is_epsilon_ne(game: BimatrixGame, profile: MixedProfile, eps: float) -> bool:
    """True iff no unilateral pure deviation gains more than eps in expectation."""
    x = profile.row_dist
    y = profile.col_dist
    if x.shape[0] != game.shape[0] or y.shape[0] != game.shape[1]:
        raise InvalidGameError("profile dimensions do not match game")
    ay = game.row_payoffs @ y
    xb = x @ game.col_payoffs
    return bool(ay.max() - x @ ay <= eps and xb.max() - xb @ y <= eps)


def _action_value(actions, index):
    label = actions[index]
    return label if isinstance(label, (int, float)) and not isinstance(label, bool) else index


def select_equilibrium(candidates, fallback: MixedProfile,
                       row_actions=None, col_actions=None) -> MixedProfile:
    """Deterministic selection among pure equilibria.

    Picks the candidate minimizing total action value (then the smaller row
    action); falls back to the supplied profile when no pure candidate exists.
    Action labels are used as values when numeric, indices otherwise.
    """
    cells = sorted(candidates)
    if not cells:
        return fallback
    m = len(fallback.row_dist)
    n = len(fallback.col_dist)
    rows = row_actions if row_actions is not None else tuple(range(m))
    cols = col_actions if col_actions is not None else tuple(range(n))

    def key(cell):
        i, j = cell
        ru = _action_value(rows, i)
        cu = _action_value(cols, j)
        return (ru + cu, ru)

    i, j = min(cells, key=key)
    return MixedProfile.pure(i, j, m, n)


@dataclass(frozen=True)
class CprSolution:
    """Symmetric pure-strategy solution of the common pool resource game."""

    extraction: int
    is_equilibrium: bool


def solve_symmetric_cpr(payoff, n_players: int, e_max: int) -> CprSolution:
    """Smallest symmetric pure equilibrium of u(e_own, sum_others).

    Scans e* in 0..e_max for the smallest level no player wants to deviate
    from when everyone else plays it. If none exists, runs best-response
    iteration from 0 (at most 1000 steps) and flags the result.
    """
    if e_max < 0:
        raise InvalidGameError("e_max must be non-negative")
    levels = range(e_max + 1)
    tol = 1e-12
    for e_star in levels:
        others = (n_players - 1) * e_star
        u_star = payoff(e_star, others)
        if all(payoff(e, others) <= u_star + tol for e in levels):
            return CprSolution(e_star, True)

    e = 0
    for _ in range(1000):
        others = (n_players - 1) * e
        e = min(levels, key=lambda d: (-payoff(d, others), d))
    return CprSolution(e, False)
