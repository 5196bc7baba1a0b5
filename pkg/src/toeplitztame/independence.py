"""Arithmetic-progression independence schemes for non-tame substitution
shifts, the resulting independence times, and desk-scale verification that
every choice function is realized on fibre windows.

A scheme at power m consists of a letter set A, an arithmetic progression
j0 < j1 < j2 of column indices of theta^m whose middle and upper members
restrict to one and the same bijection of A, a proper subset
B = theta^m_{j0}(alphabet) of A, and an index i whose column sends the
whole alphabet into the part of A that j1 moves outside B.  The times
then alternate the digits j_{phi_n} and i in base L = l^m.

The times produced here are two-sided in general.  All-positive or
all-negative variants (witnessing forward or backward non-tameness alone)
require further telescoping until i < j0 < j1 < j2, which is not
implemented; the signs fall where the scheme puts them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DepthError, PreconditionError, ValidationError
from .extended_bratteli import (MAX_POWER_COLUMNS, _extendable_tail_sets,
                                _vkey, morphism_from_substitution,
                                power_column_maps)
from .gtheta import NON_TAME, tameness_verdict
from .odometer import OdometerHead, Scale, head_index
from .substitution import Substitution, expand, letter_in_power, substitution_power


@dataclass(frozen=True)
class IndependenceScheme:
    base: Substitution          # the pure base the scheme lives on
    power: int
    working_length: int         # L = l ** power
    a_set: frozenset
    b_set: frozenset
    j0: int
    j1: int
    j2: int
    i: int

    @property
    def delta(self) -> int:
        return self.j1 - self.j0

    def to_json(self):
        return {"power": self.power, "L": self.working_length,
                "A": sorted(self.a_set), "B": sorted(self.b_set),
                "j0": self.j0, "j1": self.j1, "j2": self.j2,
                "delta": self.delta, "i": self.i}


def scheme_is_valid(s: IndependenceScheme) -> bool:
    """Recheck every invariant by direct column composition, independently
    of the search that produced the scheme."""
    theta_m = substitution_power(s.base, s.power)
    if s.working_length != theta_m.length:
        return False
    if not (0 <= s.j0 < s.j1 < s.j2 < s.working_length):
        return False
    if s.j2 - s.j1 != s.j1 - s.j0:
        return False
    col = lambda c, a: theta_m.rule(a)[c]
    a_sorted = sorted(s.a_set)
    m1 = {a: col(s.j1, a) for a in a_sorted}
    m2 = {a: col(s.j2, a) for a in a_sorted}
    if m1 != m2:
        return False
    if frozenset(m1.values()) != s.a_set or len(set(m1.values())) != len(s.a_set):
        return False
    b = frozenset(col(s.j0, a) for a in theta_m.alphabet)
    if b != s.b_set or not b < s.a_set:
        return False
    target = {a for a in s.a_set if m1[a] not in s.b_set}
    image_i = {col(s.i, a) for a in theta_m.alphabet}
    return image_i <= target


def synthesize_scheme(theta, max_power: int = 6):
    """Search powers m <= max_power of the pure base for a scheme, in
    deterministic order (smallest m, then smallest |A|, then lexicographic
    (j0, j1, j2, i)).  Requires a non-tame verdict; None means the search
    was inconclusive, not that no scheme exists.
    """
    report = tameness_verdict(theta)
    if report.verdict != NON_TAME:
        raise PreconditionError(
            f"independence schemes require a non-tame verdict, got {report.verdict}")
    base = report.pure_base
    morphism = morphism_from_substitution(base)
    extendable = _extendable_tail_sets(morphism)
    n_letters = len(base.alphabet)
    for m in range(1, max_power + 1):
        if morphism.length ** m > MAX_POWER_COLUMNS:
            break  # exhausted the tractable powers; report inconclusive
        letters, maps = power_column_maps(morphism, m)
        pos = {a: t for t, a in enumerate(letters)}
        L = len(maps)
        full_images = [frozenset(g) for g in maps]
        for k in range(2, n_letters + 1):
            for a_set in sorted((s for s in extendable if len(s) == k), key=_vkey):
                a_sorted = sorted(a_set)
                restricted = {}
                for c, g in enumerate(maps):
                    r = tuple(g[pos[a]] for a in a_sorted)
                    if frozenset(r) == a_set and len(set(r)) == k:
                        restricted[c] = r
                found = _scan_progressions(restricted, full_images, a_set, L)
                if found is not None:
                    j0, j1, j2, i, b = found
                    return IndependenceScheme(base, m, L, a_set, b, j0, j1, j2, i)
    return None


def _scan_progressions(restricted, full_images, a_set, L):
    a_sorted = sorted(a_set)
    for j0 in range(L):
        b = full_images[j0]
        if not b < a_set:
            continue
        for j1 in sorted(restricted):
            if j1 <= j0:
                continue
            j2 = 2 * j1 - j0
            if j2 >= L or j2 not in restricted:
                continue
            if restricted[j1] != restricted[j2]:
                continue
            bij = dict(zip(a_sorted, restricted[j1]))
            target = {a for a in a_set if bij[a] not in b}
            for i in range(L):
                if full_images[i] <= target:
                    return j0, j1, j2, i, b
    return None


def independence_times(s: IndependenceScheme, n_times: int) -> list[int]:
    """t_0 = 0 and t_n = t_{n-1} + (j1 - i) L^{2n-1} + Delta L^{2n-2}.

    This is the stationary specialization of the general times, in which
    level-dependent data j1^{(2n)}, i_{2n}, Delta_{2n-1} appear and the
    powers of L are replaced by the products of the level lengths
    prod_{j<2n} l_j and prod_{j<2n-1} l_j; only the stationary instance is
    executed here.
    """
    if n_times < 0:
        raise ValidationError("need n >= 0")
    L = s.working_length
    times = [0]
    for n in range(1, n_times + 1):
        times.append(times[-1] + (s.j1 - s.i) * L ** (2 * n - 1)
                     + s.delta * L ** (2 * n - 2))
    if len(set(times)) != len(times):
        raise ValidationError("independence times are not pairwise distinct")
    return times


@dataclass(frozen=True)
class PatternWitness:
    phi: tuple[int, ...]
    vertex: str
    letters: str
    positions: tuple[int, ...]
    ok: bool

    def to_json(self):
        return {"phi": list(self.phi), "vertex": self.vertex,
                "letters": self.letters, "positions": list(self.positions),
                "ok": self.ok}


@dataclass(frozen=True)
class IndependenceReport:
    scheme: IndependenceScheme
    times: tuple[int, ...]
    patterns: tuple[PatternWitness, ...]
    complete: bool

    def to_json(self):
        return {"schema": 1, "scheme": self.scheme.to_json(),
                "times": list(self.times),
                "patterns": [p.to_json() for p in self.patterns],
                "complete": self.complete}


def verify_patterns(s: IndependenceScheme, n_levels: int = 2,
                    materialize_limit: int = 30_000_000) -> IndependenceReport:
    """For each choice function phi in {0,1}^(N+1) build the head whose
    digits alternate j_{phi_n} and i in base L, read the fibre-window
    letter at every time t_n for every level vertex, and check it lies in
    B when phi_n = 0 and in A minus B when phi_n = 1.

    The window words theta^{m(2N+2)}(v) are shared across all choice
    functions; beyond the materialization limit single letters are read by
    digit descent, which evaluates the same windows lazily.
    """
    if not scheme_is_valid(s):
        raise PreconditionError("scheme fails its own invariants")
    _require_naive_order(s.base)
    theta_m = substitution_power(s.base, s.power)
    L = s.working_length
    depth = 2 * n_levels + 2
    times = independence_times(s, n_levels)
    scale = Scale.constant(L)
    window_len = L ** depth
    words = None
    if window_len <= materialize_limit:
        words = {v: expand(theta_m, v, depth) for v in theta_m.alphabet}

    witnesses = []
    complete = True
    for phi in itertools.product((0, 1), repeat=n_levels + 1):
        digits = []
        for n in range(n_levels + 1):
            digits.append(s.j0 if phi[n] == 0 else s.j1)
            digits.append(s.i)
        head = OdometerHead(scale, tuple(digits))
        z = head_index(head)
        positions = []
        for t in times:
            q = z + t
            if not 0 <= q < window_len:
                raise DepthError(
                    f"time {t} falls outside the depth-{depth} window")
            positions.append(q)
        for v in theta_m.alphabet:
            letters = []
            ok = True
            for n, q in enumerate(positions):
                c = words[v][q] if words is not None else \
                    letter_in_power(theta_m, v, depth, q)
                letters.append(c)
                if phi[n] == 0:
                    ok = ok and c in s.b_set
                else:
                    ok = ok and c in s.a_set and c not in s.b_set
            complete = complete and ok
            witnesses.append(PatternWitness(phi, v, "".join(letters),
                                            tuple(positions), ok))
    return IndependenceReport(s, tuple(times), tuple(witnesses), complete)


def _require_naive_order(theta: Substitution):
    firsts = {theta.rule(a)[0] for a in theta.alphabet}
    lasts = {theta.rule(a)[-1] for a in theta.alphabet}
    if len(firsts) > 1 or len(lasts) > 1:
        raise PreconditionError(
            "fibre-window verification needs the naive stationary order "
            "(common first and last letters)")
