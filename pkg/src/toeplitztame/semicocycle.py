"""The two semicocycle counterexample families.

First family (over Z_((4^n))): a recursively defined chain of point sets
D^0 subset D^1 subset ... whose closure D is a Cantor set; every digit of
a D-point is a power of 3, level n carrying an exponent of at most n - 1.
The semicocycle reads a when the longest head a D-point shares with z has
odd length, b otherwise.  Evaluation at a finite head is certified by
membership of the truncated heads in the stage's head sets: the head sets
Head_m are stable once the stage holds at least m points.

Second family (over Z_2): a double sequence l^n_i closed under
l^{n+1}_{2i} = l^n_{i + 2^{n-1}} with midpoint interpolation on odd
indices, times t_n = 2^(l^n_0), and a family f^n of interval-constant
functions built from any right-extendable binary language so that the
level-N interval words enumerate that language.  Realizing a prescribed
word y along the times amounts to placing the orbit inside one interval,
which the translation t_w below does exactly.

Both constructions pick the concrete choices the output metadata records:
f^1 alternates strictly, below-domain values are constant a, and the
default non-integer base points are all-digits-2 respectively alternating
0,1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import (DepthError, HorizonError, LanguageError,
                     PreconditionError, ValidationError)
from .odometer import (OdometerHead, OdometerPoint, Scale, add_integer,
                       head_index, integer_head, level_product)

SCALE5 = Scale.powers(4)
SCALE6 = Scale.constant(2)


# ---------------------------------------------------------------------------
# the D-set over Z_((4^n))


@dataclass(frozen=True)
class DPoint:
    """Digit exponents of one D-point: digit at level n is 3^e, where e is
    head_exponents[n-1] inside the head and tail_exponent beyond."""

    head_exponents: tuple[int, ...]
    tail_exponent: int

    def exponent(self, n: int) -> int:
        if n <= len(self.head_exponents):
            return self.head_exponents[n - 1]
        return self.tail_exponent

    def digit(self, n: int) -> int:
        return 3 ** self.exponent(n)

    def head_at(self, depth: int) -> OdometerHead:
        return OdometerHead(SCALE5, tuple(self.digit(n) for n in range(1, depth + 1)))

    def as_point(self) -> OdometerPoint:
        return OdometerPoint(self.head_at(len(self.head_exponents)),
                             3 ** self.tail_exponent)

    def to_json(self):
        return {"head_exponents": list(self.head_exponents),
                "tail_exponent": self.tail_exponent}


@dataclass(frozen=True)
class DStage:
    index: int
    points: tuple[DPoint, ...]

    def to_json(self):
        return {"stage": self.index, "points": [p.to_json() for p in self.points]}


def build_d_stage(i: int) -> DStage:
    """Stage i of the recursion: each point of the previous stage spawns a
    twin that repeats 3^(m_i + l) beyond a head of length m_i + l, where
    m_i = 2^i and l is the point's position; the new points are appended
    after the old ones."""
    if not 0 <= i <= 12:
        raise ValidationError("stages up to 12 are supported (2^i points)")
    points = [DPoint((), 0)]
    for stage in range(i):
        m = 2 ** stage
        fresh = []
        for l, p in enumerate(points):
            cut = m + l
            head = tuple(p.exponent(n) for n in range(1, cut + 1))
            fresh.append(DPoint(head, cut))
        points.extend(fresh)
    for p in points:
        for n in range(1, len(p.head_exponents) + 2):
            if p.exponent(n) > n - 1:
                raise ValidationError("digit exponent exceeds level - 1")
    return DStage(i, tuple(points))


@lru_cache(maxsize=None)
def head_set(stage: DStage, m: int) -> frozenset:
    """Head_m as digit tuples; exact once the stage has at least m points
    (the heads of the first m points, pairwise distinct)."""
    return frozenset(p.head_at(m).digits for p in stage.points)


def heads_and_special(m: int, stage: DStage):
    """(Head_m, w_m): the m distinct heads and the unique one with two
    distinct one-digit extensions in Head_{m+1}."""
    if 2 ** stage.index < m + 1:
        raise PreconditionError(
            f"stage {stage.index} is too shallow for stable Head_{m + 1}")
    heads = head_set(stage, m)
    if len(heads) != m:
        raise ValidationError(f"|Head_{m}| = {len(heads)}, expected {m}")
    longer = head_set(stage, m + 1)
    specials = {h[:m] for h in longer
                if sum(1 for g in longer if g[:m] == h[:m]) >= 2}
    if len(specials) != 1:
        raise ValidationError(f"expected one special word, got {len(specials)}")
    return heads, next(iter(specials))


def f5_eval(h: OdometerHead, stage: DStage):
    """(letter, confident): a iff the longest D-head matching h is odd.

    L is the largest m with head_m(h) in Head_m.  The value is confident
    when L < depth and the stage certifies every Head_m involved (stage
    points >= depth); a full-depth match could extend, so it is flagged.
    """
    if h.scale != SCALE5:
        raise ValidationError("first-family heads live over the 4^n scale")
    certified = 2 ** stage.index >= h.depth
    L = 0
    for m in range(1, h.depth + 1):
        if h.digits[:m] in head_set(stage, m):
            L = m
        else:
            break
    confident = certified and L < h.depth
    return ("a" if L % 2 == 1 else "b"), confident


def toeplitz5_window(zhat: OdometerHead, n0: int, n1: int, stage: DStage) -> str:
    """The letters f(zhat + n), n0 <= n <= n1, all confident; positions
    whose evaluation the depth cannot certify are reported."""
    letters = []
    failures = []
    for n in range(n0, n1 + 1):
        letter, confident = f5_eval(add_integer(zhat, n), stage)
        letters.append(letter)
        if not confident:
            failures.append(n)
    if failures:
        raise DepthError(
            f"evaluation not certified at offsets {failures}; deepen the head/stage")
    return "".join(letters)


def points_equal(p: DPoint, q: DPoint) -> bool:
    """Exact equality of the two eventually-constant points."""
    span = max(len(p.head_exponents), len(q.head_exponents)) + 1
    return all(p.exponent(n) == q.exponent(n) for n in range(1, span + 1))


def translate_hits(z: OdometerHead, stage: DStage, t_range: int) -> list:
    """All (source head class, t) with |t| <= t_range such that
    d + t + z agrees with some stage head at the depth of z, where d runs
    over the distinct depth-limited stage heads (classes index their
    sorted list).  Head arithmetic at a fixed depth is arithmetic modulo
    the product of the moduli, so each candidate reduces to one residue
    comparison."""
    depth = z.depth
    modulus = level_product(SCALE5, depth)
    heads_sorted = sorted(head_set(stage, depth))
    vals = [head_index(OdometerHead(SCALE5, h)) for h in heads_sorted]
    zval = head_index(z)
    hits = set()
    for sc, sval in enumerate(vals):
        base = (sval + zval) % modulus
        for tval in vals:
            off = (tval - base) % modulus
            if off <= t_range:
                hits.add((sc, off))
            elif modulus - off <= t_range:
                hits.add((sc, off - modulus))
    return sorted(hits)


def check_translate_disjointness(stage: DStage, t_range: int, depth: int,
                                 samples: int, seed: int = 0) -> dict:
    """Evidence for the unique-translate property: translates of a
    non-integer z hit D at most once.

    A structural pass first rejects stages with duplicate points or with
    distinct points that are small nonzero integer translates of each
    other at the working depth.  Then each sample aims one translate at a
    stage head on purpose (z = e - d - t) and scans all other (head, t)
    pairs exhaustively; any second hit is a reported violation.  Finite
    depth makes this evidence, not proof.
    """
    rng = random.Random(seed)
    modulus = level_product(SCALE5, depth)
    violations = []
    values = [head_index(p.head_at(depth)) for p in stage.points]
    for a in range(len(stage.points)):
        for b in range(a + 1, len(stage.points)):
            if points_equal(stage.points[a], stage.points[b]):
                violations.append({"kind": "duplicate-point", "pair": [a, b]})
                continue
            off = (values[b] - values[a]) % modulus
            t = off if off <= t_range else (off - modulus
                                            if modulus - off <= t_range else None)
            if t is not None and t != 0:
                violations.append({"kind": "integer-translate",
                                   "pair": [a, b], "t": t})
    heads_sorted = sorted(head_set(stage, depth))
    head_value = [head_index(OdometerHead(SCALE5, h)) for h in heads_sorted]
    class_of = {h: ci for ci, h in enumerate(heads_sorted)}
    small = {integer_head(t, SCALE5, depth).digits
             for t in range(-4 * t_range, 4 * t_range + 1)}
    checked = 0
    for _ in range(samples):
        ce = rng.randrange(len(heads_sorted))
        di = rng.randrange(len(stage.points))
        t = rng.randint(-t_range, t_range)
        zval = (head_value[ce] - values[di] - t) % modulus
        z = integer_head(zval, SCALE5, depth)
        deep = z.digits[depth // 2:]
        if len(set(deep)) == 1 or z.digits in small:
            continue  # integer-like sample, excluded (P2 covers those orbits)
        checked += 1
        source_class = class_of[stage.points[di].head_at(depth).digits]
        planted = translate_hits(z, stage, t_range)
        extra = [hit for hit in planted if hit != (source_class, t)]
        if extra:
            violations.append({"kind": "double-hit", "source": source_class,
                               "t": t, "z": list(z.digits), "others": extra})
    return {"schema": 1, "stage": stage.index, "depth": depth,
            "t_range": t_range, "samples": samples, "checked": checked,
            "seed": seed, "violations": violations}


# ---------------------------------------------------------------------------
# the level family over Z_2


class LevelFamily:
    """Memoized evaluator for l^n_i with l^1_i given by the first row,
    l^{n+1}_{2i} = l^n_{i + i_n} and the odd entries the midpoints; the
    midpoint rule must stay integral, which is asserted at every use.
    Shift offsets are i_n = 2^(n-1) and the times are t_n = 2^(l^n_0)."""

    def __init__(self, first_row=None):
        self._first = first_row or (lambda i: 2 ** i - 1)
        self._memo = {}

    def offset(self, n: int) -> int:
        return 2 ** (n - 1)

    def l(self, n: int, i: int) -> int:
        if n < 1 or i < 0:
            raise ValidationError("need n >= 1 and i >= 0")
        key = (n, i)
        if key in self._memo:
            return self._memo[key]
        if n == 1:
            val = self._first(i)
        else:
            j, odd = divmod(i, 2)
            lo = self.l(n - 1, j + self.offset(n - 1))
            if odd:
                hi = self.l(n - 1, j + 1 + self.offset(n - 1))
                if (lo + hi) % 2:
                    raise ValidationError(
                        f"midpoint rule not integral at l^{n}_{i}")
                val = (lo + hi) // 2
            else:
                val = lo
        self._memo[key] = val
        return val

    def time(self, n: int) -> int:
        return 2 ** self.l(n, 0)

    def row(self, n: int, count: int) -> list[int]:
        return [self.l(n, i) for i in range(count)]


def build_level_family() -> LevelFamily:
    return LevelFamily()


# ---------------------------------------------------------------------------
# binary languages


class FullShift:
    """All binary words; every word is right special."""

    name = "full"

    def words(self, n: int) -> frozenset:
        import itertools
        return frozenset("".join(w) for w in itertools.product("ab", repeat=n))

    def extensions(self, w: str) -> str:
        return "ab"


class SturmianFibonacci:
    """Factors of the Fibonacci substitution a -> ab, b -> a; the one
    permitted non-constant-length substitution, quarantined here as a
    language source.  Complexity n + 1, one right-special word per length."""

    name = "sturmian"

    def __init__(self, max_len: int = 64):
        w = "a"
        while len(w) < 4 * max_len + 16:
            w = w.replace("a", "A").replace("b", "a").replace("A", "ab")
        longer = w.replace("a", "A").replace("b", "a").replace("A", "ab")
        self._factors = {}
        for n in range(1, max_len + 1):
            cur = frozenset(w[i:i + n] for i in range(len(w) - n + 1))
            nxt = frozenset(longer[i:i + n] for i in range(len(longer) - n + 1))
            if cur != nxt:
                raise ValidationError("Fibonacci factor set did not stabilize")
            self._factors[n] = cur
        self.max_len = max_len

    def words(self, n: int) -> frozenset:
        if n not in self._factors:
            raise ValidationError(f"factors only tabulated up to {self.max_len}")
        return self._factors[n]

    def extensions(self, w: str) -> str:
        longer = self.words(len(w) + 1)
        return "".join(c for c in "ab" if w + c in longer)


class UserWordList:
    """An explicit right-extendable language given as words per length."""

    name = "user"

    def __init__(self, words_by_length: dict):
        self._words = {n: frozenset(ws) for n, ws in words_by_length.items()}
        if self._words.get(1) != frozenset({"a", "b"}):
            raise LanguageError("a usable language has L^1 = {a, b}")
        for n in sorted(self._words):
            if n + 1 not in self._words:
                break
            for w in self._words[n]:
                if not any(w + c in self._words[n + 1] for c in "ab"):
                    raise LanguageError(f"{w!r} has no right extension")

    def words(self, n: int) -> frozenset:
        if n not in self._words:
            raise LanguageError(f"no words of length {n} supplied")
        return self._words[n]

    def extensions(self, w: str) -> str:
        longer = self._words.get(len(w) + 1)
        if longer is None:
            raise LanguageError("word list exhausted")
        return "".join(c for c in "ab" if w + c in longer)


# ---------------------------------------------------------------------------
# the f-family


@dataclass(frozen=True)
class FFamily:
    handle_name: str
    n_max: int
    horizon: int
    tables: tuple[str, ...]     # tables[n-1][x] = f^n(x) for x < horizon

    def value(self, n: int, x: int) -> str:
        if not 1 <= n <= self.n_max:
            raise ValidationError(f"f^{n} not built (n_max {self.n_max})")
        if x >= self.horizon:
            raise HorizonError(f"f^{n}({x}) beyond horizon {self.horizon}")
        return self.tables[n - 1][x]

    def word(self, n: int, i: int, lf: LevelFamily) -> str:
        lo, hi = lf.l(n, i), lf.l(n, i + 1)
        if hi > self.horizon:
            raise HorizonError(f"interval [{lo},{hi}) beyond horizon")
        return "".join(self.tables[k][lo] for k in range(n))

    def to_json(self):
        # the choices that pin one shift among the family
        return {"language": self.handle_name, "n_max": self.n_max,
                "horizon": self.horizon,
                "choices": {"f1": "alternating", "below_domain": "a"}}


def build_f_family(handle, n_max: int, horizon: int,
                   lf: LevelFamily | None = None) -> FFamily:
    """The constructive recursion: f^1 alternates a, b on consecutive
    first-row intervals; f^{N+1} splits the interval pair of a right
    special word a-then-b and otherwise copies the unique extension;
    below its domain it is the constant a."""
    lf = lf or build_level_family()
    if horizon <= lf.l(n_max, 1):
        raise HorizonError("horizon too small for the requested levels")
    tables = []
    f1 = ["a"] * horizon
    i = 0
    while lf.l(1, i) < horizon:
        lo, hi = lf.l(1, i), min(lf.l(1, i + 1), horizon)
        f1[lo:hi] = [("a" if i % 2 == 0 else "b")] * (hi - lo)
        i += 1
    tables.append("".join(f1))
    for n in range(1, n_max):
        nxt = ["a"] * horizon   # fixed below-domain extension
        j = 0
        while True:
            a = lf.l(n + 1, 2 * j)
            if a >= horizon:
                break
            mid = lf.l(n + 1, 2 * j + 1)
            b = lf.l(n + 1, 2 * j + 2)
            i = j + lf.offset(n)
            w = "".join(tables[k][lf.l(n, i)] for k in range(n))
            exts = handle.extensions(w)
            if not exts:
                raise LanguageError(f"{w!r} has no right extension")
            if len(exts) == 2:
                nxt[a:min(mid, horizon)] = "a" * (min(mid, horizon) - a)
                if mid < horizon:
                    nxt[mid:min(b, horizon)] = "b" * (min(b, horizon) - mid)
            else:
                nxt[a:min(b, horizon)] = exts[0] * (min(b, horizon) - a)
            j += 1
        tables.append("".join(nxt))
    return FFamily(getattr(handle, "name", "user"), n_max, horizon, tuple(tables))


# ---------------------------------------------------------------------------
# evaluation and realization over Z_2


def f6_eval(z: OdometerHead, fam: FFamily, lf: LevelFamily) -> str:
    """The second-family semicocycle at a binary head: inside the support
    cylinder of t_n (zeros below the 1-bit of t_n) the value is
    f^n(common head length with t_n); elsewhere it is a.

    The lowest set bit of z decides which support, if any, contains z; the
    head length with t_n is then one less than the second set bit.
    """
    if z.scale != SCALE6:
        raise ValidationError("second-family heads live over Z_2")
    nonzero = [k + 1 for k, d in enumerate(z.digits) if d]
    if not nonzero:
        raise DepthError("all digits zero: membership undecidable at this depth")
    p = nonzero[0]
    n = 1
    while lf.l(n, 0) < p - 1:
        n += 1
    if lf.l(n, 0) != p - 1:
        return "a"
    if len(nonzero) < 2:
        raise DepthError(
            f"inside the level-{n} support but the head length is unresolved")
    L = nonzero[1] - 1
    return fam.value(n, L)


def realize_prefix(y: str, fam: FFamily, lf: LevelFamily,
                   zhat: OdometerHead, handle=None):
    """(t_w, letters): a translation t_w such that the shifted base orbit
    reads y along the times t_1..t_N, checked by direct evaluation.

    The interval index i >= 1 with word y is taken from the family table
    (i = 0 would collide with the 1-bit of t_N); t_w is the smallest
    positive integer making the first l^N_i digits of t_w + zhat zero with
    the next digit nonzero.
    """
    n = len(y)
    if n < 1:
        raise ValidationError("need a non-empty word")
    if set(y) - {"a", "b"}:
        raise LanguageError("words are over the letters a, b")
    if handle is not None and y not in handle.words(n):
        raise LanguageError(f"{y!r} is not in the level-{n} language")
    i = 1
    found = None
    while True:
        try:
            w = fam.word(n, i, lf)
        except HorizonError:
            break
        if w == y:
            found = i
            break
        i += 1
    if found is None:
        raise LanguageError(
            f"{y!r} was not realized by any level-{n} interval within the horizon")
    lo = lf.l(n, found)
    hi = lf.l(n, found + 1)
    depth_needed = hi + 2
    if zhat.depth < depth_needed:
        raise DepthError(f"zhat must have depth > {hi + 1}")
    deep = zhat.digits[zhat.depth // 2:]
    if len(set(deep)) == 1:
        raise PreconditionError("zhat looks eventually constant at this depth")
    zval = 0
    for k in range(lo):
        zval += zhat.digits[k] << k
    base = (-zval) % (1 << lo)
    t_w = None
    for extra in range(3):
        cand = base + (extra << lo)
        if cand <= 0:
            continue
        shifted = add_integer(zhat, cand)
        if shifted.digits[lo]:
            t_w = cand
            break
    if t_w is None:
        raise ValidationError("no small positive translation found")  # unreachable
    letters = []
    for k in range(1, n + 1):
        z = add_integer(zhat, t_w + lf.time(k))
        letters.append(f6_eval(z, fam, lf))
    return t_w, "".join(letters)


def default_zhat6(depth: int) -> OdometerHead:
    """The documented default base point over Z_2: alternating digits
    0, 1, 0, 1, ... (manifestly non-integer)."""
    return OdometerHead(SCALE6, tuple(k % 2 for k in range(depth)))


def default_zhat5(depth: int) -> OdometerHead:
    """The documented default base point over Z_((4^n)): every digit 2 (no
    D-point carries a digit 2 at level 1)."""
    return OdometerHead(SCALE5, tuple(2 for _ in range(depth)))
