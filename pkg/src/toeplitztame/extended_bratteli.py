"""Ordered Bratteli data with the equal path number property, telescoping,
the extended diagram on letter subsets, extendability, thickness strata,
and double-path search.

A level morphism records, for one diagram level, the ordered edge data as
column maps from the upper alphabet to the lower one.  The extended
diagram has every nonempty subset as a vertex, with an edge from subset A
below to subset B above, labelled i, iff the i-th column maps B onto A.
Since column images never grow, a path eventually stays at one
cardinality; analysing each cardinality stratum separately is therefore
sound, and cycles in a stratum decide how many paths of that thickness
exist (none, countably many, or uncountably many).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import graphs
from .errors import ValidationError
from .substitution import ColumnMap, Substitution, substitution_power, validate

MAX_ALPHABET = 16
MAX_POWER_COLUMNS = 65536


def _vkey(s):
    return (len(s), tuple(sorted(s)))


@dataclass(frozen=True)
class LevelMorphism:
    """The ordered edge data of one level: columns[i] maps the upper
    alphabet into the lower one; there are exactly ``length`` edges with
    range v for every upper vertex v."""

    upper: tuple[str, ...]
    lower: tuple[str, ...]
    columns: tuple[ColumnMap, ...]

    def __post_init__(self):
        if not self.columns:
            raise ValidationError("a level needs at least one column")
        for col in self.columns:
            t = col.as_dict()
            if set(t) != set(self.upper):
                raise ValidationError("column not total on the upper alphabet")
            if not set(t.values()) <= set(self.lower):
                raise ValidationError("column image leaves the lower alphabet")
        covered = set()
        for col in self.columns:
            covered.update(col.as_dict().values())
        if covered != set(self.lower):
            raise ValidationError(
                "every lower vertex must be the source of some edge")

    @property
    def length(self) -> int:
        return len(self.columns)

    def image(self, i: int, letters) -> frozenset:
        return self.columns[i].image(letters)

    def to_json(self):
        rules = {v: "".join(col(v) for col in self.columns) for v in self.upper}
        return {"upper": list(self.upper), "lower": list(self.lower),
                "l": self.length, "rules": rules}


def morphism_from_substitution(theta: Substitution) -> LevelMorphism:
    cols = tuple(
        ColumnMap(i, tuple((a, theta.rule(a)[i]) for a in theta.alphabet))
        for i in range(theta.length))
    return LevelMorphism(theta.alphabet, theta.alphabet, cols)


def compose(first: LevelMorphism, second: LevelMorphism) -> LevelMorphism:
    """Telescope two consecutive levels (``first`` nearer the top): the
    composed column i + j * len(first) applies the deeper column j first."""
    if first.upper != second.lower:
        raise ValidationError("levels do not chain")
    cols = []
    for j in range(second.length):
        sj = second.columns[j].as_dict()
        for i in range(first.length):
            fi = first.columns[i].as_dict()
            idx = i + j * first.length
            cols.append(ColumnMap(idx, tuple(
                (a, fi[sj[a]]) for a in second.upper)))
    cols.sort(key=lambda c: c.index)
    return LevelMorphism(second.upper, first.lower, tuple(cols))


def morphism_power(m: LevelMorphism, power: int) -> LevelMorphism:
    if m.upper != m.lower:
        raise ValidationError("powers need a square morphism")
    if m.length ** power > MAX_POWER_COLUMNS:
        raise ValidationError(
            f"power {power} would need {m.length ** power} columns")
    out = m
    for _ in range(power - 1):
        out = compose(out, m)
    return out


@dataclass(frozen=True)
class DiagramSpec:
    """Stationary (one substitution repeated) or explicit (a finite list of
    level morphisms whose last entry repeats forever).  Every spec is thus
    eventually stationary, which keeps extendability and the stratum
    analysis exact rather than horizon-truncated."""

    kind: str
    substitution: Substitution | None = None
    levels: tuple[LevelMorphism, ...] = ()

    @staticmethod
    def stationary(theta) -> "DiagramSpec":
        theta = validate(theta)
        firsts = {theta.rule(a)[0] for a in theta.alphabet}
        lasts = {theta.rule(a)[-1] for a in theta.alphabet}
        if len(firsts) > 1 or len(lasts) > 1:
            raise ValidationError(
                "naive stationary order is only proper when all rule words "
                "share their first letter and share their last letter; "
                "supply an explicit morphism sequence instead")
        if len(theta.alphabet) > MAX_ALPHABET:
            raise ValidationError("alphabet too large for subset analysis")
        return DiagramSpec("stationary", substitution=theta)

    @staticmethod
    def explicit(levels) -> "DiagramSpec":
        levels = tuple(levels)
        if not levels:
            raise ValidationError("explicit spec needs at least one level")
        for a, b in zip(levels, levels[1:]):
            if a.upper != b.lower:
                raise ValidationError("consecutive level alphabets must match")
        tail = levels[-1]
        if tail.upper != tail.lower:
            raise ValidationError(
                "the repeated last morphism must be square (finite rank)")
        if any(len(m.upper) > MAX_ALPHABET for m in levels):
            raise ValidationError("alphabet too large for subset analysis")
        return DiagramSpec("explicit", levels=levels)

    def morphism(self, n: int) -> LevelMorphism:
        """Level-n morphism, n >= 1."""
        if self.kind == "stationary":
            return morphism_from_substitution(self.substitution)
        if n <= len(self.levels):
            return self.levels[n - 1]
        return self.levels[-1]

    def tail_morphism(self) -> LevelMorphism:
        if self.kind == "stationary":
            return morphism_from_substitution(self.substitution)
        return self.levels[-1]

    @property
    def rank(self) -> int:
        if self.kind == "stationary":
            return len(self.substitution.alphabet)
        return max(len(m.upper) for m in self.levels)

    def to_json(self):
        if self.kind == "stationary":
            return {"stationary": self.substitution.to_json()}
        return {"levels": [m.to_json() for m in self.levels]}

    @staticmethod
    def from_json(obj) -> "DiagramSpec":
        if "stationary" in obj:
            return DiagramSpec.stationary(validate(obj["stationary"]))
        levels = []
        for entry in obj["levels"]:
            if "rules" in entry:
                rules = entry["rules"]
                upper = tuple(entry.get("upper", sorted(rules)))
                lower = tuple(entry.get("lower", upper))
                cols = tuple(
                    ColumnMap(i, tuple((a, rules[a][i]) for a in upper))
                    for i in range(len(next(iter(rules.values())))))
            else:
                tables = entry["columns"]
                upper = tuple(entry.get("upper", sorted(tables[0])))
                lower = tuple(entry.get("lower", upper))
                cols = tuple(
                    ColumnMap(i, tuple((a, table[a]) for a in upper))
                    for i, table in enumerate(tables))
            levels.append(LevelMorphism(upper, lower, cols))
        return DiagramSpec.explicit(levels)


def telescope(spec: DiagramSpec, groups) -> DiagramSpec:
    """Compose consecutive levels in blocks; the final group repeats.
    Uniform groups on a stationary spec yield the substitution power."""
    groups = list(groups)
    if not groups or any(g < 1 for g in groups):
        raise ValidationError("groups must be positive")
    if spec.kind == "stationary":
        if all(g == groups[0] for g in groups):
            if groups[0] == 1:
                return spec
            return DiagramSpec.stationary(
                substitution_power(spec.substitution, groups[0]))
        base = morphism_from_substitution(spec.substitution)
        return DiagramSpec.explicit(
            tuple(morphism_power(base, g) for g in groups))
    out = []
    level = 1
    for g in groups:
        m = spec.morphism(level)
        for t in range(1, g):
            m = compose(m, spec.morphism(level + t))
        out.append(m)
        level += g
    return DiagramSpec.explicit(tuple(out))


def extended_image(m: LevelMorphism, i: int, letters) -> frozenset:
    """The extended-diagram edge relation: the image of an upper subset
    under one column."""
    s = frozenset(letters)
    if not s or not s <= set(m.upper):
        raise ValidationError("need a nonempty subset of the upper alphabet")
    return m.image(i, s)


# ---------------------------------------------------------------------------
# subset arcs and extendability


def _all_subsets(alphabet):
    letters = sorted(alphabet)
    subs = []
    for r in range(1, len(letters) + 1):
        subs.extend(frozenset(c) for c in itertools.combinations(letters, r))
    subs.sort(key=_vkey)
    return subs


def subset_arcs(m: LevelMorphism):
    """Arcs (T, image, label) for every nonempty upper subset T; an arc
    runs from the upper subset down to its image."""
    verts = _all_subsets(m.upper)
    arcs = [(t, m.image(i, t), i) for t in verts for i in range(m.length)]
    return verts, arcs


def _extendable_tail_sets(m: LevelMorphism) -> frozenset:
    """Subsets traversed by an infinite path in the stationary tail: those
    reachable, along arcs, from a cycle of the subset graph (cardinality
    is constant around any cycle, so cycles never truncate)."""
    verts, arcs = subset_arcs(m)
    on_cycle = set()
    for row in graphs.component_census(verts, [(t, s, i) for t, s, i in arcs]):
        if row["n_internal_edges"] >= 1:
            on_cycle.update(row["vertices"])
    return frozenset(graphs.reachable_from(
        verts, [(t, s, i) for t, s, i in arcs], sorted(on_cycle, key=_vkey)))


def extendable_vertices(spec: DiagramSpec, level: int, horizon: int = 1) -> frozenset:
    """Subsets at the given level traversed by an infinite path.

    Upward reachability from the top vertex is automatic (every subset has
    arbitrary finite ancestries in the extended diagram); the downward
    condition is exact because every spec here is eventually stationary,
    so the horizon argument never truncates the answer.
    """
    if horizon < 1:
        raise ValidationError("horizon must be >= 1")
    if level < 1:
        raise ValidationError("levels are numbered from 1")
    tail_start = 1 if spec.kind == "stationary" else len(spec.levels)
    tail_ext = _extendable_tail_sets(spec.tail_morphism())
    if level >= tail_start:
        return tail_ext
    ext = set(tail_ext)
    for n in range(tail_start - 1, level - 1, -1):
        m = spec.morphism(n)
        lower_ext = set()
        for t in ext:
            for i in range(m.length):
                lower_ext.add(m.image(i, t))
        ext = lower_ext
    return frozenset(ext)


def _stratum_graph(m: LevelMorphism, k: int):
    """Extendable cardinality-k subsets with the cardinality-preserving
    arcs between them."""
    ext = _extendable_tail_sets(m)
    verts = sorted((s for s in ext if len(s) == k), key=_vkey)
    vset = set(verts)
    arcs = []
    for t in verts:
        for i in range(m.length):
            s = m.image(i, t)
            if len(s) == k and s in vset:
                arcs.append((t, s, i))
    return verts, arcs


def essential_thickness(spec: DiagramSpec) -> int:
    """Largest k whose thickness-k path set is uncountable: the stratum of
    extendable cardinality-k subsets must carry two distinct cycles
    through a common vertex.  Defaults to 1."""
    m = spec.tail_morphism()
    for k in range(len(m.upper), 1, -1):
        verts, arcs = _stratum_graph(m, k)
        if verts and graphs.shared_cycle_vertex(verts, arcs) is not None:
            return k
    return 1


def thickness_census(spec: DiagramSpec, depth: int = 8) -> dict:
    """Per-cardinality classification of the thickness-k path sets, with
    depth-limited chain counts as enumeration evidence.

    none: the stratum is acyclic (chains die out).
    at-most-countable: cycles exist but no vertex lies on two.
    uncountable: two distinct cycles share a vertex.
    """
    m = spec.tail_morphism()
    out = {}
    for k in range(1, len(m.upper) + 1):
        verts, arcs = _stratum_graph(m, k)
        if not verts or not graphs.has_any_cycle(verts, arcs):
            cls = "none"
        elif graphs.shared_cycle_vertex(verts, arcs) is not None:
            cls = "uncountable"
        else:
            cls = "at-most-countable"
        counts = []
        ways = {v: 1 for v in verts}
        for _ in range(depth):
            nxt = {v: 0 for v in verts}
            for t, s, _lab in arcs:
                nxt[s] += ways[t]
            ways = nxt
            counts.append(sum(ways.values()))
        out[k] = {"classification": cls, "chain_counts": tuple(counts)}
    return out


# ---------------------------------------------------------------------------
# double paths


@dataclass(frozen=True)
class ParallelEdgeWitness:
    power: int
    upper: frozenset
    lower: frozenset
    labels: tuple[int, int]
    cardinality: int

    def to_json(self):
        return {"power": self.power, "upper": sorted(self.upper),
                "lower": sorted(self.lower), "labels": list(self.labels),
                "cardinality": self.cardinality}


def power_column_maps(m: LevelMorphism, power: int):
    """All composed column maps of the telescoped power, as tuples of
    images over the upper alphabet (alphabet order); index arithmetic puts
    the deepest level in the most significant digit."""
    if m.upper != m.lower:
        raise ValidationError("powers need a square morphism")
    if m.length ** power > MAX_POWER_COLUMNS:
        raise ValidationError(
            f"power {power} would need {m.length ** power} columns")
    letters = list(m.upper)
    pos = {a: t for t, a in enumerate(letters)}
    base = [tuple(m.columns[i].as_dict()[a] for a in letters)
            for i in range(m.length)]
    maps = list(base)
    width = m.length
    for _ in range(power - 1):
        # index c + j * width composes the existing map c after the new,
        # deeper column j: (M^{t+1})_{c + j l^t} = (M^t)_c o M_j
        nxt = [None] * (len(maps) * m.length)
        for j in range(m.length):
            f = base[j]
            for c, g in enumerate(maps):
                nxt[c + j * width] = tuple(
                    g[pos[f[t]]] for t in range(len(letters)))
        maps = nxt
        width *= m.length
    return letters, maps


def find_double_path(spec: DiagramSpec, k: int, max_power: int = 6):
    """Search telescoped powers for a pair of parallel edges at a
    cardinality-k vertex that genuinely extends to a double path.

    Two distinct composed columns sending A onto the same cardinality-k
    image B form a parallel edge pair; for an infinite double path the
    pair must recur, i.e. the arc A => B must lie on a cycle of the graph
    of parallel-edge pairs.  The first witness in (power, label pair,
    vertex) lexicographic order is returned; absence up to max_power is a
    report, not a proof that the system is not thick.
    """
    if k < 2:
        raise ValidationError("double paths need cardinality >= 2")
    m = spec.tail_morphism()
    if k > len(m.upper):
        return None
    ext = _extendable_tail_sets(m)
    kverts = sorted((s for s in ext if len(s) == k), key=_vkey)
    if not kverts:
        return None
    for power in range(1, max_power + 1):
        if m.length ** power > MAX_POWER_COLUMNS:
            break
        letters, maps = power_column_maps(m, power)
        pos = {a: t for t, a in enumerate(letters)}
        groups = {}
        for a_set in kverts:
            by_image = {}
            for c, g in enumerate(maps):
                img = frozenset(g[pos[a]] for a in a_set)
                if len(img) == k:
                    by_image.setdefault(img, []).append(c)
            groups[a_set] = {img: labs for img, labs in by_image.items()
                             if len(labs) >= 2}
        p_arcs = [(a, img, 0) for a, d in groups.items() for img in d]
        candidates = []
        for a_set, d in groups.items():
            for img, labs in d.items():
                for i1, i2 in itertools.combinations(labs, 2):
                    candidates.append((i1, i2, a_set, img))
        candidates.sort(key=lambda t: (t[0], t[1], _vkey(t[2])))
        for i1, i2, a_set, img in candidates:
            down = graphs.reachable_from(kverts, p_arcs, [img])
            if a_set in down:
                return ParallelEdgeWitness(power, a_set, img, (i1, i2), k)
    return None
