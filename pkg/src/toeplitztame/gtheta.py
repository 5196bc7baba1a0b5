"""The subset graph of a constant-length substitution and everything it
decides: the two-cycle tameness criterion, singular-orbit bounds,
discontinuity membership, fibre windows and the canonical semicocycle.

Vertices are the letter sets theta_{w_1}...theta_{w_k}(A) of cardinality
> 1, plus the full alphabet; there is an edge from B to A labelled i iff
theta_i(A) = B.  Infinite paths in this graph parameterize the points of
the maximal equicontinuous factor with a non-singleton fibre.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import graphs
from .errors import NotPrimitive, PeriodicSubstitution, PureBaseError, \
    StabilizationError, ValidationError
from .odometer import OdometerHead, head_index
from .substitution import (Substitution, column_image, expand,
                           height_and_pure_base, is_aperiodic, is_primitive,
                           shortest_collapsing_word, validate)

TAME = "tame"
NON_TAME = "non-tame"
NOT_ALMOST_AUTOMORPHIC = "not-almost-automorphic"
INCONCLUSIVE = "inconclusive"


def _vertex_key(s):
    return (len(s), tuple(sorted(s)))


@dataclass(frozen=True)
class SubsetGraph:
    """Vertices in canonical order (size, then letters); edges are
    (source, target, label) with source = theta_label(target)."""

    alphabet: tuple[str, ...]
    vertices: tuple[frozenset, ...]
    edges: tuple[tuple[frozenset, frozenset, int], ...]

    def outgoing(self, v):
        return [e for e in self.edges if e[0] == v]

    def extendable(self) -> frozenset:
        """Vertices traversed by an infinite path, i.e. vertices that can
        reach a cycle along the edge direction."""
        on_cycle = set()
        census = graphs.component_census(self.vertices, self.edges)
        for row in census:
            if row["n_internal_edges"] >= 1:
                on_cycle.update(row["vertices"])
        # walk the edges backwards: v is extendable iff a cycle is reachable
        reach = graphs.reachable_from(
            self.vertices,
            [(d, s, lab) for s, d, lab in self.edges],
            sorted(on_cycle, key=_vertex_key))
        return frozenset(reach)

    def to_json(self):
        return {
            "alphabet": list(self.alphabet),
            "vertices": [sorted(v) for v in self.vertices],
            "edges": [[sorted(s), sorted(d), lab] for s, d, lab in self.edges],
            "extendable": [sorted(v) for v in
                           sorted(self.extendable(), key=_vertex_key)],
        }


@dataclass(frozen=True)
class CycleCensus:
    components: tuple
    shared_vertex: frozenset | None
    cycles: tuple | None
    cycles_truncated: bool

    @property
    def uncountable(self) -> bool:
        return self.shared_vertex is not None

    def to_json(self):
        return {
            "components": [
                {"vertices": [sorted(v) for v in row["vertices"]],
                 "n_vertices": row["n_vertices"],
                 "n_internal_edges": row["n_internal_edges"]}
                for row in self.components],
            "shared_vertex": sorted(self.shared_vertex) if self.shared_vertex else None,
            "n_simple_cycles": None if self.cycles is None else len(self.cycles),
            "cycles_truncated": self.cycles_truncated,
        }


def build_gtheta(theta_prime: Substitution) -> SubsetGraph:
    """Closure of {A} under single column maps, discarding singletons.
    Expects a pure base (height 1); the full alphabet is always a vertex
    even when nothing maps onto it."""
    full = frozenset(theta_prime.alphabet)
    vertices = {full}
    stack = [full]
    while stack:
        s = stack.pop()
        for i in range(theta_prime.length):
            img = column_image(theta_prime, i, s)
            if len(img) > 1 and img not in vertices:
                vertices.add(img)
                stack.append(img)
    ordered = tuple(sorted(vertices, key=_vertex_key))
    edges = []
    for a in ordered:
        for i in range(theta_prime.length):
            b = column_image(theta_prime, i, a)
            if len(b) > 1:
                edges.append((b, a, i))
    edges.sort(key=lambda e: (_vertex_key(e[0]), _vertex_key(e[1]), e[2]))
    return SubsetGraph(theta_prime.alphabet, ordered, tuple(edges))


def two_cycles_share_vertex(g: SubsetGraph, enumerate_cap: int = 10_000) -> CycleCensus:
    """SCC decomposition plus the multigraph criterion: some component has
    more internal edges than vertices iff two distinct cycles share a
    vertex.  Simple cycles are enumerated as a cross-check when the graph
    is small."""
    census = graphs.component_census(g.vertices, g.edges)
    shared = graphs.shared_cycle_vertex(g.vertices, g.edges)
    cycles = None
    truncated = False
    if len(g.vertices) <= 12:
        cycles, truncated = graphs.simple_cycles(g.vertices, g.edges, enumerate_cap)
    return CycleCensus(tuple(census), shared,
                       None if cycles is None else tuple(cycles), truncated)


def cycle_count_upper_bound(g: SubsetGraph) -> int:
    """Number of simple cycles when no two share a vertex; an upper bound
    for the number of singular orbits."""
    if graphs.shared_cycle_vertex(g.vertices, g.edges) is not None:
        raise ValidationError("cycle count is infinite: two cycles share a vertex")
    count = 0
    for row in graphs.component_census(g.vertices, g.edges):
        if row["n_internal_edges"] >= 1:
            # no shared vertex forces n_internal_edges == n_vertices: one cycle
            count += 1
    return count


# ---------------------------------------------------------------------------
# analysis report


@dataclass(frozen=True)
class AnalysisReport:
    substitution: Substitution
    primitive: bool
    aperiodic: bool
    aperiodicity_bound: int
    height: int | None
    pure_base: Substitution | None
    blocks: tuple | None
    coincidence: tuple | None
    graph: SubsetGraph | None
    census: CycleCensus | None
    verdict: str
    reason: str | None
    shared_vertex: frozenset | None
    cycle_bound: int | None

    def to_json(self):
        return {
            "schema": 1,
            "substitution": self.substitution.to_json(),
            "primitive": self.primitive,
            "aperiodic": self.aperiodic,
            "aperiodicity_bound": self.aperiodicity_bound,
            "height": self.height,
            "pure_base": None if self.pure_base is None else self.pure_base.to_json(),
            "blocks": None if self.blocks is None else list(self.blocks),
            "coincidence": None if self.coincidence is None else list(self.coincidence),
            "gtheta": None if self.graph is None else self.graph.to_json(),
            "cycle_census": None if self.census is None else self.census.to_json(),
            "verdict": self.verdict,
            "reason": self.reason,
            "shared_vertex": sorted(self.shared_vertex) if self.shared_vertex else None,
            "singular_orbit_upper_bound": self.cycle_bound,
        }


def tameness_verdict(theta) -> AnalysisReport:
    """Full pipeline: validate, primitivity, aperiodicity, height and pure
    base, coincidence, subset graph, cycle census.

    Imprimitive or periodic inputs raise; bound failures in the height or
    pure-base construction yield an inconclusive verdict rather than a
    guess.  A substitution is tame iff it has a coincidence and no vertex
    of the subset graph lies on two distinct cycles.
    """
    theta = validate(theta)
    if not is_primitive(theta):
        raise NotPrimitive("substitution is not primitive")
    aperiodic, bound = is_aperiodic(theta)
    if not aperiodic:
        raise PeriodicSubstitution(
            f"substitution shift is periodic (complexity bound {bound})")
    try:
        h, theta_prime, blocks = height_and_pure_base(theta)
    except (StabilizationError, PureBaseError) as exc:
        return AnalysisReport(theta, True, True, bound, None, None, None,
                              None, None, None, INCONCLUSIVE, str(exc), None, None)
    witness = shortest_collapsing_word(theta_prime)
    graph = build_gtheta(theta_prime)
    census = two_cycles_share_vertex(graph)
    if witness is None:
        verdict, reason = NOT_ALMOST_AUTOMORPHIC, "no coincidence"
    elif census.shared_vertex is not None:
        verdict = NON_TAME
        reason = "two distinct cycles share the vertex {%s}" % ",".join(
            sorted(census.shared_vertex))
    else:
        verdict, reason = TAME, None
    bound_cycles = None
    if census.shared_vertex is None:
        bound_cycles = cycle_count_upper_bound(graph)
    return AnalysisReport(theta, True, True, bound, h, theta_prime, blocks,
                          witness, graph, census, verdict, reason,
                          census.shared_vertex, bound_cycles)


# ---------------------------------------------------------------------------
# discontinuity set and fibre windows


def discontinuity_membership(h: OdometerHead, theta_prime: Substitution) -> bool:
    """True iff the subset graph carries a path with successive labels
    z_1..z_n, i.e. all the partial images theta_{z_k}...theta_{z_n}(A)
    have more than one letter.  Necessary for any extension of the head to
    be a discontinuity point; exact in the limit of the depth."""
    if h.depth < 1:
        raise ValidationError("head depth must be >= 1")
    _check_scale(h, theta_prime)
    images = [frozenset(theta_prime.alphabet)]
    for z in reversed(h.digits):
        images.append(column_image(theta_prime, z, images[-1]))
    return all(len(s) > 1 for s in images[1:])


@dataclass(frozen=True)
class FiberWord:
    vertex: str
    text: str
    offset: int


def fiber_window(h: OdometerHead, theta: Substitution,
                 size_limit: int = 100_000_000) -> list[FiberWord]:
    """For each letter v, the word theta^n(v) placed on
    [-z^(n), l^n - z^(n)) with z^(n) the head index; the distinct words
    bound the fibre over any point extending the head.  Use window_letter
    for depths whose words would exceed the size limit."""
    _check_scale(h, theta)
    n = h.depth
    if theta.length ** n > size_limit:
        raise ValidationError(
            f"window of {theta.length ** n} symbols exceeds the size limit; "
            "read single positions with window_letter instead")
    z = head_index(h)
    return [FiberWord(v, expand(theta, v, n), -z) for v in theta.alphabet]


def window_letter(h: OdometerHead, theta: Substitution, vertex: str, position: int) -> str:
    """Letter of the fibre-window word of ``vertex`` at a shift position,
    evaluated by digit descent instead of materializing the word."""
    from .substitution import letter_in_power
    _check_scale(h, theta)
    z = head_index(h)
    return letter_in_power(theta, vertex, h.depth, z + position)


def canonical_semicocycle_eval(h: OdometerHead, theta: Substitution):
    """The letter at position 0 when all fibre words agree there,
    equivalently when theta_{z_1} o ... o theta_{z_n} collapses the
    alphabet; None while undetermined at this depth."""
    if h.depth < 1:
        raise ValidationError("head depth must be >= 1")
    _check_scale(h, theta)
    s = frozenset(theta.alphabet)
    for z in reversed(h.digits):
        s = column_image(theta, z, s)
    if len(s) == 1:
        return next(iter(s))
    return None


def _check_scale(h: OdometerHead, theta: Substitution):
    for n in range(1, h.depth + 1):
        if h.scale.modulus(n) != theta.length:
            raise ValidationError(
                "head scale does not match the substitution length")


# ---------------------------------------------------------------------------
# DOT export


def to_dot(g: SubsetGraph) -> str:
    """Edge labels as attributes; vertices with no outgoing edge (hence on
    no infinite path) drawn grey."""
    ext = g.extendable()

    def name(v):
        return "{%s}" % ",".join(sorted(v))

    lines = ["digraph gtheta {", "  rankdir=LR;"]
    for v in g.vertices:
        attrs = ['label="%s"' % name(v)]
        if v not in ext:
            attrs.append("color=grey")
            attrs.append("fontcolor=grey")
        lines.append('  "%s" [%s];' % (name(v), ", ".join(attrs)))
    for s, d, lab in g.edges:
        lines.append('  "%s" -> "%s" [label="%d"];' % (name(s), name(d), lab))
    lines.append("}")
    return "\n".join(lines) + "\n"
