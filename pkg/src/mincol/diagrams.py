"""Combinatorial knot diagrams and the generators used throughout.

A diagram is a list of crossings over dense integer arc ids.  Each crossing
records the arc passing over and the two under-arcs (the under strand enters
as ``under_in`` and leaves as ``under_out``).  Planar embedding is implicit
in the generator templates and never checked globally; every computation in
this package is arc/crossing-local.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

ArcId = int


@dataclass(frozen=True)
class Crossing:
    """One crossing: ``under_out = 2*over - under_in`` is the coloring rule.

    The sign records handedness for diagram bookkeeping; Fox coloring does
    not depend on it.
    """

    over: ArcId
    under_in: ArcId
    under_out: ArcId
    sign: int = 1

    def __post_init__(self) -> None:
        if self.under_in == self.under_out:
            raise ValueError("a crossing cannot reuse one arc as both under-ends")
        if self.sign not in (-1, 1):
            raise ValueError(f"crossing sign must be +-1, got {self.sign}")


@dataclass(frozen=True)
class Diagram:
    """Closed diagram: ``arc_count`` arcs 0..arc_count-1, plus crossings.

    ``components`` partitions the arcs into knot components, each listed in
    traversal order.
    """

    arc_count: int
    crossings: tuple[Crossing, ...]
    components: tuple[tuple[ArcId, ...], ...] = field(default=())

    @property
    def arcs(self) -> range:
        return range(self.arc_count)

    def __post_init__(self) -> None:
        problems = validate_diagram(self)
        if problems:
            raise ValueError("invalid diagram: " + "; ".join(problems))


def _walk_components(arc_count: int, crossings: tuple[Crossing, ...]):
    """Partition arcs into components by following under_in -> under_out."""
    succ: dict[ArcId, ArcId] = {}
    for c in crossings:
        succ[c.under_in] = c.under_out
    seen: set[ArcId] = set()
    components = []
    for start in range(arc_count):
        if start in seen:
            continue
        comp = []
        a = start
        while a not in seen:
            seen.add(a)
            comp.append(a)
            a = succ.get(a, start)  # crossing-free circles close on themselves
        components.append(tuple(comp))
    return tuple(components)


def validate_diagram(d: Diagram) -> list[str]:
    """Every violated closed-diagram invariant, as human-readable strings.

    A closed diagram needs each arc to begin at exactly one undercrossing and
    end at exactly one (crossing-free circle arcs do neither).  Consequently a
    one-component diagram with at least one crossing has as many arcs as
    crossings.
    """
    problems: list[str] = []
    ins: dict[ArcId, int] = {}
    outs: dict[ArcId, int] = {}
    for c in d.crossings:
        for a in (c.over, c.under_in, c.under_out):
            if not 0 <= a < d.arc_count:
                problems.append(f"crossing {c} references dangling arc {a}")
        ins[c.under_in] = ins.get(c.under_in, 0) + 1
        outs[c.under_out] = outs.get(c.under_out, 0) + 1
    for a in range(d.arc_count):
        i, o = ins.get(a, 0), outs.get(a, 0)
        if i != o:
            problems.append(f"arc {a} ends at {i} undercrossings but starts at {o}")
        elif i > 1:
            problems.append(f"arc {a} is cut {i} times; arcs end at one undercrossing")
    if d.components:
        listed = sorted(a for comp in d.components for a in comp)
        if listed != list(range(d.arc_count)):
            problems.append("components do not partition the arc set")
    return problems


def _closed(arc_count: int, crossings: list[Crossing]) -> Diagram:
    return Diagram(arc_count, tuple(crossings), _walk_components(arc_count, tuple(crossings)))


@dataclass(frozen=True)
class BraidWord:
    """Word in the braid generators: letters are (generator index, sign)."""

    strand_count: int
    letters: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.strand_count < 1:
            raise ValueError(f"braid needs at least one strand, got {self.strand_count}")
        for idx, sign in self.letters:
            if not 1 <= idx < self.strand_count:
                raise ValueError(f"generator index {idx} out of range for {self.strand_count} strands")
            if sign not in (-1, 1):
                raise ValueError(f"letter sign must be +-1, got {sign}")

    @classmethod
    def power(cls, exponent: int, strand_count: int = 2, index: int = 1) -> "BraidWord":
        """sigma_index^exponent (negative exponent means inverse letters)."""
        sign = 1 if exponent >= 0 else -1
        return cls(strand_count, tuple((index, sign) for _ in range(abs(exponent))))


def braid_closure_diagram(b: BraidWord) -> Diagram:
    """Close a braid word into a diagram.

    Positive sigma_i takes the strand entering at position i+1 over the one
    at position i.  Arc ids follow creation order along the strands, and the
    closure merges each strand's final arc back into its initial one, so the
    result has dense ids numbered along the closure orientation.
    """
    n = b.strand_count
    positions = list(range(n))  # arc currently at each strand position
    next_arc = n
    raw: list[tuple[int, int, int, int]] = []
    for idx, sign in b.letters:
        left, right = positions[idx - 1], positions[idx]
        new = next_arc
        next_arc += 1
        if sign > 0:
            raw.append((right, left, new, 1))  # over, under_in, under_out
            positions[idx - 1], positions[idx] = right, new
        else:
            raw.append((left, right, new, -1))
            positions[idx - 1], positions[idx] = new, left
    # Closure: the arc leaving position j merges with the arc that entered it.
    parent = list(range(next_arc))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j in range(n):
        parent[find(positions[j])] = find(j)
    merged = [find(a) for a in range(next_arc)]
    used = sorted(set(merged))
    dense = {old: i for i, old in enumerate(used)}
    crossings = [
        Crossing(dense[merged[o]], dense[merged[i]], dense[merged[u]], s)
        for o, i, u, s in raw
    ]
    return _closed(len(used), crossings)


def torus_knot_diagram(p: int) -> Diagram:
    """Standard diagram of the (2,p) torus knot: closure of sigma_1^p."""
    if p < 3 or p % 2 == 0:
        raise ValueError(f"need an odd integer >= 3, got {p}")
    return braid_closure_diagram(BraidWord.power(p))


@dataclass(frozen=True)
class RationalKnotSpec:
    """Twist counts of a rational knot, e.g. (5, 2) or (4, -3)."""

    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coefficients:
            raise ValueError("rational knot spec needs at least one twist count")
        if any(a == 0 for a in self.coefficients):
            raise ValueError("twist counts must be nonzero")


class ContinuedFractionError(ZeroDivisionError):
    """Division by zero inside a nested fraction; ``depth`` locates it."""

    def __init__(self, depth: int):
        self.depth = depth
        super().__init__(f"nested fraction divides by zero at depth {depth}")


def continued_fraction(spec: RationalKnotSpec) -> Fraction:
    """The fraction 1/(a1 + 1/(a2 + ...)) of a rational knot, fully reduced.

    Its denominator (in lowest terms) is the knot determinant.
    """
    coeffs = spec.coefficients
    value = Fraction(coeffs[-1])
    for depth in range(len(coeffs) - 2, -1, -1):
        if value == 0:
            raise ContinuedFractionError(depth + 1)
        value = coeffs[depth] + 1 / value
    if value == 0:
        raise ContinuedFractionError(0)
    return 1 / value


def rational_twist_diagram(spec: RationalKnotSpec) -> Diagram:
    """Standard twist-region diagram of a rational knot.

    Twist regions alternate between the bottom pair and the right pair of
    tangle ends, first coefficient horizontal (bottom); the assembled tangle
    is closed by joining the two top ends and the two bottom ends.  The
    result has sum(|a_i|) crossings and determinant equal to the reduced
    denominator of ``continued_fraction(spec)``.
    """
    coeffs = spec.coefficients
    # Tangle ends hold (arc id); build on a scratch arc namespace, then merge.
    next_arc = 4
    nw, ne, sw, se = 0, 1, 2, 3
    raw: list[tuple[int, int, int, int]] = []

    def twist(a: int, b: int, positive: bool) -> tuple[int, int]:
        """Cross the strands ending at a and b; return the new ends."""
        nonlocal next_arc
        new = next_arc
        next_arc += 1
        if positive:
            raw.append((b, a, new, 1))
            return b, new
        raw.append((a, b, new, -1))
        return new, a

    for i, a in enumerate(coeffs):
        positive = a > 0
        for _ in range(abs(a)):
            if i % 2 == 0:
                sw, se = twist(sw, se, positive)
            else:
                ne, se = twist(ne, se, positive)
    # Numerator closure: nw-ne and sw-se become single arcs.
    parent = list(range(next_arc))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        parent[find(x)] = find(y)

    union(nw, ne)
    union(sw, se)
    merged = [find(a) for a in range(next_arc)]
    used = sorted(set(merged))
    dense = {old: i for i, old in enumerate(used)}
    crossings = [
        Crossing(dense[merged[o]], dense[merged[i]], dense[merged[u]], s)
        for o, i, u, s in raw
    ]
    return _closed(len(used), crossings)


def pd_serialize(d: Diagram) -> str:
    """Text form: ``ARCS <n>`` then one ``X <over> <in> <out> <sign>`` per line."""
    lines = [f"ARCS {d.arc_count}"]
    lines += [f"X {c.over} {c.under_in} {c.under_out} {c.sign:+d}" for c in d.crossings]
    return "\n".join(lines) + "\n"


def pd_parse(text: str) -> Diagram:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("ARCS "):
        raise ValueError("PD text must start with an 'ARCS <n>' header")
    arc_count = int(lines[0].split()[1])
    crossings = []
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] != "X" or len(parts) != 5:
            raise ValueError(f"bad PD line: {ln!r}")
        o, i, u, s = map(int, parts[1:])
        crossings.append(Crossing(o, i, u, s))
    return _closed(arc_count, crossings)
