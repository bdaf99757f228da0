"""Color-reducing rewrites on colored torus-knot diagrams.

The engine plays the reduction game on T(2,p): starting from the standard
p-colored diagram, each round grabs every remaining twist block and folds
it, throwing one of the block's own arcs across the two strands as a new
overpass and reusing the small colors for the far half of the block.  After
l_p rounds a final local maneuver removes color k1, leaving a valid
nontrivial coloring with t_p + 2*l_p - 1 colors.

Two layers cooperate: a symbolic :class:`BlockState` tracks the palette
ledger round by round (which colors each round removes, and why), while the
rewrites below materialize an actual crossing-list diagram for every stage
so that the coloring checker, the determinant, and the coloring-count
invariants can certify the output independently of the bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass

from mincol.coloring import (
    FoxColoring,
    fox_violations,
    is_nontrivial,
    palette,
)
from mincol.diagrams import Crossing, Diagram, pd_parse, pd_serialize, torus_knot_diagram
from mincol.coloring import coloring_parse, coloring_serialize
from mincol.lower_halves import is_prime, lh_sequence, teneva_bound


@dataclass(frozen=True)
class ColoredDiagram:
    """A diagram together with a verified Fox coloring."""

    diagram: Diagram
    coloring: FoxColoring

    def __post_init__(self) -> None:
        bad = fox_violations(self.diagram, self.coloring)
        if bad:
            raise ValueError("coloring is not a Fox coloring: " + "; ".join(bad))

    @property
    def palette(self) -> frozenset[int]:
        return palette(self.coloring).colors


def standard_colored_torus(p: int) -> ColoredDiagram:
    """T(2,p) with its standard rainbow coloring: arc i gets color i."""
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"need an odd prime >= 3, got {p}")
    d = torus_knot_diagram(p)
    return ColoredDiagram(d, FoxColoring.of(p, range(p)))


# ---------------------------------------------------------------------------
# mutable working copy of a colored diagram


class _Work:
    """Crossings as mutable [over, under_in, under_out, sign] over loose arc ids."""

    def __init__(self, crossings, colors, modulus: int):
        self.crossings = [list(c) for c in crossings]
        self.colors = dict(colors)
        self.modulus = modulus
        self._next = max(self.colors, default=-1) + 1

    @classmethod
    def of(cls, cd: ColoredDiagram) -> "_Work":
        return cls(
            [[c.over, c.under_in, c.under_out, c.sign] for c in cd.diagram.crossings],
            dict(enumerate(cd.coloring.assignment)),
            cd.coloring.modulus.n,
        )

    def new_arc(self, color: int) -> int:
        a = self._next
        self._next += 1
        self.colors[a] = color % self.modulus
        return a

    def death_of(self, arc: int) -> int | None:
        """Index of the crossing where the arc dives under, if any."""
        for i, c in enumerate(self.crossings):
            if c[1] == arc:
                return i
        return None

    def remove_crossing(self, cross: list) -> None:
        for i, c in enumerate(self.crossings):
            if c is cross:
                del self.crossings[i]
                return
        raise KeyError("crossing not present")

    def to_colored(self) -> ColoredDiagram:
        used: list[int] = []
        seen: set[int] = set()
        for c in self.crossings:
            for a in (c[0], c[1], c[2]):
                if a not in seen:
                    seen.add(a)
                    used.append(a)
        for a in sorted(self.colors):
            if a not in seen:
                seen.add(a)
                used.append(a)
        dense = {a: i for i, a in enumerate(used)}
        crossings = tuple(
            Crossing(dense[c[0]], dense[c[1]], dense[c[2]], c[3]) for c in self.crossings
        )
        from mincol.diagrams import _walk_components

        diagram = Diagram(len(used), crossings, _walk_components(len(used), crossings))
        coloring = FoxColoring.of(self.modulus, [self.colors[a] for a in used])
        return ColoredDiagram(diagram, coloring)


# ---------------------------------------------------------------------------
# twist chains and the fold rewrite


def _chains_of(crossings) -> list[list[int]]:
    dies_at = {c[1]: i for i, c in enumerate(crossings)}
    succ: dict[int, int] = {}
    pred: dict[int, int] = {}
    for i, c in enumerate(crossings):
        j = dies_at.get(c[0])
        if j is not None and crossings[j][0] == c[2]:
            succ[i] = j
            pred[j] = i
    chains = []
    visited: set[int] = set()
    for start in range(len(crossings)):
        if start in visited or start in pred:
            continue
        chain = [start]
        visited.add(start)
        while chain[-1] in succ:
            chain.append(succ[chain[-1]])
            visited.add(chain[-1])
        chains.append(chain)
    for start in range(len(crossings)):  # leftover cycles
        if start in visited or start not in succ:
            continue
        chain = [start]
        visited.add(start)
        while succ[chain[-1]] != start:
            chain.append(succ[chain[-1]])
            visited.add(chain[-1])
        chains.append(chain)
    return [ch for ch in chains if len(ch) > 1]


def find_twist_chains(cd: ColoredDiagram) -> list[list[int]]:
    """Maximal twist chains, as lists of crossing indices.

    Crossing Y continues crossing X when the strand leaving X under passes
    over Y while the strand leaving X over dives at Y.  A cyclic chain (the
    standard closed twist) is returned once, cut arbitrarily.
    """
    return _chains_of(
        [(c.over, c.under_in, c.under_out) for c in cd.diagram.crossings]
    )


def _fold_work(
    work: _Work, xs: list[list], dissolve_pos: int, reflect_down: bool | None
) -> None:
    """In-place fold of the chain given as crossing objects ``xs``."""
    p = work.modulus
    s = dissolve_pos
    if not 1 <= s <= len(xs) - 2:
        raise ValueError("dissolve position must be interior to the chain")
    axis = xs[s][0]
    a = work.colors[axis]

    def refl(c: int) -> int:
        return (2 * a - c) % p

    if reflect_down is None:
        # Chain colors form a progression; reflect the half heading away
        # from the wrap-arc junctions (the larger over-colors).
        reflect_down = work.colors[xs[s + 1][0]] > work.colors[xs[s - 1][0]]
    zone = xs[s + 1 :] if reflect_down else xs[:s]
    if len(zone) < 2:
        raise ValueError("reflected zone needs at least two crossings")

    zone_arcs: set[int] = set()
    for c in zone:
        zone_arcs.update((c[0], c[1], c[2]))

    if reflect_down:
        boundary = (zone[-1][0], zone[-1][2])  # arcs continuing downstream
        beta, gamma = xs[s][1], xs[s][2]
        assert gamma == zone[0][0]
    else:
        boundary = (zone[0][1], zone[0][0])  # arcs arriving from upstream
        beta, gamma = xs[s][2], xs[s][1]
        assert gamma == zone[-1][0]
    if work.colors[beta] != refl(work.colors[gamma]):
        raise ValueError("fold would tear the under strand: colors do not reflect")

    protected = {axis, gamma, *boundary}
    for arc in zone_arcs - protected:
        work.colors[arc] = refl(work.colors[arc])
    # Split each boundary arc: the zone side gets a reflected copy, the far
    # side keeps the original arc (and color), and the freed axis passes over.
    for arc in boundary:
        copy = work.new_arc(refl(work.colors[arc]))
        for c in zone:
            for r in (0, 1, 2):
                if c[r] == arc:
                    c[r] = copy
        if reflect_down:
            work.crossings.append([axis, copy, arc, -1])
        else:
            work.crossings.append([axis, arc, copy, -1])
    # The under strand runs straight through the dissolved crossing.
    for c in zone:
        for r in (0, 1, 2):
            if c[r] == gamma:
                c[r] = beta
    del work.colors[gamma]
    work.remove_crossing(xs[s])


def fold_chain(
    cd: ColoredDiagram,
    chain: list[int],
    dissolve_pos: int,
    reflect_down: bool | None = None,
) -> ColoredDiagram:
    """Fold a twist chain around the over-arc of the crossing at ``dissolve_pos``.

    The crossing at ``dissolve_pos`` (0-based position within ``chain``)
    dissolves, freeing its over-arc, whose color a becomes the fold axis.
    The chain half on the chosen side keeps its crossings but has every
    color c replaced by 2a - c, and the freed arc is thrown across the two
    strands where that half meets the rest of the diagram.  The overpass
    reflects the boundary colors back, so the surrounding diagram keeps its
    coloring; the net effect is that the colors beyond the axis disappear
    from the chain.  The rewrite is a composite of Reidemeister moves (a
    kink thrown over the zone, slid to its far end), so the knot type is
    untouched.
    """
    work = _Work.of(cd)
    xs = [work.crossings[i] for i in chain]
    _fold_work(work, xs, dissolve_pos, reflect_down)
    return work.to_colored()


# ---------------------------------------------------------------------------
# stage construction


def _first_fold(p: int) -> ColoredDiagram:
    """The diagram after the first round on T(2,p): two twist blocks of
    k = (p-1)/2 crossings, with the 0-colored arc passing over both strands
    between them.  Colors k+2 .. 2k are gone; the palette is 0..k+1.
    """
    k = (p - 1) // 2
    # arc ids: 0 = z (color 0), 1 = w (color 1), u_c = c, v_c = k + c  (c in 2..k+1)
    z, w = 0, 1
    u = {c: c for c in range(2, k + 2)}
    v = {c: k + c for c in range(2, k + 2)}
    u[1] = w
    v[1] = w
    colors = {z: 0, w: 1}
    colors.update({u[c]: c for c in range(2, k + 2)})
    colors.update({v[c]: c % p for c in range(2, k + 2)})
    crossings: list[list[int]] = []
    crossings.append([w, z, u[2], 1])  # junction (0,1,2)
    for j in range(1, k):  # ascending block (j, j+1, j+2)
        crossings.append([u[j + 1], u[j], u[j + 2], 1])
    crossings.append([z, u[k + 1], v[k], -1])  # overpass, right strand
    crossings.append([z, u[k], v[k + 1], -1])  # overpass, left strand
    for j in range(1, k):  # descending block (k+2-j, k+1-j, k-j)
        crossings.append([v[k + 1 - j], v[k + 2 - j], v[k - j], 1])
    crossings.append([w, v[2], z, 1])  # junction (2,1,0)
    work = _Work(crossings, colors, p)
    return work.to_colored()


def _stage_diagram(p: int, ks: tuple[int, ...], stage: int) -> ColoredDiagram:
    """Materialize the diagram after ``stage`` rounds (0 <= stage <= l_p)."""
    if stage == 0:
        return standard_colored_torus(p)
    cd = _first_fold(p)
    for i in range(2, stage + 1):
        cd = _apply_round(cd, ks, i)
    return cd


def _apply_round(cd: ColoredDiagram, ks: tuple[int, ...], i: int) -> ColoredDiagram:
    """Round i >= 2: fold every twist block around over-color k_i + 1.

    The blocks are disjoint, so one pass folds them all in a single working
    copy.
    """
    target = ks[i - 1] + 1
    work = _Work.of(cd)
    chains = _chains_of(work.crossings)
    todo = []
    for chain in chains:
        xs = [work.crossings[j] for j in chain]
        over_colors = [work.colors[c[0]] for c in xs]
        if target not in over_colors:
            continue
        pos = over_colors.index(target)
        if 1 <= pos <= len(xs) - 2:
            todo.append((xs, pos))
    expected = 1 << (i - 1)
    if len(todo) != expected:
        raise RuntimeError(f"round {i} found {len(todo)} blocks, expected {expected}")
    for xs, pos in todo:
        _fold_work(work, xs, pos, None)
    return work.to_colored()


def _final_removal(cd: ColoredDiagram, p: int, ks: tuple[int, ...]) -> ColoredDiagram:
    """Remove color k1 by rerouting the two innermost overpass axes.

    At the end of the rounds the middle of the diagram is a sandwich: the
    round-2 overpasses (axis color k2+1) feed the original overpass (axis
    color 0).  The maneuver deletes the sandwich, lets a wrap arc dive under
    one k2+1 axis to pick up the transient color k1+1, passes that arc over
    the two strands, and returns it under the other axis.  For even k1 two
    extra twist crossings bridge the (2,1)/(1,2) boundaries.
    """
    k1 = ks[0]
    k2 = ks[1] if len(ks) > 1 else None
    assert k2 is not None, "removal needs at least two rounds"
    alpha_color = k2 + 1
    work = _Work.of(cd)
    p_ = work.modulus
    assert p_ == p

    over_color = lambda c: work.colors[c[0]]
    op = [c for c in work.crossings if over_color(c) == 0]
    assert len(op) == 2, "expected exactly one 0-axis overpass"
    op_in = {c[1] for c in op}
    op_out = {c[2] for c in op}
    np_asc = [c for c in work.crossings if c[2] in op_in]
    np_desc = [c for c in work.crossings if c[1] in op_out]
    assert len(np_asc) == 2 and len(np_desc) == 2
    assert all(over_color(c) == alpha_color for c in np_asc + np_desc)
    axis_t = np_asc[0][0]
    axis_b = np_desc[0][0]
    assert np_asc[1][0] == axis_t and np_desc[1][0] == axis_b

    by_color_in = {work.colors[c[1]]: c[1] for c in np_asc}
    by_color_out = {work.colors[c[2]]: c[2] for c in np_desc}
    z_arc = op[0][0]
    w_big = (k1 + 1) % p

    for c in np_asc + op + np_desc:
        work.remove_crossing(c)
    for arc in op_in | op_out:
        del work.colors[arc]

    if k1 % 2 == 1:
        # exits (1,0) -> pass under the k1+1 wrap -> (0,1) entries
        a1, a0 = by_color_in[1], by_color_in[0]
        q0, q1 = by_color_out[0], by_color_out[1]
        # split the 0-colored wrap: its middle segment takes color k1+1
        z_death = work.death_of(z_arc)
        big = work.new_arc(w_big)
        tail = work.new_arc(0)
        work.crossings[z_death][1] = tail
        work.crossings.append([axis_t, z_arc, big, -1])
        work.crossings.append([big, a1, q0, -1])
        work.crossings.append([big, a0, q1, -1])
        work.crossings.append([axis_b, big, tail, -1])
    else:
        # exits (2,1) -> twist -> (1,0) -> pass -> (0,1) -> twist -> (1,2)
        a2, a1 = by_color_in[2], by_color_in[1]
        q1, q2 = by_color_out[1], by_color_out[2]
        w_arc = None
        for c in work.crossings:
            if work.colors[c[0]] == 1 and work.colors[c[1]] == 0:
                w_arc = c[0]  # the wrap passing over the (0,1,2) junction
                break
        assert w_arc is not None
        w_death = work.death_of(w_arc)
        big = work.new_arc(w_big)
        tail = work.new_arc(1)
        work.crossings[w_death][1] = tail
        t0 = work.new_arc(0)
        g0 = work.new_arc(0)
        work.crossings.append([axis_t, w_arc, big, -1])
        work.crossings.append([a1, a2, t0, 1])
        work.crossings.append([big, a1, g0, -1])
        work.crossings.append([big, t0, q1, -1])
        work.crossings.append([q1, g0, q2, 1])
        work.crossings.append([axis_b, big, tail, -1])
    return work.to_colored()


# ---------------------------------------------------------------------------
# the symbolic ledger


def _lemma_palette(p: int, ks: tuple[int, ...], stage: int) -> frozenset[int]:
    if stage == 0:
        return frozenset(range(p))
    pal = set(range(ks[stage - 1]))
    for j in range(stage):
        pal.update((ks[j], ks[j] + 1))
    return frozenset(pal)


def _removed_by_round(p: int, ks: tuple[int, ...], stage: int) -> frozenset[int]:
    """Colors removed by round ``stage`` (1-based)."""
    k_prev = p if stage == 1 else ks[stage - 2]
    k_cur = ks[stage - 1]
    hi = 2 * k_cur if k_prev % 2 == 1 else 2 * k_cur - 1
    return frozenset(range(k_cur + 2, hi + 1))


@dataclass(frozen=True)
class BlockState:
    """Symbolic state after ``stage`` rounds of the game on T(2,p).

    ``blocks`` lists the surviving twist blocks as (exponent, low color,
    high color); ``over_arcs`` lists the overpass axes as (color, strands
    passed).  The palette is exactly {0..k_i-1} plus the pairs {k_j, k_j+1}
    for j <= i, which has k_i + 2i colors.
    """

    p: int
    stage: int
    ks: tuple[int, ...]
    blocks: tuple[tuple[int, int, int], ...]
    over_arcs: tuple[tuple[int, int], ...]
    palette: frozenset[int]

    def __post_init__(self) -> None:
        if self.stage:
            assert self.palette == _lemma_palette(self.p, self.ks, self.stage)
            assert len(self.palette) == self.ks[self.stage - 1] + 2 * self.stage

    @classmethod
    def initial(cls, p: int) -> "BlockState":
        if p < 3 or not is_prime(p):
            raise ValueError(f"need an odd prime, got {p}")
        ks = lh_sequence(p).terms if p > 4 else (1,)
        return cls(p, 0, ks, ((p, 0, p - 1),), (), frozenset(range(p)))


def teneva_set(state: BlockState) -> BlockState:
    """Advance the ledger one round.

    A round on blocks with k_prev odd removes k_cur - 1 colors (k_cur+2
    through 2*k_cur); with k_prev even it removes k_cur - 2 colors (k_cur+2
    through 2*k_cur - 1).  Either way the palette becomes the k_cur + 2i
    colors 0..k_cur-1, {k_j, k_j+1 : j <= i}.
    """
    i = state.stage + 1
    if i > len(state.ks):
        raise ValueError(f"all {len(state.ks)} rounds already applied")
    p, ks = state.p, state.ks
    k_cur = ks[i - 1]
    removed = _removed_by_round(p, ks, i)
    pal = _lemma_palette(p, ks, i)
    assert pal == state.palette - removed
    blocks = tuple(((k_cur - 1, 1, k_cur + 1),) * (1 << i))
    over_arcs = (((0, 2),) if i >= 1 else ()) + tuple(
        (ks[j - 1] + 1, 2) for j in range(2, i + 1) for _ in range(1 << (j - 1))
    )
    return BlockState(p, i, ks, blocks, over_arcs, pal)


def materialize(state: BlockState) -> ColoredDiagram:
    """Concrete colored diagram realizing the state's palette."""
    cd = _stage_diagram(state.p, state.ks, state.stage)
    assert cd.palette == state.palette
    return cd


def remove_k1(state: BlockState) -> ColoredDiagram:
    """Final maneuver: drop color k1 from a fully played position."""
    if state.stage != len(state.ks):
        raise ValueError(
            f"k1 removal applies after all {len(state.ks)} rounds, at stage {state.stage}"
        )
    cd = materialize(state)
    out = _final_removal(cd, state.p, state.ks)
    assert out.palette == state.palette - {state.ks[0]}
    return out


# ---------------------------------------------------------------------------
# pipeline and traces


@dataclass(frozen=True)
class TraceStage:
    label: str
    state: BlockState | None
    snapshot: ColoredDiagram
    removed: frozenset[int]


@dataclass(frozen=True)
class TransformationTrace:
    p: int
    stages: tuple[TraceStage, ...]
    final: ColoredDiagram

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for st in self.stages:
            assert not (st.removed & seen), "rounds removed overlapping colors"
            seen |= st.removed
        if seen:  # color conservation across a reducing trace
            assert self.stages[0].snapshot.palette == seen | self.final.palette


def run_pipeline(p: int, check_determinant: bool = True) -> TransformationTrace:
    """Play all rounds on T(2,p) (prime p >= 11) and remove k1.

    Every snapshot is verified to be a valid nontrivial coloring with
    exactly the ledger palette; the final diagram has t_p + 2*l_p - 1
    colors and, when ``check_determinant`` is set, determinant p.
    """
    if p < 11 or not is_prime(p):
        raise ValueError(f"the full pipeline needs a prime >= 11, got {p}")
    state = BlockState.initial(p)
    stages = [TraceStage("stage-0", state, materialize(state), frozenset())]
    snap = None
    for _ in range(len(state.ks)):
        prev_pal = state.palette
        state = teneva_set(state)
        snap = (
            _first_fold(p)
            if state.stage == 1
            else _apply_round(snap, state.ks, state.stage)
        )
        assert snap.palette == state.palette
        assert is_nontrivial(snap.coloring)
        stages.append(
            TraceStage(f"stage-{state.stage}", state, snap, prev_pal - state.palette)
        )
    final = _final_removal(snap, p, state.ks)
    assert final.palette == state.palette - {state.ks[0]}
    assert is_nontrivial(final.coloring)
    assert len(final.palette) == teneva_bound(p)
    stages.append(TraceStage("removal", None, final, frozenset({state.ks[0]})))
    if check_determinant:
        from mincol.coloring import determinant

        det = determinant(final.diagram)
        if det != p:
            raise RuntimeError(f"final diagram determinant {det} != {p}")
    return TransformationTrace(p, tuple(stages), final)


def teneva_demo_5() -> TransformationTrace:
    """The classic example: one round turns the rainbow T(2,5) into a
    4-color diagram; no further round (and no k1 removal) applies."""
    p = 5
    state = BlockState.initial(p)
    stages = [TraceStage("stage-0", state, materialize(state), frozenset())]
    state = teneva_set(state)
    snap = materialize(state)
    assert snap.palette == frozenset({0, 1, 2, 3})
    stages.append(TraceStage("stage-1", state, snap, frozenset({4})))
    return TransformationTrace(p, tuple(stages), snap)


def trace_serialize(trace: TransformationTrace) -> str:
    """Stage-by-stage text: PD and coloring blocks behind STAGE headers."""
    parts = []
    for st in trace.stages:
        removed = " ".join(str(c) for c in sorted(st.removed))
        parts.append(f"STAGE {st.label} REMOVED {removed}".rstrip())
        parts.append(pd_serialize(st.snapshot.diagram).rstrip())
        parts.append(coloring_serialize(st.snapshot.coloring).rstrip())
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# atomic colored moves and scripts


@dataclass(frozen=True)
class Move:
    kind: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class MoveScript:
    moves: tuple[Move, ...]

    @classmethod
    def parse(cls, text: str) -> "MoveScript":
        moves = []
        for ln in text.splitlines():
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            parts = ln.split()
            kind = parts[0]
            if kind not in ("R1", "R1-", "R2", "R2-", "R3"):
                raise ValueError(f"unknown move kind {kind!r}")
            moves.append(Move(kind, tuple(parts[1:])))
        return cls(tuple(moves))

    def serialize(self) -> str:
        return "\n".join(f"{m.kind} {' '.join(m.args)}".rstrip() for m in self.moves) + "\n"


class MoveError(ValueError):
    """A move's location is missing or its colors cannot be reconciled."""


def _apply_r1(work: _Work, arc: int, side: str, sign: int) -> None:
    if arc not in work.colors:
        raise MoveError(f"no arc {arc}")
    death = work.death_of(arc)
    b = work.new_arc(work.colors[arc])
    if death is not None:
        work.crossings[death][1] = b
    if side == "L":
        work.crossings.append([b, arc, b, sign])
    else:
        work.crossings.append([arc, arc, b, sign])


def _apply_r1_undo(work: _Work, arc: int) -> None:
    for c in work.crossings:
        over, a_in, a_out = c[0], c[1], c[2]
        if arc in (a_in, a_out) and (over == a_in or over == a_out):
            # kink: the under strand continues as a_out; merge it back
            if work.colors[a_in] != work.colors[a_out]:
                raise MoveError("kink arcs disagree in color")
            if any(cc[0] == a_out for cc in work.crossings if cc is not c):
                raise MoveError("kink arc passes over other crossings")
            work.remove_crossing(c)
            death = work.death_of(a_out)
            if death is not None:
                work.crossings[death][1] = a_in
            for cc in work.crossings:
                for r in (0, 2):
                    if cc[r] == a_out:
                        cc[r] = a_in
            del work.colors[a_out]
            return
    raise MoveError(f"no kink at arc {arc}")


def _apply_r2(work: _Work, a: int, b: int, direction: str) -> None:
    if a not in work.colors or b not in work.colors:
        raise MoveError(f"no such arcs {a}, {b}")
    if direction == "U":
        a, b = b, a  # a goes over b
    mid = work.new_arc(2 * work.colors[a] - work.colors[b])
    tail = work.new_arc(work.colors[b])
    death = work.death_of(b)
    if death is not None:
        work.crossings[death][1] = tail
    work.crossings.append([a, b, mid, 1])
    work.crossings.append([a, mid, tail, -1])


def _apply_r2_undo(work: _Work, a: int, b: int) -> None:
    """Remove the bigon where arc a passes over arc b twice in a row."""
    first = second = None
    for c in work.crossings:
        if c[0] == a and c[1] == b:
            first = c
    if first is None:
        raise MoveError(f"arc {a} does not pass over arc {b}")
    mid = first[2]
    for c in work.crossings:
        if c[0] == a and c[1] == mid:
            second = c
    if second is None:
        raise MoveError(f"no second crossing of {a} over the split of {b}")
    tail = second[2]
    if work.colors[tail] != work.colors[b]:
        raise MoveError("bigon sides disagree in color")
    work.remove_crossing(first)
    work.remove_crossing(second)
    for cc in work.crossings:
        for r in (0, 1, 2):
            if cc[r] == tail:
                cc[r] = b
    del work.colors[mid]
    del work.colors[tail]


def _apply_r3(work: _Work, ix: int, ip: int, iq: int) -> None:
    """Slide an arc lying over both strands of crossing X to its other side.

    Supported triangle: the sliding arc s is over at P and at Q; P cuts the
    strand diving at X just before X, and Q cuts the strand passing over X
    just after X.  The slide moves s's two crossings to the opposite sides
    (after X on the under strand, before X on the over strand); the local
    colors are forced and always consistent.
    """
    try:
        X, P, Q = work.crossings[ix], work.crossings[ip], work.crossings[iq]
    except IndexError as exc:
        raise MoveError("R3 crossing index out of range") from exc
    if X is P or X is Q or P is Q:
        raise MoveError("R3 needs three distinct crossings")
    if P[0] != Q[0]:
        raise MoveError("R3 needs one arc passing over both strands of X")
    s = P[0]
    o, u_in, u_out = X[0], X[1], X[2]
    if o in (u_in, u_out):
        raise MoveError("sliding past a kink is not supported")
    if P[2] != u_in:
        raise MoveError("P must emit the arc that dives at X")
    if Q[1] != o:
        raise MoveError("Q must cut the arc that passes over X")
    if any(c[0] == u_in for c in work.crossings):
        raise MoveError("the strand between P and X is not clear")
    p_pre, q_mid = P[1], Q[2]
    work.remove_crossing(P)
    work.remove_crossing(Q)
    # Under strand: p_pre now runs straight into X and s cuts it after X.
    n_u = work.new_arc(0)
    X[1] = p_pre
    X[2] = n_u
    work.crossings.append([s, n_u, u_out, P[3]])
    # Over strand: s cuts it before X, so q_mid carries the over role at X.
    X[0] = q_mid
    work.crossings.append([s, o, q_mid, Q[3]])
    del work.colors[u_in]
    m = work.modulus
    # q_mid keeps its color (2s - o on both routes); the new under arc is forced.
    work.colors[n_u] = (2 * work.colors[q_mid] - work.colors[p_pre]) % m
    if work.colors[n_u] != (2 * work.colors[s] - work.colors[u_out]) % m:
        raise MoveError("R3 colors cannot be reconciled")


def replay_script(cd: ColoredDiagram, script: MoveScript) -> TransformationTrace:
    """Apply a move script, checking validity and crossing deltas stepwise.

    Arc and crossing references are resolved against the evolving working
    state: arcs keep the input diagram's ids and new arcs take fresh ids in
    creation order; crossing indices count the current crossing list.  Each
    snapshot is independently re-verified as a Fox coloring.
    """
    deltas = {"R1": 1, "R1-": -1, "R2": 2, "R2-": -2, "R3": 0}
    p = cd.coloring.modulus.n
    work = _Work.of(cd)
    snapshots = [TraceStage("start", None, cd, frozenset())]
    for move in script.moves:
        before = len(work.crossings)
        args = [int(x) if x.lstrip("+-").isdigit() else x for x in move.args]
        if move.kind == "R1":
            _apply_r1(work, args[0], args[1], args[2])
        elif move.kind == "R1-":
            _apply_r1_undo(work, args[0])
        elif move.kind == "R2":
            _apply_r2(work, args[0], args[1], args[2])
        elif move.kind == "R2-":
            _apply_r2_undo(work, args[0], args[1])
        else:
            _apply_r3(work, args[0], args[1], args[2])
        if len(work.crossings) - before != deltas[move.kind]:
            raise MoveError(f"{move.kind} changed the crossing count incorrectly")
        snap = work.to_colored()
        snapshots.append(
            TraceStage(f"{move.kind} {' '.join(move.args)}", None, snap, frozenset())
        )
    return TransformationTrace(p, tuple(snapshots), snapshots[-1].snapshot)
