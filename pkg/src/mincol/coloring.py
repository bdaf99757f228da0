"""Fox-coloring linear algebra over prime moduli.

A Fox coloring labels the arcs of a diagram with residues mod n so that at
every crossing the outgoing under-arc carries twice the over-color minus the
incoming under-color.  The solution set over a prime field is a vector
space; its dimension, the coloring count p^dim, and the determinant (a first
minor of the integer coloring matrix) drive everything else in the package.

Matrix convention: one row per crossing with entries -1 (under_in),
+2 (over), -1 (under_out), summed when roles coincide on one arc.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from mincol.diagrams import Diagram
from mincol.lower_halves import is_prime


@dataclass(frozen=True)
class Modulus:
    """A coloring modulus n > 1 with its (verified) primality flag."""

    n: int
    prime_flag: bool

    def __post_init__(self) -> None:
        if self.n <= 1:
            raise ValueError(f"modulus must exceed 1, got {self.n}")
        if self.prime_flag != is_prime(self.n):
            raise ValueError(f"prime flag inconsistent for {self.n}")

    @classmethod
    def of(cls, n: int) -> "Modulus":
        return cls(n, is_prime(n))


def _as_modulus(m: "Modulus | int") -> Modulus:
    return m if isinstance(m, Modulus) else Modulus.of(m)


@dataclass(frozen=True)
class FoxColoring:
    """Total assignment arc -> residue, stored densely by arc id."""

    modulus: Modulus
    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(not 0 <= v < self.modulus.n for v in self.assignment):
            raise ValueError("colors must be reduced residues")

    def __getitem__(self, arc: int) -> int:
        return self.assignment[arc]

    @classmethod
    def of(cls, m: "Modulus | int", colors) -> "FoxColoring":
        mod = _as_modulus(m)
        return cls(mod, tuple(v % mod.n for v in colors))


@dataclass(frozen=True)
class Palette:
    """The set of colors a coloring actually uses."""

    colors: frozenset[int]
    size: int

    def __post_init__(self) -> None:
        assert self.size == len(self.colors) >= 1


def palette(c: FoxColoring) -> Palette:
    used = frozenset(c.assignment)
    return Palette(used, len(used))


def is_nontrivial(c: FoxColoring) -> bool:
    """A coloring is nontrivial when it uses at least two colors."""
    return palette(c).size >= 2


def fox_violations(d: Diagram, c: FoxColoring) -> list[str]:
    if len(c.assignment) != d.arc_count:
        raise ValueError(
            f"coloring assigns {len(c.assignment)} arcs, diagram has {d.arc_count}"
        )
    n = c.modulus.n
    return [
        f"crossing {x}: {c[x.under_out]} != 2*{c[x.over]} - {c[x.under_in]} (mod {n})"
        for x in d.crossings
        if (2 * c[x.over] - c[x.under_in] - c[x.under_out]) % n
    ]


def is_fox_coloring(d: Diagram, c: FoxColoring) -> bool:
    """True iff under_out = 2*over - under_in holds mod n at every crossing."""
    return not fox_violations(d, c)


def _matrix_rows(d: Diagram) -> list[dict[int, int]]:
    rows = []
    for x in d.crossings:
        row: dict[int, int] = {}
        for arc, coef in ((x.under_in, -1), (x.over, 2), (x.under_out, -1)):
            row[arc] = row.get(arc, 0) + coef
        rows.append({a: v for a, v in row.items() if v})
    return rows


def _require_prime(m: Modulus) -> None:
    if not m.prime_flag:
        raise ValueError(
            f"coloring spaces are computed over prime moduli only, got {m.n}"
        )


@dataclass(frozen=True)
class ColoringSpace:
    """Basis of all Fox colorings of one diagram over one prime field.

    The first basis vector is the all-ones constant coloring; the others are
    scaled so their first nonzero coordinate is 1.
    """

    modulus: Modulus
    dimension: int
    basis: tuple[FoxColoring, ...]

    def __post_init__(self) -> None:
        assert self.dimension == len(self.basis) >= 1

    def element(self, coeffs: tuple[int, ...]) -> FoxColoring:
        p = self.modulus.n
        arcs = len(self.basis[0].assignment)
        vals = [0] * arcs
        for t, b in zip(coeffs, self.basis):
            if t:
                for i, v in enumerate(b.assignment):
                    vals[i] = (vals[i] + t * v) % p
        return FoxColoring(self.modulus, tuple(vals))


def coloring_space(d: Diagram, m: "Modulus | int") -> ColoringSpace:
    """Solve the crossing relations over GF(p)."""
    mod = _as_modulus(m)
    _require_prime(mod)
    p = mod.n
    rows = [{a: v % p for a, v in r.items() if v % p} for r in _matrix_rows(d)]
    rows = [r for r in rows if r]
    ncols = d.arc_count
    pivots: dict[int, dict[int, int]] = {}  # pivot column -> reduced row
    for row in rows:
        # reduce against existing pivots
        for col in sorted(row):
            if col in pivots and row.get(col):
                factor = row[col]
                for a, v in pivots[col].items():
                    row[a] = (row.get(a, 0) - factor * v) % p
        row = {a: v for a, v in row.items() if v}
        if not row:
            continue
        col = min(row)
        inv = pow(row[col], -1, p)
        row = {a: v * inv % p for a, v in row.items()}
        # back-substitute into existing pivot rows
        for pc, prow in pivots.items():
            if prow.get(col):
                f = prow[col]
                for a, v in row.items():
                    prow[a] = (prow.get(a, 0) - f * v) % p
                pivots[pc] = {a: v for a, v in prow.items() if v}
        pivots[col] = row
    free_cols = [a for a in range(ncols) if a not in pivots]
    vectors = []
    for f in free_cols:
        vec = [0] * ncols
        vec[f] = 1
        for pc, prow in pivots.items():
            if prow.get(f):
                vec[pc] = (-prow[f]) % p
        vectors.append(vec)
    # Deterministic normalization: lead with the constant coloring.  The
    # all-ones vector is the sum of all free-column vectors, so dropping the
    # first free vector keeps a basis.
    if vectors:
        ones = [1] * ncols
        normalized = [ones]
        for vec in vectors[1:]:
            lead = next(v for v in vec if v)
            inv = pow(lead, -1, p)
            normalized.append([v * inv % p for v in vec])
    else:  # no arcs at all is rejected upstream; nonempty diagrams always solve
        normalized = []
    basis = tuple(FoxColoring(mod, tuple(v)) for v in normalized)
    space = ColoringSpace(mod, len(basis), basis)
    for b in basis:
        assert is_fox_coloring(d, b)
    return space


def count_colorings(d: Diagram, m: "Modulus | int") -> int:
    """p^dim, which equals the exhaustive count of valid colorings."""
    space = coloring_space(d, m)
    return space.modulus.n ** space.dimension


class EnumerationCapExceeded(RuntimeError):
    pass


def enumerate_nontrivial_colorings(
    d: Diagram, m: "Modulus | int", cap: int = 10**6
) -> Iterator[FoxColoring]:
    """Yield every nontrivial coloring exactly once (coordinate grid order).

    Constant colorings are exactly the multiples of the leading basis vector,
    so combinations whose remaining coefficients vanish are skipped.
    """
    space = coloring_space(d, m)
    p = space.modulus.n
    total = p**space.dimension
    if total > cap:
        raise EnumerationCapExceeded(
            f"{total} colorings exceed the cap of {cap}; raise the cap explicitly"
        )
    for coeffs in itertools.product(range(p), repeat=space.dimension):
        if not any(coeffs[1:]):
            continue
        yield space.element(coeffs)


def min_palette_over_colorings(d: Diagram, m: "Modulus | int", cap: int = 10**6) -> int:
    """Minimum palette size over all nontrivial colorings of this diagram.

    This measures the fixed diagram, not the knot: alternating diagrams of
    prime determinant use every color, while the rewritten diagrams produced
    by the transformation engine use far fewer.
    """
    best = None
    for c in enumerate_nontrivial_colorings(d, m, cap):
        size = palette(c).size
        if best is None or size < best:
            best = size
    if best is None:
        raise ValueError(f"no nontrivial coloring of this diagram mod {_as_modulus(m).n}")
    return best


def determinant(d: Diagram) -> int:
    """|first minor| of the integer coloring matrix.

    Fraction-free (Bareiss) elimination on a sparse representation keeps all
    intermediate values as exact integers; the result is independent of which
    row and column are deleted.
    """
    if not d.crossings:
        raise ValueError("determinant needs a diagram with at least one crossing")
    return abs(_first_minor(d, d.arc_count - 1, len(d.crossings) - 1))


def _first_minor(d: Diagram, drop_col: int, drop_row: int) -> int:
    """Sparse fraction-free elimination (Bareiss with Markowitz pivoting).

    Rows missing the pivot column are not rewritten; in fraction-free
    elimination such a row only picks up the scalar p_k/p_{k-1}, which
    telescopes, so each row carries the index of the step it was last
    materialized at and is rescaled by p_now/p_then exactly when touched.
    """
    rows = [r for i, r in enumerate(_matrix_rows(d)) if i != drop_row]
    rows = [{a: v for a, v in r.items() if a != drop_col} for r in rows]
    n = len(rows)
    if n == 0:
        return 1
    col_index: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for a in r:
            col_index.setdefault(a, set()).add(i)
    live_rows = set(range(n))
    pivots = [1]  # pivots[k] = pivot of step k, pivots[0] = 1
    row_step = [0] * n

    def materialize(i: int) -> None:
        k = len(pivots) - 1
        if row_step[i] == k:
            return
        num, den = pivots[k], pivots[row_step[i]]
        if num != den:
            rows[i] = {a: v * num // den for a, v in rows[i].items()}
        row_step[i] = k

    for _ in range(n):
        best = None
        for i in live_rows:
            nnz = len(rows[i])
            if nnz == 0:
                continue
            for a in rows[i]:
                cost = (nnz - 1) * (len(col_index[a]) - 1)
                if best is None or cost < best[0]:
                    best = (cost, i, a)
            if best and best[0] == 0:
                break
        if best is None:
            return 0  # singular minor
        _, pi, pc = best
        materialize(pi)
        piv_row = rows[pi]
        prev = pivots[-1]
        piv_val = piv_row[pc]
        live_rows.discard(pi)
        for a in piv_row:
            col_index[a].discard(pi)
        new_state = len(pivots)
        for i in list(col_index.get(pc, ())):
            if i not in live_rows:
                continue
            materialize(i)
            row = rows[i]
            factor = row[pc]
            for a in set(piv_row) | set(row):
                if a == pc:
                    continue
                val = (row.get(a, 0) * piv_val - factor * piv_row.get(a, 0)) // prev
                had = a in row
                if val:
                    row[a] = val
                    if not had:
                        col_index.setdefault(a, set()).add(i)
                elif had:
                    del row[a]
                    col_index[a].discard(i)
            del row[pc]
            col_index[pc].discard(i)
            row_step[i] = new_state
        pivots.append(piv_val)
    return pivots[-1]


def coloring_serialize(c: FoxColoring) -> str:
    lines = [f"COLORING mod={c.modulus.n}"]
    lines += [f"{arc} {color}" for arc, color in enumerate(c.assignment)]
    return "\n".join(lines) + "\n"


def coloring_parse(text: str) -> FoxColoring:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("COLORING mod="):
        raise ValueError("coloring text must start with 'COLORING mod=<n>'")
    n = int(lines[0].split("=", 1)[1])
    entries = {}
    for ln in lines[1:]:
        arc, color = map(int, ln.split())
        entries[arc] = color
    if sorted(entries) != list(range(len(entries))):
        raise ValueError("coloring lines must cover arcs 0..k densely")
    return FoxColoring(Modulus.of(n), tuple(entries[a] for a in sorted(entries)))
