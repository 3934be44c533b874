"""Graded chain complexes over F2, Z, and Z/4, and the maps between them.

Generators carry grading tuples whose first entry is the homological degree;
the differential lowers that degree by one and preserves the remaining
entries.  Complexes are stored sparsely (column dicts), homology is computed
blockwise, and homology classes over F2 keep explicit cycle representatives
so that induced maps, Bockstein operators, and spectral sequence pages can
be extracted afterwards.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass
from math import gcd
from typing import Any, Dict, List, Mapping, Sequence, Tuple

from .linalg import (
    F2Matrix,
    F2Span,
    ZMatrix,
    f2_rank_kernel,
    integer_block_homology,
    mod4_lift_boundary,
)

Grading = Tuple[int, ...]


class Ring(enum.Enum):
    """Coefficient rings supported by the homology routines."""

    F2 = "F2"
    Z = "Z"
    Z4 = "Z4"


def _ring(value: "Ring | str") -> Ring:
    return value if isinstance(value, Ring) else Ring(str(value))


def _f2_from_columns(nrows: int, columns: Sequence[int]) -> F2Matrix:
    """Build an F2Matrix from packed column vectors."""
    data = [0] * nrows
    for c, word in enumerate(columns):
        i = 0
        while word:
            if word & 1:
                data[i] |= 1 << c
            word >>= 1
            i += 1
    return F2Matrix(nrows, len(columns), data)


@dataclass(frozen=True)
class GradedComplex:
    """A finitely generated chain complex with multi-graded generators.

    ``gradings[g]`` is the grading tuple of generator ``g`` and ``diff[g]``
    maps target generator indices to the integer coefficients of the
    boundary of ``g``.  Coefficients stay integral even when homology is
    later taken over F2.
    """

    gradings: Tuple[Grading, ...]
    diff: Mapping[int, Mapping[int, int]]
    meta: Any = None

    def __len__(self) -> int:
        return len(self.gradings)

    def arity(self) -> int:
        return len(self.gradings[0]) if self.gradings else 0

    def boundary(self, gen: int) -> Dict[int, int]:
        return dict(self.diff.get(gen, {}))

    def shifted(self, shift: Grading) -> "GradedComplex":
        """The same complex with ``shift`` added to every grading.

        >>> c = GradedComplex(((0, 1), (1, 1)), {1: {0: 1}})
        >>> c.shifted((2, -1)).gradings
        ((2, 0), (3, 0))
        """
        if self.gradings and len(shift) != self.arity():
            raise ValueError("shift arity does not match grading arity")
        moved = tuple(
            tuple(a + b for a, b in zip(g, shift)) for g in self.gradings
        )
        return GradedComplex(moved, self.diff, self.meta)

    def check_differential(self) -> None:
        """Raise unless d lowers degree by exactly one, preserves the other
        gradings, and squares to zero over the integers."""
        for src, col in self.diff.items():
            gs = self.gradings[src]
            for dst, coeff in col.items():
                if coeff == 0:
                    continue
                gd = self.gradings[dst]
                if gd[0] != gs[0] - 1 or gd[1:] != gs[1:]:
                    raise ValueError(
                        f"boundary term {src}->{dst} moves {gs} to {gd}"
                    )
        for src, col in self.diff.items():
            acc: Dict[int, int] = {}
            for mid, c1 in col.items():
                for dst, c2 in self.diff.get(mid, {}).items():
                    acc[dst] = acc.get(dst, 0) + c1 * c2
            bad = {k: v for k, v in acc.items() if v != 0}
            if bad:
                raise ValueError(f"d^2 != 0 on generator {src}: {bad}")

    # -- block bookkeeping ------------------------------------------------

    def chain_blocks(self) -> Dict[Grading, Dict[int, List[int]]]:
        """Generator indices grouped by non-homological grading, then degree."""
        out: Dict[Grading, Dict[int, List[int]]] = {}
        for g, grading in enumerate(self.gradings):
            out.setdefault(grading[1:], {}).setdefault(grading[0], []).append(g)
        return out

    def block_entries(
        self, src_gens: Sequence[int], dst_gens: Sequence[int]
    ) -> List[List[int]]:
        """Dense integer matrix of d restricted to the given blocks."""
        pos = {g: r for r, g in enumerate(dst_gens)}
        rows = [[0] * len(src_gens) for _ in dst_gens]
        for c, g in enumerate(src_gens):
            for dst, coeff in self.diff.get(g, {}).items():
                r = pos.get(dst)
                if r is not None:
                    rows[r][c] = coeff
        return rows

    def f2_block(
        self, src_gens: Sequence[int], dst_gens: Sequence[int]
    ) -> F2Matrix:
        """Mod-2 matrix of d restricted to the given blocks."""
        pos = {g: r for r, g in enumerate(dst_gens)}
        cols = []
        for g in src_gens:
            word = 0
            for dst, coeff in self.diff.get(g, {}).items():
                if coeff % 2 and dst in pos:
                    word |= 1 << pos[dst]
            cols.append(word)
        return _f2_from_columns(len(dst_gens), cols)


@dataclass(frozen=True)
class HomologyTable:
    """Homology of a GradedComplex, indexed by full grading tuples.

    ``free[g]`` is the rank (the dimension, over a field), ``torsion[g]``
    lists cyclic orders of torsion summands (Z and Z/4 only; over Z/4 all
    summands are cyclic and appear here), and ``reps[g]`` holds cycle
    representatives over F2 as bitmasks of global generator indices.
    """

    ring: Ring
    free: Dict[Grading, int]
    torsion: Dict[Grading, Tuple[int, ...]]
    reps: Dict[Grading, Tuple[int, ...]]
    complex: GradedComplex

    def dim(self, grading: Grading) -> int:
        return self.free.get(grading, 0)

    def total_dim(self) -> int:
        return sum(self.free.values())

    def gradings_present(self) -> List[Grading]:
        keys = set(self.free) | set(self.torsion)
        return sorted(
            k for k in keys if self.free.get(k) or self.torsion.get(k)
        )

    def summary(self) -> Dict[str, Any]:
        """JSON-ready description keyed by comma-joined gradings."""
        out: Dict[str, Any] = {}
        for g in self.gradings_present():
            entry: Dict[str, Any] = {"rank": self.free.get(g, 0)}
            tors = self.torsion.get(g, ())
            if tors:
                entry["torsion"] = list(tors)
            out[",".join(str(x) for x in g)] = entry
        return out


def _f2_homology(cpx: GradedComplex) -> HomologyTable:
    free: Dict[Grading, int] = {}
    reps: Dict[Grading, Tuple[int, ...]] = {}
    for key, by_i in sorted(cpx.chain_blocks().items()):
        for i in sorted(by_i):
            gens = by_i[i]
            below = by_i.get(i - 1, [])
            above = by_i.get(i + 1, [])
            d_out = cpx.f2_block(gens, below)
            _, kernel = f2_rank_kernel(d_out)
            if not kernel:
                continue
            pos = {g: r for r, g in enumerate(gens)}
            span = F2Span()
            for g in above:
                word = 0
                for dst, coeff in cpx.diff.get(g, {}).items():
                    if coeff % 2 and dst in pos:
                        word |= 1 << pos[dst]
                span.add(word)
            chosen = [vec for vec in kernel if span.add(vec)]
            if not chosen:
                continue
            grading = (i,) + key
            free[grading] = len(chosen)
            globalised = []
            for vec in chosen:
                mask = 0
                for r, g in enumerate(gens):
                    if (vec >> r) & 1:
                        mask |= 1 << g
                globalised.append(mask)
            reps[grading] = tuple(globalised)
    return HomologyTable(Ring.F2, free, {}, reps, cpx)


def reduced(cpx: GradedComplex) -> GradedComplex:
    """Homotopy-equivalent complex with all unit differential entries canceled.

    Splits off two-generator acyclic summands along +-1 coefficients
    (integer Gaussian elimination), so homology over every ring is
    unchanged while the generator count usually collapses by orders of
    magnitude.  Generator identities are not preserved; callers that need
    representatives in the original basis must keep the unreduced complex.
    """
    diff = {s: dict(col) for s, col in cpx.diff.items() if col}
    into: Dict[int, set] = {}
    for s, col in diff.items():
        for d in col:
            into.setdefault(d, set()).add(s)
    dead: set = set()
    # lazy min-heap on Markowitz fill cost; stale entries are re-keyed at
    # pop time, which keeps the order near-optimal without decrease-key
    heap = [
        ((len(col) - 1) * (len(into[d]) - 1), s, d)
        for s, col in diff.items()
        for d, c in col.items()
        if c in (1, -1)
    ]
    heapq.heapify(heap)
    while heap:
        cost, a, b = heapq.heappop(heap)
        if a in dead or b in dead:
            continue
        row_a = diff.get(a)
        if row_a is None:
            continue
        u = row_a.get(b, 0)
        if u not in (1, -1):
            continue
        now = (len(row_a) - 1) * (len(into[b]) - 1)
        if now > cost:
            heapq.heappush(heap, (now, a, b))
            continue
        dead.add(a)
        dead.add(b)
        diff.pop(a)
        for y in row_a:
            into.get(y, set()).discard(a)
        row_b = diff.pop(b, None)
        if row_b:
            for y in row_b:
                into.get(y, set()).discard(b)
        for z in into.pop(a, ()):
            # arrows into the canceled source vanish with it; the lost
            # composite is exactly what the correction below restores
            col = diff.get(z)
            if col is not None and z not in dead:
                col.pop(a, None)
        # d'(x) = d(x) - (x->b coefficient) * u * d(a) on the survivors
        ys = [(y, c) for y, c in row_a.items() if y != b]
        for x in into.pop(b, ()):
            if x == a or x in dead:
                continue
            col = diff.get(x)
            if col is None:
                continue
            cxb = col.pop(b, 0)
            if not cxb:
                continue
            for y, cay in ys:
                nv = col.get(y, 0) - cxb * cay * u
                if nv:
                    col[y] = nv
                    into.setdefault(y, set()).add(x)
                    if nv in (1, -1):
                        heapq.heappush(
                            heap, ((len(col) - 1) * len(into[y]), x, y)
                        )
                else:
                    col.pop(y, None)
                    into.get(y, set()).discard(x)
    keep = [g for g in range(len(cpx)) if g not in dead]
    renum = {g: n for n, g in enumerate(keep)}
    newdiff: Dict[int, Dict[int, int]] = {}
    for g in keep:
        col = diff.get(g)
        if not col:
            continue
        assert all(d not in dead for d in col), "stale arrow into a canceled pair"
        newdiff[renum[g]] = {renum[d]: c for d, c in col.items()}
    return GradedComplex(tuple(cpx.gradings[g] for g in keep), newdiff)


def _integral_homology(cpx: GradedComplex, ring: Ring) -> HomologyTable:
    cpx = reduced(cpx)
    free: Dict[Grading, int] = {}
    torsion: Dict[Grading, Tuple[int, ...]] = {}
    for key, by_i in sorted(cpx.chain_blocks().items()):
        degs = sorted(by_i)
        data: Dict[int, Tuple[int, List[int]]] = {}
        for i in degs:
            gens = by_i[i]
            below = by_i.get(i - 1, [])
            above = by_i.get(i + 1, [])
            d_out = ZMatrix(
                len(below), len(gens), cpx.block_entries(gens, below)
            )
            d_in = ZMatrix(
                len(gens), len(above), cpx.block_entries(above, gens)
            )
            data[i] = integer_block_homology(d_out, d_in)
        for i in degs:
            rank, divisors = data[i]
            grading = (i,) + key
            if ring is Ring.Z:
                if rank:
                    free[grading] = rank
                if divisors:
                    torsion[grading] = tuple(divisors)
            else:
                # Z/4 coefficients by universal coefficients: each free
                # summand gives Z/4, torsion Z/d gives Z/gcd(d,4) twice,
                # in its own degree and in the next one up (the Tor term).
                orders = [4] * rank
                orders += [gcd(d, 4) for d in divisors if gcd(d, 4) > 1]
                down = data.get(i - 1)
                if down:
                    orders += [gcd(d, 4) for d in down[1] if gcd(d, 4) > 1]
                if orders:
                    orders.sort(reverse=True)
                    torsion[grading] = tuple(orders)
    return HomologyTable(ring, free, torsion, {}, cpx)


def homology(cpx: GradedComplex, ring: "Ring | str" = Ring.F2) -> HomologyTable:
    """Homology of ``cpx`` over the requested coefficient ring.

    >>> c = GradedComplex(((0, 0), (1, 0)), {1: {0: 2}})
    >>> homology(c, Ring.Z).torsion
    {(0, 0): (2,)}
    >>> homology(c, "F2").free
    {(0, 0): 1, (1, 0): 1}
    """
    r = _ring(ring)
    if r is Ring.F2:
        return _f2_homology(cpx)
    return _integral_homology(cpx, r)


# ---------------------------------------------------------------------------
# chain maps


@dataclass(frozen=True)
class ChainMap:
    """A map of graded complexes, stored as sparse integer columns.

    ``entries[g]`` sends source generator ``g`` to a dict of target
    generator coefficients; ``shift`` is added to source gradings to give
    target gradings.  The homological entry of the shift must be zero for
    the map to commute with the differentials on the nose.
    """

    source: GradedComplex
    target: GradedComplex
    entries: Mapping[int, Mapping[int, int]]
    shift: Grading

    def check(self, *, mod2: bool = False) -> None:
        """Raise unless gradings shift uniformly and f d = d f."""
        for src, col in self.entries.items():
            want = tuple(
                a + b for a, b in zip(self.source.gradings[src], self.shift)
            )
            for dst, coeff in col.items():
                if coeff == 0:
                    continue
                if self.target.gradings[dst] != want:
                    raise ValueError(
                        f"entry {src}->{dst} lands in "
                        f"{self.target.gradings[dst]}, expected {want}"
                    )
        for src in range(len(self.source)):
            acc: Dict[int, int] = {}
            for mid, c1 in self.source.diff.get(src, {}).items():
                for dst, c2 in self.entries.get(mid, {}).items():
                    acc[dst] = acc.get(dst, 0) + c1 * c2
            for mid, c1 in self.entries.get(src, {}).items():
                for dst, c2 in self.target.diff.get(mid, {}).items():
                    acc[dst] = acc.get(dst, 0) - c1 * c2
            bad = {
                k: v
                for k, v in acc.items()
                if (v % 2 if mod2 else v) != 0
            }
            if bad:
                raise ValueError(f"not a chain map at generator {src}: {bad}")

    def apply_mask(self, mask: int) -> int:
        """Push an F2 chain (bitmask of source generators) through the map."""
        out = 0
        g = 0
        while mask:
            if mask & 1:
                for dst, coeff in self.entries.get(g, {}).items():
                    if coeff % 2:
                        out ^= 1 << dst
            mask >>= 1
            g += 1
        return out

    def compose(self, earlier: "ChainMap") -> "ChainMap":
        """Return self after ``earlier``."""
        if earlier.target is not self.source:
            raise ValueError("composition mismatch")
        entries: Dict[int, Dict[int, int]] = {}
        for src, col in earlier.entries.items():
            acc: Dict[int, int] = {}
            for mid, c1 in col.items():
                for dst, c2 in self.entries.get(mid, {}).items():
                    acc[dst] = acc.get(dst, 0) + c1 * c2
            acc = {k: v for k, v in acc.items() if v}
            if acc:
                entries[src] = acc
        shift = tuple(a + b for a, b in zip(earlier.shift, self.shift))
        return ChainMap(earlier.source, self.target, entries, shift)


def identity_map(cpx: GradedComplex) -> ChainMap:
    zero = tuple(0 for _ in range(cpx.arity()))
    return ChainMap(cpx, cpx, {g: {g: 1} for g in range(len(cpx))}, zero)


def add_maps_mod2(a: ChainMap, b: ChainMap) -> ChainMap:
    """Sum of two parallel chain maps, coefficients reduced mod 2."""
    if a.source is not b.source or a.target is not b.target:
        raise ValueError("maps are not parallel")
    if a.shift != b.shift:
        raise ValueError("maps have different grading shifts")
    entries: Dict[int, Dict[int, int]] = {}
    for src in set(a.entries) | set(b.entries):
        acc: Dict[int, int] = {}
        for col in (a.entries.get(src, {}), b.entries.get(src, {})):
            for dst, coeff in col.items():
                acc[dst] = (acc.get(dst, 0) + coeff) % 2
        acc = {k: v for k, v in acc.items() if v}
        if acc:
            entries[src] = acc
    return ChainMap(a.source, a.target, entries, a.shift)


def induced_map(
    fmap: ChainMap,
    source_h: HomologyTable,
    target_h: HomologyTable,
) -> Dict[Grading, F2Matrix]:
    """Matrices of the map induced on F2 homology, keyed by source grading.

    Columns follow the order of ``source_h.reps`` at each grading, rows the
    order of ``target_h.reps`` at the shifted grading.  Gradings where the
    source vanishes are omitted; a nonzero source mapping into a zero
    target block yields a 0-row matrix.
    """
    if source_h.ring is not Ring.F2 or target_h.ring is not Ring.F2:
        raise ValueError("induced maps are computed over F2")
    out: Dict[Grading, F2Matrix] = {}
    tgt = fmap.target
    for grading, reps in sorted(source_h.reps.items()):
        shifted = tuple(a + b for a, b in zip(grading, fmap.shift))
        basis = target_h.reps.get(shifted, ())
        span = F2Span()
        n_added = 0
        for g, gr in enumerate(tgt.gradings):
            if gr[0] == shifted[0] + 1 and gr[1:] == shifted[1:]:
                word = 0
                for dst, coeff in tgt.diff.get(g, {}).items():
                    if coeff % 2:
                        word |= 1 << dst
                span.add(word)
                n_added += 1
        for b in basis:
            if not span.add(b):
                raise ValueError("homology representative is a boundary")
        cols = []
        for rep in reps:
            image = fmap.apply_mask(rep)
            combo = span.express(image)
            if combo is None:
                raise ValueError("image of a cycle escapes the target span")
            word = 0
            for k in range(len(basis)):
                if (combo >> (n_added + k)) & 1:
                    word |= 1 << k
            cols.append(word)
        out[grading] = _f2_from_columns(len(basis), cols)
    return out


def mapping_cone(
    fmap: ChainMap,
) -> Tuple[GradedComplex, Tuple[int, ...], Tuple[int, ...]]:
    """Cone of a grading-preserving chain map, with generator index maps.

    Returns ``(cone, target_index, source_index)``: target generators keep
    their gradings, source generators sit one homological degree higher,
    and the cone differential is d_target + f on the shifted source piece
    (source differential negated).
    """
    if any(fmap.shift):
        raise ValueError("cone requires a grading-preserving map")
    src, tgt = fmap.source, fmap.target
    gradings: List[Grading] = list(tgt.gradings)
    tgt_index = tuple(range(len(tgt)))
    src_index = tuple(len(tgt) + g for g in range(len(src)))
    for g in src.gradings:
        gradings.append((g[0] + 1,) + g[1:])
    diff: Dict[int, Dict[int, int]] = {}
    for g, col in tgt.diff.items():
        entries = {dst: c for dst, c in col.items() if c}
        if entries:
            diff[g] = entries
    for g in range(len(src)):
        entries = {}
        for dst, c in src.diff.get(g, {}).items():
            if c:
                entries[src_index[dst]] = -c
        for dst, c in fmap.entries.get(g, {}).items():
            if c:
                entries[dst] = entries.get(dst, 0) + c
        entries = {k: v for k, v in entries.items() if v}
        if entries:
            diff[src_index[g]] = entries
    cone = GradedComplex(tuple(gradings), diff)
    return cone, tgt_index, src_index


# ---------------------------------------------------------------------------
# Bockstein


def bockstein(cpx: GradedComplex) -> Dict[Grading, F2Matrix]:
    """First Bockstein of Z/2 -> Z/4 -> Z/2 on the F2 homology of ``cpx``.

    The complex must carry an integral differential.  The matrix at
    grading ``g`` maps the F2 homology basis at ``g`` to the basis one
    homological degree lower; zero maps are omitted.
    """
    table = _f2_homology(cpx)
    out: Dict[Grading, F2Matrix] = {}
    for grading, reps in sorted(table.reps.items()):
        lower = (grading[0] - 1,) + grading[1:]
        basis = table.reps.get(lower, ())
        if not basis:
            continue
        src_block = [g for g, gr in enumerate(cpx.gradings) if gr == grading]
        dst_block = [g for g, gr in enumerate(cpx.gradings) if gr == lower]
        pos = {g: r for r, g in enumerate(dst_block)}
        d4 = ZMatrix(
            len(dst_block),
            len(src_block),
            [
                [cpx.diff.get(s, {}).get(d, 0) % 4 for s in src_block]
                for d in dst_block
            ],
        )
        span = F2Span()
        n_added = 0
        for g, gr in enumerate(cpx.gradings):
            if gr[0] == lower[0] + 1 and gr[1:] == lower[1:]:
                word = 0
                for dst, coeff in cpx.diff.get(g, {}).items():
                    if coeff % 2 and dst in pos:
                        word |= 1 << pos[dst]
                span.add(word)
                n_added += 1
        for b in basis:
            if not span.add(_localise(b, pos)):
                raise ValueError("representative collapsed to a boundary")
        cols = []
        src_pos = {g: r for r, g in enumerate(src_block)}
        for rep in reps:
            beta = mod4_lift_boundary(_localise(rep, src_pos), d4)
            combo = span.express(beta)
            if combo is None:
                raise ValueError("Bockstein image escaped the cycle span")
            word = 0
            for k in range(len(basis)):
                if (combo >> (n_added + k)) & 1:
                    word |= 1 << k
            cols.append(word)
        if any(cols):
            out[grading] = _f2_from_columns(len(basis), cols)
    return out


def _localise(mask: int, pos: Mapping[int, int]) -> int:
    out = 0
    g = 0
    while mask:
        if mask & 1:
            out |= 1 << pos[g]
        mask >>= 1
        g += 1
    return out


# ---------------------------------------------------------------------------
# spectral sequence of a filtered F2 complex


@dataclass(frozen=True)
class SSPage:
    """One page of a spectral sequence over F2.

    ``dims`` is keyed by (filtration, homological degree); ``ranks`` maps
    the same keys to the rank of the page differential leaving that spot
    (raising filtration by ``r``, lowering degree by one).
    """

    r: int
    dims: Dict[Tuple[int, int], int]
    ranks: Dict[Tuple[int, int], int]

    def column_dim(self, p: int) -> int:
        return sum(v for (q, _), v in self.dims.items() if q == p)

    def is_settled(self) -> bool:
        return not any(self.ranks.values())


class _FilteredBlocks:
    """Shared solver state for one filtered complex, reused across pages."""

    __slots__ = ("cpx", "filt", "pmax", "by_deg", "pos", "_cycles")

    def __init__(self, cpx: GradedComplex, filtration: Sequence[int]):
        self.cpx = cpx
        self.filt = list(filtration)
        self.pmax = max(self.filt) if self.filt else 0
        self.by_deg: Dict[int, List[int]] = {}
        for g in range(len(cpx)):
            self.by_deg.setdefault(cpx.gradings[g][0], []).append(g)
        self.pos: Dict[int, Dict[int, int]] = {
            i: {g: k for k, g in enumerate(gens)}
            for i, gens in self.by_deg.items()
        }
        self._cycles: Dict[Tuple[int, int, int], List[int]] = {}

    def dmask(self, i: int, mask: int) -> int:
        """Apply D to an F2 chain in degree-i coordinates, landing in i-1."""
        gens = self.by_deg.get(i, [])
        pos_down = self.pos.get(i - 1, {})
        out = 0
        k = 0
        while mask:
            if mask & 1:
                for dst, coeff in self.cpx.diff.get(gens[k], {}).items():
                    if coeff % 2 and dst in pos_down:
                        out ^= 1 << pos_down[dst]
            mask >>= 1
            k += 1
        return out

    def cycles(self, i: int, p: int, depth: int) -> List[int]:
        """Basis of {x in degree i at levels >= p : D x at levels >= p+depth}.

        Results are degree-i local bitmasks.  The target level p + depth is
        taken before clamping: a negative ``p`` still constrains D x.
        Levels above ``pmax`` are zero, so both bounds saturate there.
        """
        threshold = min(max(p + depth, 0), self.pmax + 1)
        p = min(max(p, 0), self.pmax + 1)
        key = (i, p, threshold)
        hit = self._cycles.get(key)
        if hit is not None:
            return hit
        gens = self.by_deg.get(i, [])
        cols = [k for k, g in enumerate(gens) if self.filt[g] >= p]
        if not cols:
            self._cycles[key] = []
            return []
        down = self.by_deg.get(i - 1, [])
        row_pos = {
            k: s
            for s, k in enumerate(
                k for k, g in enumerate(down) if self.filt[g] < threshold
            )
        }
        words = []
        for k in cols:
            w = self.dmask(i, 1 << k)
            word = 0
            for kk, s in row_pos.items():
                if (w >> kk) & 1:
                    word |= 1 << s
            words.append(word)
        mat = _f2_from_columns(len(row_pos), words)
        _, kernel = f2_rank_kernel(mat)
        out = []
        for vec in kernel:
            mask = 0
            kk = 0
            while vec:
                if vec & 1:
                    mask |= 1 << cols[kk]
                vec >>= 1
                kk += 1
            out.append(mask)
        self._cycles[key] = out
        return out

    def boundary_span(self, i: int, p: int, r: int) -> F2Span:
        """Classes at column p, degree i, already killed before page r."""
        span = F2Span()
        if r >= 1:
            for vec in self.cycles(i, p + 1, r - 1):
                span.add(vec)
            for vec in self.cycles(i + 1, p - r + 1, r - 1):
                span.add(self.dmask(i + 1, vec))
        else:
            for vec in self.cycles(i, p + 1, 0):
                span.add(vec)
        return span


def filtered_ss_pages(
    cpx: GradedComplex,
    filtration: Sequence[int],
    max_pages: int = 512,
) -> List[SSPage]:
    """Spectral sequence pages of an F2 complex with increasing filtration.

    ``filtration[g]`` is a non-negative level the differential may keep or
    raise.  Pages run from r = 0 to one past the top level, at which point
    every differential vanishes for degree reasons; the final page carries
    the stable dimensions.
    """
    n = len(cpx)
    if n == 0:
        return [SSPage(0, {}, {})]
    if len(filtration) != n:
        raise ValueError("filtration length does not match complex size")
    if min(filtration) < 0:
        raise ValueError("filtration levels must be non-negative")
    for src, col in cpx.diff.items():
        for dst, coeff in col.items():
            if coeff % 2 and filtration[dst] < filtration[src]:
                raise ValueError(
                    f"differential lowers filtration on {src}->{dst}"
                )
    blocks = _FilteredBlocks(cpx, filtration)
    pmax = blocks.pmax
    last_r = min(pmax + 1, max_pages)
    pages: List[SSPage] = []
    for r in range(last_r + 1):
        dims: Dict[Tuple[int, int], int] = {}
        ranks: Dict[Tuple[int, int], int] = {}
        for i in sorted(blocks.by_deg):
            for p in range(pmax + 1):
                z = blocks.cycles(i, p, r)
                if not z:
                    continue
                sub = blocks.boundary_span(i, p, r)
                alive = sum(1 for vec in z if sub.add(vec))
                if alive:
                    dims[(p, i)] = alive
                if p + r <= pmax:
                    tgt = blocks.boundary_span(i - 1, p + r, r)
                    grew = sum(
                        1 for vec in z if tgt.add(blocks.dmask(i, vec))
                    )
                    if grew:
                        ranks[(p, i)] = grew
        pages.append(SSPage(r, dims, ranks))
    if pages and not pages[-1].is_settled():
        raise RuntimeError("spectral sequence failed to settle at the top page")
    return pages


if __name__ == "__main__":
    import doctest

    doctest.testmod()
