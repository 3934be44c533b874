"""Independent reference computations shared by the test modules.

Everything here recomputes values through a different route than the
package: reference diagrams come from braid words and twist bands, state
sums trace circles by walking endpoint permutations instead of
union-find, and planarity is decided by counting faces of the rotation
system.  Where the package and these oracles agree on a value, the value
is trusted.
"""

from __future__ import annotations

import random
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from khseq import AnnularDiagram, QuotientTangle, lift_intravergent, parse_tangle
from khseq.diagram import TangleError, close_quotients


# ---------------------------------------------------------------------------
# reference diagrams


def braid_closure(word: Sequence[int], strands: int) -> AnnularDiagram:
    """Closed braid as an annular diagram with no ray data."""
    cur = list(range(1, strands + 1))
    nxt = strands + 1
    crossings = []
    for s in word:
        i = abs(s) - 1
        a, b = cur[i], cur[i + 1]
        c, d = nxt, nxt + 1
        nxt += 2
        if s > 0:
            crossings.append((b, d, c, a))
        else:
            crossings.append((a, b, d, c))
        cur[i], cur[i + 1] = c, d
    joins = [(cur[p], p + 1) for p in range(strands)]
    named = tuple(tuple(f"a{x}" for x in t) for t in crossings)
    joins_named = tuple((f"a{x}", f"a{y}") for x, y in joins)
    arcs = sorted({a for t in named for a in t})
    return AnnularDiagram(named, {a: 0 for a in arcs}, arcs[0], joins_named)


def pretzel(es: Sequence[int]) -> AnnularDiagram:
    """Pretzel diagram: vertical twist bands, tops and bottoms chained."""
    crossings: List[Tuple[str, str, str, str]] = []
    tops = []
    bots = []
    count = [0]

    def fresh() -> str:
        count[0] += 1
        return f"p{count[0]}"

    for e in es:
        cur = [fresh(), fresh()]
        tops.append(tuple(cur))
        for _ in range(abs(e)):
            a, b = cur
            c, d = fresh(), fresh()
            if e > 0:
                crossings.append((b, d, c, a))
            else:
                crossings.append((a, b, d, c))
            cur = [c, d]
        bots.append(tuple(cur))
    joins = []
    n = len(es)
    for i in range(n):
        joins.append((tops[i][1], tops[(i + 1) % n][0]))
        joins.append((bots[i][1], bots[(i + 1) % n][0]))
    arcs = sorted({a for t in crossings for a in t})
    return AnnularDiagram(
        tuple(crossings), {a: 0 for a in arcs}, arcs[0], tuple(joins)
    )


# ---------------------------------------------------------------------------
# independent state sum: signs by traversal, circles by endpoint walking


def _endpoint_maps(d: AnnularDiagram):
    """Pair the two global occurrences of each arc; occurrences are
    (crossing, slot) or ("j", join index, side)."""
    occ: Dict[str, List[Tuple]] = {}
    for ci, c in enumerate(d.crossings):
        for s, a in enumerate(c):
            occ.setdefault(a, []).append(("c", ci, s))
    for ji, (a, b) in enumerate(d.joins):
        occ.setdefault(a, []).append(("j", ji, 0))
        occ.setdefault(b, []).append(("j", ji, 1))
    for a, ends in occ.items():
        if len(ends) != 2:
            raise ValueError(f"arc {a} has {len(ends)} ends")
    return occ


def diagram_signs_oracle(d: AnnularDiagram) -> List[int]:
    """Crossing signs from an explicit traversal of the knot.

    The under strand of a crossing enters at slot 0 and leaves at slot 2;
    the over strand leaves at slot 1 when the crossing is positive.
    """
    occ = _endpoint_maps(d)
    mate = {}
    for ends in occ.values():
        mate[ends[0]] = ends[1]
        mate[ends[1]] = ends[0]
    start = ("c", 0, 0)
    over_entry: Dict[int, int] = {}
    cur = start
    visited = 0
    total = 4 * len(d.crossings) + 2 * len(d.joins)
    while True:
        kind = cur[0]
        if kind == "c":
            _, ci, s = cur
            if s in (1, 3):
                over_entry[ci] = s
            nxt = ("c", ci, (s + 2) % 4)
        else:
            _, ji, side = cur
            nxt = ("j", ji, 1 - side)
        visited += 2
        cur = mate[nxt]
        if cur == start:
            break
        if visited > total:
            raise ValueError("traversal does not close up")
    if visited != total:
        raise ValueError("diagram is not a single knot")
    return [1 if over_entry[ci] == 3 else -1 for ci in range(len(d.crossings))]


def _circles_by_walk(d: AnnularDiagram, state: Sequence[int]) -> List[set]:
    """Circles of a smoothing, walking the endpoint pairing explicitly."""
    occ = _endpoint_maps(d)
    mate = {}
    for ends in occ.values():
        mate[ends[0]] = ends[1]
        mate[ends[1]] = ends[0]
    arc_of = {}
    for a, ends in occ.items():
        for e in ends:
            arc_of[e] = a
    smooth = {}
    for ci, bit in enumerate(state):
        pairs = ((0, 1), (2, 3)) if bit == 0 else ((0, 3), (1, 2))
        for s, t in pairs:
            smooth[("c", ci, s)] = ("c", ci, t)
            smooth[("c", ci, t)] = ("c", ci, s)
    for ji in range(len(d.joins)):
        smooth[("j", ji, 0)] = ("j", ji, 1)
        smooth[("j", ji, 1)] = ("j", ji, 0)
    circles = []
    seen = set()
    for e0 in mate:
        if e0 in seen:
            continue
        circle = set()
        cur = e0
        while cur not in seen:
            seen.add(cur)
            circle.add(arc_of[cur])
            nxt = smooth[cur]
            seen.add(nxt)
            circle.add(arc_of[nxt])
            cur = mate[nxt]
        circles.append(circle)
    return circles


def state_sum_jones(d: AnnularDiagram) -> Dict[int, int]:
    """Graded Euler characteristic by brute force over smoothings."""
    n = len(d.crossings)
    neg = sum(1 for s in diagram_signs_oracle(d) if s < 0)
    out: Dict[int, int] = {}
    for v in range(1 << n):
        state = [(v >> b) & 1 for b in range(n)]
        weight = sum(state)
        sign = -1 if (weight - neg) & 1 else 1
        base = n - 3 * neg + weight
        ncirc = len(_circles_by_walk(d, state))
        coeff = 1
        for t in range(ncirc + 1):
            e = base + ncirc - 2 * t
            out[e] = out.get(e, 0) + sign * coeff
            coeff = coeff * (ncirc - t) // (t + 1)
    return {e: c for e, c in out.items() if c}


def annular_state_sum(d: AnnularDiagram) -> Dict[Tuple[int, int], int]:
    """Two-variable Euler characteristic; circles weighed by essentiality."""
    n = len(d.crossings)
    neg = sum(1 for s in diagram_signs_oracle(d) if s < 0)
    out: Dict[Tuple[int, int], int] = {}
    for v in range(1 << n):
        state = [(v >> b) & 1 for b in range(n)]
        weight = sum(state)
        sign = -1 if (weight - neg) & 1 else 1
        base = n - 3 * neg + weight
        acc: Dict[Tuple[int, int], int] = {(base, 0): sign}
        for circle in _circles_by_walk(d, state):
            ess = sum(d.arc_ray_hits.get(a, 0) for a in circle) % 2
            nxt: Dict[Tuple[int, int], int] = {}
            for (qe, ke), c in acc.items():
                terms = (
                    ((qe - 1, ke + 1), (qe + 1, ke - 1))
                    if ess
                    else ((qe + 1, ke), (qe - 1, ke))
                )
                for key in terms:
                    nxt[key] = nxt.get(key, 0) + c
            acc = nxt
        for key, c in acc.items():
            out[key] = out.get(key, 0) + c
    return {key: c for key, c in out.items() if c}


# ---------------------------------------------------------------------------
# planarity of a diagram's rotation system


def diagram_face_count(crossings, joins) -> int:
    occ: Dict[str, List[Tuple[int, int]]] = {}
    for ci, c in enumerate(crossings):
        for s, a in enumerate(c):
            occ.setdefault(a, []).append((ci, s))
    base = len(crossings)
    for ji, (a, b) in enumerate(joins):
        occ.setdefault(a, []).append((base + ji, 0))
        occ.setdefault(b, []).append((base + ji, 1))
    deg = [4] * len(crossings) + [2] * len(joins)
    alpha = {}
    for a, ends in occ.items():
        if len(ends) != 2:
            raise ValueError(f"arc {a} has {len(ends)} ends")
        alpha[ends[0]] = ends[1]
        alpha[ends[1]] = ends[0]
    faces = 0
    seen = set()
    for h in alpha:
        if h in seen:
            continue
        faces += 1
        cur = h
        while cur not in seen:
            seen.add(cur)
            v, s = alpha[cur]
            cur = (v, (s + 1) % deg[v])
    return faces


def is_planar_diagram(crossings, joins) -> bool:
    """Genus-zero test: V - E + F = 2 for the given rotation system.

    Assumes a connected diagram (a single knot).  Crossing tuples are
    read as the counterclockwise order of the four ends.
    """
    v = len(crossings) + len(joins)
    if v == 0:
        return True
    e = (4 * len(crossings) + 2 * len(joins)) // 2
    return diagram_face_count(crossings, joins) == e - v + 2


# ---------------------------------------------------------------------------
# random quotient tangles (planar by construction-and-rejection)


def perfect_matching(rng: random.Random, slots: int) -> List[Tuple[int, int]]:
    free = list(range(slots))
    out = []
    while free:
        a = free.pop(0)
        b = free.pop(rng.randrange(len(free)))
        out.append((a, b))
    return out


def tangle_text(
    m: Sequence[Tuple[int, int]],
    choice: Sequence[int],
    n: int,
    axis: str,
    hits: Optional[Dict[str, int]] = None,
) -> str:
    """Tangle file for one pass-pairing, crossing choice, and ray data."""
    lines = []
    for (s, t), c in zip(m, choice):
        a_in, a_out = f"a{s}", f"a{s+1}"
        b_in, b_out = f"a{t}", f"a{t+1}"
        if c & 1:
            x, y = (b_in, b_out) if not (c & 2) else (b_out, b_in)
            lines.append(f"X {a_in} {x} {a_out} {y}")
        else:
            x, y = (a_in, a_out) if not (c & 2) else (a_out, a_in)
            lines.append(f"X {b_in} {x} {b_out} {y}")
    lines.append(f"axis {axis}")
    lines.append(f"endpoints a0 a{2 * n}")
    if hits:
        parts = " ".join(f"{a}:{v}" for a, v in sorted(hits.items()) if v)
        if parts:
            lines.append(f"ray {parts}")
    return "\n".join(lines) + "\n"


def random_quotient_tangle(rng: random.Random, n: int) -> QuotientTangle:
    """A random planar n-crossing tangle with random ray decorations.

    Structures whose lift or closures fail the genus-zero test are
    redrawn, so every returned tangle is an honest diagram.
    """
    if n == 0:
        hits = {"e1": rng.randrange(2)}
        text = "axis %s\nendpoints e1 e2\n" % rng.choice(["over", "under"])
        if hits["e1"]:
            text += "ray e1:1\n"
        return parse_tangle(text)
    while True:
        m = perfect_matching(rng, 2 * n)
        choice = [rng.randrange(4) for _ in range(n)]
        axis = rng.choice(["over", "under"])
        hits = {f"a{i}": rng.randrange(2) for i in range(2 * n + 1)}
        text = tangle_text(m, choice, n, axis, hits)
        try:
            t = parse_tangle(text)
        except TangleError:
            continue
        lift = lift_intravergent(t)
        if not is_planar_diagram(lift.underlying.crossings, lift.underlying.joins):
            continue
        cl = close_quotients(t)
        if not all(
            is_planar_diagram(d.crossings, d.joins)
            for d in (cl.k0, cl.k1, cl.kinked)
        ):
            continue
        return t


# ---------------------------------------------------------------------------
# dense GF(2) elimination and a naive Smith form


def f2_rank_dense(rows: Sequence[Sequence[int]]) -> int:
    grid = [[x & 1 for x in row] for row in rows]
    rank = 0
    cols = len(grid[0]) if grid else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(grid)) if grid[i][c]), None)
        if piv is None:
            continue
        grid[rank], grid[piv] = grid[piv], grid[rank]
        for i in range(len(grid)):
            if i != rank and grid[i][c]:
                grid[i] = [x ^ y for x, y in zip(grid[i], grid[rank])]
        rank += 1
    return rank


def smith_diagonal_naive(entries: Sequence[Sequence[int]]) -> List[int]:
    """Elementary-divisor diagonal by gcd grinding, for small matrices."""
    a = [list(r) for r in entries]
    nr = len(a)
    nc = len(a[0]) if a else 0
    n = min(nr, nc)
    t = 0
    while t < n:
        pick = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (pick is None or abs(a[i][j]) < abs(a[pick[0]][pick[1]])):
                    pick = (i, j)
        if pick is None:
            break
        i0, j0 = pick
        a[t], a[i0] = a[i0], a[t]
        for r in a:
            r[t], r[j0] = r[j0], r[t]
        p = a[t][t]
        dirty = False
        for i in range(t + 1, nr):
            q = a[i][t] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            dirty = dirty or a[i][t] != 0
        for j in range(t + 1, nc):
            q = a[t][j] // p
            if q:
                for r in a:
                    r[j] -= q * r[t]
            dirty = dirty or a[t][j] != 0
        if dirty:
            continue
        bad = None
        for i in range(t + 1, nr):
            if any(x % p for x in a[i][t + 1 :]):
                bad = i
                break
        if bad is not None:
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            continue
        t += 1
    diag = [abs(a[i][i]) if i < t else 0 for i in range(n)]
    return diag


# ---------------------------------------------------------------------------
# random chain complexes with planted homology


def canonical_torsion(orders: Sequence[int]) -> Tuple[int, ...]:
    """Divisor-chain form of a finite abelian group given as cyclic orders.

    >>> canonical_torsion([2, 3])
    (6,)
    >>> canonical_torsion([4, 6])
    (2, 12)
    """
    powers: Dict[int, List[int]] = {}
    for o in orders:
        d = 2
        while o > 1:
            e = 0
            while o % d == 0:
                o //= d
                e += 1
            if e:
                powers.setdefault(d, []).append(d**e)
            d += 1
    k = max((len(v) for v in powers.values()), default=0)
    out = []
    for pos in range(k):
        val = 1
        for p, v in powers.items():
            v.sort()
            if len(v) > k - 1 - pos:
                val *= v[len(v) - k + pos]
        out.append(val)
    return tuple(out)


def random_graded_complex(rng: random.Random, with_torsion: bool = True):
    """A random two-index complex plus its exact planted homology.

    Returns (gradings, diff, free, torsion): homology has the given free
    ranks and torsion orders by construction, scrambled afterwards by
    unimodular grading-preserving basis changes.
    """
    gradings: List[Tuple[int, int]] = []
    diff: Dict[int, Dict[int, int]] = {}
    free: Dict[Tuple[int, int], int] = {}
    torsion: Dict[Tuple[int, int], List[int]] = {}

    def add(g: Tuple[int, int]) -> int:
        gradings.append(g)
        return len(gradings) - 1

    js = [rng.randrange(-2, 3) * 2 for _ in range(3)]
    for _ in range(rng.randrange(2, 7)):
        j = rng.choice(js)
        i = rng.randrange(-3, 4)
        kind = rng.randrange(3 if with_torsion else 2)
        if kind == 0:
            g = add((i, j))
            free[(i, j)] = free.get((i, j), 0) + 1
        elif kind == 1:
            e = add((i, j))
            f = add((i - 1, j))
            diff[e] = {f: 1 if rng.randrange(2) else -1}
        else:
            order = rng.choice([2, 3, 4, 6])
            e = add((i, j))
            f = add((i - 1, j))
            diff[e] = {f: order * (1 if rng.randrange(2) else -1)}
            torsion.setdefault((i - 1, j), []).append(order)
    by_grading: Dict[Tuple[int, int], List[int]] = {}
    for idx, g in enumerate(gradings):
        by_grading.setdefault(g, []).append(idx)
    pools = [v for v in by_grading.values() if len(v) > 1]
    for _ in range(60):
        if not pools:
            break
        pool = rng.choice(pools)
        b, a = rng.sample(pool, 2)
        c = rng.choice([1, -1, 2])
        # x_a += c * x_b: column a gains c * column b, rows with an
        # a-entry push -c of it onto b
        cola = diff.get(a, {})
        for dst, val in diff.get(b, {}).items():
            cola[dst] = cola.get(dst, 0) + c * val
            if not cola[dst]:
                del cola[dst]
        if cola:
            diff[a] = cola
        elif a in diff:
            del diff[a]
        for src, col in diff.items():
            if a in col:
                col[b] = col.get(b, 0) - c * col[a]
                if not col[b]:
                    del col[b]
    return gradings, diff, free, {
        g: canonical_torsion(v) for g, v in torsion.items()
    }


def random_equivariant_complex(rng: random.Random):
    """Random complex with an involution, as (gradings, diff, tau).

    Built from sheet-swapped sphere orbits, fixed classes, and acyclic
    pairs, then scrambled by involution-respecting transvections over
    GF(2).  d lowers the first grading by one and tau preserves both.
    """
    gradings: List[Tuple[int, int]] = []
    diff: Dict[int, Dict[int, int]] = {}
    tau: Dict[int, int] = {}

    def add(g: Tuple[int, int]) -> int:
        gradings.append(g)
        return len(gradings) - 1

    js = [0, 2]
    for _ in range(rng.randrange(2, 6)):
        j = rng.choice(js)
        base = rng.randrange(-2, 3)
        kind = rng.randrange(3)
        if kind == 0:
            # free orbit chain: the lift of a cell decomposition of a
            # sphere with the antipodal action, truncated at length k
            k = rng.randrange(1, 4)
            prev: Optional[Tuple[int, int]] = None
            for step in range(k):
                s0 = add((base + step, j))
                s1 = add((base + step, j))
                tau[s0] = s1
                tau[s1] = s0
                if prev is not None:
                    diff[s0] = {prev[0]: 1, prev[1]: 1}
                    diff[s1] = {prev[0]: 1, prev[1]: 1}
                prev = (s0, s1)
        elif kind == 1:
            g = add((base, j))
            tau[g] = g
        else:
            e = add((base, j))
            f = add((base - 1, j))
            tau[e] = e
            tau[f] = f
            diff[e] = {f: 1}
    by_grading: Dict[Tuple[int, int], List[int]] = {}
    for idx, g in enumerate(gradings):
        by_grading.setdefault(g, []).append(idx)
    pools = [v for v in by_grading.values() if len(v) > 1]
    for _ in range(80):
        if not pools:
            break
        pool = rng.choice(pools)
        a, b = rng.sample(pool, 2)
        ta, tb = tau[a], tau[b]
        if ta == b or tb == a:
            continue
        for x, y in ((a, b), (ta, tb)) if (ta, tb) != (a, b) else ((a, b),):
            # x_x += x_y over GF(2), preserving d tau = tau d
            colx = diff.get(x, {})
            for dst in diff.get(y, {}):
                if dst in colx:
                    del colx[dst]
                else:
                    colx[dst] = 1
            if colx:
                diff[x] = colx
            elif x in diff:
                del diff[x]
            for src, col in diff.items():
                if x in col:
                    if y in col:
                        del col[y]
                    else:
                        col[y] = 1
    return gradings, diff, tau


# ---------------------------------------------------------------------------
# corpus access


CORPUS_NAMES = ("unknot", "trefoil", "figure_eight", "9_46")


def corpus_tangles() -> List[Tuple[str, QuotientTangle]]:
    from khseq import corpus_path

    out = []
    for name in CORPUS_NAMES:
        out.append((name, parse_tangle(corpus_path(name).read_text())))
    return out


if __name__ == "__main__":
    import doctest

    doctest.testmod()
