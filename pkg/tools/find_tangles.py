"""Search for the bundled corpus tangles by their published invariants.

The corpus ships quotient tangles whose lifts are specific knots (unknot,
trefoil, figure-eight, 9_46).  Drawing those tangles by hand from pictures
is error prone, so this script enumerates small one-strand tangles and
filters them against independently computed reference values: Jones
polynomials from braid-closure or pretzel reference diagrams, and for 9_46
the full battery of published homological values.  Run from the repo root:

    python3 tools/find_tangles.py 9_46
    python3 tools/find_tangles.py trefoil
    python3 tools/find_tangles.py figure_eight
"""

from __future__ import annotations

import itertools
import sys
import time
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

sys.path.insert(0, "src")

from khseq import lift_intravergent, parse_tangle
from khseq.complexes import Ring, bockstein, f2_rank_kernel, homology
from khseq.diagram import (
    AnnularDiagram,
    QuotientTangle,
    close_quotients,
    diagram_invariants,
)
from khseq.equivariant import (
    axis_moving_maps,
    pair_cone_homology,
    tau_chain_map,
    verify_theorem,
)
from khseq.khovanov import _jones_state_sum, build_ackh, build_ckh
from khseq.complexes import add_maps_mod2, identity_map, induced_map


# ---------------------------------------------------------------------------
# reference diagrams (independent of the tangle machinery)


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
# tangle enumeration: one strand through n crossings, 2n passes


def matchings(slots: Sequence[int]) -> Iterator[List[Tuple[int, int]]]:
    if not slots:
        yield []
        return
    a = slots[0]
    for idx in range(1, len(slots)):
        b = slots[idx]
        rest = list(slots[1:idx]) + list(slots[idx + 1 :])
        for m in matchings(rest):
            yield [(a, b)] + m


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


def structures(n: int) -> Iterator[Tuple[List[Tuple[int, int]], Tuple[int, ...]]]:
    for m in matchings(list(range(2 * n))):
        for choice in itertools.product(range(4), repeat=n):
            yield m, choice


# ---------------------------------------------------------------------------
# searches


def find_by_lift_jones(
    n: int, target_jones: Dict[int, int], quotient_jones: Dict[int, int]
) -> Iterator[str]:
    """Tangle texts whose closures match quotient_jones and lift matches target."""
    for m, choice in structures(n):
        base = tangle_text(m, choice, n, "over")
        try:
            t = parse_tangle(base)
            cl = close_quotients(t)
        except Exception:
            continue
        if _jones_state_sum(cl.k1) != quotient_jones:
            continue
        if _jones_state_sum(cl.k0) != quotient_jones:
            continue
        arcs = [f"a{i}" for i in range(2 * n + 1)]
        for bits in range(2 ** len(arcs)):
            hits = {a: (bits >> i) & 1 for i, a in enumerate(arcs)}
            for axis in ("over", "under"):
                text = tangle_text(m, choice, n, axis, hits)
                try:
                    cand = parse_tangle(text)
                except Exception:
                    continue
                lift = lift_intravergent(cand)
                if _jones_state_sum(lift.underlying) != target_jones:
                    continue
                yield text


def jones_of(diagram: AnnularDiagram) -> Dict[int, int]:
    return _jones_state_sum(diagram)


def search_9_46() -> None:
    ref = pretzel((3, 3, -3))
    ref_cpx = build_ckh(ref)
    ref_z = homology(ref_cpx, Ring.Z)
    target_v = jones_of(ref)
    print("reference integral table:", ref_z.summary())
    print("reference jones:", dict(sorted(target_v.items())))

    rh3 = {1: 1, 3: 1, 5: 1, 9: -1}
    lh3 = {-1: 1, -3: 1, -5: 1, -9: -1}

    t_start = time.time()
    n = 4
    stage1 = []
    for m, choice in structures(n):
        try:
            t = parse_tangle(tangle_text(m, choice, n, "over"))
            cl = close_quotients(t)
        except Exception:
            continue
        v1 = _jones_state_sum(cl.k1)
        if v1 != rh3 and v1 != lh3:
            continue
        if _jones_state_sum(cl.k0) != v1:
            continue
        stage1.append((m, choice))
    print(
        "stage 1: %d structures with trefoil closures (%.1fs)"
        % (len(stage1), time.time() - t_start)
    )

    # the ray is a branch cut: sheet assignment in the lift switches on
    # ray parities, so the lift jones check lives inside the parity loop
    arcs = [f"a{i}" for i in range(2 * n + 1)]
    stage2 = []
    for m, choice in stage1:
        for axis in ("over", "under"):
            for bits in range(2 ** len(arcs)):
                hits = {a: (bits >> i) & 1 for i, a in enumerate(arcs)}
                text = tangle_text(m, choice, n, axis, hits)
                try:
                    cand = parse_tangle(text)
                    inv = diagram_invariants(cand)
                except Exception:
                    continue
                if inv.grading_correction != 4:
                    continue
                # reference homology spans homological degrees -6..0, so
                # the 9-crossing lift needs 6 or 8 negative crossings
                if inv.lift_negative not in (6, 8):
                    continue
                lift = lift_intravergent(cand)
                if _jones_state_sum(lift.underlying) != target_v:
                    continue
                stage2.append(text)
                print("candidate:", text.replace("\n", " / "))
    print(
        "stage 2: %d ray assignments with the right lift jones (%.1fs)"
        % (len(stage2), time.time() - t_start)
    )

    ref_table = ref_z.summary()
    for text in stage2:
        cand = parse_tangle(text)
        try:
            if not annular_slices_ok(cand):
                continue
            if not lift_battery(cand, ref_table):
                continue
            if annular_battery(cand):
                print("FOUND:\n" + text)
                return
        except AssertionError:
            # virtual structure: the cube is inconsistent, skip it
            continue
    print("no candidate survived the full battery")


def annular_slices_ok(t: QuotientTangle) -> bool:
    """Cheap gate: both closure slices sit exactly where published."""
    cl = close_quotients(t)
    h1 = homology(build_ackh(cl.k1), Ring.F2)
    slice1 = {g: d for g, d in h1.free.items() if 2 * g[1] + g[2] == 11 and d}
    if slice1 != {(2, 7, -3): 1, (3, 5, 1): 1}:
        return False
    h0 = homology(build_ackh(cl.k0), Ring.F2)
    slice0 = {g: d for g, d in h0.free.items() if 2 * g[1] + g[2] == 12 and d}
    return slice0 == {(2, 7, -2): 1, (3, 5, 2): 1}


def lift_battery(t: QuotientTangle, ref_table: Dict[str, Dict]) -> bool:
    """Ray-independent published values: integral table, Bockstein, tau rank."""
    K = lift_intravergent(t)
    cpx = build_ckh(K.underlying)
    hz = homology(cpx, Ring.Z)
    if hz.summary() != ref_table:
        return False
    hf = homology(cpx, Ring.F2)
    if (
        hf.dim((-1, -1)) != 1
        or hf.dim((0, -1)) != 2
        or hf.dim((0, 1)) != 2
    ):
        return False
    bock = bockstein(cpx)
    mat = bock.get((0, -1))
    if mat is None or f2_rank_kernel(mat)[0] != 1:
        return False
    tau = tau_chain_map(K)
    taup = add_maps_mod2(tau, identity_map(cpx))
    tmats = induced_map(taup, hf, hf)
    mat = tmats.get((0, 1))
    if mat is None or f2_rank_kernel(mat)[0] != 1:
        return False
    return True


def annular_battery(t: QuotientTangle) -> bool:
    """Ray-dependent published values: annular slices, f+, cone, the theorem."""
    cl = close_quotients(t)
    h1 = homology(build_ackh(cl.k1), Ring.F2)
    slice1 = {g: d for g, d in h1.free.items() if 2 * g[1] + g[2] == 11 and d}
    if slice1 != {(2, 7, -3): 1, (3, 5, 1): 1}:
        return False
    h0 = homology(build_ackh(cl.k0), Ring.F2)
    slice0 = {g: d for g, d in h0.free.items() if 2 * g[1] + g[2] == 12 and d}
    if slice0 != {(2, 7, -2): 1, (3, 5, 2): 1}:
        return False

    fplus, _ = axis_moving_maps(t)
    hsrc = homology(fplus.source, Ring.F2)
    htgt = homology(fplus.target, Ring.F2)
    induced = induced_map(fplus, hsrc, htgt)
    for g in ((2, 7, -3), (3, 5, 1)):
        mat = induced.get(g)
        if mat is None or mat.rows != 1 or mat.cols != 1 or not mat.data[0]:
            return False

    cone = pair_cone_homology(t)
    if any(d for g, d in cone.free.items() if 2 * g[1] + g[2] == 12):
        return False

    rep = verify_theorem(t)
    return rep.passed


def diag_9_46() -> None:
    """Unfiltered census of 4-crossing structures with trefoil closures."""
    from collections import Counter

    ref = pretzel((3, 3, -3))
    target = jones_of(ref)
    mirror = {-e: c for e, c in target.items()}
    rh3 = {1: 1, 3: 1, 5: 1, 9: -1}
    lh3 = {-e: c for e, c in rh3.items()}
    chir: Counter = Counter()
    tags: Counter = Counter()
    hits = []
    n = 4
    for m, choice in structures(n):
        try:
            t = parse_tangle(tangle_text(m, choice, n, "over"))
            cl = close_quotients(t)
        except Exception:
            continue
        v1 = _jones_state_sum(cl.k1)
        v0 = _jones_state_sum(cl.k0)
        c1 = "R" if v1 == rh3 else ("L" if v1 == lh3 else None)
        c0 = "R" if v0 == rh3 else ("L" if v0 == lh3 else None)
        if c0 is None or c1 is None:
            continue
        chir[(c0, c1)] += 1
        for axis in ("over", "under"):
            cand = parse_tangle(tangle_text(m, choice, n, axis))
            inv = diagram_invariants(cand)
            lift = lift_intravergent(cand)
            vj = _jones_state_sum(lift.underlying)
            tag = "target" if vj == target else ("mirror" if vj == mirror else None)
            tags[tag] += 1
            if tag:
                hits.append(
                    (tag, c0, c1, axis, inv.grading_correction,
                     inv.lift_negative, m, choice)
                )
    print("closure chirality pairs:", dict(chir))
    print("lift jones tags:", dict(tags))
    for h in hits[:60]:
        print(h)


def search_lift(name: str, n: int, word: Sequence[int], strands: int) -> None:
    ref = braid_closure(word, strands)
    target = jones_of(ref)
    print(f"{name}: lift jones target {dict(sorted(target.items()))}")
    unknot_v = {-1: 1, 1: 1}
    rz = homology(build_ckh(ref), Ring.Z).summary()
    for text in find_by_lift_jones(n, target, unknot_v):
        cand = parse_tangle(text)
        lift = lift_intravergent(cand)
        hz = homology(build_ckh(lift.underlying), Ring.Z)
        if hz.summary() != rz:
            continue
        rep = verify_theorem(cand)
        if not rep.passed:
            continue
        print("FOUND:\n" + text)
        return
    print("no candidate found")


def main() -> None:
    which = sys.argv[1] if len(sys.argv) > 1 else "9_46"
    if which == "9_46":
        search_9_46()
    elif which == "diag":
        diag_9_46()
    elif which == "trefoil":
        search_lift("trefoil", 1, [1, 1, 1], 2)
    elif which == "figure_eight":
        search_lift("figure_eight", 2, [1, -2, 1, -2], 3)
    else:
        raise SystemExit(f"unknown target {which}")


if __name__ == "__main__":
    main()
