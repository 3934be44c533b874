"""Census: which (correction, winding, lift_negative) tuples ever reach the
target lift jones among trefoil-closure structures, with no correction
filter.  Streams every hit so partial runs are still useful."""

from __future__ import annotations

import sys
import time
from collections import Counter

sys.path.insert(0, "src")

from khseq import lift_intravergent, parse_tangle
from khseq.diagram import close_quotients, diagram_invariants
from khseq.khovanov import _jones_state_sum

from find_tangles import jones_of, pretzel, structures, tangle_text


def main() -> None:
    step = int(sys.argv[1]) if len(sys.argv) > 1 else 1
    stop_after = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    target = jones_of(pretzel((3, 3, -3)))
    mirror = {-e: c for e, c in target.items()}
    rh3 = {1: 1, 3: 1, 5: 1, 9: -1}
    lh3 = {-e: c for e, c in rh3.items()}

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
    print("stage 1:", len(stage1), flush=True)

    sample = stage1[::step]
    arcs = [f"a{i}" for i in range(2 * n + 1)]
    hit_census: Counter = Counter()
    n_jones = 0
    n_hits = 0
    t0 = time.time()
    for si, (m, choice) in enumerate(sample):
        for axis in ("over", "under"):
            for bits in range(2 ** len(arcs)):
                hits = {a: (bits >> i) & 1 for i, a in enumerate(arcs)}
                text = tangle_text(m, choice, n, axis, hits)
                try:
                    cand = parse_tangle(text)
                    inv = diagram_invariants(cand)
                except Exception:
                    continue
                if inv.lift_negative not in (6, 8):
                    continue
                lift = lift_intravergent(cand)
                vj = _jones_state_sum(lift.underlying)
                n_jones += 1
                tag = (
                    "target"
                    if vj == target
                    else ("mirror" if vj == mirror else None)
                )
                if tag != "target":
                    continue
                key = (inv.grading_correction, inv.closure_winding,
                       inv.lift_negative)
                hit_census[key] += 1
                n_hits += 1
                if hit_census[key] <= 2:
                    print("hit", key, "|", text.replace("\n", " / "),
                          flush=True)
                if stop_after and n_hits >= stop_after:
                    print("census so far:", dict(hit_census))
                    return
        if (si + 1) % 8 == 0:
            print("... %d/%d structures, %d jones, %d hits, %.0fs"
                  % (si + 1, len(sample), n_jones, n_hits, time.time() - t0),
                  flush=True)
    print("elapsed %.1fs, jones evaluations %d" % (time.time() - t0, n_jones))
    print("hit census (correction, winding, lift_negative):")
    for k in sorted(hit_census):
        print("  ", k, hit_census[k])


if __name__ == "__main__":
    main()
