"""Run the stage-3 acceptance battery over census hit lines.

Reads "hit (corr, wind, neg) | <text>" lines from a probe log, dedupes the
texts, and runs the cheap annular-slice gate first, then the full lift and
annular batteries from find_tangles.  Prints every text that survives.

Usage: python3 tools/battery946.py /tmp/probe946full.log [limit]
"""

import sys
import time

sys.path.insert(0, "tools")

from find_tangles import (  # noqa: E402
    annular_battery,
    annular_slices_ok,
    lift_battery,
    pretzel,
)

from khseq.complexes import Ring, homology  # noqa: E402
from khseq.diagram import diagram_invariants  # noqa: E402
from khseq import parse_tangle  # noqa: E402
from khseq.khovanov import build_ckh  # noqa: E402

REF_946 = homology(build_ckh(pretzel((3, 3, -3))), Ring.Z).summary()


def main() -> None:
    path = sys.argv[1]
    limit = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    texts = []
    seen = set()
    with open(path) as fh:
        for line in fh:
            if not line.startswith("hit "):
                continue
            key, _, text = line.partition(" | ")
            text = text.strip().rstrip("/").strip().replace(" / ", "\n")
            if text in seen:
                continue
            seen.add(text)
            texts.append((key[4:], text))
    if limit:
        texts = texts[:limit]
    print(f"{len(texts)} unique candidate texts")
    survivors = []
    for n, (key, text) in enumerate(texts):
        t0 = time.perf_counter()
        t = parse_tangle(text)
        inv = diagram_invariants(t)
        try:
            gate = annular_slices_ok(t)
            if not gate:
                print(
                    f"[{n}] {key} wind={inv.closure_winding} corr={inv.grading_correction}"
                    f" slices=NO ({time.perf_counter() - t0:.1f}s)",
                    flush=True,
                )
                continue
            print(f"[{n}] {key} slices=YES, running full battery", flush=True)
            ok_lift = lift_battery(t, REF_946)
            ok_ann = ok_lift and annular_battery(t)
            print(
                f"[{n}] lift={ok_lift} annular={ok_ann}"
                f" ({time.perf_counter() - t0:.1f}s)",
                flush=True,
            )
            if ok_ann:
                survivors.append(text)
                print("SURVIVOR: " + text, flush=True)
        except AssertionError:
            print(f"[{n}] virtual structure, skipped", flush=True)
    print(f"done: {len(survivors)} survivors")


if __name__ == "__main__":
    main()
