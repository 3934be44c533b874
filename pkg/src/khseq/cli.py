"""Command-line front end: homology tables and verification reports.

Every subcommand reads a tangle file (text or JSON form), prints a
human-readable table to stdout, and optionally writes a JSON report with
``--json PATH``.  Reports carry the tool version and a content hash of
the input, and serializing a parsed report reproduces it byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .complexes import HomologyTable, Ring, homology, induced_map
from .diagram import (
    QuotientTangle,
    TangleError,
    WrapDirection,
    apply_axis_wrap_move,
    close_quotients,
    diagram_invariants,
    lift_intravergent,
    parse_tangle,
)
from .equivariant import (
    axis_moving_maps,
    pair_cone_homology,
    tate_collapsed_homology,
    tate_ss_pages,
    verify_theorem,
)
from .khovanov import build_ackh, build_ckh, euler_characteristics
from .linalg import f2_rank_kernel


# ---------------------------------------------------------------------------
# small formatting helpers


def _aligned(rows: Sequence[Sequence[str]]) -> List[str]:
    """Right-align columns; header row first."""
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return [
        "  ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip()
        for row in rows
    ]


def _poly_str(coeffs: Dict[int, int], var: str = "q") -> str:
    """Sparse Laurent polynomial as text, lowest exponent first.

    >>> _poly_str({-1: 1, 1: 2, 3: -1})
    'q^-1 + 2q^1 - q^3'
    """
    if not coeffs:
        return "0"
    parts: List[str] = []
    for e in sorted(coeffs):
        c = coeffs[e]
        mag = "" if abs(c) == 1 else str(abs(c))
        term = f"{mag}{var}^{e}"
        if not parts:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append(("+ " if c > 0 else "- ") + term)
    return " ".join(parts)


def _grading_key(g: Sequence[int]) -> str:
    return ",".join(str(x) for x in g)


def _homology_result(
    h: HomologyTable, qmin: Optional[int], qmax: Optional[int]
) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for g in h.gradings_present():
        j = g[1]
        if qmin is not None and j < qmin:
            continue
        if qmax is not None and j > qmax:
            continue
        entry: Dict[str, Any] = {"rank": h.free.get(g, 0)}
        tors = h.torsion.get(g, ())
        if tors:
            entry["torsion"] = list(tors)
        out[_grading_key(g)] = entry
    return out


def _homology_lines(
    h: HomologyTable,
    labels: Sequence[str],
    qmin: Optional[int],
    qmax: Optional[int],
) -> List[str]:
    rows: List[Sequence[str]] = [tuple(labels) + ("rank", "torsion")]
    shown = 0
    for g in h.gradings_present():
        j = g[1]
        if qmin is not None and j < qmin:
            continue
        if qmax is not None and j > qmax:
            continue
        tors = h.torsion.get(g, ())
        rows.append(
            tuple(str(x) for x in g)
            + (str(h.free.get(g, 0)), ",".join(str(t) for t in tors) or "-")
        )
        shown += 1
    if not shown:
        return ["(no homology in the selected gradings)"]
    return _aligned(rows)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_kh(t: QuotientTangle, args: argparse.Namespace) -> Tuple[int, Dict, List[str]]:
    lift = lift_intravergent(t)
    h = homology(build_ckh(lift.underlying), Ring(args.ring))
    lines = [
        f"homology of the lifted diagram ({len(lift.underlying.crossings)} "
        f"crossings, ring {args.ring})"
    ]
    lines += _homology_lines(h, ("i", "j"), args.qmin, args.qmax)
    return 0, {"ring": args.ring, "table": _homology_result(h, args.qmin, args.qmax)}, lines


def _cmd_akh(t: QuotientTangle, args: argparse.Namespace) -> Tuple[int, Dict, List[str]]:
    cl = close_quotients(t)
    result: Dict[str, Any] = {"ring": args.ring}
    lines: List[str] = []
    for name, d in (("closure0", cl.k0), ("closure1", cl.k1)):
        h = homology(build_ackh(d), Ring(args.ring))
        lines.append(f"annular homology of {name} (ring {args.ring})")
        lines += _homology_lines(h, ("i", "j", "k"), args.qmin, args.qmax)
        lines.append("")
        result[name] = _homology_result(h, args.qmin, args.qmax)
    if lines and not lines[-1]:
        lines.pop()
    return 0, result, lines


def _diagram_dict(name: str, d: Any) -> Dict[str, Any]:
    return {
        "crossings": [list(c) for c in d.crossings],
        "joins": sorted([a, b] for a, b in d.joins),
        "ray_hits": {a: h for a, h in sorted(d.arc_ray_hits.items()) if h},
        "basepoint": d.basepoint,
    }


def _cmd_quotients(t: QuotientTangle, args: argparse.Namespace) -> Tuple[int, Dict, List[str]]:
    cl = close_quotients(t)
    result: Dict[str, Any] = {}
    lines: List[str] = []
    for name, d in (("closure0", cl.k0), ("closure1", cl.k1)):
        result[name] = _diagram_dict(name, d)
        hits = " ".join(
            f"{a}:{h}" for a, h in sorted(d.arc_ray_hits.items()) if h
        )
        lines.append(
            f"{name}: {len(d.crossings)} crossings, "
            f"ray hits {hits or '(none)'}, basepoint {d.basepoint}"
        )
        for c in d.crossings:
            lines.append("  X " + " ".join(c))
    return 0, result, lines


def _cmd_invariants(t: QuotientTangle, args: argparse.Namespace) -> Tuple[int, Dict, List[str]]:
    inv = diagram_invariants(t)
    shift_inv = inv.closure_winding - inv.grading_correction
    result = {
        "tangle_crossings": inv.tangle_crossings,
        "tangle_negative": inv.tangle_negative,
        "lift_crossings": inv.lift_crossings,
        "lift_negative": inv.lift_negative,
        "grading_correction": inv.grading_correction,
        "closure_winding": inv.closure_winding,
        "winding_minus_correction": shift_inv,
        "axis_linking_2x": inv.axis_linking_2x,
    }
    lines = _aligned(
        [
            ("lift crossings", str(inv.lift_crossings)),
            ("lift negative crossings", str(inv.lift_negative)),
            ("tangle crossings", str(inv.tangle_crossings)),
            ("tangle negative crossings", str(inv.tangle_negative)),
            ("grading correction", str(inv.grading_correction)),
            ("closure winding", str(inv.closure_winding)),
            ("winding minus correction", str(shift_inv)),
            ("axis linking, doubled", str(inv.axis_linking_2x)),
        ]
    )
    return 0, result, lines


def _cmd_fplus(t: QuotientTangle, args: argparse.Namespace) -> Tuple[int, Dict, List[str]]:
    fplus, _ = axis_moving_maps(t)
    hsrc = homology(fplus.source, Ring.F2)
    htgt = homology(fplus.target, Ring.F2)
    blocks = induced_map(fplus, hsrc, htgt)
    si, sj, sk = fplus.shift
    result: Dict[str, Any] = {"shift": [si, sj, sk], "blocks": {}}
    lines = [f"axis-moving map on homology, grading shift ({si},{sj},{sk})"]
    rows: List[Sequence[str]] = [("source (i,j,k)", "target (i,j,k)", "shape", "rank")]
    for g in sorted(blocks):
        mat = blocks[g]
        tgt = (g[0] + si, g[1] + sj, g[2] + sk)
        rank = f2_rank_kernel(mat)[0]
        result["blocks"][_grading_key(g)] = {
            "target": _grading_key(tgt),
            "rows": mat.rows,
            "cols": mat.cols,
            "rank": rank,
        }
        rows.append(
            (
                "(" + _grading_key(g) + ")",
                "(" + _grading_key(tgt) + ")",
                f"{mat.rows}x{mat.cols}",
                str(rank),
            )
        )
    lines += _aligned(rows) if len(rows) > 1 else ["(no classes in the source)"]
    return 0, result, lines


def _cmd_cone(t: QuotientTangle, args: argparse.Namespace) -> Tuple[int, Dict, List[str]]:
    h = pair_cone_homology(t)
    lines = ["homology of the cone of the first axis-moving map (ring F2)"]
    lines += _homology_lines(h, ("i", "j", "k"), args.qmin, args.qmax)
    return 0, {"ring": "F2", "table": _homology_result(h, args.qmin, args.qmax)}, lines


def _cmd_tate(t: QuotientTangle, args: argparse.Namespace) -> Tuple[int, Dict, List[str]]:
    K = lift_intravergent(t)
    pages = tate_ss_pages(K, window=args.window)
    collapsed = tate_collapsed_homology(K)
    window = len(pages) - 2
    result: Dict[str, Any] = {
        "window": window,
        "collapsed": {str(j): d for j, d in sorted(collapsed.items())},
        "pages": [
            {
                "r": p.r,
                "dims": {_grading_key(k): v for k, v in sorted(p.dims.items())},
                "ranks": {_grading_key(k): v for k, v in sorted(p.ranks.items())},
            }
            for p in pages
        ],
    }
    lines = [f"periodic filtration over window 0..{window}"]
    rows: List[Sequence[str]] = [("page", "total dim", "differentials")]
    for p in pages:
        rows.append(
            (
                str(p.r),
                str(sum(p.dims.values())),
                "settled" if p.is_settled() else str(sum(p.ranks.values())),
            )
        )
    lines += _aligned(rows)
    lines.append("stable column dimensions per quantum grading:")
    rows = [("j", "dim")]
    for j, d in sorted(collapsed.items()):
        rows.append((str(j), str(d)))
    lines += _aligned(rows) if len(rows) > 1 else ["  (zero)"]
    return 0, result, lines


def _cmd_verify(t: QuotientTangle, args: argparse.Namespace) -> Tuple[int, Dict, List[str]]:
    rep = verify_theorem(t, window=args.window)
    corr = rep.grading_correction
    result: Dict[str, Any] = {
        "window": rep.window,
        "grading_correction": corr,
        "passed": rep.passed,
        "failures": list(rep.failures),
        "columns": [],
    }
    lines = [
        f"window {rep.window}, grading correction {corr}; "
        "each source grading j is matched against the cone along "
        "2*jbar + k = j - 1 + 3*correction"
    ]
    rows: List[Sequence[str]] = [
        ("j", "target line", "first page", "stable", "cone", "status")
    ]
    for col in rep.columns:
        cs = col.summary()
        cs["target_line"] = col.quantum - 1 + 3 * corr
        result["columns"].append(cs)
        ok = col.converges and col.dual_paths_agree and col.rank_bound_ok
        if col.single_degree_identity_ok is False or col.swap_ok is False:
            ok = False
        rows.append(
            (
                str(col.quantum),
                str(col.quantum - 1 + 3 * corr),
                str(col.e1_dim),
                str(col.collapsed_dim),
                str(col.target_dim),
                "ok" if ok else "FAIL",
            )
        )
    lines += _aligned(rows)
    for f in rep.failures:
        lines.append("failure: " + f)
    lines.append("verification " + ("PASSED" if rep.passed else "FAILED"))
    return (0 if rep.passed else 1), result, lines


def _cmd_euler(t: QuotientTangle, args: argparse.Namespace) -> Tuple[int, Dict, List[str]]:
    ed = euler_characteristics(t)
    result = {
        "lift_jones": {str(e): c for e, c in sorted(ed.lift_jones.items())},
        "closure0": {_grading_key(k): c for k, c in sorted(ed.closure0.items())},
        "closure1": {_grading_key(k): c for k, c in sorted(ed.closure1.items())},
    }
    lines = ["lift:     " + _poly_str(ed.lift_jones)]
    for name, table in (("closure0", ed.closure0), ("closure1", ed.closure1)):
        parts: List[str] = []
        for (qe, ke) in sorted(table):
            c = table[(qe, ke)]
            mag = "" if abs(c) == 1 else str(abs(c))
            sign = "- " if c < 0 else ("+ " if parts else "")
            parts.append(f"{sign}{mag}q^{qe}w^{ke}")
        lines.append(f"{name}: " + (" ".join(parts) or "0"))
    return 0, result, lines


def _cmd_wrap(t: QuotientTangle, args: argparse.Namespace) -> Tuple[int, Dict, List[str]]:
    direction = WrapDirection(args.direction)
    out = t
    for _ in range(args.times):
        out = apply_axis_wrap_move(out, direction)
    text = out.to_text()
    result = {"direction": args.direction, "times": args.times, "tangle": text}
    return 0, result, text.splitlines()


_COMMANDS = {
    "kh": _cmd_kh,
    "akh": _cmd_akh,
    "quotients": _cmd_quotients,
    "invariants": _cmd_invariants,
    "fplus": _cmd_fplus,
    "cone": _cmd_cone,
    "tate": _cmd_tate,
    "verify": _cmd_verify,
    "euler": _cmd_euler,
    "wrap": _cmd_wrap,
}


# ---------------------------------------------------------------------------
# argument parsing and report plumbing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="khseq",
        description="Exact homology of strongly invertible knot diagrams "
        "given as quotient tangles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str, *, ring: bool = False,
            qrange: bool = False, window: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("tangle", help="tangle file (text or JSON form)")
        if ring:
            p.add_argument(
                "--ring", choices=[r.value for r in Ring], default="F2",
                help="coefficient ring (default F2)",
            )
        if qrange:
            p.add_argument("--qmin", type=int, default=None,
                           help="lowest quantum grading shown")
            p.add_argument("--qmax", type=int, default=None,
                           help="highest quantum grading shown")
        if window:
            p.add_argument(
                "--window", type=int, default=None,
                help="truncation window for the periodic filtration "
                "(default: automatic, enlarged until stable)",
            )
        p.add_argument("--json", metavar="PATH", default=None,
                       help="also write a JSON report to PATH")
        p.add_argument(
            "--threads", type=int, default=os.cpu_count() or 1,
            help="worker cap; accepted for interface stability, the "
            "computation currently runs on one thread",
        )
        return p

    add("kh", "homology of the lifted diagram", ring=True, qrange=True)
    add("akh", "annular homology of both quotient closures", ring=True, qrange=True)
    add("quotients", "print both quotient closure diagrams")
    add("invariants", "crossing counts, grading correction, winding")
    add("fplus", "first axis-moving map on annular homology")
    add("cone", "homology of the cone of the first axis-moving map", qrange=True)
    add("tate", "pages of the truncated periodic filtration", window=True)
    add("verify", "check the stable page against the cone, grading by grading",
        window=True)
    add("euler", "graded Euler characteristics of lift and closures")
    wrap_p = add("wrap", "apply an axis wrap or unwrap move and print the tangle")
    wrap_p.add_argument(
        "direction", nargs="?", choices=["wrap", "unwrap"], default="wrap",
        help="which move to apply (default wrap)",
    )
    wrap_p.add_argument("--times", type=int, default=1,
                        help="number of moves to apply")
    return parser


def _flag_dict(args: argparse.Namespace) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for key in ("ring", "qmin", "qmax", "window", "direction", "times"):
        val = getattr(args, key, None)
        if val is not None:
            out[key] = val
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        data = Path(args.tangle).read_bytes()
        tangle = parse_tangle(data.decode("utf-8"))
    except (OSError, UnicodeDecodeError, TangleError) as exc:
        print(f"khseq: error: {exc}", file=sys.stderr)
        return 2
    try:
        code, result, lines = _COMMANDS[args.command](tangle, args)
    except (TangleError, ValueError) as exc:
        print(f"khseq: error: {exc}", file=sys.stderr)
        return 2
    for line in lines:
        print(line)
    if args.json:
        report = {
            "command": args.command,
            "version": __version__,
            "input": {
                "path": args.tangle,
                "sha256": hashlib.sha256(data).hexdigest(),
            },
            "flags": _flag_dict(args),
            "result": result,
        }
        Path(args.json).write_text(
            json.dumps(report, sort_keys=True, indent=2) + "\n"
        )
    return code


if __name__ == "__main__":
    raise SystemExit(main())
