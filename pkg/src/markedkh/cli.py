"""Command line front end: ``markedkh <subcommand> [options] inputs...``.

Every subcommand reads the JSON diagram format and prints one report per
input.  JSON output is sorted and contains no timings, so a fixed input and
seed give byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import dihedral, dropped, filtration, khovanov
from .cube import DEFAULT_BOUND
from .diagram import LinkInput, MarkingData, is_alternating, load_input
from .errors import (BasepointOnOmega, MarkedKhError, NonTrivialVertex, SameComponent,
                     SplitFailure, SplitUnknot, TooLarge)

SUBCOMMANDS = ("kh", "khred", "dropped", "filtration", "dihedral", "check")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    inputs: tuple[str, ...]
    max_crossings: int = DEFAULT_BOUND
    seed: int = 0
    fmt: str = "json"
    drop: int | None = None
    drop2: int | None = None
    basepoint: int | None = None

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand}")
        if self.max_crossings <= 0:
            raise ValueError("--max-crossings must be positive")


def corpus_dir() -> Path:
    return Path(str(resources.files("markedkh") / "corpus"))


def corpus_files() -> list[Path]:
    return sorted(corpus_dir().glob("*.json"))


def resolve_path(name: str) -> Path:
    """A path on disk, or a file of the bundled corpus (``corpus/trefoil_left.json``)."""
    p = Path(name)
    if p.exists():
        return p
    q = corpus_dir() / p.name
    if q.exists():
        return q
    q = corpus_dir() / (p.stem + ".json")
    if q.exists():
        return q
    raise FileNotFoundError(name)


def read_input(path: str) -> LinkInput:
    p = resolve_path(path)
    li = load_input(p.read_text())
    if li.name is None:
        li = LinkInput(li.diagram, li.marking, li.basepoint, p.stem)
    return li


# -- per-subcommand reports -------------------------------------------------------


def report_kh(li: LinkInput, cfg: RunConfig) -> dict:
    cx = khovanov.assemble(li.diagram, li.marking, cfg.max_crossings)
    return {**cx.summary(), "bigraded": _bigraded(cx)}


def report_khred(li: LinkInput, cfg: RunConfig) -> dict:
    bp = cfg.basepoint if cfg.basepoint is not None else li.basepoint
    cx = khovanov.assemble_reduced(li.diagram, li.marking, bp, cfg.max_crossings)
    return {**cx.summary(), "bigraded": _bigraded(cx)}


def _bigraded(cx) -> dict:
    return {f"{h},{j}": r for (h, j), r in sorted(cx.bigraded().items())}


def _drops(li: LinkInput, cfg: RunConfig) -> list[int]:
    return [cfg.drop] if cfg.drop is not None else list(range(li.diagram.n))


def report_dropped(li: LinkInput, cfg: RunConfig) -> dict:
    d, m = li.diagram, li.marking
    full = khovanov.assemble(d, m, cfg.max_crossings).total_rank()
    out = {"full_rank": full, "alternating": is_alternating(d)}
    if cfg.drop is not None and cfg.drop2 is not None:
        dc = dropped.assemble_double_dropped(d, m, cfg.drop, cfg.drop2, bound=cfg.max_crossings)
        out["double"] = {"dropped": list(dc.dropped), "rank": dc.total_rank(),
                         "edge_types": dc.edge_types}
        return out
    out["single"] = [_single_drop(d, m, x, cfg) for x in _drops(li, cfg)]
    return out


def _single_drop(d, m, x, cfg) -> dict:
    dc = dropped.assemble_dropped(d, m, x, bound=cfg.max_crossings)
    row = {"crossing": x, "rank": dc.total_rank(), "edge_types": dc.edge_types}
    try:
        L = dropped.ladder(d, m, x, bound=cfg.max_crossings)
        dropped.check_ladder(L)
        s = dropped.split_DEF(L)
    except (SplitFailure, BasepointOnOmega) as exc:
        row["splitting"] = exc.to_json()
        return row
    cc = dropped.cone_check(s)
    row["splitting"] = {"dims": dict(sorted(s.dims.items())),
                        "structural": dropped.structural_report(s),
                        "gamma_beta_nnz": int(dropped.gamma_beta(s).nnz),
                        "cone_ok": cc.ok, "rank_small": cc.rank_small}
    return row


def report_filtration(li: LinkInput, cfg: RunConfig) -> dict:
    d, m = li.diagram, li.marking
    drops = ()
    if cfg.drop is not None:
        drops = (cfg.drop,) if cfg.drop2 is None else (cfg.drop, cfg.drop2)
    ctx = filtration.context(d, m, drops, bound=cfg.max_crossings)
    if len(drops) == 2:
        cx = dropped.assemble_double_dropped(d, m, *drops, bound=cfg.max_crossings).complex
    elif drops:
        cx = dropped.assemble_dropped(d, m, drops[0], bound=cfg.max_crossings).complex
    else:
        cx = khovanov.assemble(d, m, cfg.max_crossings)
    rep = filtration.check_orders(cx, ctx, raise_on_violation=False)
    out = {"dropped": list(drops), "origin": ctx.origin, "orders": rep.to_json(),
           "good_proxy": filtration.is_good_proxy(d, m) if d.n <= 14 else None}
    if drops:
        out["sigma_squares"] = filtration.check_sigma_additivity(ctx)
        out["pi_values"] = {",".join(map(str, k)) or "none": v
                            for k, v in sorted(filtration.check_pi_table(ctx).items())}
    return out


def report_dihedral(li: LinkInput, cfg: RunConfig) -> dict:
    out = dihedral.summary(li.diagram, li.marking)
    sys_ = dihedral.build_system(li.diagram, li.marking)
    out["signs_in_kernel"] = dihedral.signs_in_kernel(sys_)
    if out["det"] and out["count"] != dihedral.INFINITE:
        try:
            out["brute_force"] = dihedral.brute_force_oracle(sys_)
        except TooLarge:
            out["brute_force"] = None
    return out


# -- the check suite ----------------------------------------------------------------


def _random_omega(rng, d, k: int = 2) -> MarkingData:
    edges = list(d.pd_edges)
    return MarkingData.from_edges(int(e) for e in rng.choice(edges, size=k))


def report_check(li: LinkInput, cfg: RunConfig) -> dict:
    """Run every invariant on one input; ``failures`` lists what did not hold."""
    d, m = li.diagram, li.marking
    bound = cfg.max_crossings
    rng = np.random.default_rng(cfg.seed)
    alt = is_alternating(d)
    res: dict = {"alternating": alt}
    fails: list[str] = []

    full = khovanov.assemble(d, m, bound)  # verifies d^2 = 0
    res["rank"] = full.total_rank()
    try:
        res["rank_reduced"] = khovanov.assemble_reduced(d, m, li.basepoint, bound).total_rank()
    except BasepointOnOmega:
        res["rank_reduced"] = None

    ranks = []
    for x in range(d.n):
        row = _single_drop(d, m, x, cfg)
        ranks.append(row)
        if alt:
            sp_ = row["splitting"]
            if "error" in sp_:
                fails.append(f"splitting at crossing {x}: {sp_['message']}")
            else:
                st = sp_["structural"]
                if st["d_EF"] or st["d_FD"] or st["d_DE"] or st["alpha"]:
                    fails.append(f"nonzero off-diagonal block at crossing {x}")
                if sp_["gamma_beta_nnz"]:
                    fails.append(f"gamma beta nonzero at crossing {x}")
                if not sp_["cone_ok"]:
                    fails.append(f"cone check failed at crossing {x}")
            if row["rank"] != res["rank"]:
                fails.append(f"dropped rank differs at crossing {x}")
    res["dropped"] = ranks
    pairs = dropped.adjacent_pairs(d, m)
    res["double_dropped"] = []
    for x1, x2 in pairs:
        dc = dropped.assemble_double_dropped(d, m, x1, x2, bound=bound)
        res["double_dropped"].append({"pair": [x1, x2], "rank": dc.total_rank()})
        if alt and dc.total_rank() != res["rank"]:
            fails.append(f"double-dropped rank differs at {x1},{x2}")

    # filtration orders on the full complex and, for good-proxy marking, the drops
    ctx = filtration.context(d, m, (), bound=bound)
    if not filtration.check_orders(full, ctx, raise_on_violation=False).ok:
        fails.append("full complex violates dq = 0 or dh = 1")
    good = filtration.is_good_proxy(d, m) if d.n <= 14 else False
    res["good_proxy"] = good
    if alt and good:
        for drops in [(x,) for x in range(d.n)] + pairs:
            try:
                c2 = filtration.context(d, m, drops, bound=bound)
            except NonTrivialVertex:
                continue
            cx = (dropped.assemble_dropped(d, m, drops[0], bound=bound) if len(drops) == 1
                  else dropped.assemble_double_dropped(d, m, *drops, bound=bound)).complex
            if not filtration.check_orders(cx, c2, raise_on_violation=False).ok:
                fails.append(f"q lowered on the complex dropping {list(drops)}")
            try:
                filtration.check_sigma_additivity(c2)
                filtration.check_pi_table(c2)
            except ValueError as exc:
                fails.append(str(exc))

    # crossing addition between distinct components
    cone = []
    for k in range(d.n):
        try:
            ac = khovanov.add_crossing(d, k, m)
        except SameComponent:
            continue
        cm = khovanov.cone_maps(ac, verify=False, bound=bound)
        cone.append({"crossing": k, "g_residual": cm.g_residual, "h_residual": cm.h_residual,
                     "hg_residual": cm.hg_residual})
        if not cm.ok:
            fails.append(f"cone maps at crossing {k}: g {cm.g_residual}, h {cm.h_residual}, "
                         f"hg {cm.hg_residual}")
    res["cone_maps"] = cone

    # omega independence for alternating diagrams
    if alt and d.n:
        for _ in range(3):
            om = _random_omega(rng, d)
            if khovanov.assemble(d, om, bound).total_rank() != khovanov.assemble(d, MarkingData(), bound).total_rank():
                fails.append(f"rank depends on omega {sorted(om.odd_edges)}")

    # representation counts and their oracles
    try:
        sys_ = dihedral.build_system(d, m)
    except SplitUnknot:
        sys_ = None
    if sys_ is not None:
        det = dihedral.link_det(sys_)
        res["det"] = det
        if d.n <= 22 and det != dihedral.kauffman_det(d):
            fails.append("determinant disagrees with the bracket oracle")
        cnt = dihedral.count_RB(sys_)
        res["count"] = cnt
        base = dihedral.count_RB(dihedral.build_system(d))
        if det:
            if cnt != base:
                fails.append("count depends on omega although det is nonzero")
            try:
                if dihedral.brute_force_oracle(sys_) != cnt:
                    fails.append("count disagrees with the grid oracle")
            except TooLarge:
                pass
        elif len(d.components) == 2 and any(m.component_parity(d)):
            if cnt != 0:
                fails.append("det 0 two-component link with separating omega has solutions")
        if len(d.components) == 1 and dihedral.klassen_count(d) != (det - 1) // 2:
            fails.append("Klassen count disagrees with (det - 1) / 2")
        if alt and cnt != dihedral.INFINITE and det and res["rank"] != 2 * det:
            fails.append("rank differs from twice the determinant")
    res["failures"] = fails
    res["ok"] = not fails
    return res


REPORTS = {"kh": report_kh, "khred": report_khred, "dropped": report_dropped,
           "filtration": report_filtration, "dihedral": report_dihedral, "check": report_check}


def run(cfg: RunConfig, out=None) -> int:
    """Run one subcommand over every input; exit code 0, 1 on failed checks, 2 on errors."""
    out = out or sys.stdout
    results = []
    code = 0
    for path in cfg.inputs:
        entry = {"input": path}
        try:
            li = read_input(path)
            entry["name"] = li.name
            entry["report"] = REPORTS[cfg.subcommand](li, cfg)
            if cfg.subcommand == "check" and not entry["report"]["ok"]:
                code = max(code, 1)
        except MarkedKhError as exc:
            entry["error"] = exc.to_json()
            code = 2
        except FileNotFoundError as exc:
            entry["error"] = {"error": "not_found", "message": str(exc)}
            code = 2
        results.append(entry)
    if cfg.fmt == "json":
        out.write(json.dumps(results, sort_keys=True, default=_jsonable) + "\n")
    else:
        for entry in results:
            _table(entry, out)
    return code


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (set, frozenset, tuple)):
        return sorted(x)
    raise TypeError(type(x))


def _flatten(prefix, obj, rows):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(f"{prefix}.{k}" if prefix else str(k), obj[k], rows)
    elif isinstance(obj, list) and obj and isinstance(obj[0], dict):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    else:
        rows.append((prefix, json.dumps(obj, default=_jsonable)))


def _table(entry, out):
    rows: list = []
    _flatten("", entry, rows)
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        out.write(f"{k:<{width}}  {v}\n")
    out.write("\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="markedkh", description=__doc__.splitlines()[0])
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("inputs", nargs="+", help="JSON diagram files, or names from the bundled corpus")
    p.add_argument("--max-crossings", type=int, default=DEFAULT_BOUND)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--drop", type=int)
    p.add_argument("--drop2", type=int)
    p.add_argument("--basepoint", type=int)
    return p


def main(argv=None) -> int:
    a = build_parser().parse_args(argv)
    inputs = []
    for name in a.inputs:
        if name in ("corpus", "corpus/*.json"):
            inputs.extend(str(p) for p in corpus_files())
        else:
            inputs.append(name)
    try:
        cfg = RunConfig(a.subcommand, tuple(inputs), a.max_crossings, a.seed, a.format,
                        a.drop, a.drop2, a.basepoint)
    except ValueError as exc:
        sys.stdout.write(json.dumps({"error": "bad_arguments", "message": str(exc)}) + "\n")
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
