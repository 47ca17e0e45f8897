"""``shapoform`` command line interface.

Exit codes: 0 when every requested check passes, 2 for usage errors, 3 when a
mathematical check fails.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

from .linalg import inverse
from .abrr import abrr_identity_check, fk_series, perturbed
from .rmatrix import f_tensor, intertwining_defects, quasi_r
from .rootsys import RootSystem, build_root_system, kostant_partition
from .routesum import fhat_matrix, hasse
from .scalars import ScalarRational
from .shapovalov import inverse_blocks, pairing_block
from .singular import (
    Specializer,
    denominator_audit,
    inverse_entry_values,
    numeric_abrr_check,
    numeric_inverse_check,
    numeric_singular_check,
    random_points,
    singular_vectors,
    verify_inverse,
)
from .uqmodules import (
    dual_verma_truncated,
    finite_dim_module,
    kostant_defects,
    relation_defects,
    tensor_module,
    verma_truncated,
)

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_USAGE, EXIT_CHECK = 0, 2, 3
CUTOFF_CAPS = {"A1": 10, "A2": 6, "A3": 4, "B2": 5, "G2": 3}
THREADS_ENV = "SHAPOFORM_THREADS"


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    type_name: str
    cutoff: int
    module: str = "verma-dual"
    method: str = "routes"
    fmt: str = "json"
    seed: int = 0
    points: int = 0

    def __post_init__(self):
        if self.type_name not in CUTOFF_CAPS:
            raise UsageError(f"unsupported type {self.type_name!r}; choose from {', '.join(CUTOFF_CAPS)}")
        if not 0 <= self.cutoff <= CUTOFF_CAPS[self.type_name]:
            raise UsageError(f"cutoff for {self.type_name} must lie in 0..{CUTOFF_CAPS[self.type_name]}")

    @property
    def rs(self) -> RootSystem:
        return build_root_system(self.type_name)


def threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


# -- module names -------------------------------------------------------------

def parse_module(rs: RootSystem, name: str, cutoff: int):
    """``verma-dual``, ``fund:k`` (k-th fundamental weight) or ``hw:n1,n2,...`` (Dynkin labels)."""
    if name == "verma-dual":
        return dual_verma_truncated(rs, cutoff)
    if name.startswith("fund:"):
        try:
            k = int(name[5:])
        except ValueError:
            raise UsageError(f"unknown module {name!r}") from None
        if not 1 <= k <= rs.rank:
            raise UsageError(f"fundamental weight index must lie in 1..{rs.rank}")
        return finite_dim_module(rs, tuple(1 if i == k - 1 else 0 for i in range(rs.rank)))
    if name.startswith("hw:"):
        try:
            labels = tuple(int(x) for x in name[3:].split(","))
        except ValueError:
            raise UsageError(f"unknown module {name!r}") from None
        if len(labels) != rs.rank:
            raise UsageError("highest weight needs one label per simple root")
        try:
            return finite_dim_module(rs, labels)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    raise UsageError(f"unknown module {name!r}")


def parse_weight(text: str, rank: int) -> tuple[int, ...]:
    try:
        nu = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad weight {text!r}") from None
    if len(nu) != rank or any(x < 0 for x in nu):
        raise UsageError("weight needs one non-negative coordinate per simple root")
    return nu


# -- emission -----------------------------------------------------------------

def scalar_json(x: ScalarRational, rank: int):
    return x.to_json(rank)


def vec_json(v, rank: int, labels=None):
    return [[(list(labels[k][1]) if labels else k), scalar_json(c, rank)] for k, c in sorted(v.items())]


def matrix_json(m, rank: int):
    return [[r, c, scalar_json(x, rank)] for (r, c), x in sorted(m.entries())]


def dense_json(rows, rank: int):
    return [[scalar_json(x, rank) for x in row] for row in rows]


_QINT_MAX = 12


def _qint_poly(n: int):
    from .scalars import _CTX
    return _CTX.from_dict({(2 * k,) + (0,) * (len(_CTX.gens()) - 1): 1 for k in range(n)})


def pretty(x: ScalarRational) -> str:
    """Human-readable form with q-integer factors ``[n]`` pulled out of numerator and denominator."""
    if not x or x.den.is_one() and len(x.num) == 1:
        return str(x)
    shift = list(x.shift)
    parts = {}
    for which in ("num", "den"):
        p = getattr(x, which)
        found = []
        for n in range(_QINT_MAX, 1, -1):
            qp = _qint_poly(n)
            while not p.is_constant():
                g = p.gcd(qp)
                if g != qp and g != -qp:
                    break
                p = p / qp
                found.append(n)
                # [n]_q = q^{1-n} (1 + q^2 + ... + q^{2n-2})
                shift[0] += (n - 1) if which == "num" else -(n - 1)
        parts[which] = (p, found)
    (num, nf), (den, df) = parts["num"], parts["den"]
    if not nf and not df:
        return str(x)
    core = ScalarRational(num, den, tuple(shift))
    out = str(core)
    if nf:
        qints = "*".join(f"[{n}]" for n in sorted(nf))
        out = qints if core.is_one() else ("-" + qints if (-core).is_one() else f"({out})*{qints}")
    elif core.is_one() and df:
        out = "1"
    elif df and (" + " in out or " - " in out[1:]):
        out = f"({out})"
    if df:
        out += "/(" + "*".join(f"[{n}]" for n in sorted(df)) + ")"
    return out


def emit(report: dict, fmt: str, out):
    report = {"schema_version": SCHEMA_VERSION, **report}
    if fmt == "json":
        json.dump(report, out, indent=1, sort_keys=True)
        out.write("\n")
    else:
        _emit_text(report, out, 0)


def _emit_text(obj, out, indent):
    pad = "  " * indent
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _is_scalar_json(v):
                out.write(f"{pad}{k}:\n")
                _emit_text(v, out, indent + 1)
            else:
                out.write(f"{pad}{k}: {_text_value(v)}\n")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _is_scalar_json(v) and any(isinstance(x, (dict, list)) for x in (v.values() if isinstance(v, dict) else v)):
                out.write(f"{pad}-\n")
                _emit_text(v, out, indent + 1)
            else:
                out.write(f"{pad}- {_text_value(v)}\n")
    else:
        out.write(f"{pad}{_text_value(obj)}\n")


def _is_scalar_json(v) -> bool:
    return isinstance(v, dict) and set(v) == {"num", "den"}


def _text_value(v) -> str:
    if _is_scalar_json(v):
        return pretty(ScalarRational.from_json(v))
    if isinstance(v, list):
        return "[" + ", ".join(_text_value(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_text_value(x)}" for k, x in v.items()) + "}"
    return str(v)


# -- subcommands --------------------------------------------------------------

def cmd_roots(args) -> tuple[dict, bool]:
    rs = build_root_system(args.type)
    return {
        "command": "roots",
        "type": rs.name,
        "cartan": rs.cartan.tolist(),
        "symmetrizer": list(rs.sym),
        "gram": rs.gram.tolist(),
        "positive_roots": [list(r) for r in rs.positive_roots],
        "count": len(rs.positive_roots),
        "rho": [str(x) for x in rs.rho],
    }, True


def cmd_verma(args) -> tuple[dict, bool]:
    cfg = RunConfig(args.type, args.cutoff)
    rs = cfg.rs
    M = verma_truncated(rs, cfg.cutoff)
    spaces = M.weight_spaces()
    dims = [{"nu": [-x for x in g], "dim": len(idx), "kostant": kostant_partition(rs, [-x for x in g])}
            for g, idx in sorted(spaces.items(), key=lambda t: (-sum(t[0]), [-x for x in t[0]]))]
    rep = {"command": "verma", "type": rs.name, "cutoff": cfg.cutoff, "dim": M.dim, "weight_spaces": dims}
    ok = not kostant_defects(M)
    if args.emit == "actions":
        rep["basis"] = [{"nu": list(nu), "word": [a + 1 for a in w]} for nu, w in M.labels]
        rep["e"] = [matrix_json(m, rs.rank) for m in M.e_action]
        rep["f"] = [matrix_json(m, rs.rank) for m in M.f_action]
        bad = relation_defects(M)
        rep["relation_defects"] = bad
        ok = ok and not bad
    return rep, ok


def cmd_gram(args) -> tuple[dict, bool]:
    cfg = RunConfig(args.type, args.cutoff)
    rs = cfg.rs
    nu = parse_weight(args.nu, rs.rank)
    if sum(nu) > cfg.cutoff:
        raise UsageError("weight lies beyond the cutoff")
    M = verma_truncated(rs, cfg.cutoff)
    Ms = dual_verma_truncated(rs, cfg.cutoff)
    block = pairing_block(M, Ms, nu)
    rep = {"command": "gram", "type": rs.name, "cutoff": cfg.cutoff, "nu": list(nu),
           "rows": [[a + 1 for a in lab[1]] for lab in block.rows],
           "cols": [[a + 1 for a in lab[1]] for lab in block.cols]}
    if args.emit == "matrix":
        rep["matrix"] = dense_json(block.entries, rs.rank)
    elif args.emit == "det":
        rep["det"] = scalar_json(block.det(), rs.rank)
    else:
        inv = inverse_blocks(M, Ms)[nu][1]
        rep["inverse"] = dense_json(inv, rs.rank)
    return rep, True


def _module_and_verma(cfg: RunConfig):
    rs = cfg.rs
    V = parse_module(rs, cfg.module, cfg.cutoff)
    depth = max(V.level) if V.dim else 0
    M = verma_truncated(rs, max(cfg.cutoff, depth))
    return V, M


def _node_label(V, k):
    return {"index": k, "weight_offset": list(V.gamma[k])}


def cmd_rmatrix(args) -> tuple[dict, bool]:
    cfg = RunConfig(args.type, args.cutoff, module=args.module)
    V, M = _module_and_verma(cfg)
    rank = cfg.rs.rank
    rhat = quasi_r(V, M, cfg.cutoff)
    F = f_tensor(rhat)
    comps = []
    for (i, j), vec in sorted(F.entries.items()):
        comps.append({"i": i, "j": j, "mu": list(F.weight_drop(i, j)),
                      "f_ij_on_highest": vec_json(vec, rank, M.labels)})
    rep = {"command": "rmatrix", "type": cfg.type_name, "module": cfg.module, "cutoff": cfg.cutoff,
           "module_dim": V.dim, "components": comps}
    return rep, True


def cmd_fhat(args) -> tuple[dict, bool]:
    cfg = RunConfig(args.type, args.cutoff, module=args.module, method=args.method)
    V, M = _module_and_verma(cfg)
    rank = cfg.rs.rank
    F = f_tensor(quasi_r(V, M, cfg.cutoff))
    d = hasse(V, F)
    emit_kind = args.emit[0]
    rep = {"command": "fhat", "type": cfg.type_name, "module": cfg.module, "cutoff": cfg.cutoff,
           "method": cfg.method, "nodes": [_node_label(V, k) for k in range(V.dim)]}
    if emit_kind == "routes":
        if len(args.emit) != 3:
            raise UsageError("--emit routes needs two node indices")
        i, j = int(args.emit[1]), int(args.emit[2])
        if not (0 <= i < V.dim and 0 <= j < V.dim):
            raise UsageError("node index out of range")
        rep["routes"] = [list(r) for r in d.routes(i, j)]
        rep["paths"] = [list(r) for r in d.paths(i, j)]
        return rep, True
    fh = fhat_matrix(V, F) if cfg.method == "routes" else fk_series(V, F).fhat
    rep["longest_path"] = d.longest_path_length()
    rep["arrows"] = [{"from": l, "to": r, "root": a + 1, "coeff": scalar_json(x, rank)} for l, r, a, x in d.arrows]
    rep["entries"] = [{"i": i, "j": j, "vector": vec_json(v, rank, M.labels)}
                      for (i, j), v in sorted(fh.entries.items())]
    return rep, True


def cmd_singular(args) -> tuple[dict, bool]:
    cfg = RunConfig(args.type, args.cutoff, module=args.module, method=args.method)
    if cfg.module == "verma-dual":
        raise UsageError("singular vectors need a finite-dimensional module")
    V, M = _module_and_verma(cfg)
    reports, rank_ = singular_vectors(V, M, cfg.method)
    if args.j != "all":
        try:
            js = [int(args.j)]
        except ValueError:
            raise UsageError("--j must be a node index or 'all'") from None
        if not 0 <= js[0] < V.dim:
            raise UsageError("node index out of range")
    else:
        js = list(range(V.dim))
    n = M.dim
    out = []
    for j in js:
        r = reports[j]
        out.append({
            "j": j, "weight_offset": list(V.gamma[j]), "annihilated": r.annihilated,
            "terms": [{"v": k // n, "verma": [a + 1 for a in M.words[k % n]], "coeff": scalar_json(c, cfg.rs.rank)}
                      for k, c in sorted(r.vector.items())],
        })
    ok = all(reports[j].annihilated for j in js) and rank_ == V.dim
    rep = {"command": "singular", "type": cfg.type_name, "module": cfg.module, "cutoff": cfg.cutoff,
           "vectors": out, "independent": rank_ == V.dim, "ok": ok}
    return rep, ok


def _verify_inverse(cfg: RunConfig) -> tuple[dict, bool]:
    rs = cfg.rs
    method = {"oracle": "routes", "all": "both"}.get(cfg.method, cfg.method)
    rep = verify_inverse(rs, cfg.cutoff, method, workers=threads())
    audit = denominator_audit(inverse_entry_values(rep), rs, cfg.cutoff)
    blocks = [{"nu": list(b.nu), "size": b.size, "identity": b.product_is_identity, "matches": b.matches,
               "first_mismatch": list(b.first_mismatch) if b.first_mismatch else None} for b in rep.blocks]
    numeric = []
    if cfg.points:
        for q0, z0 in random_points(rs, cfg.points, cfg.seed, cfg.cutoff):
            sp = Specializer(q0, z0)
            numeric.append({"q": str(q0), "z": [str(x) for x in z0], "ok": numeric_inverse_check(rep, sp)})
    ok = rep.ok and audit.ok and all(p["ok"] for p in numeric)
    if rep.series_terms is not None:
        ok = ok and rep.series_terms == rep.longest_path + 1
    return {
        "command": "verify inverse", "type": rs.name, "cutoff": cfg.cutoff, "method": cfg.method,
        "blocks": blocks, "series_terms": rep.series_terms, "longest_path": rep.longest_path,
        "audit": {"ok": audit.ok, "unexplained": audit.unexplained,
                  "inventory": sorted([list(a), m] for a, m in audit.inventory()),
                  "q_only_factors": len(audit.q_only)},
        "specialization": numeric, "ok": ok,
    }, ok


def _verify_abrr(cfg: RunConfig) -> tuple[dict, bool]:
    rs = cfg.rs
    V, M = _module_and_verma(cfg)
    rhat = quasi_r(V, M, cfg.cutoff)
    F = f_tensor(rhat)
    series = fk_series(V, F)
    report = abrr_identity_check(rhat, series.fhat)
    detected = None
    if series.fhat.entries:
        key = min(series.fhat.entries)
        detected = not abrr_identity_check(rhat, perturbed(series.fhat, *key)).ok
    longest = hasse(V, F).longest_path_length()
    numeric = []
    if cfg.points:
        for q0, z0 in random_points(rs, cfg.points, cfg.seed, cfg.cutoff):
            numeric.append({"q": str(q0), "z": [str(x) for x in z0],
                            "ok": numeric_abrr_check(rhat, series.fhat, Specializer(q0, z0))})
    ok = report.ok and detected is not False and series.nonzero_terms == longest + 1
    ok = ok and all(p["ok"] for p in numeric)
    return {
        "command": "verify abrr", "type": rs.name, "module": cfg.module, "cutoff": cfg.cutoff,
        "entries_checked": report.checked, "residuals": len(report.residuals),
        "perturbation_detected": detected, "series_terms": series.nonzero_terms, "longest_path": longest,
        "specialization": numeric, "ok": ok,
    }, ok


def _verify_singular(cfg: RunConfig) -> tuple[dict, bool]:
    if cfg.module == "verma-dual":
        raise UsageError("singular vectors need a finite-dimensional module")
    V, M = _module_and_verma(cfg)
    reports, rank_ = singular_vectors(V, M, cfg.method if cfg.method in ("routes", "abrr") else "routes")
    numeric = []
    if cfg.points:
        T = tensor_module(V, M)
        for q0, z0 in random_points(cfg.rs, cfg.points, cfg.seed, cfg.cutoff):
            numeric.append({"q": str(q0), "z": [str(x) for x in z0],
                            "ok": numeric_singular_check(reports, T, Specializer(q0, z0))})
    ok = all(r.annihilated for r in reports) and rank_ == V.dim and all(p["ok"] for p in numeric)
    return {
        "command": "verify singular", "type": cfg.type_name, "module": cfg.module, "cutoff": cfg.cutoff,
        "annihilated": [r.annihilated for r in reports], "rank": rank_, "dim": V.dim,
        "specialization": numeric, "ok": ok,
    }, ok


def _verify_intertwining(cfg: RunConfig) -> tuple[dict, bool]:
    V, M = _module_and_verma(cfg)
    F = f_tensor(quasi_r(V, M, cfg.cutoff))
    bad = intertwining_defects(F)
    return {"command": "verify intertwining", "type": cfg.type_name, "module": cfg.module,
            "cutoff": cfg.cutoff, "defects": [list(b) for b in bad], "ok": not bad}, not bad


def cmd_verify(args) -> tuple[dict, bool]:
    module = args.module or ("verma-dual" if args.what in ("inverse", "abrr", "intertwining") else "fund:1")
    cfg = RunConfig(args.type, args.cutoff, module=module, method=args.method, seed=args.seed, points=args.points)
    return {
        "inverse": _verify_inverse,
        "abrr": _verify_abrr,
        "singular": _verify_singular,
        "intertwining": _verify_intertwining,
    }[args.what](cfg)


def cmd_bench(args) -> tuple[dict, bool]:
    cfg = RunConfig(args.type, args.cutoff, module=args.module)
    rs = cfg.rs
    rows = []
    t0 = time.perf_counter()
    M = verma_truncated(rs, cfg.cutoff)
    V = parse_module(rs, cfg.module, cfg.cutoff)
    t_mod = time.perf_counter() - t0
    t0 = time.perf_counter()
    F = f_tensor(quasi_r(V, M, cfg.cutoff))
    t_r = time.perf_counter() - t0
    cols = [0] if cfg.module == "verma-dual" else None
    t0 = time.perf_counter()
    fr = fhat_matrix(V, F, columns=cols)
    t_routes = time.perf_counter() - t0
    t0 = time.perf_counter()
    fa = fk_series(V, F, columns=cols)
    t_abrr = time.perf_counter() - t0
    rows.append({"stage": "modules", "seconds": t_mod, "size": M.dim + V.dim})
    rows.append({"stage": "rmatrix", "seconds": t_r, "size": len(F.entries)})
    rows.append({"stage": "routes", "seconds": t_routes, "size": sum(len(v) for v in fr.entries.values())})
    rows.append({"stage": "abrr", "seconds": t_abrr, "size": sum(len(v) for v in fa.fhat.entries.values()),
                 "series_terms": fa.nonzero_terms})
    blocks = []
    if cfg.module == "verma-dual":
        Ms = V
        for g in sorted(M.weight_spaces(), key=lambda g: (-sum(g), g)):
            nu = tuple(-x for x in g)
            t0 = time.perf_counter()
            block = pairing_block(M, Ms, nu)
            t_pair = time.perf_counter() - t0
            t0 = time.perf_counter()
            inverse(block.entries)
            t_inv = time.perf_counter() - t0
            blocks.append({"nu": list(nu), "size": len(block.row_index), "pairing_seconds": t_pair,
                           "oracle_inverse_seconds": t_inv})
    agree = fr == fa.fhat
    return {"command": "bench", "type": rs.name, "module": cfg.module, "cutoff": cfg.cutoff,
            "stages": rows, "blocks": blocks, "methods_agree": agree}, agree


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shapoform", description="Exact inverse Shapovalov forms and singular vectors for U_q(g).")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--output", "-o", help="write the report to a file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, cutoff=True, module=False, method=None):
        sp.add_argument("--type", required=True)
        if cutoff:
            sp.add_argument("--cutoff", type=int, default=2)
        if module:
            sp.add_argument("--module", default=module if isinstance(module, str) else None)
        if method:
            sp.add_argument("--method", choices=method, default=method[0])

    sp = sub.add_parser("roots", help="positive roots and root data")
    common(sp, cutoff=False)
    sp = sub.add_parser("verma", help="truncated Verma module")
    common(sp)
    sp.add_argument("--emit", choices=("dims", "actions"), default="dims")
    sp = sub.add_parser("gram", help="pairing block at one weight")
    common(sp)
    sp.add_argument("--nu", required=True)
    sp.add_argument("--emit", choices=("matrix", "det", "inverse"), default="matrix")
    sp = sub.add_parser("rmatrix", help="components of the tensor F on V (x) M")
    common(sp, module="fund:1")
    sp.add_argument("--emit", choices=("components",), default="components")
    sp = sub.add_parser("fhat", help="dynamized matrix entries or routes")
    common(sp, module="fund:1", method=("routes", "abrr"))
    sp.add_argument("--emit", nargs="+", default=["entries"], help="entries | routes I J")
    sp = sub.add_parser("singular", help="singular vectors in V (x) M")
    common(sp, module="fund:1", method=("routes", "abrr"))
    sp.add_argument("--j", default="all")
    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("what", choices=("inverse", "abrr", "singular", "intertwining"))
    common(sp, module=True, method=("both", "routes", "abrr", "oracle", "all"))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--points", type=int, default=0, help="number of random specialization points")
    sp = sub.add_parser("bench", help="timing of the three routes to the inverse")
    common(sp, module="verma-dual")
    return p


COMMANDS = {
    "roots": cmd_roots, "verma": cmd_verma, "gram": cmd_gram, "rmatrix": cmd_rmatrix,
    "fhat": cmd_fhat, "singular": cmd_singular, "verify": cmd_verify, "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command != "roots":
            RunConfig(args.type, getattr(args, "cutoff", 0))
        report, ok = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"shapoform: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # invalid Cartan types surface here
        from .rootsys import RootSystemError
        if isinstance(exc, RootSystemError):
            print(f"shapoform: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        raise
    if args.output:
        with open(args.output, "w") as fh:
            emit(report, args.format, fh)
    else:
        emit(report, args.format, sys.stdout)
    return EXIT_OK if ok else EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
