"""Command-line entry point: ``gkmlab <command> --graph SPEC [options]``.

Exit status is 0 on success, 1 when a mathematical check comes out negative
and 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from . import catalog
from .catalog import GraphSpecError, S3_CYCLE_NAMES
from .cohomology import (CohomologyClass, betti_formula, check_morse_package, constant_class, dim_H,
                         generating_family, is_class, two_dim_reduction_check)
from .crosssection import CriticalLevel, CrossSection, GenericityViolation
from .cutting import cut_product
from .integration import edge_thom, integrate
from .morse import (CyclicOrientation, NotPolarizing, XiSearchError, canonical_morse, find_xi, is_generic,
                    is_polarizing, orient_and_check_acyclic, poincare_check)
from .polyring import fmt_fraction
from .skeleton import MalformedGraph, validate_axioms
from .symfun import appendix_suite
from .wallcross import sweep

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"not a rational number: {text!r}") from None


def _parse_xi(text: str) -> tuple[Fraction, ...]:
    return tuple(_parse_fraction(t) for t in text.split(","))


def _verdict(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _table(rows: list[list[str]], header: list[str]) -> list[str]:
    cols = [header] + rows
    widths = [max(len(r[i]) for r in cols) for i in range(len(header))]

    def fmt(r):
        return "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()

    return [fmt(header), fmt(["-" * w for w in widths])] + [fmt(r) for r in rows]


class Context:
    """Resolved graph, xi and Morse data for one invocation."""

    def __init__(self, args):
        self.args = args
        self.graph = catalog.resolve(args.graph)
        self.s = self.graph.skeleton
        self._md = None

    @property
    def xi(self):
        a = self.args
        if a.xi:
            xi = _parse_xi(a.xi)
            if len(xi) != self.s.ctx.dim:
                raise InputError(f"xi needs {self.s.ctx.dim} entries")
            return xi
        if self.graph.xi is not None and a.seed is None:
            return self.graph.xi
        return find_xi(self.s, seed=a.seed or 0)

    @property
    def md(self):
        if self._md is None:
            xi = self.xi
            ok, bad = is_polarizing(self.s, xi)
            if not ok:
                raise NotPolarizing(f"xi vanishes on edge {bad}")
            gen, witness = is_generic(self.s, xi)
            if not gen:
                raise NotPolarizing(f"xi is not generic at {witness}")
            self._md = canonical_morse(self.s, xi)
        return self._md

    def label(self, p: str) -> str:
        if self.args.graph == "sn:3":
            return S3_CYCLE_NAMES.get(p, p)
        return p

    def load_class(self, path: str) -> CohomologyClass:
        try:
            data = json.loads(Path(path).read_text())
            return CohomologyClass.from_json(self.s.ctx, data)
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"cannot read class file {path}: {exc}") from None


# ---------------------------------------------------------------------------
# commands; each returns (ok, data, lines)


def cmd_validate(ctx: Context):
    rep = validate_axioms(ctx.s)
    data = {"vertices": len(ctx.s.vertices), "valence": ctx.s.d, "dim": ctx.s.ctx.dim,
            "A1": rep.a1, "A2": rep.a2, "A3": rep.a3,
            "witnesses": {"A1": list(rep.a1_witness) if rep.a1_witness else None,
                          "A2": rep.a2_witness, "A3": rep.a3_witness}}
    lines = [f"graph {ctx.s.name}: {len(ctx.s.vertices)} vertices, valence {ctx.s.d}, dim {ctx.s.ctx.dim}"]
    for ax in ("A1", "A2", "A3"):
        w = data["witnesses"][ax]
        lines.append(f"axiom {ax}: {_verdict(data[ax])}" + (f" (witness {w})" if w is not None else ""))
    return rep.ok, data, lines


def cmd_morse(ctx: Context):
    s, xi = ctx.s, ctx.xi
    pol, bad = is_polarizing(s, xi)
    data = {"xi": [fmt_fraction(x) for x in xi], "polarizing": pol}
    lines = [f"xi = ({', '.join(data['xi'])})", f"polarizing: {_verdict(pol)}"]
    if not pol:
        return False, data, lines
    gen, witness = is_generic(s, xi)
    _, acyclic, _ = orient_and_check_acyclic(s, xi)
    data.update(generic=gen, acyclic=acyclic)
    lines += [f"generic: {_verdict(gen)}", f"acyclic: {_verdict(acyclic)}"]
    if not (gen and acyclic):
        return False, data, lines
    md = ctx.md
    rows = [[ctx.label(p), fmt_fraction(md.phi[p]), str(md.sigma[p])] for p in md.order]
    data["vertices"] = [{"vertex": p, "phi": fmt_fraction(md.phi[p]), "index": md.sigma[p]} for p in md.order]
    data["betti"] = list(md.betti)
    lines += _table(rows, ["vertex", "phi", "index"]) + [f"betti: {list(md.betti)}"]
    return True, data, lines


def cmd_betti(ctx: Context):
    md = ctx.md
    poin = poincare_check(md)
    data = {"betti": list(md.betti), "poincare": poin}
    return poin, data, [f"betti: {list(md.betti)}", f"poincare duality: {_verdict(poin)}"]


def cmd_cohdim(ctx: Context):
    md = ctx.md
    n = ctx.s.ctx.dim
    M = ctx.args.max_degree if ctx.args.max_degree is not None else ctx.s.d + 1
    rows, out, ok = [], [], True
    for m in range(M + 1):
        d, f = dim_H(ctx.s, m), betti_formula(md.betti, m, n)
        ok &= d == f
        out.append({"m": m, "dim": d, "formula": f, "ok": d == f})
        rows.append([str(m), str(d), str(f), _verdict(d == f)])
    lines = _table(rows, ["m", "dim H^m", "sum b_k lambda", "check"]) + [f"formula cross-check: {_verdict(ok)}"]
    return ok, {"degrees": out}, lines


def _class_rows(ctx: Context, fam):
    md = ctx.md
    cols = md.order
    header = ["vertex"] + [f"tau^{ctx.label(p)}" for p in cols]
    rows = [[ctx.label(q)] + [str(fam[p].cls[q]) if fam[p] else "?" for p in cols] for q in md.order]
    return header, rows


def cmd_thom(ctx: Context):
    md = ctx.md
    fam = generating_family(md)
    ok = all(g is not None for g in fam.values())
    data = {"classes": {p: (None if g is None else {"unique": g.unique, "sharpening": g.sharpening,
                                                       **g.cls.to_json()}) for p, g in sorted(fam.items())}}
    header, rows = _class_rows(ctx, fam)
    lines = _table(rows, header)
    lines.append("")
    for p in md.order:
        g = fam[p]
        status = "missing" if g is None else ("unique" if g.unique else "tie-broken")
        lines.append(f"tau^{ctx.label(p)}: {status}")
    if ctx.args.edges:
        data["edges"] = {}
        for e in ctx.s.undirected():
            t = edge_thom(ctx.s, e.index)
            data["edges"][f"{e.src}->{e.dst}"] = t.to_json()
            lines.append(f"edge {e.src}->{e.dst}: " + ", ".join(f"{q}: {t[q]}" for q in sorted(t.support())))
    return ok, data, lines


def cmd_package(ctx: Context):
    rep = check_morse_package(ctx.md, ctx.args.max_degree)
    header, rows = _class_rows(ctx, rep.family)
    lines = [f"Morse package: {_verdict(rep.verdict)}"] + _table(rows, header) + [""]
    lines += _table([[str(d.m), str(d.dim_H), str(d.formula), str(d.span_rank), _verdict(d.ok)] for d in rep.degrees],
                    ["m", "dim H^m", "formula", "span", "check"])
    data = {"verdict": rep.verdict, "dims_ok": rep.dims_ok,
            "classes": {p: (None if g is None else {"unique": g.unique, **g.cls.to_json()})
                        for p, g in sorted(rep.family.items())},
            "status": {p: rep.status(p) for p in sorted(rep.family)},
            "degrees": [{"m": d.m, "dim": d.dim_H, "formula": d.formula, "span": d.span_rank} for d in rep.degrees]}
    return rep.verdict and rep.dims_ok, data, lines


def cmd_slices(ctx: Context):
    rep = two_dim_reduction_check(ctx.md)
    rows = [[str(r.subspace), r.component, str(r.size), str(r.valence), r.xi_source,
             "skip" if r.passed is None else _verdict(r.passed)] for r in rep.slices]
    lines = _table(rows, ["subspace", "component", "size", "valence", "xi", "package"])
    lines += rep.warnings
    lines += [f"slices: {_verdict(rep.slices_pass)}", f"full graph: {_verdict(rep.full_pass)}",
              f"consistency: {_verdict(rep.consistent)}"]
    data = {"slices": [{"subspace": str(r.subspace), "component": r.component, "size": r.size,
                        "valence": r.valence, "xi": r.xi_source, "passed": r.passed} for r in rep.slices],
            "slices_pass": rep.slices_pass, "full_pass": rep.full_pass, "consistent": rep.consistent,
            "warnings": rep.warnings}
    return rep.consistent and rep.full_pass, data, lines


def cmd_integrate(ctx: Context):
    s = ctx.s
    if ctx.args.cls:
        targets = [("class", ctx.load_class(ctx.args.cls))]
    else:
        fam = generating_family(ctx.md)
        targets = [("1", constant_class(s))] + [(f"tau^{ctx.label(p)}", fam[p].cls) for p in ctx.md.order
                                                  if fam[p] is not None]
    rows, out, ok = [], [], True
    for name, f in targets:
        r = integrate(s, f)
        poly = r.is_polynomial()
        ok &= poly
        rows.append([name, str(r), "polynomial" if poly else "non-polynomial"])
        out.append({"name": name, "integral": str(r), "polynomial": poly})
    return ok, {"integrals": out}, _table(rows, ["f", "integral", "verdict"])


def cmd_cross_section(ctx: Context):
    if ctx.args.level is None:
        raise InputError("cross-section needs --level")
    cs = CrossSection(ctx.md, _parse_fraction(ctx.args.level))
    s = cs.s
    rows = []
    for k in cs.members:
        m, beta = cs.slopes(k)
        rows.append([cs.edge_label(k), fmt_fraction(m), str(cs.beta(k)), str(cs.density(k))])
    lines = [f"level {fmt_fraction(cs.c)}: {len(cs.members)} crossing edges"]
    lines += _table(rows, ["edge", "m_e", "beta_e", "density"]) + [""]
    hrows = [[str(E.h), "{" + ", ".join(cs.edge_label(k) for k in E.members) + "}", str(E.mu),
              "(" + ", ".join(fmt_fraction(x) for x in E.alpha) + ")"] for E in cs.hyperedges]
    lines += _table(hrows, ["subspace", "members", "mu", "alpha_E"])
    data = {"level": fmt_fraction(cs.c),
            "members": [{"edge": cs.edge_label(k), "m": fmt_fraction(cs.slopes(k)[0]), "beta": str(cs.beta(k))}
                        for k in cs.members],
            "hyperedges": [{"subspace": str(E.h), "members": [cs.edge_label(k) for k in E.members], "mu": E.mu,
                            "alpha": [fmt_fraction(x) for x in E.alpha]} for E in cs.hyperedges]}
    ok = True
    if ctx.args.cls:
        f = ctx.load_class(ctx.args.cls)
        if not is_class(s, f, homogeneous=False)[0]:
            lines.append("class file is not a class on the graph")
            data["membership"] = None
            return False, data, lines
        kf = cs.kirwan(f)
        rep = cs.membership(kf)
        ok = rep.member
        lines.append("")
        lines += [f"K_c(f)({cs.edge_label(k)}) = {kf[k]}" for k in cs.members]
        lines += [f"hyperedge {i}: {_verdict(v.passes)}" for i, v in enumerate(rep.verdicts)]
        lines.append(f"membership: {_verdict(ok)}")
        data["membership"] = {"member": ok, "hyperedges": [v.passes for v in rep.verdicts]}
    if ctx.args.max_degree is not None:
        dims = [cs.dim_H(m) for m in range(ctx.args.max_degree + 1)]
        data["dims"] = dims
        lines.append(f"dim H^m(Gamma_c), m = 0..{ctx.args.max_degree}: {dims}")
    return ok, data, lines


def cmd_cut(ctx: Context):
    ps = cut_product(ctx.md)
    doc = catalog.skeleton_to_json(ps.product)
    lo, hi = ps.window
    data = {"a": fmt_fraction(ps.a), "window": [fmt_fraction(lo), fmt_fraction(hi)],
            "betti": list(ps.morse.betti), "generic": ps.generic, "skeleton": doc}
    return True, data, [json.dumps(doc, indent=2)]


def cmd_sweep(ctx: Context):
    a = ctx.args
    degrees = [a.degree] if a.degree is not None else range((a.max_degree if a.max_degree is not None else 3) + 1)
    md = ctx.md
    ps = cut_product(md)
    lines, out, ok = [], [], True
    for m in degrees:
        rep = sweep(md, m, product=ps)
        ok &= rep.ok
        lines.append(f"degree {m}")
        lines += _table([[ctx.label(st.vertex), str(st.r), str(st.s), f"{st.delta:+d}", str(st.running)]
                         for st in rep.steps], ["wall", "r", "s", "change", "running"])
        lines.append(f"sweep {rep.total}  dim_H {rep.dim_H}  formula {rep.formula}  {_verdict(rep.ok)}")
        lines.append("")
        out.append({"m": m, "sweep": rep.total, "dim": rep.dim_H, "formula": rep.formula, "ok": rep.ok,
                    "steps": [{"vertex": st.vertex, "r": st.r, "s": st.s, "change": st.delta,
                               "running": st.running} for st in rep.steps]})
    return ok, {"degrees": out}, lines[:-1]


def cmd_appendix_check(ctx: Context):
    a = ctx.args
    res = appendix_suite(a.max_m, seed=a.seed or 0)
    ok = all(r[1] for r in res)
    lines = [f"{name}: {_verdict(passed)} ({n} cases)" for name, passed, n in res]
    return ok, {"suites": [{"name": n, "passed": p, "cases": c} for n, p, c in res]}, lines


COMMANDS = {
    "validate": cmd_validate, "morse": cmd_morse, "betti": cmd_betti, "cohdim": cmd_cohdim,
    "thom": cmd_thom, "package": cmd_package, "slices": cmd_slices, "integrate": cmd_integrate,
    "cross-section": cmd_cross_section, "cut": cmd_cut, "sweep": cmd_sweep,
    "appendix-check": cmd_appendix_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gkmlab", description="Equivariant cohomology of GKM one-skeleta.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name != "appendix-check":
            p.add_argument("--graph", required=True, help="sn:N, johnson:N,K[:ambient] or file:PATH")
            p.add_argument("--xi", help="comma-separated rationals")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--max-degree", type=int, default=None)
        p.add_argument("--format", choices=("table", "json"), default="table")
        p.add_argument("--out", help="write the report here instead of stdout")
        if name in ("cross-section",):
            p.add_argument("--level", help="regular level, e.g. 3/2")
        if name in ("cross-section", "integrate"):
            p.add_argument("--class", dest="cls", help="JSON file with a class on the graph")
        if name == "sweep":
            p.add_argument("--degree", type=int, default=None)
        if name == "thom":
            p.add_argument("--edges", action="store_true", help="also list edge Thom classes")
        if name == "appendix-check":
            p.add_argument("--max-m", type=int, default=6)
    return parser


def _schema() -> dict:
    return json.loads(resources.files("gkmlab").joinpath("schemas").joinpath("report.schema.json").read_text())


def run(argv=None) -> tuple[int, str, str | None]:
    """Execute one command; returns ``(exit code, text, output path)``."""
    args = build_parser().parse_args(argv)
    for flag in ("max_degree", "seed"):
        v = getattr(args, flag, None)
        if v is not None and v < 0:
            return EXIT_INPUT, f"error: --{flag.replace('_', '-')} must be >= 0\n", None
    try:
        ctx = Context(args) if args.command != "appendix-check" else _Bare(args)
        ok, data, lines = COMMANDS[args.command](ctx)
    except (GraphSpecError, MalformedGraph, InputError, CriticalLevel) as exc:
        return EXIT_INPUT, f"error: {exc}\n", None
    except (NotPolarizing, CyclicOrientation, XiSearchError, GenericityViolation) as exc:
        return EXIT_NEGATIVE, f"negative: {exc}\n", None
    if args.format == "json":
        report = {"command": args.command, "graph": getattr(args, "graph", None), "ok": ok, "data": data}
        jsonschema.validate(report, _schema())
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    return (EXIT_OK if ok else EXIT_NEGATIVE), text, args.out


class _Bare:
    def __init__(self, args):
        self.args = args


def main(argv=None) -> int:
    code, text, out = run(argv)
    if out:
        Path(out).write_text(text)
    else:
        (sys.stderr if code == EXIT_INPUT else sys.stdout).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
