"""``legdga`` command line.

Every subcommand prints a report; exit status is 0 when all checks pass, 1 when
a verification fails and 2 for unusable input.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .ainf import (build_ainf, build_morphism_components, check_ainf_morphism, check_length_filtration,
                   check_stasheff, default_order, products_on_cohomology)
from .augment import (Augmentation, augmented_differential, enumerate_augmentations, lch, linearize,
                      make_augmentation)
from .cedga import DGA, build_dga, check_d_squared, check_grading, load_dga
from .cobord import (CobordismConstraints, DgaMorphism, augment_morphism, augmented_reports, check_chain_map,
                     check_constraints, check_homotopy, check_morphism_degrees, induced_on_homology,
                     linear_chain_report, linear_part_map, load_morphism, morphism, omega_route_residual,
                     perturb_by_homotopy)
from .diagram import FrontDiagram
from .diagram.disks import enumerate_disks
from .diagram.lkd import load as load_diagram
from .errors import AxiomError, LegdgaError
from .ncalg import NcPoly, Ring, TMode


class InputError(LegdgaError):
    pass


@dataclass
class RunReport:
    command: str
    inputs: dict = field(default_factory=dict)  # path -> sha256
    results: dict = field(default_factory=dict)
    ok: bool = True
    version: str = __version__

    def to_json(self) -> dict:
        return {"tool": "legdga", "version": self.version, "command": self.command, "ok": self.ok,
                "inputs": self.inputs, "results": self.results}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False, default=str) + "\n"


def _hash(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _path(rep: RunReport, name) -> Path:
    p = Path(name)
    if not p.exists():
        raise InputError(f"no such file: {name}")
    rep.inputs[str(name)] = _hash(p)
    return p


def _dga_input(rep: RunReport, name, args) -> DGA:
    p = _path(rep, name)
    if p.suffix == ".json":
        return load_dga(p, checked=not args.unchecked)
    d = load_diagram(p)
    mode = TMode(args.t or "collapsed")
    if Ring(args.ring or "z2") is not Ring.Z2:
        raise InputError("diagram DGAs are built over z2; give a DGA json file for Z coefficients")
    g = build_dga(d, Ring.Z2, mode)
    return g


def _augs(g: DGA, args) -> list[Augmentation]:
    augs = enumerate_augmentations(g, _t_image(g, args))
    if args.aug is not None and not args.all_augs:
        if not 0 <= args.aug < len(augs):
            raise InputError(f"augmentation index {args.aug} out of range (found {len(augs)})")
        return [augs[args.aug]]
    return augs


def _t_image(g: DGA, args) -> int:
    return getattr(args, "t_image", None) or 1


def _polys(d: dict) -> dict:
    return {k: str(v) for k, v in d.items()}


# subcommands -----------------------------------------------------------------
def cmd_parse(args, rep: RunReport) -> None:
    d = load_diagram(_path(rep, args.file))
    out = {}
    if isinstance(d, FrontDiagram):
        out["front"] = d.to_json()
        d = d.resolve()
    out["lagrangian"] = d.to_json()
    disks = enumerate_disks(d)
    out["disks"] = [{"positive": k.positive, "word": list(k.word), "t_power": k.t_power} for k in disks]
    rep.results = out


def cmd_dga(args, rep: RunReport) -> None:
    g = _dga_input(rep, args.file, args)
    d2, gr = check_d_squared(g), check_grading(g)
    rep.results = {"dga": g.to_json(), "differential": _polys(g.differential),
                   "checks": [d2.to_json(), gr.to_json()]}
    rep.ok = d2.ok and gr.ok


def cmd_augs(args, rep: RunReport) -> None:
    g = _dga_input(rep, args.file, args)
    augs = _augs(g, args)
    rep.results = {"count": len(augs), "augmentations": [e.to_json() for e in augs]}


def cmd_lch(args, rep: RunReport) -> None:
    g = _dga_input(rep, args.file, args)
    out = []
    for e in _augs(g, args):
        ga = augmented_differential(g, e)
        c = linearize(ga)
        sq = c.square_residuals()
        p = lch(c)
        rep.ok &= not sq
        out.append({"augmentation": e.to_json(), "poincare": p.to_json(), "polynomial": str(p),
                    "d_squared_linear": _polys(sq)})
    rep.results = {"lch": out, "polynomials": sorted(x["polynomial"] for x in out)}


def _load_morphism(rep: RunReport, name, args) -> DgaMorphism:
    p = _path(rep, name)
    return load_morphism(p, checked=not args.unchecked)


def cmd_verify_morphism(args, rep: RunReport) -> None:
    f = _load_morphism(rep, args.file, args)
    reps = [check_morphism_degrees(f), check_chain_map(f)]
    rep.results = {"checks": [r.to_json() for r in reps]}
    rep.ok = all(r.ok for r in reps)


def cmd_linearize_morphism(args, rep: RunReport) -> None:
    f = _load_morphism(rep, args.file, args)
    base = check_chain_map(f)
    out = {"chain_map": base.to_json(), "augmentations": []}
    rep.ok = base.ok
    if base.ok:
        for e1 in _augs(f.target, args):
            no_const, commute = augmented_reports(f, e1)
            item = {"e1": e1.to_json(), "checks": [no_const.to_json(), commute.to_json()]}
            if no_const.ok and commute.ok:
                fa = augment_morphism(f, e1)
                m = linear_part_map(fa, linearize(fa.source), linearize(fa.target))
                chain = linear_chain_report(m)
                item["e2"] = fa.e2.to_json()
                item["images"] = _polys(fa.images)
                item["linear"] = m.to_json()
                item["checks"].append(chain.to_json())
                item["identity"] = m.is_identity()
                if chain.ok:
                    item["homology"] = {str(k): v for k, v in induced_on_homology(m).items()}
                rep.ok &= chain.ok
            else:
                rep.ok = False
            out["augmentations"].append(item)
    rep.results = out


def _homotopy_input(rep: RunReport, name, args):
    p = _path(rep, name)
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    for key in ("source_dga", "target_dga", "f2", "K"):
        if key not in doc:
            raise InputError(f"homotopy document lacks {key!r}")

    def dga(ref):
        return load_dga(p.parent / ref if isinstance(ref, str) else ref, checked=not args.unchecked)

    src, tgt = dga(doc["source_dga"]), dga(doc["target_dga"])
    f2 = morphism(src, tgt, doc["f2"])
    K = morphism(src, tgt, doc["K"], kind="k")
    derived = "f1" not in doc
    f1 = perturb_by_homotopy(f2, K) if derived else morphism(src, tgt, doc["f1"])
    e1 = None
    if "e1" in doc:
        e1 = make_augmentation(tgt, doc["e1"])
    return f1, f2, K, e1, derived


def cmd_verify_homotopy(args, rep: RunReport) -> None:
    f1, f2, K, e1, derived = _homotopy_input(rep, args.file, args)
    chain = [check_chain_map(f1), check_chain_map(f2)]
    e1s = [e1] if e1 is not None else ([] if args.aug is None and not args.all_augs else _augs(f1.target, args))
    out = {"f1_derived": derived, "f1": _polys(f1.images),
           "chain_maps": [r.to_json() for r in chain], "reports": []}
    rep.ok = all(r.ok for r in chain)
    if not e1s:
        h = check_homotopy(f1, f2, K)
        out["reports"].append(h.to_json())
        rep.ok &= h.ok
    for e in e1s:
        h = check_homotopy(f1, f2, K, e)
        item = {"e1": e.to_json(), **h.to_json()}
        out["reports"].append(item)
        rep.ok &= h.ok
    rep.results = out


def cmd_ainf(args, rep: RunReport) -> None:
    g = _dga_input(rep, args.file, args)
    order = args.max_order or default_order(g)
    out = []
    for e in _augs(g, args):
        A = build_ainf(augmented_differential(g, e), order)
        st = [check_stasheff(A, l) for l in range(1, order + 1)]
        rep.ok &= all(r.ok for r in st)
        out.append({"augmentation": e.to_json(), "structure": A.to_json(),
                    "stasheff": [_witness(r) for r in st],
                    "cohomology": products_on_cohomology(A, higher=min(order, 3)).to_json()})
    rep.results = {"order": order, "augmentations": out}


def cmd_ainf_morphism(args, rep: RunReport) -> None:
    f = _load_morphism(rep, args.file, args)
    order = args.max_order or default_order(f.source, f.target)
    out = []
    for e1 in _augs(f.target, args):
        fa = augment_morphism(f, e1)
        A1, A2 = build_ainf(fa.target, order), build_ainf(fa.source, order)
        phi = build_morphism_components(fa, order)
        ids = [check_ainf_morphism(phi, A1, A2, n) for n in range(1, order + 1)]
        lem = check_length_filtration(fa, order)
        rep.ok &= all(r.ok for r in ids) and all(r.ok for r in lem.values())
        out.append({"e1": e1.to_json(), "e2": fa.e2.to_json(), "components": phi.to_json(),
                    "identity": [_witness(r) for r in ids],
                    "filtration": {k: _witness(r) for k, r in lem.items()},
                    "cohomology": products_on_cohomology(A1, phi, A2).to_json()})
    rep.results = {"order": order, "augmentations": out}


def _witness(r) -> dict:
    res = {(" ".join(k) if isinstance(k, tuple) and all(isinstance(x, str) for x in k) else str(k)):
           (str(v) if isinstance(v, NcPoly) else v) for k, v in r.residuals.items()}
    return {"check": r.check, "ok": r.ok, "residuals": res}


def cmd_constraints(args, rep: RunReport) -> None:
    tb1, tb2, r1, r2 = args.tb1, args.tb2, args.r1, args.r2
    if args.lower:
        d = load_diagram(_path(rep, args.lower))
        tb1, r1 = d.tb(), d.rotation_number()
    if args.upper:
        d = load_diagram(_path(rep, args.upper))
        tb2, r2 = d.tb(), d.rotation_number()
    if None in (tb1, tb2, r1, r2, args.euler):
        raise InputError("constraints need tb1, tb2, r1, r2 (or --lower/--upper diagrams) and --euler")
    c = CobordismConstraints(tb1, tb2, r1, r2, args.euler)
    r = check_constraints(c)
    rep.results = {"values": {"tb1": tb1, "tb2": tb2, "r1": r1, "r2": r2, "euler": args.euler}, **r.to_json()}
    rep.ok = r.ok


def cmd_pipeline(args, rep: RunReport) -> None:
    import yaml

    p = _path(rep, args.file)
    try:
        doc = yaml.safe_load(p.read_text())
    except yaml.YAMLError as exc:
        raise InputError(f"invalid YAML: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("steps"), list):
        raise InputError("pipeline needs a 'steps' list")
    steps = []
    for i, step in enumerate(doc["steps"]):
        if not isinstance(step, dict) or len(step) != 1:
            raise InputError(f"step {i}: expected a mapping with one command")
        (cmd, opts), = step.items()
        if cmd == "pipeline" or cmd not in COMMANDS:
            raise InputError(f"step {i}: unknown command {cmd!r}")
        argv = [cmd] + _step_argv(opts, p.parent)
        sub = build_parser().parse_args(argv)
        sub_rep = RunReport(cmd)
        COMMANDS[cmd](sub, sub_rep)
        rep.inputs.update(sub_rep.inputs)
        steps.append({"step": i, "command": cmd, "ok": sub_rep.ok, "results": sub_rep.results})
        rep.ok &= sub_rep.ok
    rep.results = {"name": doc.get("name", ""), "steps": steps}


def _step_argv(opts, base: Path) -> list[str]:
    if opts is None:
        return []
    if isinstance(opts, str):
        return [str(base / opts)]
    if not isinstance(opts, dict):
        raise InputError(f"bad step options {opts!r}")
    argv = []
    for k, v in opts.items():
        if k == "file":
            argv.insert(0, str(base / v))
            continue
        flag = "--" + k.replace("_", "-")
        if k in ("lower", "upper"):
            v = base / v
        if v is True:
            argv.append(flag)
        elif v is not False and v is not None:
            argv += [flag, str(v)]
    return argv


COMMANDS = {
    "parse": cmd_parse,
    "dga": cmd_dga,
    "augs": cmd_augs,
    "lch": cmd_lch,
    "verify-morphism": cmd_verify_morphism,
    "linearize-morphism": cmd_linearize_morphism,
    "verify-homotopy": cmd_verify_homotopy,
    "ainf": cmd_ainf,
    "ainf-morphism": cmd_ainf_morphism,
    "constraints": cmd_constraints,
    "pipeline": cmd_pipeline,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", choices=["z2", "z"], default=None)
    common.add_argument("--t", choices=["collapsed", "sign", "laurent"], default=None)
    common.add_argument("--aug", type=int, default=None, help="augmentation index")
    common.add_argument("--all-augs", action="store_true")
    common.add_argument("--max-order", type=int, default=None)
    common.add_argument("--json", action="store_true", help="print the full JSON report")
    common.add_argument("--out", default=None, help="write the JSON report here")
    common.add_argument("--unchecked", action="store_true", help="skip axiom checks when loading JSON")

    ap = argparse.ArgumentParser(prog="legdga", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"legdga {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "constraints":
            for k in ("tb1", "tb2", "r1", "r2", "euler"):
                sp.add_argument(f"--{k}", type=int, default=None)
            sp.add_argument("--lower", default=None, help="diagram of the lower end")
            sp.add_argument("--upper", default=None, help="diagram of the upper end")
        else:
            sp.add_argument("file")
    return ap


def _summary(rep: RunReport) -> str:
    r = rep.results
    lines = [f"{rep.command}: {'ok' if rep.ok else 'FAILED'}"]
    if "error" in r:
        lines.append(f"  {r['error']}")
    elif rep.command == "lch":
        lines += [f"  ε{x['augmentation'].get('index', '')}: {x['polynomial']}" for x in r["lch"]]
    elif rep.command == "augs":
        lines.append(f"  {r['count']} augmentation(s)")
        lines += [f"  {e['index']}: {e['values']}" for e in r["augmentations"]]
    elif rep.command == "dga":
        lines += [f"  ∂{k} = {v}" for k, v in r["differential"].items()]
    elif rep.command == "parse":
        lag = r["lagrangian"]
        lines.append(f"  {len(lag['crossings'])} crossings, tb = {lag['tb']}, r = {lag['r']}")
    elif rep.command == "constraints":
        lines += [f"  {n}" for n in r.get("notes", [])]
        lines += [f"  violated: {v}" for v in r["residuals"].values()]
    elif rep.command == "pipeline":
        lines += [f"  step {s['step']} {s['command']}: {'ok' if s['ok'] else 'FAILED'}" for s in r["steps"]]
    if not rep.ok and rep.command not in ("constraints", "pipeline"):
        lines.append("  (run with --json for residuals)")
    return "\n".join(lines) + "\n"


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    rep = RunReport(args.command)
    try:
        COMMANDS[args.command](args, rep)
    except AxiomError as exc:
        rep.ok = False
        rep.results = {"error": str(exc), "residuals": exc.residuals}
    except (LegdgaError, OSError, ValueError, KeyError) as exc:
        print(f"legdga: error: {exc}", file=sys.stderr)
        return 2
    text = rep.dumps()
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text if args.json else _summary(rep))
    return 0 if rep.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
