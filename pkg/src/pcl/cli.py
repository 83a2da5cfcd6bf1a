"""Command-line interface: ``pcl <group> <verb> ...`` printing JSON.

Exit codes: 0 success, 2 precondition error, 3 bound exceeded.  Errors are
printed to stderr as ``{"error": code, "message": text}``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import golomb, peiji, profinite, supernatural
from .config import settings
from .errors import BoundExceeded, PreconditionError
from .finite_topology import ResidueSet


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise PreconditionError(f"usage: {message}")


def _family(text: str) -> peiji.FamilySpec:
    if text.endswith(".json"):
        return peiji.FamilySpec.from_json(Path(text).read_text())
    return peiji.FamilySpec.named(text)


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc.strerror}") from None


def _gsys(args) -> tuple[golomb.GolombSystemSpec, golomb.KirchFunction]:
    data = _load_json(args.spec)
    spec = golomb.GolombSystemSpec.from_json(data)
    if args.kappa is not None:
        kappa = golomb.KirchFunction.from_json(args.kappa)
    else:
        kappa = golomb.KirchFunction.from_json(data.get("kappa", {"default": "inf"}))
    return spec, kappa


def _supernatural(text: str) -> supernatural.Supernatural:
    if text.endswith(".json"):
        return supernatural.Supernatural.from_json(_load_json(text))
    if text.isdigit() and int(text) > 0:
        return supernatural.Supernatural.from_natural(int(text))
    return supernatural.Supernatural.parse(text)


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


# command handlers return plain dicts; Fractions are rendered later


def cmd_topo_open(a):
    return {"open": peiji.coset_open(_family(a.family), a.a, a.b)}


def cmd_topo_closure(a):
    if (a.set is None) == (a.ap is None):
        raise PreconditionError("give exactly one of --set or --ap")
    if a.set is not None:
        S = _ints(a.set)
    else:
        x, y = _ints(a.ap)
        S = peiji.APSet(x, y)
    return {"closure": peiji.closure_mod(_family(a.family), S, a.mod).members()}


def cmd_topo_core(a):
    from .finite_topology import indiscrete_core

    T = peiji.topology_at(_family(a.family), a.n)
    return {"core": indiscrete_core(T).members()}


def cmd_topo_brown(a):
    return peiji.brown_conditions(_family(a.family), a.n, a.k).to_json()


def cmd_gsys_open(a):
    spec, kappa = _gsys(a)
    return {"open": golomb.coset_open(spec, kappa, a.a, a.n)}


def cmd_gsys_hausdorff(a):
    spec, kappa = _gsys(a)
    w = golomb.hausdorff_witness(spec, kappa, a.a, a.b, a.bound)
    if w is None:
        return {"witness": f"none <= {a.bound}"}
    return {"p": w[0], "r": w[1]}


def cmd_gsys_dual(a):
    spec, _ = _gsys(a)
    return golomb.dual(spec).to_json()


def cmd_gsys_classify(a):
    spec, _ = _gsys(a)
    return golomb.classify_coset(spec, a.a, a.n).to_json()


def cmd_zhat_dirichlet(a):
    limit = settings.prime_limit
    return {
        "residues": profinite.prime_residues(a.n, limit).members(),
        "check": profinite.dirichlet_check(a.n, limit),
    }


def cmd_zhat_euler(a):
    return {"value": profinite.euler_unit_measure(a.P)}


def cmd_zhat_measure(a):
    S = profinite.ClopenSet.from_json(_load_json(a.clopen))
    return {"value": profinite.haar_measure(S)}


def cmd_zhat_pi_measure(a):
    return {"value": profinite.golomb_pi_measure(a.a, a.b)}


def cmd_zhat_density(a):
    if a.t > settings.prime_limit:
        raise BoundExceeded(f"t = {a.t} exceeds prime limit {settings.prime_limit}")
    d = profinite.empirical_prime_density(a.a, a.b, a.t)
    return {"count": d.count, "total": d.total, "absolute": d.absolute, "relative": d.relative}


def cmd_super_h(a):
    return {"h": supernatural.abundancy(_supernatural(a.spec))}


def cmd_super_approx(a):
    s = supernatural.approx_target(Fraction(a.t), Fraction(a.eps), settings.prime_limit)
    return {"s": str(s), "h": supernatural.abundancy(s)}


def cmd_super_omega(a):
    s = _supernatural(a.spec)
    return {"omega": supernatural.omega(s), "big_omega": supernatural.big_omega(s)}


def cmd_super_monotone(a):
    r = supernatural.divisibility_monotone(a.fn, a.bound)
    if r is True:
        return {"monotone": True}
    return {"monotone": False, "counterexample": list(r)}


def _render(value, decimal: bool):
    if isinstance(value, Fraction):
        return profinite._ratio(value)
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if isinstance(value, dict):
        out = {}
        for k, v in value.items():
            out[k] = _render(v, decimal)
            if decimal and isinstance(v, Fraction):
                out[f"{k}_decimal"] = profinite.decimal12(v)
        return out
    if isinstance(value, list):
        return [_render(v, decimal) for v in value]
    if isinstance(value, ResidueSet):
        return value.members()
    return value


def _text(obj, prefix: str = "") -> list[str]:
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict):
            lines += _text(v, f"{prefix}{k}.")
        elif isinstance(v, list):
            lines.append(f"{prefix}{k}: {' '.join(json.dumps(x) for x in v)}")
        else:
            lines.append(f"{prefix}{k}: {v if isinstance(v, str) else json.dumps(v)}")
    return lines


def _add_globals(p: argparse.ArgumentParser, top: bool) -> None:
    d = None if top else argparse.SUPPRESS
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json",
                     default="json" if top else d)
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text", default=d)
    p.add_argument("--prime-limit", type=int, default=10**6 if top else d)
    p.add_argument("--level-max", type=int, default=2**20 if top else d)
    p.add_argument("--sieve-cache", default=d)
    p.add_argument("--decimal", action="store_true", default=False if top else d)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pcl", description=__doc__.splitlines()[0])
    _add_globals(parser, True)
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(sub, name, func, help_=None):
        p = sub.add_parser(name, help=help_)
        _add_globals(p, False)
        p.set_defaults(func=func)
        return p

    topo = groups.add_parser("topo", help="named coset topologies").add_subparsers(
        dest="verb", required=True, parser_class=_Parser)
    p = leaf(topo, "open", cmd_topo_open, "is a + bZ open")
    p.add_argument("family"); p.add_argument("a", type=int); p.add_argument("b", type=int)
    p = leaf(topo, "closure", cmd_topo_closure, "closure of a set at level m")
    p.add_argument("family"); p.add_argument("--set"); p.add_argument("--ap")
    p.add_argument("--mod", type=int, required=True)
    p = leaf(topo, "core", cmd_topo_core, "indiscrete core at level n")
    p.add_argument("family"); p.add_argument("n", type=int)
    p = leaf(topo, "brown", cmd_topo_brown, "Brown conditions for Z/nk -> Z/n")
    p.add_argument("family"); p.add_argument("n", type=int); p.add_argument("k", type=int)

    gsys = groups.add_parser("gsys", help="Golomb systems").add_subparsers(
        dest="verb", required=True, parser_class=_Parser)

    def gleaf(name, func, help_):
        p = leaf(gsys, name, func, help_)
        p.add_argument("--spec", required=True)
        p.add_argument("--kappa")
        return p

    p = gleaf("open", cmd_gsys_open, "is a + nZ open")
    p.add_argument("a", type=int); p.add_argument("n", type=int)
    p = gleaf("hausdorff", cmd_gsys_hausdorff, "separating prime power")
    p.add_argument("a", type=int); p.add_argument("b", type=int)
    p.add_argument("--bound", type=int, default=1000)
    gleaf("dual", cmd_gsys_dual, "complementary system")
    p = gleaf("classify", cmd_gsys_classify, "superconnected or totally separated")
    p.add_argument("a", type=int); p.add_argument("n", type=int)

    zhat = groups.add_parser("zhat", help="profinite integers").add_subparsers(
        dest="verb", required=True, parser_class=_Parser)
    p = leaf(zhat, "dirichlet", cmd_zhat_dirichlet, "residues of primes mod n")
    p.add_argument("n", type=int)
    p = leaf(zhat, "euler", cmd_zhat_euler, "prod (1 - 1/p) over p <= P")
    p.add_argument("P", type=int)
    p = leaf(zhat, "measure", cmd_zhat_measure, "Haar measure of a clopen set")
    p.add_argument("--clopen", required=True)
    p = leaf(zhat, "pi-measure", cmd_zhat_pi_measure, "Golomb prime measure of a + bN")
    p.add_argument("a", type=int); p.add_argument("b", type=int)
    p = leaf(zhat, "density", cmd_zhat_density, "empirical prime density of a + bN")
    p.add_argument("a", type=int); p.add_argument("b", type=int); p.add_argument("t", type=int)

    sup = groups.add_parser("super", help="supernatural numbers").add_subparsers(
        dest="verb", required=True, parser_class=_Parser)
    p = leaf(sup, "h", cmd_super_h, "abundancy index")
    p.add_argument("spec")
    p = leaf(sup, "approx", cmd_super_approx, "squarefree s with h(s) near t")
    p.add_argument("t"); p.add_argument("--eps", default="1e-4")
    p = leaf(sup, "omega", cmd_super_omega, "number of prime factors")
    p.add_argument("spec")
    p = leaf(sup, "monotone", cmd_super_monotone, "a | b implies f(a) | f(b)")
    p.add_argument("fn"); p.add_argument("--bound", type=int, default=10**4)
    return parser


def run(argv: list[str]) -> tuple[int, str, str]:
    """Execute a command; returns (exit code, stdout, stderr)."""
    try:
        args = build_parser().parse_args(argv)
        old = (settings.prime_limit, settings.level_max, settings.sieve_cache)
        settings.prime_limit = args.prime_limit
        settings.level_max = args.level_max
        if args.sieve_cache:
            settings.sieve_cache = Path(args.sieve_cache)
        try:
            result = _render(args.func(args), args.decimal)
        finally:
            settings.prime_limit, settings.level_max, settings.sieve_cache = old
    except BoundExceeded as exc:
        return 3, "", json.dumps({"error": "bound_exceeded", "message": str(exc)}) + "\n"
    except (PreconditionError, ValueError, ZeroDivisionError) as exc:
        return 2, "", json.dumps({"error": "precondition", "message": str(exc)}) + "\n"
    if args.fmt == "text":
        return 0, "\n".join(_text(result)) + "\n", ""
    return 0, json.dumps(result) + "\n", ""


def main(argv: list[str] | None = None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
