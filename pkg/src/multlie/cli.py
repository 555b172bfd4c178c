"""Command-line interface: ``multlie <command> FILE.mla [options]``.

Every command prints ``key=value`` lines with sorted keys.  Exit codes:
0 success or true, 1 negative result, 2 input error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .abelian import abelian_invariants, format_invariants
from .cocycles import CocyclePair, is_2cocycle
from .core import (
    MLAMorphism,
    derived_subalgebra,
    enumerate_ideals,
    is_perfect,
    k_set,
    ml_center,
    validate_mla,
)
from .errors import MultLieError, ParseError, PreconditionError, ResourceLimitError, StructuralError
from .exterior import CURLY, WEDGE, realize_exterior, star_on_exterior
from .groups import SubSet, is_subgroup
from .mlafile import dump_exterior, format_report, parse_ideal, parse_map, parse_table, read_mla, write_mla
from .multipliers import bogomolov, schur_multiplier
from .stars import enumerate_stars
from .structure import (
    CentralExtension,
    four_term_check,
    five_term,
    is_ctp,
    isoclinism_search,
    verify_b0_invariance,
)

OK, NEGATIVE, INPUT_ERROR, RESOURCE = 0, 1, 2, 3


def _flag(b: bool) -> str:
    return "true" if b else "false"


def _members(xs) -> str:
    return ",".join(str(x) for x in xs)


def cmd_check(m, args):
    r = validate_mla(m)
    return r.as_dict(), r.valid


def cmd_derived(m, args):
    d = derived_subalgebra(m)
    return {"order": len(d), "members": _members(d), "perfect": _flag(len(d) == m.n)}, True


def cmd_center(m, args):
    z = ml_center(m)
    return {"order": len(z), "members": _members(z)}, True


def cmd_ideals(m, args):
    ideals = enumerate_ideals(m)
    out = {"count": len(ideals)}
    width = len(str(len(ideals)))
    for i, h in enumerate(ideals):
        out[f"ideal_{i:0{width}d}"] = _members(h)
    return out, True


def cmd_k_set(m, args):
    k = k_set(m)
    return {"order": len(k), "members": _members(k), "is_subgroup": _flag(is_subgroup(m.group, k.members))}, True


def cmd_exterior(m, args):
    variant = CURLY if args.curly else WEDGE
    ext = realize_exterior(m, variant)
    out = {
        "variant": variant,
        "order": ext.order,
        "kernel_order": len(ext.kernel),
        "kernel_invariants": format_invariants(abelian_invariants(ext.table, ext.kernel.members)),
        "kernel_central": _flag(ext.kernel_is_central()),
    }
    if args.dump:
        star = star_on_exterior(ext)
        out["star_valid"] = _flag(star.report.valid)
        Path(args.dump).write_text(dump_exterior(ext, star.mla), encoding="ascii", newline="\n")
        out["dump"] = args.dump
    return out, True


def cmd_schur(m, args):
    wedge = realize_exterior(m, WEDGE)
    k = schur_multiplier(m, wedge)
    return {"schur_order": len(k),
            "schur_invariants": format_invariants(abelian_invariants(wedge.table, k.members))}, True


def cmd_bogomolov(m, args):
    r = bogomolov(m)
    return r.as_dict(), r.routes_agree


def cmd_five_term(m, args):
    r = five_term(m, parse_ideal(args.ideal))
    return r.as_dict(), r.exact


def cmd_four_term(m, args):
    r = four_term_check(m, parse_ideal(args.ideal))
    return r.as_dict(), r.holds


def cmd_isoclinic(m, args):
    other = read_mla(args.file2)
    iso = isoclinism_search(m, other)
    if iso is None:
        return {"isoclinic": "false"}, False
    inv = verify_b0_invariance(m, other, iso)
    out = {"isoclinic": "true", "lambda": _members(iso.lam.image), "mu": _members(iso.mu.image)}
    out.update(inv.as_dict())
    return out, inv.holds


def cmd_ctp(m, args):
    total = read_mla(args.total)
    proj = MLAMorphism(total, m, parse_map(Path(args.proj).read_text(), total.n))
    kernel = [x for x, y in enumerate(proj.image) if y == 0]
    e = CentralExtension(total, m, proj, SubSet(total, tuple(kernel)))
    ok, witness = is_ctp(e)
    out = {"ctp": _flag(ok), "central": _flag(e.is_central), "kernel_order": len(kernel)}
    if witness is not None:
        out["witness"] = _members(witness)
    return out, ok and e.is_central


def cmd_enumerate_stars(m, args):
    found = enumerate_stars(m.group, dedup=args.dedup)
    out = {"count": len(found), "dedup": _flag(args.dedup),
           "perfect_count": sum(is_perfect(s) for s in found),
           "trivial_count": sum(s.is_trivial_star for s in found)}
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        width = max(3, len(str(len(found))))
        for i, s in enumerate(found):
            write_mla(d / f"star_{i:0{width}d}.mla", s)
        out["out"] = str(d)
    return out, True


def cmd_cocycle_check(m, args):
    coeff = read_mla(args.coeff).group
    n = m.n
    f = parse_table(Path(args.f).read_text(), n, n)
    h = parse_table(Path(args.h).read_text(), n, n)
    try:
        c = CocyclePair(coeff, np.array(f), np.array(h))
    except StructuralError as e:
        raise ParseError(str(e)) from e
    r = is_2cocycle(m, c)
    return r.as_dict(), r.valid


COMMANDS = {
    "check": (cmd_check, "validate the MLA axioms"),
    "derived": (cmd_derived, "derived subalgebra"),
    "center": (cmd_center, "center of the algebra"),
    "ideals": (cmd_ideals, "all ideals"),
    "k-set": (cmd_k_set, "the set of (x*y)[x,y]"),
    "exterior": (cmd_exterior, "realize the wedge or curly square"),
    "schur": (cmd_schur, "Schur multiplier"),
    "bogomolov": (cmd_bogomolov, "Bogomolov multiplier by both routes"),
    "five-term": (cmd_five_term, "five-term sequence for an ideal"),
    "four-term": (cmd_four_term, "four-term sequence junctions for an ideal"),
    "isoclinic": (cmd_isoclinic, "isoclinism search against a second file"),
    "ctp": (cmd_ctp, "CTP check of an extension onto FILE"),
    "enumerate-stars": (cmd_enumerate_stars, "all MLA structures on the group of FILE"),
    "cocycle-check": (cmd_cocycle_check, "check a 2-cocycle pair"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="multlie", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    parsers = {}
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file")
        parsers[name] = sp
    parsers["exterior"].add_argument("--curly", action="store_true")
    parsers["exterior"].add_argument("--dump", metavar="PATH")
    for name in ("five-term", "four-term"):
        parsers[name].add_argument("--ideal", required=True, help="comma-separated element indices")
    parsers["isoclinic"].add_argument("file2")
    parsers["ctp"].add_argument("--total", required=True)
    parsers["ctp"].add_argument("--proj", required=True, help="file of image indices, one per total element")
    parsers["enumerate-stars"].add_argument("--dedup", action="store_true")
    parsers["enumerate-stars"].add_argument("--out", metavar="DIR")
    parsers["cocycle-check"].add_argument("--coeff", required=True)
    parsers["cocycle-check"].add_argument("--f", required=True)
    parsers["cocycle-check"].add_argument("--h", required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = COMMANDS[args.command][0]
    try:
        m = read_mla(args.file)
        report, ok = handler(m, args)
    except ResourceLimitError as e:
        print(f"error: {e}", file=sys.stderr)
        return RESOURCE
    except (ParseError, PreconditionError, StructuralError, OSError, UnicodeDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except MultLieError as e:
        print(f"error: {e}", file=sys.stderr)
        return NEGATIVE
    sys.stdout.write(format_report(report))
    return OK if ok else NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
