"""Command-line driver.

Exit codes:
    0  success (``verify`` also exits 0 when the worst verdict is ``paper-ambiguity``)
    1  parse error in the input document or on the command line
    2  invariant violation, or a ``FAIL`` verdict from ``verify``
    3  the action is not harmonic; the offending element and edge are printed
"""

from __future__ import annotations

import functools
import json
import re
import sys

import click

from .action import ActionError, classify_orbits, is_harmonic
from .decomp import AMBIGUOUS, FAIL, DecompError, benchmark, verify_main
from .document import (
    DocumentError,
    document_to_json,
    graph_to_json,
    load_document,
    parse_divisor,
)
from .graph import GraphError, jacobian
from .instances import GALLERY, InstanceError, gallery, random_harmonic
from .intalg import IntAlgError
from .lattices import LatticeContext, LatticeError, in_P12_criterion, in_P_criterion
from .quotient import SUBGROUPS, QuotientError, quotient_graph

EXIT_OK, EXIT_PARSE, EXIT_INVARIANT, EXIT_NOT_HARMONIC = 0, 1, 2, 3
MEMBER_SETS = ("P", "P12", "P0", "L", "Lprime")


class NotHarmonic(Exception):
    pass


def _fail(message: str, code: int):
    click.echo(message, err=True)
    raise click.exceptions.Exit(code)


def guarded(f):
    """Translate library exceptions into the documented exit codes."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except DocumentError as exc:
            _fail(str(exc), EXIT_PARSE)
        except OSError as exc:
            _fail(f"cannot read input: {exc}", EXIT_PARSE)
        except NotHarmonic as exc:
            _fail(f"not harmonic: {exc}", EXIT_NOT_HARMONIC)
        except (GraphError, ActionError, QuotientError, LatticeError, DecompError, InstanceError, IntAlgError) as exc:
            _fail(f"invariant violation: {exc}", EXIT_INVARIANT)

    return wrapper


def _emit(ctx: click.Context, payload, text: str) -> None:
    if ctx.obj["json"]:
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(text)


def _load(stream, need_action: bool = True):
    G, action = load_document(stream.read(), need_action=need_action)
    if action is not None:
        check = is_harmonic(G, action)
        if not check.ok:
            word, e = check.witness
            a, b = G.edges[e]
            raise NotHarmonic(
                f"element {word} fixes edge {e} ({G.labels[a]}-{G.labels[b]}) without swapping its endpoints"
            )
    return G, action


@click.group()
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def cli(ctx: click.Context, as_json: bool) -> None:
    """Critical groups of graphs with dihedral symmetry."""
    ctx.ensure_object(dict)
    ctx.obj["json"] = as_json


@cli.command("jacobian")
@click.argument("file", type=click.File("r"))
@click.pass_context
@guarded
def cmd_jacobian(ctx, file):
    """Invariant factors of Jac(G); the action is optional."""
    G, _ = _load(file, need_action=False)
    J = jacobian(G)
    _emit(ctx, {"invariant_factors": J.to_list(), "order": J.order}, f"{J} (order {J.order})")


@cli.command("orbits")
@click.argument("file", type=click.File("r"))
@click.pass_context
@guarded
def cmd_orbits(ctx, file):
    """Orbit types, indices and canonical labelings."""
    G, action = _load(file)
    s = classify_orbits(G, action)
    names = {"I": ("z",), "II": ("w",), "III": ("x", "y")}
    rows = []
    for o in s.orbits:
        labeling = {
            letter: [G.labels[v] for v in seq] for letter, seq in zip(names[o.orbit_type], o.labeling)
        }
        rows.append({"vertices": [G.labels[v] for v in o.vertices], "type": o.orbit_type, "index": o.index,
                     "labeling": labeling})
    footer = {"t1": s.t1, "t2": s.t2, "t3": s.t3, "kappa": s.kappa, "t_tilde": s.t_tilde, "parity": s.parity,
              "swapped": s.swapped, "t_tilde_ambiguous": s.tilde_ambiguous}
    lines = []
    for r in rows:
        lab = "; ".join(f"{k}: " + " ".join(map(str, v)) for k, v in r["labeling"].items())
        members = "{" + ",".join(map(str, r["vertices"])) + "}"
        lines.append(f"{members:<30} type {r['type']:<3} index {r['index']:<3} {lab}")
    lines.append(
        f"t1={s.t1} t2={s.t2} t3={s.t3} kappa={s.kappa} t_tilde={s.t_tilde} ({s.parity})"
        + (" [generators swapped]" if s.swapped else "")
        + (" [t_tilde ambiguous]" if s.tilde_ambiguous else "")
    )
    _emit(ctx, {"orbits": rows, **footer}, "\n".join(lines))


@cli.command("quotient")
@click.argument("file", type=click.File("r"))
@click.option("--by", "by", type=click.Choice(SUBGROUPS), required=True)
@click.pass_context
@guarded
def cmd_quotient(ctx, file, by):
    """Quotient graph by a subgroup, with fibers and horizontal multiplicities."""
    G, action = _load(file)
    phi = quotient_graph(G, action, by)
    T = phi.target
    fibers = [
        {"vertex": T.labels[w], "fiber": [G.labels[v] for v in fib], "h_mult": phi.h_mult[w]}
        for w, fib in enumerate(phi.fibers)
    ]
    J = jacobian(T)
    payload = {"graph": graph_to_json(T), "fibers": fibers, "jacobian": J.to_list()}
    lines = [json.dumps(graph_to_json(T)), f"{'vertex':<24} {'h_mult':>6}  fiber"]
    for f in fibers:
        lines.append(f"{str(f['vertex']):<24} {f['h_mult']:>6}  " + " ".join(map(str, f["fiber"])))
    lines.append(f"Jac: {J}")
    _emit(ctx, payload, "\n".join(lines))


@cli.command("member")
@click.argument("file", type=click.File("r"))
@click.option("--set", "which", type=click.Choice(MEMBER_SETS), required=True)
@click.option("--divisor", required=True, help='Inline JSON like {"x": 1, "y": -1}, or a path to such a file.')
@click.pass_context
@guarded
def cmd_member(ctx, file, which, divisor):
    """Lattice membership of a divisor, with the closed-form criterion for P and P12."""
    G, action = _load(file)
    text = divisor
    if not divisor.lstrip().startswith("{"):
        with open(divisor) as fh:
            text = fh.read()
    delta = parse_divisor(G, text)
    lc = LatticeContext(G, action)
    result = {"set": which, "member": delta in lc.lattice(which)}
    if which == "P12":
        result["criterion"] = in_P12_criterion(lc, delta)
    elif which == "P":
        result["criterion"] = in_P_criterion(lc, delta)
        result["criterion_refined"] = in_P_criterion(lc, delta, refined=True)
    extra = "".join(f", {k} {v}" for k, v in result.items() if k.startswith("criterion"))
    _emit(ctx, result, f"{'member' if result['member'] else 'not a member'} of {which}{extra}")


@cli.command("verify")
@click.argument("file", type=click.File("r"))
@click.option("--checks", type=click.Choice(["main", "all"]), default="main", show_default=True)
@click.pass_context
@guarded
def cmd_verify(ctx, file, checks):
    """Theorem checks; exits 2 on any FAIL verdict."""
    G, action = _load(file)
    report = verify_main(G, action, checks)
    _emit(ctx, report.to_json(), report.to_text())
    if report.verdict == FAIL:
        raise click.exceptions.Exit(EXIT_INVARIANT)
    if report.verdict == AMBIGUOUS:
        click.echo("warning: some checks differ from the closed forms only where t1 = 0 or t2 = 0", err=True)


@cli.command("gallery")
@click.argument("name", type=click.Choice(sorted(GALLERY)))
@click.option("--n", "n", type=int, default=None, help="Size parameter for wheel and squareweb.")
@guarded
def cmd_gallery(name, n):
    """Write a named example as an input document."""
    G, action = gallery(name, n)
    click.echo(json.dumps(document_to_json(G, action), indent=2))


def _parse_spec(text: str) -> list[tuple[str, int]]:
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        m = re.fullmatch(r"(I|II|III)\s*:\s*(\d+)", part, flags=re.IGNORECASE)
        if not m:
            raise DocumentError(f"orbit spec items look like III:2, got {part!r}", "--spec")
        out.append((m.group(1).upper(), int(m.group(2))))
    if not out:
        raise DocumentError("empty orbit spec", "--spec")
    return out


@cli.command("gen")
@click.option("--n", "n", type=int, required=True)
@click.option("--spec", required=True, help="Comma-separated type:index pairs, e.g. I:1,III:2.")
@click.option("--seed", type=int, required=True)
@click.option("--edge-orbits", type=int, default=3, show_default=True)
@guarded
def cmd_gen(n, spec, seed, edge_orbits):
    """Write a seeded random harmonic instance as an input document."""
    G, action = random_harmonic(n, _parse_spec(spec), edge_orbits, seed)
    click.echo(json.dumps(document_to_json(G, action), indent=2))


def _parse_range(text: str) -> list[int]:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*", text)
    if not m:
        raise DocumentError(f"a range looks like 4..12, got {text!r}", "range")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if hi < lo:
        raise DocumentError(f"empty range {text!r}", "range")
    return list(range(lo, hi + 1))


@cli.command("bench")
@click.argument("family", type=click.Choice(["wheel", "squareweb"]))
@click.argument("sizes")
@click.option("--repeat", type=int, default=1, show_default=True)
@click.pass_context
@guarded
def cmd_bench(ctx, family, sizes, repeat):
    """Direct vs quotient-based odd part of Jac(G) over a size range like 4..12."""
    rows = benchmark(family, _parse_range(sizes), repeat)
    lines = [f"{'n':>3} {'|V|':>5} {'direct s':>10} {'decomp s':>10} {'ratio':>7}  agree  group"]
    for r in rows:
        lines.append(
            f"{r['n']:>3} {r['vertices']:>5} {r['direct_s']:>10.4f} {r['decomposed_s']:>10.4f} "
            f"{r['ratio']:>7.2f}  {'yes' if r['agree'] else 'NO':<5}  {r['group']}"
        )
    _emit(ctx, rows, "\n".join(lines))
    if not all(r["agree"] for r in rows):
        raise click.exceptions.Exit(EXIT_INVARIANT)


def run(argv: list[str] | None = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    try:
        rv = cli.main(args=argv, prog_name="critgroup", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_PARSE
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_PARSE
    return rv if isinstance(rv, int) else EXIT_OK


def main() -> None:
    sys.exit(run())

