"""Command-line interface.

Groups are referenced by presentation-file path or by built-in catalog name
(``grpkit.presentations.catalog_keys`` lists them).  Exit codes: 0 success,
1 failed checks or scenarios, 2 usage errors (bad arguments, unreadable or
malformed inputs), 3 searches cut short by a resource budget.
"""

from __future__ import annotations

import json
import sys
from functools import wraps
from pathlib import Path

import click

from grpkit.arith import (
    NonSquarefreeDiscriminantError,
    NotPrimeError,
    primes_up_to,
    split_prime,
)
from grpkit.errors import ResourceLimitError
from grpkit.intlinalg import abelian_invariants, format_invariants, mapping_torus_h1
from grpkit.low_index import core_table, low_index_subgroups
from grpkit.manifest import ManifestError, run_manifest
from grpkit.presentations import ParseError, catalog, catalog_keys, load_presentation
from grpkit.quotients import NonDivisibleError, builtin_target, count_epimorphisms
from grpkit.rewrite import reidemeister_schreier, tietze_simplify
from grpkit.scenarios import run_all, run_scenario, scenario_names


class _ResourceExit(click.ClickException):
    exit_code = 3


def _guarded(fn):
    """Map library errors onto the documented exit codes."""

    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ResourceLimitError as exc:
            raise _ResourceExit(str(exc)) from exc
        except (ParseError, NotPrimeError, NonSquarefreeDiscriminantError,
                NonDivisibleError, KeyError, OSError) as exc:
            message = str(exc) if not isinstance(exc, KeyError) else str(exc.args[0])
            raise click.UsageError(message) from exc

    return wrapper


def _load_group(reference):
    path = Path(reference)
    if path.is_file():
        return load_presentation(path)
    if reference in catalog_keys():
        return catalog(reference)
    raise click.UsageError(
        f"{reference!r} is neither a presentation file nor one of the "
        f"built-in groups ({', '.join(catalog_keys())})"
    )


def _class_at(presentation, index, ordinal, node_budget=None):
    records = low_index_subgroups(presentation, index, index, node_budget=node_budget)
    if not 1 <= ordinal <= len(records):
        raise click.UsageError(
            f"--class {ordinal} out of range: {len(records)} classes at index {index}"
        )
    return records[ordinal - 1]


@click.group()
def main():
    """Finitely presented groups: subgroup searches and verification."""


@main.command()
@click.argument("group")
@_guarded
def aqi(group):
    """Abelian-quotient invariants of GROUP, e.g. ``[ 3 ]``."""
    click.echo(format_invariants(abelian_invariants(_load_group(group))))


@main.command(name="low-index")
@click.argument("group")
@click.option("--from", "from_index", type=int, required=True,
              help="Smallest index to search.")
@click.option("--to", "to_index", type=int, required=True,
              help="Largest index to search.")
@click.option("--class-sizes", is_flag=True,
              help="Also print one 'index class_size' line per class.")
@click.option("--node-budget", type=int, default=None,
              help="Abort after this many search steps (exit 3).")
@_guarded
def low_index(group, from_index, to_index, class_sizes, node_budget):
    """Count conjugacy classes of subgroups with index in [FROM, TO]."""
    records = low_index_subgroups(
        _load_group(group), from_index, to_index, node_budget=node_budget
    )
    click.echo(str(len(records)))
    if class_sizes:
        for record in records:
            click.echo(f"{record.index} {record.class_size}")


@main.command()
@click.argument("group")
@click.option("--index", type=int, required=True, help="Index of the subgroup.")
@click.option("--class", "ordinal", type=int, required=True,
              help="1-based class ordinal in canonical order.")
@click.option("--simplify", is_flag=True,
              help="Tietze-simplify the resulting presentation.")
@click.option("--node-budget", type=int, default=None,
              help="Abort the search after this many steps (exit 3).")
@_guarded
def rewrite(group, index, ordinal, simplify, node_budget):
    """Present a finite-index subgroup on Schreier generators."""
    presentation = _load_group(group)
    record = _class_at(presentation, index, ordinal, node_budget)
    subgroup = reidemeister_schreier(presentation, record.representative)
    if simplify:
        subgroup = tietze_simplify(subgroup)
    click.echo(subgroup.render())


@main.command(name="coset-action")
@click.argument("group")
@click.option("--index", type=int, required=True, help="Index of the subgroup.")
@click.option("--class", "ordinal", type=int, required=True,
              help="1-based class ordinal in canonical order.")
@click.option("--order", "show_order", is_flag=True,
              help="Also print the order of the image group.")
@click.option("--simple", "show_simple", is_flag=True,
              help="Also print whether the image group is simple.")
@click.option("--node-budget", type=int, default=None,
              help="Abort the search after this many steps (exit 3).")
@_guarded
def coset_action(group, index, ordinal, show_order, show_simple, node_budget):
    """Permutation image of the action on the cosets of a subgroup."""
    from grpkit.permgrp import Permutation

    presentation = _load_group(group)
    record = _class_at(presentation, index, ordinal, node_budget)
    image = core_table(presentation, record.representative)
    click.echo(f"degree: {image.degree}")
    perms = map(Permutation, record.representative.generator_permutations())
    for name, perm in zip(presentation.generators, perms):
        click.echo(f"{name}: {perm}")
    if show_order:
        click.echo(f"order: {image.order()}")
    if show_simple:
        click.echo(f"simple: {'true' if image.is_simple() else 'false'}")


@main.command(name="split-primes")
@click.option("--field", required=True,
              help="Number field name (Qomega or Kweeks).")
@click.option("--upto", type=int, required=True,
              help="Factor every rational prime up to this bound.")
@_guarded
def split_primes(field, upto):
    """Print '<p> [[f,e],...]' for each rational prime p <= UPTO."""
    for p in primes_up_to(upto):
        factors = [list(pair) for pair in split_prime(field, p).factors]
        click.echo(f"{p} {json.dumps(factors, separators=(',', ':'))}")


@main.command(name="count-epi")
@click.argument("group")
@click.option("--target", required=True,
              help="Built-in target group (A4, A5, S3, PSL27, Z2, Z3, Z5).")
@click.option("--aut-order", type=int, default=None,
              help="Known |Aut(target)|; skips enumerating it.")
@_guarded
def count_epi(group, target, aut_order):
    """Count surjections of GROUP onto a built-in finite group."""
    census = count_epimorphisms(
        _load_group(group), builtin_target(target), aut_order=aut_order
    )
    click.echo(f"total={census.total} aut={census.aut_order} classes={census.classes}")


@main.command(name="mapping-torus")
@click.option("--matrix", required=True,
              help="Square integer matrix as JSON rows, e.g. [[-3,1],[-1,0]].")
@click.option("--power", type=int, default=1, show_default=True,
              help="Take this power of the matrix first.")
@_guarded
def mapping_torus(matrix, power):
    """Homology invariants of the mapping torus of an integer matrix."""
    try:
        rows = json.loads(matrix)
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"--matrix is not valid JSON: {exc}") from exc
    try:
        invariants = mapping_torus_h1(rows, power)
    except (TypeError, ValueError) as exc:
        raise click.UsageError(str(exc)) from exc
    click.echo(format_invariants(invariants))


@main.group()
def scenario():
    """Named end-to-end computations with frozen expected outcomes."""


@scenario.command(name="list")
def scenario_list():
    """Print the scenario names, one per line."""
    for name in scenario_names():
        click.echo(name)


@scenario.command(name="run")
@click.argument("name")
@_guarded
def scenario_run(name):
    """Run one scenario by NAME, or all of them with ``all``."""
    results = run_all() if name == "all" else [run_scenario(name)]
    for result in results:
        click.echo(f"{'ok' if result.passed else 'FAIL'} {result.name}")
    if not all(r.passed for r in results):
        sys.exit(1)


@main.command()
@click.argument("manifest", type=click.Path())
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Worker threads; the report is identical for any value.")
@click.option("--max-cosets", type=int, default=None,
              help="Ceiling on coset-enumeration table size during checks.")
@click.option("--node-budget", type=int, default=None,
              help="Ceiling on subgroup-search steps per check (errors exit 3).")
def verify(manifest, jobs, max_cosets, node_budget):
    """Run every check in a MANIFEST file and print the report."""
    if jobs < 1:
        raise click.UsageError("--jobs must be at least 1")
    try:
        report = run_manifest(
            manifest, jobs=jobs, node_budget=node_budget, max_cosets=max_cosets
        )
    except ManifestError as exc:
        raise click.UsageError(str(exc)) from exc
    click.echo(report.render(), nl=False)
    sys.exit(report.exit_code())


if __name__ == "__main__":
    main()
