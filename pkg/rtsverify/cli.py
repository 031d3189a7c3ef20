"""Command line: rts-check check | separate | gen-hardness | gen-colouring | sample-run | frameworks."""

import json
import logging
import sys
import uuid
from functools import wraps
from pathlib import Path

import click

from .checker import CheckOptions, Settings, load_instance, run_check
from .errors import RtsError, UsageError
from .frameworks.catalog import generate_framework_catalog
from .hardness.colouring import colouring_instance
from .hardness.gadget import sample_run
from .hardness.generator import FRAMEWORK_CHOICES, build_hardness_instance
from .hardness.tm import read_tm
from .tools.instance_io import write_instance
from .tools.log import configure_logging
from .verification.separability import brute_force_separate, separate

logger = logging.getLogger(__name__)

CONTEXT_SETTINGS = dict(max_content_width=120, help_option_names=["-h", "--help"])


def log_error(text: str) -> None:
    click.secho(f"[!] {text}", fg="red", bold=True, err=True)


def log_info(text: str) -> None:
    click.secho(f"[*] {text}", fg="blue", err=True)


def exits_on_error(fn):
    """Map toolkit errors to their exit codes."""

    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except RtsError as e:
            log_error(str(e))
            sys.exit(e.exit_code)

    return wrapper


@click.group(context_settings=CONTEXT_SETTINGS)
@click.option("-v", "--verbose", is_flag=True, help="Debug logging (query trace)")
@click.pass_context
def cli(ctx, verbose):
    settings = Settings.from_env()
    configure_logging("DEBUG" if verbose else settings.log_level, settings.log_file)
    ctx.obj = settings


@cli.command(context_settings=CONTEXT_SETTINGS)
@click.argument("instance_file", metavar="<instance>", type=click.Path(exists=True, dir_okay=False))
@click.option("-f", "--framework", metavar="<spec>", help="Framework spec, e.g. xor, disj=1, union(disj=1,xor); "
              "defaults to the file's framework section")
@click.option("-m", "--mode", type=click.Choice(["direct", "lazy"]), default="direct", show_default=True)
@click.option("--exact", is_flag=True, help="Lazy mode: learn Ind itself instead of stopping at a proof")
@click.option("--dot", "dot_dir", metavar="<dir>", type=click.Path(file_okay=False), help="Write DOT files here")
@click.option("--dimacs", "dimacs_dir", metavar="<dir>", type=click.Path(file_okay=False),
              help="Write separability formulas here")
@click.option("--max-eq", type=int, metavar="<n>", default=None, help="Equivalence query cap (lazy mode)")
@click.option("-p", "--property", "prop", metavar="<name>", help="Check only this unsafe set")
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON")
@click.pass_obj
@exits_on_error
def check(settings, instance_file, framework, mode, exact, dot_dir, dimacs_dir, max_eq, prop, as_json):
    """Decide abstract safety of every property of an instance."""
    options = CheckOptions(
        mode=mode,
        exact=exact,
        max_eq=max_eq or settings.max_eq,
        dot_dir=dot_dir,
        dimacs_dir=dimacs_dir,
        property=prop,
    )
    inst = load_instance(instance_file, framework)
    report = run_check(inst, options, run_id=uuid.uuid4().hex)
    if as_json:
        click.echo(report.model_dump_json(indent=2))
    else:
        click.echo(report.render(), nl=False)
    sys.exit(report.exit_code)


@cli.command("separate", context_settings=CONTEXT_SETTINGS)
@click.argument("instance_file", metavar="<instance>", type=click.Path(exists=True, dir_okay=False))
@click.argument("c", metavar="<c>")
@click.argument("c_prime", metavar="<c'>")
@click.option("-f", "--framework", metavar="<spec>", help="Framework spec (defaults to the file's)")
@click.option("--brute-force", is_flag=True, help="Enumerate constraints instead of solving")
@click.option("--dimacs", "dimacs_dir", metavar="<dir>", type=click.Path(file_okay=False))
@click.pass_obj
@exits_on_error
def separate_cmd(settings, instance_file, c, c_prime, framework, brute_force, dimacs_dir):
    """Find an inductive constraint satisfied by c and not by c'. Exit 0 if found, 1 if none exists."""
    inst = load_instance(instance_file, framework)
    if brute_force:
        a = brute_force_separate(inst, c, c_prime, guard=settings.brute_force_guard)
    else:
        a = separate(inst, c, c_prime, dimacs_dir=dimacs_dir)
    if a is None:
        click.echo("separable=false")
        sys.exit(1)
    click.echo("separable=true")
    click.echo(f"separator={' '.join(a) or 'eps'}")


@cli.command("gen-hardness", context_settings=CONTEXT_SETTINGS)
@click.argument("tm_file", metavar="<tm>", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", metavar="<instance>", type=click.Path(dir_okay=False), required=True)
@click.option("--framework", "framework", type=click.Choice(FRAMEWORK_CHOICES), default="full", show_default=True,
              help="full: both constraint parts; v2: the marking part alone")
@exits_on_error
def gen_hardness(tm_file, output, framework):
    """Build the safety instance for a Turing machine and write it with its framework."""
    tm = read_tm(tm_file)
    inst = build_hardness_instance(tm, framework)
    path = write_instance(inst, output)
    log_info(f"{inst.name}: |Delta|={inst.delta.num_states}, framework {inst.framework.name} -> {path}")


@cli.command("gen-colouring", context_settings=CONTEXT_SETTINGS)
@click.argument("num_vertices", metavar="<n>", type=int)
@click.argument("edges", metavar="<a-b>...", nargs=-1, required=True)
@click.option("-o", "--output", metavar="<instance>", type=click.Path(dir_okay=False), required=True)
@exits_on_error
def gen_colouring(num_vertices, edges, output):
    """Separability instance of a graph: separable iff the graph is 3-colourable."""
    pairs = []
    for e in edges:
        a, sep, b = e.partition("-")
        if not sep or not a.isdigit() or not b.isdigit():
            raise UsageError(f"edge {e!r} must look like 1-2")
        pairs.append((int(a), int(b)))
    inst = colouring_instance(num_vertices, pairs, name=Path(output).stem)
    path = write_instance(inst, output)
    log_info(f"{inst.name}: {num_vertices} vertices, {len(pairs)} edges -> {path}")


@cli.command("sample-run", context_settings=CONTEXT_SETTINGS)
@click.argument("tm_file", metavar="<tm>", type=click.Path(exists=True, dir_okay=False))
@click.option("-n", "--length", type=int, default=10, show_default=True, help="Tape-part length")
@exits_on_error
def sample_run_cmd(tm_file, length):
    """Print the marking run that writes the tape part position by position."""
    tm = read_tm(tm_file)
    for label, u in sample_run(tm, length):
        click.echo(f"{label:<12} {' '.join(u.word())}")


@cli.command(context_settings=CONTEXT_SETTINGS)
def frameworks():
    """List the framework spec grammar."""
    click.echo(json.dumps(generate_framework_catalog(), indent=2))


def main():
    cli()


if __name__ == "__main__":
    main()
