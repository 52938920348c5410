"""CLI entry point for rclif."""

import functools
import json
import os
import sys
from pathlib import Path
from typing import Any, Optional

import click

from realclifford import __version__
from realclifford.circuit import Circuit, CircuitParseError, CircuitTypeError, parse_circuit
from realclifford.counting import count_report, enumerate_normal_forms, verify_bijection
from realclifford.exact import DEFAULT_MATRIX_CAP, MatrixCapExceeded, circuit_matrix, format_matrix, matrices_equal
from realclifford.normal_form import (
    NormalFormError,
    SynthesisError,
    action_table,
    nf_to_json,
    normalize_by_synthesis,
)
from realclifford.relations import RELATION_SETS, UnknownRelationSetError, verify_relations
from realclifford.rewrite import NoRuleAppliesError, RewriteInvariantError, TraceStep, normalize_by_rewriting
from realclifford.rules import RuleDerivationError, RuleFileError, format_rules, load_rules, typed_rule_database
from realclifford.tableau import fingerprint


# Error code constants
class ErrorCode:
    SUCCESS = 0
    VERIFICATION_FAILED = 1
    INVALID_INPUT = 2
    INTERNAL_ERROR = 3


def output_error(error_type: str, message: str, exit_code: int,
                 suggestion: Optional[str] = None) -> None:
    """Output a structured JSON error to stderr and exit."""
    error_obj = {
        "error": error_type,
        "message": message,
        "code": exit_code
    }
    if suggestion:
        error_obj["suggestion"] = suggestion
    click.echo(json.dumps(error_obj), err=True)
    sys.exit(exit_code)


def emit(obj: Any, verbose: bool = False) -> None:
    """Write one JSON document to stdout, compact unless verbose."""
    if verbose:
        click.echo(json.dumps(obj, indent=2, sort_keys=True))
    else:
        click.echo(json.dumps(obj, separators=(',', ':'), sort_keys=True))


def handle_errors(command):
    """Map library failures onto structured errors and exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except CircuitParseError as e:
            output_error("PARSE_ERROR", str(e), ErrorCode.INVALID_INPUT)
        except CircuitTypeError as e:
            output_error("TYPE_ERROR", str(e), ErrorCode.INVALID_INPUT)
        except RuleFileError as e:
            output_error("RULE_FILE_ERROR", str(e), ErrorCode.INVALID_INPUT)
        except MatrixCapExceeded as e:
            output_error("MATRIX_CAP_EXCEEDED", str(e), ErrorCode.INVALID_INPUT,
                         suggestion="Pass a larger --matrix-cap")
        except NoRuleAppliesError as e:
            output_error("NO_RULE_APPLIES", str(e), ErrorCode.INTERNAL_ERROR,
                         suggestion=e.reproducer or None)
        except (RewriteInvariantError, RuleDerivationError) as e:
            output_error(type(e).__name__.upper(), str(e), ErrorCode.INTERNAL_ERROR)
        except (UnknownRelationSetError, NormalFormError, SynthesisError, ValueError) as e:
            output_error("INVALID_ARGUMENT", str(e), ErrorCode.INVALID_INPUT)
        except OSError as e:
            output_error("IO_ERROR", str(e), ErrorCode.INVALID_INPUT)

    return wrapper


def read_circuit(path: str) -> Circuit:
    return parse_circuit(Path(path).read_text(encoding="utf-8"))


def write_text(path: Optional[str], text: str) -> None:
    """Write ``text`` to ``path``, or to stdout when no path is given."""
    if path is None:
        click.echo(text, nl=False)
    else:
        Path(path).write_text(text, encoding="utf-8")


def print_version(ctx, param, value):
    """Print detailed version information."""
    if not value or ctx.resilient_parsing:
        return

    python_version = f"{sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}"

    try:
        import realclifford
        install_path = os.path.dirname(os.path.abspath(realclifford.__file__))
    except Exception:
        install_path = "unknown"

    click.echo(f"rclif version {__version__}")
    click.echo(f"Python {python_version}")
    click.echo(f"Installation path: {install_path}")
    ctx.exit()


matrix_cap_option = click.option(
    '--matrix-cap', type=int, default=DEFAULT_MATRIX_CAP, show_default=True,
    help='Largest qubit count for dense exact matrices')


@click.group()
@click.option('--version', is_flag=True, callback=print_version, expose_value=False, is_eager=True,
              help='Show version information')
def main():
    """rclif - real Clifford circuits: normal forms, rewriting and counting"""


@main.command()
@click.option('--in', 'in_path', required=True, help='Circuit file (.rsc)')
@click.option('--out', 'out_path', default=None, help='Write the normal form JSON here')
@click.option('--method', type=click.Choice(['synth', 'rewrite']), default='synth', show_default=True,
              help='Normalize by tableau synthesis or by rewriting')
@click.option('--trace', is_flag=True, help='Log each rewrite step to stderr')
@click.option('--rules', 'rules_path', default=None, help='Rule file to rewrite with')
@click.option('-v', '--verbose', is_flag=True, help='Pretty-print the JSON output')
@matrix_cap_option
@handle_errors
def normalize(in_path: str, out_path: Optional[str], method: str, trace: bool,
              rules_path: Optional[str], verbose: bool, matrix_cap: int):
    """Compute the normal form of a circuit."""
    c = read_circuit(in_path)
    if method == 'synth':
        nf = normalize_by_synthesis(c, matrix_cap)
    else:
        database = None
        if rules_path is not None:
            database = load_rules(Path(rules_path).read_text(encoding="utf-8"))

        def on_step(step: TraceStep) -> None:
            click.echo(json.dumps(step.to_json(), separators=(',', ':'), sort_keys=True), err=True)

        nf = normalize_by_rewriting(c, database, on_step if trace else None)
    data = nf_to_json(nf)
    if out_path is None:
        emit(data, verbose)
    else:
        Path(out_path).write_text(json.dumps(data, separators=(',', ':'), sort_keys=True) + "\n",
                                  encoding="utf-8")


@main.command()
@click.argument('first')
@click.argument('second')
@click.option('--matrix', 'use_matrix', is_flag=True, help='Compare exact matrices instead of fingerprints')
@matrix_cap_option
@handle_errors
def equal(first: str, second: str, use_matrix: bool, matrix_cap: int):
    """Exit 0 when two circuits denote the same operator, 1 otherwise."""
    a, b = read_circuit(first), read_circuit(second)
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"Qubit counts differ: {a.n_qubits} and {b.n_qubits}")
    if use_matrix:
        same = matrices_equal([a, b], matrix_cap)
    else:
        same = fingerprint(a, matrix_cap).key() == fingerprint(b, matrix_cap).key()
    emit({"equal": same})
    sys.exit(ErrorCode.SUCCESS if same else ErrorCode.VERIFICATION_FAILED)


@main.command()
@click.option('--in', 'in_path', required=True, help='Circuit file (.rsc)')
@matrix_cap_option
@handle_errors
def matrix(in_path: str, matrix_cap: int):
    """Print the exact matrix of a circuit."""
    click.echo(format_matrix(circuit_matrix(read_circuit(in_path), matrix_cap)))


@main.command()
def actions():
    """Print the Pauli action of every generator, one JSON object per line."""
    for row in action_table():
        emit(row.to_json())


@main.command('verify-relations')
@click.option('--set', 'set_name', type=click.Choice(list(RELATION_SETS) + ['alternative']),
              default='reduced', show_default=True, help='Relation set to check')
@click.option('--rules', 'rules_path', default=None, help='Rule file to check instead of the typed database')
@click.option('-v', '--verbose', is_flag=True, help='Print the full report as JSON')
@matrix_cap_option
@handle_errors
def verify_relations_cmd(set_name: str, rules_path: Optional[str], verbose: bool, matrix_cap: int):
    """Check a relation set as exact matrix identities."""
    database = None
    if rules_path is not None:
        database = load_rules(Path(rules_path).read_text(encoding="utf-8"), check=False)
    report = verify_relations(set_name, database, matrix_cap)
    if verbose:
        emit(report.to_json(), verbose)
    else:
        click.echo(report.summary())
        for failure in report.failures:
            click.echo(json.dumps(failure.to_json(), separators=(',', ':'), sort_keys=True), err=True)
    sys.exit(ErrorCode.SUCCESS if report.ok else ErrorCode.VERIFICATION_FAILED)


@main.command('derive-rules')
@click.option('--out', 'out_path', default=None, help='Write the rule file here')
@click.option('--no-cache', is_flag=True, help='Derive every rule even if a cached database exists')
@click.option('-v', '--verbose', is_flag=True, help='Report rule counts per family on stderr')
@handle_errors
def derive_rules(out_path: Optional[str], no_cache: bool, verbose: bool):
    """Derive the typed rule database and write it as a rule file."""
    database = typed_rule_database(use_cache=not no_cache)
    if verbose:
        click.echo(json.dumps(database.family_counts(), sort_keys=True), err=True)
    write_text(out_path, format_rules(database))


@main.command()
@click.option('-n', 'n', type=int, required=True, help='Number of qubits')
@click.option('--enumerate', 'enumerate_stages', is_flag=True,
              help='Also count the stage circuits by enumeration')
@click.option('-v', '--verbose', is_flag=True, help='Pretty-print the JSON output')
@handle_errors
def count(n: int, enumerate_stages: bool, verbose: bool):
    """Print the closed-form counts for n qubits."""
    emit(count_report(n, enumerate_stages).to_json(), verbose)


@main.command('enumerate')
@click.option('-n', 'n', type=int, required=True, help='Number of qubits')
@click.option('--check-distinct', is_flag=True, help='Check that every normal form names a different operator')
@click.option('--limit', type=int, default=None, help='Stop after this many normal forms')
@click.option('--workers', type=int, default=None, help='Processes for the three-qubit check')
@click.option('-v', '--verbose', is_flag=True, help='Pretty-print the report')
@handle_errors
def enumerate_cmd(n: int, check_distinct: bool, limit: Optional[int], workers: Optional[int], verbose: bool):
    """Stream normal forms as NDJSON, or check them for distinctness."""
    if check_distinct:
        report = verify_bijection(n, workers)
        emit(report.to_json(), verbose)
        sys.exit(ErrorCode.SUCCESS if report.ok else ErrorCode.VERIFICATION_FAILED)
    if n < 0:
        raise ValueError(f"Number of qubits must be non-negative, got {n}")
    for index, nf in enumerate(enumerate_normal_forms(n)):
        if limit is not None and index >= limit:
            break
        emit(nf_to_json(nf))


if __name__ == "__main__":
    main()
