"""
Main CLI for the quadrinomial S-box toolkit.

Machine output (JSON / JSONL) goes to stdout or --out; the one-line human
summary and all logging go to stderr. Exit codes: 0 success, 1 anomaly,
2 usage error.
"""

import json
import logging
import os
import sys
from typing import Any, Dict, Optional

import click
from pydantic import ValidationError

from .config import (
    DEFAULT_SEED,
    ENV_LOG_LEVEL,
    ENV_THREADS,
    FIELD_SUITE_SAMPLE_SIZE,
    FULL_TABLE_MAX_N,
    SUITE_GAMMA_MEMBERS,
    SUITE_SAMPLE_SIZE,
)
from .errors import FieldDomainError, PreconditionError
from .family import CoefficientTuple, classify
from .field import FieldSpec, get_field_spec, validate_parameters
from .sbox import ExportFormat, bct_lqsl, build_table, ddt, export_table
from .search import (
    BaselineFamily,
    BetaPolicy,
    SearchConfig,
    SearchMode,
    baseline,
    run_campaign,
    write_campaign,
)
from .theory import BetaMode, SuiteName, run_suite, verify_theorem

logger = logging.getLogger(__name__)


def _configure_logging(verbose: bool) -> None:
    level_name = os.getenv(ENV_LOG_LEVEL, "INFO" if verbose else "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _field(m: int, k: int) -> FieldSpec:
    """Validate (m, k) before building anything; violations are usage errors."""
    try:
        validate_parameters(m, k)
        return get_field_spec(m, k)
    except FieldDomainError as e:
        raise click.BadParameter(str(e), param_hint="--m/--k") from e


def _tuple(spec: FieldSpec, text: str) -> CoefficientTuple:
    try:
        return CoefficientTuple.parse(spec, text)
    except FieldDomainError as e:
        raise click.BadParameter(str(e), param_hint="--c") from e


def _emit(payload: Dict[str, Any], out: Optional[str] = None) -> None:
    text = json.dumps(payload, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        click.echo(text)


def _field_options(fn):
    fn = click.option("--k", type=int, default=1, show_default=True, help="Family exponent (odd, coprime to m)")(fn)
    fn = click.option("--m", type=int, required=True, help="Half the extension degree (odd)")(fn)
    return fn


threads_option = click.option(
    "--threads",
    type=click.IntRange(min=1),
    default=1,
    envvar=ENV_THREADS,
    show_default=True,
    help="Worker cap for table analytics and campaigns",
)


@click.group()
@click.version_option(version="0.1.0")
@click.option("--verbose", "-v", is_flag=True, help="Log progress to stderr")
def cli(verbose: bool):
    """Quadrinomial S-boxes over GF(2^2m): classification, DDT/BCT analysis and search."""
    _configure_logging(verbose)


@cli.command("field-info")
@_field_options
def field_info(m: int, k: int):
    """Show the field parameters."""
    spec = _field(m, k)
    info = spec.describe()
    _emit(info)
    click.echo(f"🔢 GF(2^{spec.n}) modulus {info['modulus_hex']}, {spec.table_strategy}", err=True)


@cli.command("classify")
@_field_options
@click.option("--c", "c_text", required=True, help="Coefficient tuple c0:c1:c2:c3 in hex")
def classify_cmd(m: int, k: int, c_text: str):
    """Classify a coefficient tuple into NotGamma, Gamma0 or Gamma1."""
    spec = _field(m, k)
    c = _tuple(spec, c_text)
    result = classify(spec, c)
    _emit({"tuple": c.encode(spec), **result.model_dump(mode="json")})
    click.echo(f"🏷️  {c.encode(spec)}: {result.verdict.value} {result.reasons}", err=True)


@cli.command("analyze")
@_field_options
@click.option("--c", "c_text", required=True, help="Coefficient tuple c0:c1:c2:c3 in hex")
@click.option("--full-tables", is_flag=True, help=f"Include the full DDT and BCT (n <= {FULL_TABLE_MAX_N})")
@click.option("--skip-beta", is_flag=True, help="Do not compute the BCT")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), help="Write the verdict here")
@click.option("--table-out", type=click.Path(dir_okay=False, writable=True), help="Export the lookup table")
@click.option(
    "--table-format",
    type=click.Choice([f.value for f in ExportFormat]),
    default=ExportFormat.BINARY.value,
    show_default=True,
)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True, help="Seed for sampled directions")
@threads_option
def analyze(
    m: int,
    k: int,
    c_text: str,
    full_tables: bool,
    skip_beta: bool,
    out: Optional[str],
    table_out: Optional[str],
    table_format: str,
    seed: int,
    threads: int,
):
    """Analyze f_c and check it against the expectations for its class."""
    spec = _field(m, k)
    c = _tuple(spec, c_text)
    if full_tables and spec.n > FULL_TABLE_MAX_N:
        raise click.BadParameter(f"Full tables are limited to n <= {FULL_TABLE_MAX_N}", param_hint="--full-tables")

    beta_mode = BetaMode.SKIP if skip_beta else BetaMode.FULL
    try:
        verdict = verify_theorem(spec, c, beta_mode, seed=seed, threads=threads)
    except PreconditionError as e:
        raise click.UsageError(str(e)) from e
    payload = verdict.record()

    if full_tables or table_out:
        table = build_table(spec, c)
        if full_tables:
            payload["ddt_table"] = ddt(table, keep_full=True, threads=threads).full_table.tolist()
            if table.bijective and not skip_beta:
                payload["bct_table"] = bct_lqsl(table, keep_full=True, threads=threads).full_table.tolist()
        if table_out:
            with open(table_out, "wb") as handle:
                handle.write(export_table(spec, table, ExportFormat(table_format)))

    _emit(payload, out)
    status = "✅" if verdict.consistent else "❌"
    click.echo(
        f"{status} {verdict.tuple_text}: {verdict.gamma.verdict.value}, permutation={verdict.permutation}, "
        f"delta={verdict.delta}, beta={verdict.beta}, anomalies={len(verdict.anomalies)}",
        err=True,
    )
    if not verdict.consistent:
        sys.exit(1)


@cli.command("verify")
@click.option("--suite", type=click.Choice([s.value for s in SuiteName]), required=True)
@_field_options
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option(
    "--samples",
    type=click.IntRange(min=0),
    default=None,
    help=f"Random inputs (default {FIELD_SUITE_SAMPLE_SIZE} for field, {SUITE_SAMPLE_SIZE} otherwise)",
)
@click.option(
    "--gamma-members",
    type=click.IntRange(min=0),
    default=SUITE_GAMMA_MEMBERS,
    show_default=True,
    help="Gamma members for the identities and vi suites",
)
def verify(suite: str, m: int, k: int, seed: int, samples: Optional[int], gamma_members: int):
    """Run a verification suite and report pass counts."""
    _field(m, k)
    result = run_suite(SuiteName(suite), m, k, seed, samples=samples, gamma_members=gamma_members)
    _emit(result.model_dump(mode="json"))
    status = "✅" if result.ok else "❌"
    click.echo(f"{status} {suite}: {result.passed}/{result.checked} passed (seed {seed})", err=True)
    if result.ok:
        return
    click.echo(f"First counterexample: {result.first_counterexample}", err=True)
    sys.exit(1)


@cli.command("search")
@_field_options
@click.option("--exhaustive", is_flag=True, help="Visit every tuple (4n <= 28)")
@click.option("--samples", type=click.IntRange(min=0), default=10_000, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option(
    "--beta-policy",
    type=click.Choice([p.value for p in BetaPolicy]),
    default=BetaPolicy.FIRST_N.value,
    show_default=True,
)
@click.option("--beta-first-n", type=click.IntRange(min=0), default=None, help="Full verdicts per Gamma class")
@click.option("--gamma-quota", type=click.IntRange(min=0), default=0, help="Extra Gamma0/Gamma1 members in sample mode")
@click.option("--converse", is_flag=True, help="Also look for permutations outside Gamma")
@click.option("--out", type=click.Path(dir_okay=False, writable=True), help="JSONL records (stdout when unset)")
@click.option("--summary-out", type=click.Path(dir_okay=False, writable=True), help="Summary JSON")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, writable=True), help="Histogram CSV")
@click.option("--timing", is_flag=True, help="Record elapsed seconds")
@threads_option
def search(
    m: int,
    k: int,
    exhaustive: bool,
    samples: int,
    seed: int,
    beta_policy: str,
    beta_first_n: Optional[int],
    gamma_quota: int,
    converse: bool,
    out: Optional[str],
    summary_out: Optional[str],
    csv_path: Optional[str],
    timing: bool,
    threads: int,
):
    """Run an exhaustive or sampled campaign over the coefficient space."""
    _field(m, k)
    options: Dict[str, Any] = {
        "m": m,
        "k": k,
        "mode": SearchMode.EXHAUSTIVE if exhaustive else SearchMode.SAMPLE,
        "sample_count": samples,
        "seed": seed,
        "beta_policy": BetaPolicy(beta_policy),
        "gamma_quota": gamma_quota,
        "converse": converse,
        "threads": threads,
        "output_path": out,
        "summary_path": summary_out,
        "csv_path": csv_path,
        "record_timing": timing,
    }
    if beta_first_n is not None:
        options["beta_first_n"] = beta_first_n
    try:
        cfg = SearchConfig(**options)
    except ValidationError as e:
        raise click.UsageError(str(e)) from e

    result = run_campaign(cfg)
    try:
        write_campaign(result, cfg)
    except OSError as e:
        raise click.FileError(e.filename or "output", hint=str(e)) from e

    summary = result.summary
    status = "✅" if summary.anomaly_count == 0 else "❌"
    click.echo(
        f"{status} {summary.visited} tuples, {summary.class_counts}, "
        f"{summary.full_verdicts} full verdicts, {summary.anomaly_count} anomalies (seed {seed})",
        err=True,
    )
    if summary.anomaly_count:
        sys.exit(1)


@cli.command("baseline")
@click.option("--family", type=click.Choice([f.value for f in BaselineFamily]), required=True)
@click.option("--m", type=int, required=True, help="Half the extension degree (odd)")
@click.option("--t", type=int, default=None, help="Gold parameter, gcd(2m, t) = 2")
@threads_option
def baseline_cmd(family: str, m: int, t: Optional[int], threads: int):
    """Analyze a Gold or inverse baseline permutation."""
    try:
        record = baseline(BaselineFamily(family), m, t, threads=threads)
    except PreconditionError as e:
        raise click.BadParameter(str(e), param_hint="--m/--t") from e
    _emit(record.record())
    status = "✅" if record.consistent else "❌"
    click.echo(
        f"{status} {family} x^{record.exponent}: permutation={record.permutation}, "
        f"delta={record.delta}, beta={record.beta}",
        err=True,
    )
    if not record.consistent:
        sys.exit(1)


def main():
    """Main entry point for the CLI."""
    cli()


if __name__ == "__main__":
    main()
