"""Command-line front end.

    laclab theta validate --cuts 0,2,4,8
    laclab classify --gen power:1.5 --order 3
    laclab probe --fn square --corpus default
    laclab simulate --process survivor --n 2..8 --trials 100000 --seed 7
    laclab report --output-dir out/

Exit codes: 0 pass, 1 negative result, 2 usage error, 3 inconclusive,
4 data error. JSON output is key-sorted and carries the effective config;
nothing time- or host-dependent is written, so fixed flags and seed give
byte-identical files.
"""

from __future__ import annotations

import functools
import json
import os
import sys

import click

from . import __version__, acceptance
from .classify import Outcome, Policy, classify_quasi_cauchy
from .errors import DataError, DomainError, LaclabError
from .lacunary import parse_cuts, validate_theta
from .sequences import (
    MAX_ORDER,
    from_values,
    parse_generator,
    read_csv,
    simulate,
)
from .wardprobe import (
    INCONCLUSIVE,
    PRESERVED,
    VIOLATED,
    bounded_corpus,
    default_corpus,
    dump_witnesses,
    parse_function,
    probe_ward_continuity,
)

EXIT_PASS, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_DATA = 0, 1, 2, 3, 4
SEED_ENV = "LACLAB_SEED"
DEFAULT_SEED = 7

_OUTCOME_EXIT = {
    Outcome.NULL: EXIT_PASS,
    Outcome.NOT_NULL: EXIT_NEGATIVE,
    Outcome.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}
_PROBE_EXIT = {PRESERVED: EXIT_PASS, VIOLATED: EXIT_NEGATIVE, INCONCLUSIVE: EXIT_INCONCLUSIVE}

_CONFIG_KEYS = ("scheme", "window", "eps_verdict", "eps_floor", "prefix_len", "block_count",
                "noise_floor", "dps", "seed", "format", "output")
_POLICY_KEYS = ("window", "eps_verdict", "eps_floor", "prefix_len", "block_count", "noise_floor", "dps")


def _guard(fn):
    """Map library errors onto exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (DataError, DomainError) as exc:
            click.echo(f"error: {exc}", err=True)
            raise click.exceptions.Exit(EXIT_DATA)
        except LaclabError as exc:
            click.echo(f"error: {exc}", err=True)
            raise click.exceptions.Exit(EXIT_USAGE)
        except OSError as exc:
            click.echo(f"error: {exc}", err=True)
            raise click.exceptions.Exit(EXIT_DATA)

    return wrapper


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _write(text: str, output) -> None:
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _load_config(path):
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise click.UsageError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"config file is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise click.UsageError("config file must hold a flat JSON object")
    unknown = sorted(set(data) - set(_CONFIG_KEYS))
    if unknown:
        raise click.UsageError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _seed(value):
    if value is not None:
        return int(value)
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise click.UsageError(f"{SEED_ENV} must be an integer, got {env!r}")
    return DEFAULT_SEED


def _effective(flags: dict, config_path, command: str) -> dict:
    """Config file values overlaid with explicit flags."""
    cfg = {"scheme": "pow2", "format": "json", "output": None, "seed": None}
    cfg.update(Policy().to_dict())
    cfg.pop("name")
    cfg.update(_load_config(config_path))
    cfg.update({k: v for k, v in flags.items() if v is not None})
    cfg["seed"] = _seed(cfg["seed"])
    cfg["command"] = command
    return cfg


def _policy(cfg) -> Policy:
    try:
        return Policy(**{k: cfg[k] for k in _POLICY_KEYS})
    except TypeError as exc:
        raise click.UsageError(str(exc))


def _emit_report(payload: dict, cfg: dict, csv_text=None) -> None:
    """JSON carries the config inline; CSV gets a sidecar (or stderr) copy."""
    if cfg["format"] == "csv" and csv_text is not None:
        _write(csv_text, cfg["output"])
        config_text = _dump_json(cfg)
        if cfg["output"]:
            _write(config_text, cfg["output"] + ".config.json")
        else:
            click.echo(f"config: {json.dumps(cfg, sort_keys=True)}", err=True)
    else:
        _write(_dump_json({"config": cfg, **payload}), cfg["output"])


def policy_options(fn):
    opts = [
        click.option("--scheme", default=None, help="pow2, geometric[:rho], factorial or explicit cuts."),
        click.option("--window", type=int, default=None, help="Tail window W."),
        click.option("--eps-verdict", type=float, default=None),
        click.option("--eps-floor", type=float, default=None),
        click.option("--prefix", "prefix_len", type=int, default=None, help="Prefix length covered by the scheme."),
        click.option("--block-count", type=int, default=None),
        click.option("--noise-floor", type=float, default=None),
        click.option("--dps", type=int, default=None, help="Evaluate with mpmath at this many digits."),
        click.option("--seed", type=int, default=None, help=f"Seed (falls back to ${SEED_ENV})."),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None),
        click.option("--output", "-o", default=None, help="Output path (default stdout)."),
        click.option("--config", "config_path", default=None, help="Flat JSON config; flags win."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _flags(kw):
    flags = {k: kw.pop(k) for k in list(kw) if k in _CONFIG_KEYS}
    flags["format"] = kw.pop("fmt")
    return flags, kw.pop("config_path")


@click.group()
@click.version_option(version=__version__, prog_name="laclab")
def cli():
    """Lacunary quasi-Cauchy classification and ward-continuity probes."""


# -- theta -------------------------------------------------------------------


@cli.group()
def theta():
    """Lacunary scheme utilities."""


@theta.command("validate")
@click.option("--cuts", required=True, help="Comma-separated cut points, e.g. 0,2,4,8.")
@click.option("--ratio-margin", type=float, default=0.05, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@_guard
def theta_validate(cuts, ratio_margin, fmt):
    """Check a cut list; exit 0 iff valid."""
    report = validate_theta(parse_cuts(cuts), ratio_margin)
    if fmt == "json":
        click.echo(_dump_json(report.to_dict()), nl=False)
    else:
        click.echo("valid" if report.valid else "invalid")
        for v in report.violations:
            click.echo(str(v))
        for w in report.warnings:
            click.echo(f"warning: {w}")
    raise click.exceptions.Exit(EXIT_PASS if report.valid else EXIT_NEGATIVE)


# -- classify ----------------------------------------------------------------


def _profile_csv(profile) -> str:
    lines = ["order,r,h,t"]
    for m in sorted(profile.series):
        s = profile.series[m]
        lines += [f"{m},{r},{h},{float(t)!r}" for r, h, t in zip(s.r, s.h, s.values)]
    return "\n".join(lines) + "\n"


@cli.command()
@click.option("--gen", "gen", default=None, help="Generator spec, e.g. power:1.5.")
@click.option("--csv", "csv_path", default=None, help="k,value CSV input.")
@click.option("--order", type=click.IntRange(1, MAX_ORDER), default=3, show_default=True)
@policy_options
@_guard
def classify(gen, csv_path, order, **kw):
    """Classify a sequence at orders 1-3; the exit code reflects --order."""
    flags, config_path = _flags(kw)
    cfg = _effective(flags, config_path, "classify")
    if (gen is None) == (csv_path is None):
        raise click.UsageError("give exactly one of --gen or --csv")
    policy = _policy(cfg)
    if gen is not None:
        s = parse_generator(gen, prefix_len=policy.prefix_len + MAX_ORDER)
        cfg["input"] = {"gen": gen}
    else:
        s = read_csv(csv_path, label=os.path.basename(csv_path))
        cfg["input"] = {"csv": csv_path}
    cfg["order"] = order
    profile = classify_quasi_cauchy(s, policy.scheme(cfg["scheme"]), policy)
    _emit_report({"profile": profile.to_dict()}, cfg, _profile_csv(profile))
    raise click.exceptions.Exit(_OUTCOME_EXIT[profile.outcome(order)])


# -- probe -------------------------------------------------------------------


def _corpus(spec, prefix_len, seed):
    if spec == "default":
        return default_corpus(prefix_len, seed=seed)
    if spec == "bounded":
        return bounded_corpus(prefix_len)
    return [parse_generator(part, prefix_len) for part in spec.split(";") if part.strip()]


@cli.command()
@click.option("--fn", "fn_spec", required=True, help="identity, square, sin, x+sin, affine:a,b, poly:c0,c1,...")
@click.option("--corpus", "corpus_spec", default="default", show_default=True,
              help="default, bounded, or generator specs separated by ';'.")
@click.option("--order", type=click.Choice(["1", "3"]), default="3", show_default=True)
@click.option("--witness-dir", default=None, help="Dump witness prefixes as CSV here.")
@policy_options
@_guard
def probe(fn_spec, corpus_spec, order, witness_dir, **kw):
    """Probe a function for ward continuity on a corpus."""
    flags, config_path = _flags(kw)
    cfg = _effective(flags, config_path, "probe")
    if cfg["format"] == "csv":
        raise click.UsageError("probe reports are JSON only")
    policy = _policy(cfg)
    f = parse_function(fn_spec)
    corpus = _corpus(corpus_spec, policy.prefix_len + MAX_ORDER, cfg["seed"])
    cfg.update({"function": fn_spec, "corpus": corpus_spec, "order": int(order)})
    report = probe_ward_continuity(f, int(order), corpus, policy.scheme(cfg["scheme"]), policy)
    if witness_dir:
        dump_witnesses(report, witness_dir)
    _emit_report({"report": report.to_dict()}, cfg)
    raise click.exceptions.Exit(_PROBE_EXIT[report.outcome])


# -- simulate ----------------------------------------------------------------


def parse_range(text: str):
    """``"5"`` or ``"2..8"`` (inclusive)."""
    lo, sep, hi = text.partition("..")
    try:
        lo = int(lo)
        hi = int(hi) if sep else lo
    except ValueError:
        raise click.UsageError(f"bad range {text!r}; expected N or A..B")
    if lo < 1 or hi < lo:
        raise click.UsageError(f"bad range {text!r}; need 1 <= A <= B")
    return range(lo, hi + 1)


@cli.command("simulate")
@click.option("--process", type=click.Choice(["survivor", "split3"]), required=True)
@click.option("--n", "n_range", required=True, help="Size or inclusive range, e.g. 2..8.")
@click.option("--trials", type=click.IntRange(min=1), default=10_000, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--classify", "do_classify", is_flag=True,
              help="Classify the estimates (split3 divided by k) as a sequence.")
@click.option("--order", type=click.IntRange(1, MAX_ORDER), default=3, show_default=True)
@policy_options
@_guard
def simulate_cmd(process, n_range, trials, workers, do_classify, order, **kw):
    """Monte Carlo estimates with standard errors, one row per size."""
    flags, config_path = _flags(kw)
    if flags["format"] is None:
        flags["format"] = "csv"
    cfg = _effective(flags, config_path, "simulate")
    sizes = parse_range(n_range)
    cfg.update({"process": process, "n": n_range, "trials": trials, "workers": workers})
    rows = [simulate(process, n, trials, cfg["seed"], workers) for n in sizes]
    csv_text = "n,estimate,stderr\n" + "".join(
        f"{r.n},{r.mean!r},{'' if r.stderr != r.stderr else repr(r.stderr)}\n" for r in rows
    )
    payload = {"estimates": [r.to_dict() for r in rows]}
    code = EXIT_PASS
    if do_classify:
        policy = _policy(cfg)
        vals = [r.normalized if process == "split3" else r.mean for r in rows]
        s = from_values(vals, f"{process}{'/k' if process == 'split3' else ''}[{n_range}]", seed=cfg["seed"])
        profile = classify_quasi_cauchy(s, policy.scheme(cfg["scheme"]), policy)
        cfg["order"] = order
        payload["profile"] = profile.to_dict()
        code = _OUTCOME_EXIT[profile.outcome(order)]
        click.echo(f"order {order}: {profile.outcome(order).value}", err=True)
    _emit_report(payload, cfg, csv_text)
    raise click.exceptions.Exit(code)


# -- report ------------------------------------------------------------------


_DETERMINISM_RUNS = (
    ["theta", "validate", "--cuts", "0,2,4,8,16", "--format", "json"],
    ["classify", "--gen", "power:1.5"],
    ["classify", "--gen", "sqrt", "--format", "csv"],
    ["probe", "--fn", "sin", "--corpus", "bounded"],
    ["simulate", "--process", "survivor", "--n", "2..8", "--trials", "20000"],
    ["simulate", "--process", "split3", "--n", "1..40", "--trials", "2000", "--classify"],
)


def _determinism(seed):
    from click.testing import CliRunner

    def check():
        runner = CliRunner()
        mismatched = []
        for args in _DETERMINISM_RUNS:
            args = list(args) + (["--seed", str(seed)] if args[0] != "theta" else [])
            first = runner.invoke(cli, args)
            second = runner.invoke(cli, args)
            if first.stdout_bytes != second.stdout_bytes or first.exit_code != second.exit_code:
                mismatched.append(" ".join(args))
        return acceptance.CriterionResult(
            7,
            "determinism",
            not mismatched,
            {"commands": len(_DETERMINISM_RUNS), "mismatched": mismatched},
        )

    return check


@cli.command()
@click.option("--output-dir", "-d", default=None, help="Write acceptance.json here (default stdout).")
@click.option("--seed", type=int, default=None)
@_guard
def report(output_dir, seed):
    """Run the full acceptance suite; exit 0 iff every criterion passes."""
    seed = _seed(seed)
    results = acceptance.run_all(seed, determinism=_determinism(seed))
    for r in results:
        click.echo(r.line(), err=True)
    payload = {
        "config": {"command": "report", "seed": seed, "policy": Policy().to_dict()},
        "criteria": [r.to_dict() for r in results],
        "passed": all(r.passed for r in results),
    }
    text = _dump_json(payload)
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)
        _write(text, os.path.join(output_dir, "acceptance.json"))
    else:
        _write(text, None)
    raise click.exceptions.Exit(EXIT_PASS if payload["passed"] else EXIT_NEGATIVE)


def main(argv=None):
    try:
        code = cli.main(args=argv, prog_name="laclab", standalone_mode=False)
    except click.exceptions.Exit as exc:
        code = exc.exit_code
    except click.UsageError as exc:
        exc.show()
        code = EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        code = exc.exit_code
    except click.Abort:
        click.echo("aborted", err=True)
        code = EXIT_NEGATIVE
    sys.exit(code or 0)


if __name__ == "__main__":
    main()
