"""Command-line front end: validate coverings, compute norms, run experiments, print tables.

Exit codes: 0 pass, 1 failed check or verdict, 2 bad configuration,
3 field not resolvable on the grid (aliasing).
"""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click

from . import covering as cv
from . import experiments as E
from . import exponents as ex
from . import transform as tf
from .exponents import IndexPair, SpaceParams

log = logging.getLogger("alphamod")

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_RESOLVE = 0, 1, 2, 3

EXPERIMENTS = ("scaling", "embedding", "algebra", "cardinality", "plancherel", "equivalence", "bernstein", "suite")


class ConfigError(ValueError):
    pass


def parse_exponent(v) -> float:
    """Exponent from a number or the string "inf"."""
    if isinstance(v, str):
        v = v.strip().lower()
        if v in ("inf", "infinity", "+inf"):
            return math.inf
    try:
        x = float(v)
    except (TypeError, ValueError):
        raise ConfigError(f"not an exponent: {v!r}") from None
    if not x > 0:
        raise ConfigError(f"exponent must be positive, got {v!r}")
    return x


@dataclass
class RunConfig:
    """Everything a run depends on; flags and the JSON file share these keys."""

    command: str = ""
    experiment: str | None = None
    alpha: float = 0.5
    target_alpha: float | None = None
    dim: int = 1
    grid_n: int | None = None
    half_period: float | None = None
    s: float = 0.0
    p: float = 2.0
    q: float = 2.0
    covering: str = "smooth"
    outer_c: float | None = None
    family: str | None = None
    params: dict = field(default_factory=dict)
    lambda_min: float | None = None
    lambda_max: float | None = None
    j_min: int | None = None
    j_max: int | None = None
    seed: int = 1000
    out: str = "."
    tol: float | None = None

    @classmethod
    def build(cls, file_values: dict, flags: dict) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(file_values) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        merged = dict(file_values)
        merged.update({k: v for k, v in flags.items() if v is not None})
        cfg = cls(**merged)
        cfg.p, cfg.q = parse_exponent(cfg.p), parse_exponent(cfg.q)
        if cfg.covering not in ("smooth", "rect", "circ"):
            raise ConfigError(f"covering must be smooth or rect, got {cfg.covering!r}")
        if cfg.dim not in (1, 2):
            raise ConfigError("dim must be 1 or 2")
        if not 0 <= cfg.alpha <= 1:
            raise ConfigError("alpha must lie in [0, 1]")
        return cfg

    @property
    def space(self) -> SpaceParams:
        return SpaceParams(self.s, self.p, self.q, self.alpha)

    def grid(self) -> tf.GridSpec | None:
        if self.grid_n is None and self.half_period is None:
            return None
        base = tf.GridSpec.default(self.dim)
        return tf.GridSpec(self.dim, self.half_period or base.half_period, self.grid_n or base.samples_per_axis)

    def grid_or_default(self) -> tf.GridSpec:
        return self.grid() or tf.GridSpec.default(self.dim)

    def to_json(self) -> dict:
        return E._jsonable(dataclasses.asdict(self))


def _emit(doc) -> None:
    click.echo(json.dumps(E._jsonable(doc), sort_keys=True))


def _run(body) -> None:
    """Map exceptions onto the exit-code contract."""
    try:
        ok = body()
    except (tf.AliasingError, tf.UnresolvableError) as exc:
        log.error("not resolvable: %s", exc)
        sys.exit(EXIT_RESOLVE)
    except (ConfigError, ValueError, KeyError, TypeError, OSError) as exc:
        log.error("configuration error: %s", exc)
        sys.exit(EXIT_CONFIG)
    sys.exit(EXIT_PASS if ok else EXIT_FAIL)


def _common(fn):
    opts = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), help="JSON RunConfig; flags override it."),
        click.option("--alpha", type=float),
        click.option("--dim", type=int),
        click.option("--grid-n", type=int, help="samples per axis (power of two)"),
        click.option("--half-period", type=float, help="L in [-L, L)^n"),
        click.option("--s", type=float),
        click.option("--p", type=str, help='number or "inf"'),
        click.option("--q", type=str, help='number or "inf"'),
        click.option("--covering", type=click.Choice(["smooth", "rect", "circ"])),
        click.option("--family", type=str),
        click.option("--lambda-min", type=float),
        click.option("--lambda-max", type=float),
        click.option("--j-min", type=int),
        click.option("--j-max", type=int),
        click.option("--seed", type=int),
        click.option("--out", type=str, help="output directory"),
        click.option("--tol", type=float),
        click.option("-v", "--verbose", count=True),
    ]
    for o in reversed(opts):
        fn = o(fn)
    return fn


def _config(command: str, kw: dict) -> RunConfig:
    verbose = kw.pop("verbose", 0)
    logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if verbose > 1 else logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    path = kw.pop("config_path", None)
    file_values = {}
    if path:
        try:
            file_values = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise click.exceptions.Exit(_config_fail(f"cannot read config {path}: {exc}"))
        if not isinstance(file_values, dict):
            raise click.exceptions.Exit(_config_fail("config must be a JSON object"))
    try:
        return RunConfig.build(file_values, {"command": command, **kw})
    except (ConfigError, TypeError, ValueError) as exc:
        raise click.exceptions.Exit(_config_fail(str(exc)))


def _config_fail(msg: str) -> int:
    log.error("configuration error: %s", msg)
    return EXIT_CONFIG


@click.group()
def main():
    """Numerics for alpha-modulation spaces."""


# ---------------------------------------------------------------------------


@main.command()
@click.option("--outer-c", type=float, help="override the certified ball radius constant")
@_common
def validate(outer_c, **kw):
    """Certify the window family (smooth or rect) on the lattice of the grid."""
    if outer_c is not None:
        kw["outer_c"] = outer_c
    cfg = _config("validate", kw)

    def body():
        if cfg.alpha >= 1:
            raise ConfigError("coverings need alpha < 1")
        grid = cfg.grid()
        lat = grid.lattice if grid else cv.default_lattice(cfg.dim)
        if cfg.covering == "rect":
            cov = cv.build_rect_covering(cv.AlphaParams(cfg.alpha, cfg.dim), extent=lat.nyquist)
            fam = cv.rect_family(cov)
        else:
            a = (cv.AlphaParams(cfg.alpha, cfg.dim, cfg.outer_c) if cfg.outer_c is not None
                 else cv.certified_params(cfg.alpha, cfg.dim))
            fam = cv.smooth_family(a) if cfg.covering == "smooth" else cv.rho_family(a)
        rep = cv.validate_bapu(fam, lat)
        text = rep.to_json() + "\n"
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"validate_{E.config_hash(cfg.to_json())}.json").write_text(text)
        click.echo(text, nl=False)
        for name, c in rep.checks.items():
            if not c["passed"]:
                log.error("check %s failed%s", name, f" ({c['message']})" if "message" in c else "")
        return rep.passed

    _run(body)


@main.command()
@click.argument("field_file", required=False, type=click.Path(dir_okay=False))
@_common
def norm(field_file, **kw):
    """Norm of a field file, or of a generated family member when --family is given."""
    cfg = _config("norm", kw)

    def body():
        if field_file:
            f = tf.read_field(field_file)
        elif cfg.family:
            f = tf.make_family(cfg.family, cfg.params, cfg.grid_or_default())
            if isinstance(f, tuple):
                raise ConfigError("char_box_pair yields two fields; norm takes one")
        else:
            raise ConfigError("give a field file or --family")
        value = tf.space_norm(f, cfg.space, cfg.covering)
        _emit({
            "norm": value,
            "space": E._sp_json(cfg.space),
            "covering": cfg.covering,
            "grid": f.grid.to_json(),
        })
        return True

    _run(body)


def _lambdas(cfg: RunConfig, lo: float, hi: float) -> list[float]:
    return E.dyadic_grid(cfg.lambda_min or lo, cfg.lambda_max or hi)


def _scaling(cfg: RunConfig):
    params = dict(cfg.params)
    anchor = params.pop("anchor", "source")
    kind = params.pop("kind", "match")
    if (cfg.family or "gaussian") == "gaussian":
        # narrow enough that the spectrum stays inside the central block up to lambda = 32
        params.setdefault("width", 1 / 64)
    return [E.scaling_experiment(cfg.family or "gaussian", cfg.space, _lambdas(cfg, 1, 32), params=params,
                                 anchor=anchor, kind=kind, grid=cfg.grid(), tol=cfg.tol, covering=cfg.covering)]


def _embedding(cfg: RunConfig):
    fam = cfg.family or "annulus_plateau"
    a2 = cfg.alpha if cfg.target_alpha is None else cfg.target_alpha
    if fam == "bump_atom":
        sizes = E.integer_grid(cfg.j_min or 4, cfg.j_max or 32)
    else:
        sizes = list(range(cfg.j_min or 5, (cfg.j_max or 12) + 1))
    return [E.embedding_experiment(cfg.alpha, a2, IndexPair.of(cfg.p, cfg.q), fam, sizes, params=dict(cfg.params),
                                   grid=cfg.grid(), target_covering=cfg.covering, tol=cfg.tol)]


def _algebra(cfg: RunConfig):
    js = E.integer_grid(cfg.j_min or 8, cfg.j_max or 64)
    return [E.algebra_experiment(cfg.space, js, grid=cfg.grid(), tol=cfg.tol)]


def _cardinality(cfg: RunConfig):
    return [E.cardinality_experiment(cfg.alpha, _lambdas(cfg, 4, 256), dim=cfg.dim)]


def _seeds(cfg: RunConfig):
    return tuple(range(cfg.seed, cfg.seed + len(tf.DEFAULT_SEEDS)))


def _plancherel(cfg: RunConfig):
    return [E.plancherel_check((cfg.alpha,), _seeds(cfg), cfg.grid_or_default())]


def _equivalence(cfg: RunConfig):
    return [E.equivalence_check(cfg.alpha, E.EQUIVALENCE_PQ, _seeds(cfg), cfg.grid_or_default())]


def _bernstein(cfg: RunConfig):
    ks = E.integer_grid(1, cfg.j_max or 200)
    return [E.bernstein_constants(cfg.alpha, ks, grid=cfg.grid())]


def _suite(cfg: RunConfig):
    reports = [c.run() for c in E.SCALING_SUITE]
    reports += [c.run() for c in E.EMBEDDING_SUITE]
    reports += list(E.algebra_pair())
    reports += [E.cardinality_experiment(a, E.dyadic_grid(4, 256)) for a in (0.0, 0.5)]
    return reports


DISPATCH = {
    "scaling": _scaling, "embedding": _embedding, "algebra": _algebra, "cardinality": _cardinality,
    "plancherel": _plancherel, "equivalence": _equivalence, "bernstein": _bernstein, "suite": _suite,
}


@main.command()
@click.argument("name", type=click.Choice(EXPERIMENTS))
@_common
def experiment(name, **kw):
    """Run one experiment (or the reference suite) and write <experiment>_<hash>.{csv,json}."""
    cfg = _config("experiment", kw)
    cfg.experiment = name

    def body():
        reports = DISPATCH[name](cfg)
        # assembly order is by config hash so parallel or serial runs print the same
        reports.sort(key=lambda r: r.hash)
        ok = True
        for r in reports:
            r.write(cfg.out)
            summary = {"experiment": r.experiment, "hash": r.hash, "verdict": "pass" if r.verdict else "fail"}
            if isinstance(r, E.ExperimentReport):
                summary.update(slope=r.fit.slope, theory_slope=r.theory_slope, tolerance=r.tolerance)
            else:
                summary.update(brackets={k: r.bracket(k) for k in sorted(r.ratios)}, limit=r.limit)
            _emit(summary)
            ok &= r.verdict
        return ok

    _run(body)


def _float_list(text: str | None, default) -> list[float]:
    if not text:
        return list(default)
    return [float(v) for v in text.split(",")]


@main.command()
@click.option("--inv-p", "inv_p", type=str, help="comma-separated 1/p values")
@click.option("--inv-q", "inv_q", type=str, help="comma-separated 1/q values")
@_common
def table(inv_p, inv_q, **kw):
    """CSV of region tags and exponent formulas over a (1/p, 1/q) grid."""
    cfg = _config("table", kw)

    def body():
        if cfg.alpha >= 1:
            raise ConfigError("the table needs alpha < 1")
        grid = [i / 4 for i in range(9)]
        rows = ex.exponent_table(cfg.alpha, _float_list(inv_p, grid), _float_list(inv_q, grid), cfg.dim)
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=ex.TABLE_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
        text = buf.getvalue()
        if kw.get("out") is not None:
            out = Path(cfg.out)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"table_{E.config_hash(cfg.to_json())}.csv").write_text(text)
        click.echo(text, nl=False)
        return True

    _run(body)


if __name__ == "__main__":
    main()
