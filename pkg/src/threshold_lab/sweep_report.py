"""Posterior-vs-sample-size grids, level-crossing search, and jitter diagnostics.

A sweep evaluates the barely-significant posterior over an (alpha x n) grid
and serializes the result for external plotting.  Because the achieved
p-value only approximates alpha on a discrete lattice, the posterior-vs-n
curve wobbles; jitter_report quantifies that, and find_crossing therefore
uses first-touch semantics.
"""

from __future__ import annotations

import csv
import functools
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Iterable, NamedTuple

from .bayes_evidence import BetaPrior, posterior_h0
from .binomial_kernel import (
    BinomialOutcome,
    SelectionMode,
    TailConvention,
    _select_walk,
    min_attainable_p,
    select_barely_significant,
)

__all__ = [
    "DEFAULT_N_VALUES",
    "DEFAULT_ALPHAS",
    "SweepGrid",
    "SweepRow",
    "JitterViolation",
    "run_sweep",
    "find_crossing",
    "jitter_report",
    "emit",
    "parse_csv",
    "parse_json",
]

DEFAULT_N_VALUES: tuple[int, ...] = (
    20, 40, 60, 80, 100, 200, 400, 600, 800, 1000, 2000, 4000, 6000, 8000, 10000,
)
DEFAULT_ALPHAS: tuple[float, ...] = (0.05, 0.01, 0.001, 0.0001)

_CSV_COLUMNS = ("alpha", "n", "s_selected", "p_achieved", "log_bf01", "posterior_h0", "mode", "tail")

# Backward-verification span for find_crossing: adjacent posterior touches of
# a level sit a handful of n apart (the sawtooth period is a few trials), so
# one clean 512-wide span below a touch certifies it as the first.
_VERIFY_SPAN = 512


@dataclass(frozen=True)
class SweepGrid:
    """Grid definition: which n values, which alphas, and how cells are scored."""

    n_values: tuple[int, ...] = DEFAULT_N_VALUES
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    mode: SelectionMode = SelectionMode.NEAREST_TO_ALPHA
    tail: TailConvention = TailConvention.TWO_SIDED_SYMMETRIC
    prior: BetaPrior = BetaPrior(1.0, 1.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_values", tuple(self.n_values))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if not self.n_values:
            raise ValueError("n_values must be non-empty")
        for n in self.n_values:
            if not isinstance(n, int) or isinstance(n, bool) or n < 1:
                raise ValueError(f"n_values entries must be positive integers, got {n!r}")
        if any(a >= b for a, b in zip(self.n_values, self.n_values[1:])):
            raise ValueError(f"n_values must be strictly increasing, got {self.n_values}")
        if not self.alphas:
            raise ValueError("alphas must be non-empty")
        for a in self.alphas:
            if not 0.0 < a < 1.0:
                raise ValueError(f"alphas entries must lie strictly between 0 and 1, got {a!r}")
        if any(a <= b for a, b in zip(self.alphas, self.alphas[1:])):
            raise ValueError(f"alphas must be strictly decreasing, got {self.alphas}")
        if not isinstance(self.mode, SelectionMode):
            raise ValueError(f"mode must be a SelectionMode, got {self.mode!r}")
        if not isinstance(self.tail, TailConvention):
            raise ValueError(f"tail must be a TailConvention, got {self.tail!r}")
        if not isinstance(self.prior, BetaPrior):
            raise ValueError(f"prior must be a BetaPrior, got {self.prior!r}")


@dataclass(frozen=True)
class SweepRow:
    """One (alpha, n) cell.  Infeasible cells keep their place in the grid
    with the four result fields set to None rather than being dropped."""

    alpha: float
    n: int
    s_selected: int | None
    p_achieved: float | None
    log_bf01: float | None
    posterior_h0: float | None
    mode: str
    tail: str

    @property
    def feasible(self) -> bool:
        return self.s_selected is not None


class JitterViolation(NamedTuple):
    """An adjacent grid pair where the posterior fell while n grew."""

    alpha: float
    n_prev: int
    n: int
    posterior_drop: float


def _evaluate_cell(alpha: float, n: int, mode: SelectionMode, tail: TailConvention,
                   prior: BetaPrior) -> SweepRow:
    if min_attainable_p(n, tail) > alpha:
        return SweepRow(alpha, n, None, None, None, None, mode.value, tail.value)
    s, p_achieved = select_barely_significant(n, alpha, mode, tail)
    report = posterior_h0(BinomialOutcome(n, s), prior)
    return SweepRow(
        alpha=alpha,
        n=n,
        s_selected=s,
        p_achieved=p_achieved,
        log_bf01=report.log_l0 - report.log_l1,
        posterior_h0=report.posterior_h0,
        mode=mode.value,
        tail=tail.value,
    )


def run_sweep(grid: SweepGrid, max_workers: int | None = None) -> list[SweepRow]:
    """Evaluate every (alpha, n) cell, alpha-major / n-minor.

    Cells are independent and may be evaluated by a thread pool; the ordered
    map guarantees byte-identical output for any worker count.
    """
    if max_workers is not None and (not isinstance(max_workers, int) or max_workers < 1):
        raise ValueError(f"max_workers must be a positive integer, got {max_workers!r}")
    cells = [(alpha, n) for alpha in grid.alphas for n in grid.n_values]
    cell_fn = functools.partial(_evaluate_cell, mode=grid.mode, tail=grid.tail, prior=grid.prior)
    workers = max_workers if max_workers is not None else min(4, os.cpu_count() or 1)
    if workers == 1 or len(cells) == 1:
        return [cell_fn(alpha, n) for alpha, n in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda cell: cell_fn(*cell), cells))


def find_crossing(
    alpha: float,
    level: float,
    mode: SelectionMode = SelectionMode.NEAREST_TO_ALPHA,
    tail: TailConvention = TailConvention.TWO_SIDED_SYMMETRIC,
    prior: BetaPrior | None = None,
    n_max: int = 20000,
) -> int | None:
    """Smallest n at which the barely-significant posterior first reaches `level`.

    First-touch semantics: jitter makes "every later n stays above" ill-posed,
    so the answer is the first n whose posterior touches the level.  The
    search probes doubling n values (plus n_max), shrinks to a bracket, scans
    it exactly, then walks backward in _VERIFY_SPAN windows until one is
    touch-free.  Returns None when no probed or scanned n reaches the level
    by n_max; n values where no success count attains alpha are skipped.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie strictly between 0 and 1, got {alpha!r}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie strictly between 0 and 1, got {level!r}")
    if not isinstance(n_max, int) or isinstance(n_max, bool) or n_max < 1:
        raise ValueError(f"n_max must be a positive integer, got {n_max!r}")
    if prior is None:
        prior = BetaPrior.uniform()

    cache: dict[int, bool] = {}

    def reaches(n: int) -> bool:
        hit = cache.get(n)
        if hit is None:
            if min_attainable_p(n, tail) > alpha:
                hit = False
            else:
                s = _select_walk(n, alpha, mode, tail)
                hit = posterior_h0(BinomialOutcome(n, s), prior).posterior_h0 >= level
            cache[n] = hit
        return hit

    probes: list[int] = []
    k = 1
    while k < n_max:
        probes.append(k)
        k *= 2
    probes.append(n_max)

    lo, hi = 0, None
    for i, n in enumerate(probes):
        if reaches(n):
            lo, hi = (probes[i - 1] if i else 0), n
            break
    if hi is None:
        return None

    while hi - lo > _VERIFY_SPAN:
        mid = (lo + hi) // 2
        if reaches(mid):
            hi = mid
        else:
            lo = mid  # may skip a jittery earlier touch; repaired below

    cand = next(n for n in range(lo + 1, hi + 1) if reaches(n))
    while cand > 1:
        start = max(1, cand - _VERIFY_SPAN)
        earlier = next((n for n in range(start, cand) if reaches(n)), None)
        if earlier is None:
            break
        cand = earlier
    return cand


def jitter_report(rows: Iterable[SweepRow]) -> list[JitterViolation]:
    """All adjacent same-alpha pairs whose posterior decreases as n increases.

    Infeasible rows are transparent: the comparison links the feasible
    neighbors on either side.
    """
    last: dict[float, SweepRow] = {}
    violations: list[JitterViolation] = []
    for row in rows:
        if row.posterior_h0 is None:
            continue
        prev = last.get(row.alpha)
        if prev is not None and row.n > prev.n and row.posterior_h0 < prev.posterior_h0:
            violations.append(
                JitterViolation(row.alpha, prev.n, row.n, prev.posterior_h0 - row.posterior_h0)
            )
        last[row.alpha] = row
    return violations


def _fmt_real(x: float) -> str:
    return "%.12g" % x


def _quantize(x: float) -> float:
    # 12 significant digits: what the serializers emit, and what a parser
    # gets back; float("%.12g" % x) is a fixed point of this map.
    return float("%.12g" % x)


def _opt(x: float | None, f) -> str:
    return "" if x is None else f(x)


def _write_csv(rows: Iterable[SweepRow], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS)
    for r in rows:
        writer.writerow([
            _fmt_real(r.alpha),
            str(r.n),
            _opt(r.s_selected, str),
            _opt(r.p_achieved, _fmt_real),
            _opt(r.log_bf01, _fmt_real),
            _opt(r.posterior_h0, _fmt_real),
            r.mode,
            r.tail,
        ])


def _write_json(rows: Iterable[SweepRow], fh: IO[str]) -> None:
    payload = [
        {
            "alpha": _quantize(r.alpha),
            "n": r.n,
            "s_selected": r.s_selected,
            "p_achieved": None if r.p_achieved is None else _quantize(r.p_achieved),
            "log_bf01": None if r.log_bf01 is None else _quantize(r.log_bf01),
            "posterior_h0": None if r.posterior_h0 is None else _quantize(r.posterior_h0),
            "mode": r.mode,
            "tail": r.tail,
        }
        for r in rows
    ]
    json.dump(payload, fh, indent=2)
    fh.write("\n")


def emit(rows: Iterable[SweepRow], format: str, destination) -> None:
    """Serialize rows to CSV or JSON at `destination` (path or open text file).

    CSV: mandatory header, columns exactly as in the row type plus mode/tail,
    reals at 12 significant digits, rows in the order given.  JSON: an array
    of objects with the same field names.  I/O failures are re-raised with
    the destination attached.
    """
    if format not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")
    writer = _write_csv if format == "csv" else _write_json
    if hasattr(destination, "write"):
        writer(rows, destination)
        return
    try:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            writer(rows, fh)
    except OSError as exc:
        raise OSError(f"cannot write sweep output to {destination!r}: {exc}") from exc


def _opt_parse(text: str, f):
    return None if text == "" else f(text)


def parse_csv(source) -> list[SweepRow]:
    """Inverse of emit(..., 'csv', ...): floats round-trip bit-equal because
    12-significant-digit decimal survives the str -> float -> str cycle."""
    if hasattr(source, "read"):
        return _rows_from_csv(source)
    with open(source, "r", encoding="utf-8", newline="") as fh:
        return _rows_from_csv(fh)


def _rows_from_csv(fh: IO[str]) -> list[SweepRow]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header != list(_CSV_COLUMNS):
        raise ValueError(f"unexpected sweep CSV header: {header!r}")
    rows = []
    for rec in reader:
        if len(rec) != len(_CSV_COLUMNS):
            raise ValueError(f"malformed sweep CSV row: {rec!r}")
        rows.append(SweepRow(
            alpha=float(rec[0]),
            n=int(rec[1]),
            s_selected=_opt_parse(rec[2], int),
            p_achieved=_opt_parse(rec[3], float),
            log_bf01=_opt_parse(rec[4], float),
            posterior_h0=_opt_parse(rec[5], float),
            mode=rec[6],
            tail=rec[7],
        ))
    return rows


def parse_json(source) -> list[SweepRow]:
    """Inverse of emit(..., 'json', ...)."""
    if hasattr(source, "read"):
        payload = json.load(source)
    else:
        with open(source, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    rows = []
    for rec in payload:
        rows.append(SweepRow(
            alpha=float(rec["alpha"]),
            n=int(rec["n"]),
            s_selected=rec["s_selected"],
            p_achieved=rec["p_achieved"],
            log_bf01=rec["log_bf01"],
            posterior_h0=rec["posterior_h0"],
            mode=rec["mode"],
            tail=rec["tail"],
        ))
    return rows
