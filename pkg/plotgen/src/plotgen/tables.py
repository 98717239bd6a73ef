"""Strict readers for the two CSV schemas the simulator emits.

The sweep schema is
``policy,lambda,horizon,seed,throughput,mean_delay,undelivered,instability_slope``
and the fraction-curve schema is ``network,K,fraction``.  Headers must match
exactly and every numeric field must parse; errors carry the row number.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

SWEEP_HEADER = [
    "policy",
    "lambda",
    "horizon",
    "seed",
    "throughput",
    "mean_delay",
    "undelivered",
    "instability_slope",
]

FRACTION_HEADER = ["network", "K", "fraction"]

INSTABILITY_THRESHOLD = 0.01


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class SweepRow:
    policy: str
    lam: float
    horizon: int
    seed: int
    throughput: float
    mean_delay: float
    undelivered: int
    instability_slope: float

    @property
    def unstable(self) -> bool:
        return self.instability_slope > INSTABILITY_THRESHOLD


@dataclass
class SweepTable:
    rows: list

    @staticmethod
    def read(path: str) -> "SweepTable":
        with open(path, newline="") as f:
            reader = csv.reader(f)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: empty file, expected sweep header")
            if header != SWEEP_HEADER:
                raise SchemaError(
                    f"{path}:1: header {header!r} does not match the sweep schema"
                )
            rows = []
            for lineno, rec in enumerate(reader, start=2):
                if len(rec) != len(SWEEP_HEADER):
                    raise SchemaError(
                        f"{path}:{lineno}: expected {len(SWEEP_HEADER)} fields, "
                        f"got {len(rec)}"
                    )
                try:
                    rows.append(
                        SweepRow(
                            policy=rec[0],
                            lam=float(rec[1]),
                            horizon=int(rec[2]),
                            seed=int(rec[3]),
                            throughput=float(rec[4]),
                            mean_delay=float(rec[5]),
                            undelivered=int(rec[6]),
                            instability_slope=float(rec[7]),
                        )
                    )
                except ValueError as exc:
                    raise SchemaError(f"{path}:{lineno}: {exc}") from exc
        if not rows:
            raise SchemaError(f"{path}: no data rows")
        return SweepTable(rows)

    def policies(self) -> list:
        return sorted({r.policy for r in self.rows})

    def delay_series(self, policy: str):
        """(lambda, mean over stable seeds, unstable count) per rate.

        Unstable rows and rows with undefined delay are excluded from the
        average; their count is reported so they can be marked separately.
        """
        by_lam: dict = {}
        for r in self.rows:
            if r.policy != policy:
                continue
            by_lam.setdefault(r.lam, []).append(r)
        series = []
        for lam in sorted(by_lam):
            group = by_lam[lam]
            good = [
                r.mean_delay
                for r in group
                if not r.unstable and not math.isnan(r.mean_delay)
            ]
            mean = sum(good) / len(good) if good else float("nan")
            series.append((lam, mean, sum(1 for r in group if r.unstable)))
        return series


@dataclass
class FractionTable:
    rows: list  # (network, K, fraction)

    @staticmethod
    def read(path: str) -> "FractionTable":
        with open(path, newline="") as f:
            reader = csv.reader(f)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: empty file, expected fraction header")
            if header != FRACTION_HEADER:
                raise SchemaError(
                    f"{path}:1: header {header!r} does not match the "
                    f"fraction-curve schema"
                )
            rows = []
            for lineno, rec in enumerate(reader, start=2):
                if len(rec) != 3:
                    raise SchemaError(
                        f"{path}:{lineno}: expected 3 fields, got {len(rec)}"
                    )
                try:
                    rows.append((rec[0], int(rec[1]), float(rec[2])))
                except ValueError as exc:
                    raise SchemaError(f"{path}:{lineno}: {exc}") from exc
        if not rows:
            raise SchemaError(f"{path}: no data rows")
        return FractionTable(rows)

    def networks(self) -> list:
        return sorted({name for name, _, _ in self.rows})

    def series(self, network: str):
        by_k: dict = {}
        for name, K, frac in self.rows:
            if name == network:
                by_k.setdefault(K, []).append(frac)
        return [(K, sum(v) / len(v)) for K, v in sorted(by_k.items())]
