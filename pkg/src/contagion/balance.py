"""Per-bank balance sheets and the solvency rule.

A bank's interbank assets are the sum of its incoming link weights, its
interbank liabilities the sum of outgoing ones. External assets and
deposits are drawn from configurable rules; the default construction sets
deposits residually so every bank starts with capital equal to a small
margin of total assets, which keeps all banks solvent until shocked.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .netgen import DirectedWeightedNetwork
from .rng import make_rng

__all__ = [
    "BalanceSheet",
    "SolvencyParams",
    "ConstantRule",
    "ScaledUniformRule",
    "ResidualRule",
    "SheetConfig",
    "DEFAULT_EXTERNAL_SCALE",
    "build_sheets",
    "capital_buffer",
    "is_solvent_general",
    "write_sheets_csv",
]

# Ratio of external to interbank assets in the default sheet construction.
# Together with the capital margin this sets how much counterparty loss a
# bank absorbs before failing: roughly margin * (1 + scale) of its
# interbank assets. Calibrated so the default 100-bank, 15-shock sweep
# lands near 53% mean solvency at p = 0.04 and near the 85% ceiling by
# p = 0.13.
DEFAULT_EXTERNAL_SCALE = 12.25

DEFAULT_BUFFER_MARGIN = 0.04


@dataclass(frozen=True)
class BalanceSheet:
    """One bank's stylized balance sheet.

    Assets: interbank claims plus external (illiquid) assets. Liabilities:
    interbank obligations plus customer deposits. All nonnegative.
    """

    interbank_assets: float
    external_assets: float
    interbank_liabilities: float
    deposits: float

    def __post_init__(self) -> None:
        for name in ("interbank_assets", "external_assets", "interbank_liabilities", "deposits"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and nonnegative, got {value}")

    @property
    def total_assets(self) -> float:
        return self.interbank_assets + self.external_assets

    @property
    def total_liabilities(self) -> float:
        return self.interbank_liabilities + self.deposits


@dataclass(frozen=True)
class SolvencyParams:
    """Stress inputs to the general solvency test.

    phi: fraction of the bank's interbank assets on defaulted obligors.
    q: resale price of external assets; 1 means no fire sales.
    """

    phi: float = 0.0
    q: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.phi <= 1.0:
            raise ValueError(f"phi must lie in [0, 1], got {self.phi}")
        if not 0.0 < self.q <= 1.0:
            raise ValueError(f"q must lie in (0, 1], got {self.q}")


@dataclass(frozen=True)
class ConstantRule:
    """Every bank gets the same fixed amount."""

    value: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.value) and self.value >= 0):
            raise ValueError(f"constant rule needs a nonnegative value, got {self.value}")


@dataclass(frozen=True)
class ScaledUniformRule:
    """Draw Uniform(lo_mult * base, hi_mult * base) per bank.

    base is scale times the bank's interbank assets; banks with no incoming
    links use the network-wide mean instead (1.0 when the network is empty)
    so the draw is never degenerate at zero.
    """

    lo_mult: float = 0.8
    hi_mult: float = 1.2
    scale: float = DEFAULT_EXTERNAL_SCALE

    def __post_init__(self) -> None:
        if not (0.0 <= self.lo_mult <= self.hi_mult):
            raise ValueError(f"need 0 <= lo_mult <= hi_mult, got {self.lo_mult}, {self.hi_mult}")
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")


@dataclass(frozen=True)
class ResidualRule:
    """Deposits soak up whatever keeps capital exactly on the target margin."""


ExternalAssetRule = Union[ConstantRule, ScaledUniformRule]
DepositRule = Union[ConstantRule, ResidualRule]


@dataclass(frozen=True)
class SheetConfig:
    """How to fill in the balance-sheet entries the network does not fix."""

    external_asset_rule: ExternalAssetRule = ScaledUniformRule()
    deposit_rule: DepositRule = ResidualRule()
    target_buffer_margin: float = DEFAULT_BUFFER_MARGIN

    def __post_init__(self) -> None:
        if not isinstance(self.external_asset_rule, (ConstantRule, ScaledUniformRule)):
            raise ValueError(f"unknown external asset rule {self.external_asset_rule!r}")
        if not isinstance(self.deposit_rule, (ConstantRule, ResidualRule)):
            raise ValueError(f"unknown deposit rule {self.deposit_rule!r}")
        if not 0.0 <= self.target_buffer_margin < 1.0:
            raise ValueError(
                f"target_buffer_margin must lie in [0, 1), got {self.target_buffer_margin}"
            )


def build_sheets(
    network: DirectedWeightedNetwork, cfg: SheetConfig = SheetConfig(), seed: int = 0
) -> list[BalanceSheet]:
    """Construct one balance sheet per bank, deterministically per seed.

    Interbank positions come straight off the network. With the residual
    deposit rule, external assets are raised where needed so deposits stay
    nonnegative and every bank starts with capital margin * total assets,
    strictly positive for a positive margin.
    """
    a_ib = network.in_weight_sums()
    l_ib = network.out_weight_sums()
    rng = make_rng(seed)

    rule = cfg.external_asset_rule
    if isinstance(rule, ConstantRule):
        a_m = np.full(network.n, float(rule.value))
    else:
        mean_in = float(a_ib.mean())
        reference = np.where(a_ib > 0, a_ib, mean_in if mean_in > 0 else 1.0)
        base = rule.scale * reference
        a_m = rng.uniform(rule.lo_mult * base, rule.hi_mult * base)

    if isinstance(cfg.deposit_rule, ConstantRule):
        d = np.full(network.n, float(cfg.deposit_rule.value))
    else:
        margin = cfg.target_buffer_margin
        a_m = np.maximum(a_m, l_ib / (1.0 - margin) - a_ib)
        d = np.maximum(0.0, (1.0 - margin) * (a_ib + a_m) - l_ib)

    return [
        BalanceSheet(float(a_ib[i]), float(a_m[i]), float(l_ib[i]), float(d[i]))
        for i in range(network.n)
    ]


def capital_buffer(sheet: BalanceSheet) -> float:
    """Capital K = total assets minus total liabilities; solvent iff K > 0."""
    return sheet.total_assets - sheet.total_liabilities


def is_solvent_general(sheet: BalanceSheet, params: SolvencyParams) -> bool:
    """Solvency under stress: (1 - phi) * A_IB + q * A_M - L_IB - D > 0.

    With phi = 0 and q = 1 this is exactly the capital-buffer test.
    """
    value = (
        (1.0 - params.phi) * sheet.interbank_assets
        + params.q * sheet.external_assets
        - sheet.interbank_liabilities
        - sheet.deposits
    )
    return value > 0.0


def write_sheets_csv(
    sheets: Sequence[BalanceSheet], path, defaulted: Optional[Sequence[bool]] = None
) -> None:
    """Dump sheets as CSV; pass post-cascade flags to add a `defaulted` column."""
    header = ["bank_id", "a_ib", "a_m", "l_ib", "d", "k", "solvent"]
    if defaulted is not None:
        if len(defaulted) != len(sheets):
            raise ValueError("defaulted flags must match the number of sheets")
        header.append("defaulted")
    with Path(path).open("w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i, sheet in enumerate(sheets):
            k = capital_buffer(sheet)
            row = [
                i,
                repr(sheet.interbank_assets),
                repr(sheet.external_assets),
                repr(sheet.interbank_liabilities),
                repr(sheet.deposits),
                repr(k),
                "true" if k > 0 else "false",
            ]
            if defaulted is not None:
                row.append("true" if defaulted[i] else "false")
            writer.writerow(row)
