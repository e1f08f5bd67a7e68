# SPDX-License-Identifier: MIT

"""Evaluation measures: entropy, PSNR, embedding rate, data expansion and the report format."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import CodecError, ExtractionError, ParameterError
from .hc_scheme import HcShareFile, embedding_rate
from .imagecore import GrayImage
from .models import Scheme
from .sharing import SchemeParams
from .sr_scheme import SrShareFile, sr_capacity, sr_layout

ShareFile = Union[HcShareFile, SrShareFile]


def histogram(img: GrayImage) -> np.ndarray:
    return np.bincount(img.pixels.ravel(), minlength=256)


def entropy(img: GrayImage) -> float:
    """Shannon entropy of the 256-bin histogram in bits per pixel."""
    counts = histogram(img)
    probs = counts[counts > 0] / img.pixels.size
    return float(-(probs * np.log2(probs)).sum()) + 0.0


def psnr(original: GrayImage, other: GrayImage) -> float:
    """Peak signal-to-noise ratio in dB; ``inf`` for identical images."""
    if original.pixels.shape != other.pixels.shape:
        raise ParameterError(
            f"cannot compare {original.pixels.shape} with {other.pixels.shape}"
        )
    mse = float(np.mean((original.pixels.astype(np.float64) - other.pixels) ** 2))
    if mse == 0:
        return math.inf
    return 10 * math.log10(255**2 / mse)


def exact(original: GrayImage, other: GrayImage) -> bool:
    return original == other


def _original_size(shares: Sequence[ShareFile]) -> Tuple[int, int]:
    sizes = set()
    for s in shares:
        if isinstance(s, SrShareFile):
            sizes.add((s.layout.height, s.layout.width))
        else:
            sizes.add(s.image.pixels.shape)
    params = {s.params for s in shares}
    if len(sizes) != 1 or len(params) != 1:
        raise ParameterError(f"shares disagree on parameters {params} or size {sizes}")
    return sizes.pop()


def _sr_capacity_bits(share: SrShareFile) -> int:
    try:
        return sr_capacity(share, marked=True)
    except (ExtractionError, CodecError):
        return sr_capacity(share)


def capacity_bits(scheme: Scheme, share: ShareFile) -> int:
    """Bits the scheme's own allocator offers in ``share``.

    High-capacity shares count every embeddable pixel (gross); reduced shares count
    what remains after SI, CB and the length header, floored at zero. A reduced
    share whose SI reads back consistently is taken as marked and measured from it.
    """
    if scheme == Scheme.hc:
        if not isinstance(share, HcShareFile):
            raise ParameterError("high-capacity metrics need high-capacity shares")
        return 8 * len(share.embed_map())
    if not isinstance(share, SrShareFile):
        raise ParameterError("size-reduced metrics need size-reduced shares")
    return max(0, _sr_capacity_bits(share))


def measured_er(scheme: Scheme, shares: Sequence[ShareFile]) -> List[float]:
    """Per-share embedding rate in bits per original pixel."""
    height, width = _original_size(shares)
    return [capacity_bits(scheme, s) / (height * width) for s in shares]


def expansion(shares: Iterable[ShareFile], height: int, width: int) -> float:
    """Pixels of all given share files over the original pixel count."""
    return sum(s.image.pixels.size for s in shares) / (height * width)


def hider_expansion(share: ShareFile, height: int, width: int) -> float:
    return expansion([share], height, width)


def capacity_balance_bits(scheme: Scheme, shares: Sequence[ShareFile]) -> int:
    bits = [capacity_bits(scheme, s) for s in shares]
    return max(bits) - min(bits)


def keyspace_bits(params: SchemeParams, height: int, width: int) -> int:
    """Bits of brute-force search over one random byte per block (256^BN)."""
    return 8 * params.block_count(height, width)


def er_table(
    sides: Sequence[int] = (4, 8), ns: Sequence[int] = (2, 3, 4, 5, 6)
) -> Dict[Tuple[int, int, int], float]:
    """Closed-form embedding rates keyed by ``(S, r, n)`` for every ``2 <= r <= n``."""
    return {
        (s, r, n): embedding_rate(SchemeParams(s, r, n))
        for s in sides
        for r in ns
        for n in ns
        if r <= n
    }


def reduced_sizes(
    height: int, width: int, configs: Sequence[Tuple[int, int, int]]
) -> Dict[Tuple[int, int, int], List[Tuple[int, int]]]:
    """Reduced share dimensions per ``(S, r, n)`` configuration, one entry per ID."""
    out = {}
    for side, r, n in configs:
        params = SchemeParams(side, r, n)
        layouts = [sr_layout(params, height, width, k) for k in range(n)]
        out[(side, r, n)] = [(lay.rows, lay.cols) for lay in layouts]
    return out


@dataclass
class Report:
    """Values printed by the ``metrics`` command; unset fields are omitted."""

    exact: Optional[bool] = None
    psnr: Optional[float] = None
    entropy: List[float] = field(default_factory=list)
    er: List[float] = field(default_factory=list)
    expansion: Optional[float] = None
    hider_expansion: List[float] = field(default_factory=list)
    balance_bits: Optional[int] = None
    keyspace_bits: Optional[int] = None


def build_report(
    original: Optional[GrayImage] = None,
    recovered: Optional[GrayImage] = None,
    scheme: Optional[Scheme] = None,
    shares: Sequence[ShareFile] = (),
) -> Report:
    report = Report()
    if original is not None and recovered is not None:
        report.exact = exact(original, recovered)
        if original.pixels.shape == recovered.pixels.shape:
            report.psnr = psnr(original, recovered)
    if shares:
        if scheme is None:
            raise ParameterError("share metrics need the scheme")
        height, width = _original_size(shares)
        report.entropy = [entropy(s.image) for s in shares]
        report.er = measured_er(scheme, shares)
        report.expansion = expansion(shares, height, width)
        report.hider_expansion = [hider_expansion(s, height, width) for s in shares]
        report.balance_bits = capacity_balance_bits(scheme, shares)
        report.keyspace_bits = keyspace_bits(shares[0].params, height, width)
    return report


def _fmt(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.4f}"


def format_report(report: Report) -> str:
    """Line-oriented ``key=value`` text."""
    lines = []
    if report.exact is not None:
        lines.append(f"exact={'true' if report.exact else 'false'}")
    if report.psnr is not None:
        lines.append(f"psnr={_fmt(report.psnr)}")
    for i, value in enumerate(report.entropy):
        lines.append(f"entropy.{i}={_fmt(value)}")
    for i, value in enumerate(report.er):
        lines.append(f"er.{i}={_fmt(value)}")
    if report.er:
        lines.append(f"er.mean={_fmt(sum(report.er) / len(report.er))}")
    if report.expansion is not None:
        lines.append(f"expansion={_fmt(report.expansion)}")
    for i, value in enumerate(report.hider_expansion):
        lines.append(f"hider_expansion.{i}={_fmt(value)}")
    if report.balance_bits is not None:
        lines.append(f"balance_bits={report.balance_bits}")
    if report.keyspace_bits is not None:
        lines.append(f"keyspace_bits={report.keyspace_bits}")
    return "\n".join(lines)
