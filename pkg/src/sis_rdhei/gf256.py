# SPDX-License-Identifier: MIT

"""Arithmetic in GF(2^8) modulo y^8 + y^4 + y^3 + y + 1 (0x11B).

Scalar functions are the reference; the ``*_array``/``*_batch`` variants run the
same arithmetic over numpy arrays through a 256×256 product table built with the
reference shift-and-reduce loop.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np

from .errors import FieldError, ParameterError

_POLY_REDUCED = 0x1B  # 0x11B without the y^8 term


def gf_add(a: int, b: int) -> int:
    return a ^ b


def gf_mul(a: int, b: int) -> int:
    res = 0
    while b:
        if b & 1:
            res ^= a
        hi = a & 0x80
        a = (a << 1) & 0xFF
        if hi:
            a ^= _POLY_REDUCED
        b >>= 1
    return res


def gf_pow(a: int, k: int) -> int:
    if k < 0:
        raise ParameterError(f"gf_pow exponent must be non-negative, got {k}")
    result = 1
    base = a
    while k:
        if k & 1:
            result = gf_mul(result, base)
        base = gf_mul(base, base)
        k >>= 1
    return result


def gf_inv(a: int) -> int:
    if a == 0:
        raise FieldError("zero has no multiplicative inverse in GF(2^8)")
    return gf_pow(a, 254)


def _build_mul_table() -> np.ndarray:
    aa = np.broadcast_to(np.arange(256, dtype=np.uint16)[:, None], (256, 256)).copy()
    bb = np.broadcast_to(np.arange(256, dtype=np.uint16)[None, :], (256, 256)).copy()
    res = np.zeros((256, 256), dtype=np.uint16)
    for _ in range(8):
        res ^= np.where(bb & 1, aa, 0).astype(np.uint16)
        hi = (aa & 0x80) != 0
        aa = (aa << 1) & 0xFF
        aa[hi] ^= _POLY_REDUCED
        bb >>= 1
    return res.astype(np.uint8)


MUL_TABLE = _build_mul_table()
MUL_TABLE.setflags(write=False)

INV_TABLE = np.zeros(256, dtype=np.uint8)
INV_TABLE[1:] = [gf_inv(v) for v in range(1, 256)]
INV_TABLE.setflags(write=False)


def gf_mul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Element-wise field product of two broadcast-compatible byte arrays."""
    return MUL_TABLE[np.asarray(a, dtype=np.uint8), np.asarray(b, dtype=np.uint8)]


def eval_poly(coeffs: Sequence[int], x: int) -> int:
    """Evaluates ``coeffs[0] ⊕ coeffs[1]·x ⊕ … ⊕ coeffs[r-1]·x^(r-1)`` (Horner form)."""
    acc = 0
    for c in reversed(coeffs):
        acc = gf_mul(acc, x) ^ c
    return acc


def _poly_times_linear(poly: List[int], c: int) -> List[int]:
    # poly · (X + c); subtraction is addition in characteristic 2
    out = [0] * (len(poly) + 1)
    for t, coef in enumerate(poly):
        out[t] ^= gf_mul(coef, c)
        out[t + 1] ^= coef
    return out


def recover_coeffs(points: Sequence[Tuple[int, int]], r: int) -> List[int]:
    """Recovers the full coefficient vector of the degree < r polynomial through ``points``.

    Uses the Lagrange basis expansion, so the random coefficients come back along
    with the constant term.

    Arguments:
        points: Exactly ``r`` pairs ``(x, y)`` with distinct nonzero ``x``.
        r: Threshold (number of coefficients).

    Returns:
        ``[secret, a(0), ..., a(r-2)]``.

    Raises:
        ParameterError: Wrong number of points, zero or duplicate ``x``.
    """
    if r < 1 or len(points) != r:
        raise ParameterError(f"need exactly r={r} points, got {len(points)}")
    xs = [x for x, _ in points]
    if any(x == 0 for x in xs) or len(set(xs)) != len(xs):
        raise ParameterError(f"evaluation points must be distinct and nonzero: {xs}")

    coeffs = [0] * r
    for k, (xk, yk) in enumerate(points):
        basis = [1]
        denom = 1
        for m, xm in enumerate(xs):
            if m == k:
                continue
            basis = _poly_times_linear(basis, xm)
            denom = gf_mul(denom, xk ^ xm)
        scale = gf_mul(yk, gf_inv(denom))
        for t in range(r):
            coeffs[t] ^= gf_mul(basis[t], scale)
    return coeffs


def eval_poly_batch(coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Evaluates one polynomial per row at several points.

    Arguments:
        coeffs: ``(B, d)`` coefficient rows, constant term first.
        xs: ``(B, k)`` evaluation points.

    Returns:
        ``(B, k)`` byte array of values.
    """
    coeffs = np.asarray(coeffs, dtype=np.uint8)
    xs = np.asarray(xs, dtype=np.uint8)
    acc = np.broadcast_to(coeffs[:, -1:], xs.shape).copy()
    for t in range(coeffs.shape[1] - 2, -1, -1):
        acc = MUL_TABLE[acc, xs] ^ coeffs[:, t : t + 1]
    return acc


def recover_coeffs_batch(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Row-wise :func:`recover_coeffs` for ``(B, r)`` point arrays."""
    xs = np.asarray(xs, dtype=np.uint8)
    ys = np.asarray(ys, dtype=np.uint8)
    if xs.shape != ys.shape or xs.ndim != 2:
        raise ParameterError(f"point arrays must share a (B, r) shape: {xs.shape} vs {ys.shape}")
    batch, r = xs.shape
    ordered = np.sort(xs, axis=1)
    if np.any(xs == 0) or np.any(ordered[:, 1:] == ordered[:, :-1]):
        raise ParameterError("evaluation points must be distinct and nonzero in every row")

    coeffs = np.zeros((batch, r), dtype=np.uint8)
    for k in range(r):
        basis = np.zeros((batch, r), dtype=np.uint8)
        basis[:, 0] = 1
        denom = np.ones(batch, dtype=np.uint8)
        degree = 0
        for m in range(r):
            if m == k:
                continue
            xm = xs[:, m]
            shifted = np.zeros_like(basis)
            shifted[:, 1 : degree + 2] = basis[:, : degree + 1]
            basis = shifted ^ MUL_TABLE[basis, xm[:, None]]
            degree += 1
            denom = MUL_TABLE[denom, xs[:, k] ^ xm]
        scale = MUL_TABLE[ys[:, k], INV_TABLE[denom]]
        coeffs ^= MUL_TABLE[basis, scale[:, None]]
    return coeffs
