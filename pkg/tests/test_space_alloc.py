"""Tests for embeddable-pixel and retained-block allocation."""

import numpy as np
import pytest

from src.sis_rdhei.errors import ParameterError
from src.sis_rdhei.sharing import share_block
from src.sis_rdhei.space_alloc import (
    capacity_balance,
    count_fp,
    count_wb,
    embed_indices,
    embeddable,
    ep_to_pixel,
    retention_flags,
    walk_embed_indices,
)

from .conftest import WORKED_A, WORKED_BLOCK, WORKED_XS


def test_worked_example_embeddable_sets():
    """Test the three shares of the 2x2 block expose the published pixel values."""
    shares = share_block(WORKED_BLOCK, WORKED_A, WORKED_XS)
    expected = [{25, 27}, {117, 118}, {144, 145}]
    for share_id, row in enumerate(shares):
        emap = embed_indices(share_id, 1, 2, 3, 3)
        assert emap.share_id == share_id
        assert {row[1 + i] for i in emap.indices.tolist()} == expected[share_id]


def test_embeddable_predicate():
    """Test the sliding-window rule for a few indices."""
    assert embeddable(0, 0, 3, 3)
    assert not embeddable(0, 1, 3, 3)
    assert embeddable(0, 2, 3, 3)
    with pytest.raises(ParameterError):
        embeddable(3, 0, 3, 3)
    with pytest.raises(ParameterError):
        embeddable(0, 0, 4, 3)


@pytest.mark.parametrize("r,n", [(2, 2), (2, 5), (3, 3), (3, 4), (4, 4), (4, 6), (6, 6)])
def test_every_index_lands_in_r_minus_1_images(r, n):
    """Test each non-first pixel is embeddable in exactly r-1 images."""
    maps = [embed_indices(k, 10, 4, r, n) for k in range(n)]
    hits = np.zeros(10 * 15, dtype=np.int64)
    for emap in maps:
        hits[emap.indices] += 1
    assert (hits == r - 1).all()
    for emap in maps:
        assert np.all(np.diff(emap.indices) > 0)


def test_walk_matches_predicate(rng):
    """Test the window walk enumerates exactly the predicate's indices."""
    for _ in range(60):
        n = int(rng.integers(2, 9))
        r = int(rng.integers(2, n + 1))
        side = int(rng.integers(2, 5))
        blocks = int(rng.integers(1, 30))
        share_id = int(rng.integers(0, n))
        walked = list(walk_embed_indices(share_id, blocks, side, r, n))
        assert walked == embed_indices(share_id, blocks, side, r, n).indices.tolist()


def test_capacity_balance_bound(rng):
    """Test embeddable counts differ by at most n-r+1 pixels over 50 random draws."""
    for _ in range(50):
        n = int(rng.integers(2, 12))
        r = int(rng.integers(2, n + 1))
        side = int(rng.choice([2, 4, 8]))
        blocks = int(rng.integers(4, 200))
        assert capacity_balance(blocks, side, r, n) <= n - r + 1


def test_gross_count_for_large_image():
    """Test 4096 blocks of side 8 with (4, 4) give 193536 pixels to each image."""
    counts = {len(embed_indices(k, 4096, 8, 4, 4)) for k in range(4)}
    assert counts == {193536}
    assert capacity_balance(4096, 8, 4, 4) == 0


@pytest.mark.parametrize(
    "blocks,r,n,share_id,fp",
    [(4096, 2, 2, 0, 2048), (16384, 4, 4, 1, 12288), (16384, 2, 2, 1, 8192), (10, 3, 4, 1, 6)],
)
def test_count_fp(blocks, r, n, share_id, fp):
    """Test the closed-form first-pixel count against the flags."""
    assert count_fp(share_id, blocks, r, n) == fp
    assert int(retention_flags(share_id, blocks, r, n).sum()) == fp
    assert count_wb(share_id, blocks, r, n) == blocks - fp


def test_retention_flags_keep_n_minus_r_plus_1_whole_copies():
    """Test each block is kept whole by exactly n-r+1 images."""
    r, n = 3, 5
    whole = sum((~retention_flags(k, 23, r, n)).astype(int) for k in range(n))
    assert (whole == n - r + 1).all()


def test_ep_to_pixel_positions():
    """Test EP indices map to raster positions skipping each block's first pixel."""
    # 4x4 image of 2x2 blocks
    positions = ep_to_pixel(np.arange(12), 2, 4)
    assert positions.tolist() == [1, 4, 5, 3, 6, 7, 9, 12, 13, 11, 14, 15]
