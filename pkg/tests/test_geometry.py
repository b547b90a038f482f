import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tilewigner import CausalOverlapError, ConfigError, SpacetimeSpec, Tile, TilingLayout, build_tiling, check_spacelike, covariant_scales, layout_from_tiles
from tilewigner.geometry import spatial_gap


def test_reference_tiling(spec):
    lay = build_tiling(spec, 4, 1.0, 0.05, 0.3)
    centers = [t.center[0] for t in lay.tiles]
    assert lay.N == 4
    assert centers == pytest.approx([-1.95, -0.65, 0.65, 1.95])
    assert all(b - a == pytest.approx(1.3) for a, b in zip(centers, centers[1:]))
    assert lay.l_ir == pytest.approx(4.0, abs=1e-12)


def test_single_tile(spec):
    lay = build_tiling(spec, 1, 1.0, 0.05, 0.3)
    assert lay.N == 1 and lay.l_uv == pytest.approx(1.0) and lay.l_ir == pytest.approx(1.0)


def test_three_dimensional_grid():
    lay = build_tiling(SpacetimeSpec(n=3), 2, 0.5, 0.02, 0.1)
    assert lay.N == 8
    assert lay.l_ir == pytest.approx(1.0, abs=1e-12)
    gaps = [spatial_gap(a, b) for a, b in itertools.combinations(lay.tiles, 2)]
    assert len(gaps) == 28
    assert min(gaps) == pytest.approx(0.1, abs=1e-12)
    assert min(gaps) > 2 * 0.02


@pytest.mark.parametrize(
    "cb, expected",
    [(1.3, True), (0.0, False), (1.08, False)],
)
def test_check_spacelike(cb, expected):
    a = Tile(0, (0.0,), (0.5,), 0.05)
    b = Tile(1, (cb,), (0.5,), 0.05)
    assert check_spacelike(a, b) is expected


def test_covariant_scales_examples():
    four = [Tile(i, (1.5 * i,), (0.5,), 0.05) for i in range(4)]
    assert covariant_scales(four) == pytest.approx((1.0, 4.0))
    cube = [Tile(0, (0.0, 0.0, 0.0), (1.0, 1.0, 1.0), 0.05)]
    assert covariant_scales(cube) == pytest.approx((2.0, 2.0))
    mixed = [Tile(0, (0.0,), (0.5,), 0.05), Tile(1, (3.0,), (1.0,), 0.05)]
    assert covariant_scales(mixed) == pytest.approx((1.0, 2.0))


def test_corridor_too_narrow(spec):
    with pytest.raises(CausalOverlapError) as info:
        build_tiling(spec, 4, 1.0, 0.05, 0.1)
    assert info.value.code == "CAUSAL_OVERLAP"


def test_explicit_overlap_names_pair(spec):
    tiles = [Tile(0, (0.0,), (0.5,), 0.05), Tile(1, (1.05,), (0.5,), 0.05), Tile(2, (3.0,), (0.5,), 0.05)]
    with pytest.raises(CausalOverlapError) as info:
        layout_from_tiles(spec, tiles)
    assert info.value.pairs == ((0, 1),)


@pytest.mark.parametrize("kwargs", [{"n": 2}, {"m": 0.0}, {"hbar": -1.0}, {"xi": 0.1}])
def test_spec_validation(kwargs):
    with pytest.raises(ConfigError):
        SpacetimeSpec(**kwargs)


def test_bad_tile_counts(spec):
    with pytest.raises(ConfigError):
        build_tiling(spec, 0, 1.0, 0.05, 0.3)
    with pytest.raises(ConfigError):
        Tile(0, (0.0,), (-1.0,), 0.05)


def test_contains(spec):
    t = Tile(0, (0.0,), (0.5,), 0.05)
    assert t.contains(0.0, [[0.49]])[0]
    assert not t.contains(0.06, [[0.0]])[0]
    assert not t.contains(0.0, [[0.51]])[0]


def test_layout_round_trip(layout):
    again = TilingLayout.from_dict(layout.to_dict())
    assert again.to_dict() == layout.to_dict()


@given(
    n=st.sampled_from([1, 3]),
    per_axis=st.integers(1, 4),
    l_uv=st.floats(0.2, 3.0),
    eps=st.floats(0.01, 0.2),
    extra=st.floats(1e-3, 1.0),
)
def test_built_layouts_are_pairwise_spacelike(n, per_axis, l_uv, eps, extra):
    lay = build_tiling(SpacetimeSpec(n=n), per_axis, l_uv, eps, 2 * eps + extra)
    assert lay.N == per_axis**n <= 64
    assert all(check_spacelike(a, b) for a, b in itertools.combinations(lay.tiles, 2))
    assert abs(lay.l_ir / lay.l_uv - lay.N ** (1.0 / n)) <= 1e-12 * lay.N


@given(per_axis=st.integers(2, 4), shift=st.floats(-5.0, 5.0))
def test_translation_keeps_gaps(per_axis, shift):
    lay = build_tiling(SpacetimeSpec(n=1), per_axis, 1.0, 0.05, 0.3)
    moved = lay.translated((shift,))
    for (a, b), (c, d) in zip(itertools.combinations(lay.tiles, 2), itertools.combinations(moved.tiles, 2)):
        assert abs(spatial_gap(a, b) - spatial_gap(c, d)) <= 1e-12
