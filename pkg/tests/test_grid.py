import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from htg.errors import (
    BadAxisCoordinates,
    DescriptorLengthMismatch,
    FieldLengthMismatch,
    IndexOutOfRange,
)
from htg.generate import paper2d, random_grid
from htg.grid import GridSpec, build_grid, grid_stats

from gridgen import corpus_2d
from oracles import GridIndex


def unit_spec(dimension=2, factor=2, extent=None):
    extent = extent or (1,) * dimension
    axes = tuple(tuple(float(i) for i in range(n + 1)) for n in extent)
    return GridSpec(dimension, factor, extent, axes)


# -- construction ---------------------------------------------------------------


def test_single_unrefined_root():
    grid = build_grid(unit_spec(), ["0"])
    assert len(grid.trees) == 1
    assert grid.total_cells == 1
    assert grid.trees[0].max_depth == 0


def test_one_refinement_step_binary():
    grid = build_grid(unit_spec(), ["1 0000"])
    assert grid.total_cells == 5
    assert grid.trees[0].leaf_count == 4
    assert grid.trees[0].max_depth == 1


def test_ternary_3d_children():
    grid = build_grid(unit_spec(3, 3), ["1" + "0" * 27])
    assert grid.total_cells == 28
    assert grid.trees[0].leaf_count == 27


@pytest.mark.parametrize(
    "descriptor",
    ["", "1", "1 000", "1 00000", "10000 0", "1 1000 000"],
)
def test_inconsistent_descriptor_rejected(descriptor):
    with pytest.raises(DescriptorLengthMismatch):
        build_grid(unit_spec(), [descriptor])


def test_descriptor_rejects_non_bits():
    with pytest.raises(DescriptorLengthMismatch):
        build_grid(unit_spec(), ["1 00x0"])


def test_mask_and_field_lengths_checked():
    with pytest.raises(FieldLengthMismatch):
        build_grid(unit_spec(), ["1 0000"], mask="0000")
    with pytest.raises(FieldLengthMismatch):
        build_grid(unit_spec(), ["1 0000"], fields={"v": [1.0, 2.0]})


def test_bad_axis_coordinates():
    with pytest.raises(BadAxisCoordinates):
        GridSpec(2, 2, (2, 1), ((0.0, 1.0), (0.0, 1.0)))  # too few coords on x
    with pytest.raises(BadAxisCoordinates):
        GridSpec(2, 2, (1, 1), ((0.0, 0.0), (0.0, 1.0)))  # not increasing
    with pytest.raises(BadAxisCoordinates):
        GridSpec(4, 2, (1, 1), ((0.0, 1.0), (0.0, 1.0)))  # bad dimension
    with pytest.raises(BadAxisCoordinates):
        GridSpec(2, 5, (1, 1), ((0.0, 1.0), (0.0, 1.0)))  # bad factor


# -- ids --------------------------------------------------------------------------


@pytest.fixture
def two_tree_grid():
    # tree 0: 5 cells ("1 0000"), tree 1: 9 cells ("1 1000 0000")
    return build_grid(unit_spec(extent=(2, 1)), ["1 0000", "1 1000 0000"])


def test_global_id_offsets(two_tree_grid):
    grid = two_tree_grid
    assert [t.cell_count for t in grid.trees] == [5, 9]
    assert grid.global_id(1, 0) == 5
    assert grid.global_id(0, 4) == 4
    assert grid.resolve_id(13) == (1, 8)


def test_global_id_range_checks(two_tree_grid):
    grid = two_tree_grid
    with pytest.raises(IndexOutOfRange):
        grid.global_id(2, 0)
    with pytest.raises(IndexOutOfRange):
        grid.global_id(0, 5)
    with pytest.raises(IndexOutOfRange):
        grid.resolve_id(14)
    with pytest.raises(IndexOutOfRange):
        grid.resolve_id(-1)


def test_id_bijection_everywhere():
    for grid in corpus_2d(6):
        for t, tree in enumerate(grid.trees):
            for b in range(tree.cell_count):
                assert grid.resolve_id(grid.global_id(t, b)) == (t, b)
        for gid in range(grid.total_cells):
            t, b = grid.resolve_id(gid)
            assert grid.global_id(t, b) == gid


# -- stats ------------------------------------------------------------------------


def test_stats_unrefined_root():
    stats = grid_stats(build_grid(unit_spec(), ["0"]))
    assert (stats.total_cells, stats.leaf_count, stats.masked_leaf_count) == (1, 1, 0)
    assert stats.depth_histogram == {0: 1}


def test_stats_one_step():
    stats = grid_stats(build_grid(unit_spec(), ["1 0000"]))
    assert (stats.total_cells, stats.leaf_count, stats.masked_leaf_count) == (5, 4, 0)
    assert stats.depth_histogram == {1: 4}


def test_stats_paper2d_matches_descriptor_scan():
    grid = paper2d(seed=42)
    # independent oracle: leaves are exactly the 0 bits of the descriptors
    expected_leaves = sum(t.descriptor.count("0") for t in grid.trees)
    stats = grid_stats(grid)
    assert stats.leaf_count == expected_leaves
    assert stats.total_cells == sum(len(t.descriptor) for t in grid.trees)
    assert sum(stats.depth_histogram.values()) == expected_leaves


def test_stats_masked_leaves_use_effective_mask():
    # root refined; child 0 is itself refined and masked: its subtree counts as masked
    grid = build_grid(unit_spec(), ["1 1000 0000"], mask="0 1000 0000")
    stats = grid_stats(grid)
    assert stats.leaf_count == 7
    assert stats.masked_leaf_count == 4  # the four grandchildren under the masked cell


# -- structural properties --------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000), factor=st.sampled_from([2, 3]), dim=st.sampled_from([2, 3]))
def test_level_recurrence_holds(seed, factor, dim):
    grid = random_grid(dim, factor, max_depth=3, seed=seed)
    tree = grid.trees[0]
    nc = factor**dim
    for depth in range(len(tree.level_offsets) - 2):
        lo, hi = tree.level_offsets[depth], tree.level_offsets[depth + 1]
        ones = int(np.count_nonzero(tree.bits[lo:hi]))
        assert tree.level_offsets[depth + 2] - hi == ones * nc
    assert tree.level_offsets[-1] == tree.cell_count


def test_leaf_rectangles_tile_each_root():
    for grid in corpus_2d(8, masked="none"):
        gidx = GridIndex(grid)
        for t in range(len(grid.trees)):
            _, (sx, sy) = grid.spec.root_box(t)
            area = sum(
                s[0] * s[1]
                for c in gidx.leaves(t, include_masked=True)
                for _, s in [gidx.box(t, c.bfs)]
            )
            assert area == pytest.approx(sx * sy, rel=1e-12)


def test_effective_mask_matches_oracle():
    for grid in corpus_2d(8, masked="all"):
        gidx = GridIndex(grid)
        for t, tree in enumerate(grid.trees):
            off = grid.tree_offsets[t]
            got = grid.effective_mask[off : off + tree.cell_count].tolist()
            assert got == gidx.eff_mask[t]


def test_fields_cover_coarse_and_leaf_cells():
    grid = random_grid(2, 2, max_depth=3, seed=7, mask_density=0.2)
    assert set(grid.fields) == {"density"}
    assert grid.fields["density"].shape == (grid.total_cells,)


def test_reserved_field_names_rejected():
    with pytest.raises(ValueError):
        build_grid(unit_spec(), ["0"], fields={"depth": [1.0]})
    with pytest.raises(ValueError):
        build_grid(unit_spec(), ["0"], fields={"global_id": [1.0]})
