"""Boundary/coboundary operators and induced chain maps, exact integers."""

import numpy as np
import pytest

from decfem import (
    abstr,
    apply_chain_map_check,
    boundary_matrix,
    coboundary_matrix,
    complex_matrices,
    matrices_for,
    meshes,
)
from decfem.chains import ChainMapError, IntSparseMatrix

from conftest import FIXTURE_NAMES, random_delaunay_mesh, rips_complex, two_tets


class TestIntSparseMatrix:
    def test_rejects_stored_zero_and_duplicates(self):
        m = IntSparseMatrix(2, 2, {(0, 0): 1, (1, 1): 0})
        assert m.nnz == 1
        with pytest.raises(ValueError):
            IntSparseMatrix(2, 2, [((0, 0), 1), ((0, 0), 2)])

    def test_matmul_exact(self):
        a = IntSparseMatrix.from_dense([[1, 2], [3, 4]])
        b = IntSparseMatrix.from_dense([[5, 6], [7, 8]])
        assert (a @ b).to_dense() == [[19, 22], [43, 50]]

    def test_big_integers_survive(self):
        big = 10**30
        a = IntSparseMatrix.from_dense([[big]])
        assert (a @ a).to_dense() == [[big * big]]

    def test_coordinate_text_round_trip(self):
        a = IntSparseMatrix.from_dense([[0, -2], [3, 0], [0, 7]])
        text = a.to_coordinate_text()
        assert text.splitlines()[0] == "3 2 3"
        assert IntSparseMatrix.from_coordinate_text(text) == a

    def test_transpose(self):
        a = IntSparseMatrix.from_dense([[1, 0, 2]])
        assert a.transpose().to_dense() == [[1], [0], [2]]

    def test_empty_matrix_operations(self):
        z = IntSparseMatrix(3, 2)
        assert z.is_zero()
        assert z.to_csr().nnz == 0
        assert (z.transpose() @ z).to_dense() == [[0, 0], [0, 0]]


class TestBoundaryMatrix:
    def test_triangle_edge_boundary(self):
        ac = abstr(meshes.reference_triangle())
        b1 = boundary_matrix(ac, 1)
        # column of edge (0,1) over vertices (0,1,2)
        col = [b1.get(r, 0) for r in range(3)]
        assert col == [-1, 1, 0]

    def test_triangle_face_boundary(self):
        ac = abstr(meshes.reference_triangle())
        b2 = boundary_matrix(ac, 2)
        # edges ordered (0,1),(0,2),(1,2): d(0,1,2) = (1,2) - (0,2) + (0,1)
        col = [b2.get(r, 0) for r in range(3)]
        assert col == [1, -1, 1]

    def test_degree_out_of_range(self):
        ac = abstr(meshes.reference_triangle())
        with pytest.raises(ValueError):
            boundary_matrix(ac, 0)
        with pytest.raises(ValueError):
            boundary_matrix(ac, 3)

    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_column_structure(self, abstract_set, name):
        ac = abstract_set[name]
        for p in range(1, ac.complex_dim + 1):
            bp = boundary_matrix(ac, p)
            per_col = {}
            for (r, c), v in bp.entries.items():
                per_col.setdefault(c, []).append(v)
                assert v in (-1, 1)
            for c in range(bp.cols):
                assert len(per_col[c]) == p + 1

    def test_edge_columns_sum_to_zero(self, abstract_set):
        for ac in abstract_set.values():
            b1 = boundary_matrix(ac, 1)
            sums = [0] * b1.cols
            for (r, c), v in b1.entries.items():
                sums[c] += v
            assert all(s == 0 for s in sums)


class TestComplexProperty:
    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_boundary_squares_to_zero(self, abstract_set, name):
        cm = matrices_for(abstract_set[name])
        for p in range(1, cm.complex_dim):
            assert (cm.boundary[p] @ cm.boundary[p + 1]).is_zero()

    def test_two_tets(self):
        cm = complex_matrices(abstr(two_tets()))
        assert (cm.boundary[1] @ cm.boundary[2]).is_zero()
        assert (cm.boundary[2] @ cm.boundary[3]).is_zero()

    @pytest.mark.parametrize("seed", range(6))
    def test_random_delaunay(self, seed):
        cm = complex_matrices(abstr(random_delaunay_mesh(seed)))
        assert (cm.boundary[1] @ cm.boundary[2]).is_zero()

    @pytest.mark.parametrize("seed", range(4))
    def test_random_rips(self, seed):
        cm = complex_matrices(rips_complex(seed))
        assert (cm.boundary[1] @ cm.boundary[2]).is_zero()

    @pytest.mark.parametrize("name", FIXTURE_NAMES)
    def test_coboundary_is_transpose(self, abstract_set, name):
        ac = abstract_set[name]
        cm = matrices_for(ac)
        for p in range(ac.complex_dim):
            assert coboundary_matrix(ac, p) == cm.boundary[p + 1].transpose()
            assert cm.coboundary[p].entries == {
                (c, r): v for (r, c), v in cm.boundary[p + 1].entries.items()
            }

    def test_coboundary_composition_vanishes(self):
        ac = abstr(meshes.split_square())
        d0 = coboundary_matrix(ac, 0)
        d1 = coboundary_matrix(ac, 1)
        assert (d1 @ d0).is_zero()

    def test_circle_coboundary_rank(self):
        ac = abstr(meshes.hollow_triangle())
        d0 = coboundary_matrix(ac, 0).to_ndarray()
        assert np.linalg.matrix_rank(d0) == 2


class TestChainMaps:
    def test_identity_map(self, abstract_set):
        for ac in abstract_set.values():
            vertex_ids = [s[0] for s in ac.simplices[0]]
            fmap = {v: v for v in vertex_ids}
            assert apply_chain_map_check(ac, ac, fmap)

    def test_subcomplex_inclusion(self):
        tri = abstr(meshes.reference_triangle())
        square = abstr(meshes.split_square())
        assert apply_chain_map_check(tri, square, [0, 1, 2])

    def test_edge_collapse_commutes(self):
        tri = abstr(meshes.reference_triangle())
        assert apply_chain_map_check(tri, tri, [0, 0, 2])

    def test_non_simplicial_image_raises(self):
        square = abstr(meshes.split_square())
        tri = abstr(meshes.reference_triangle())
        # (1, 2) -> (1, 3): no such edge in the triangle complex target
        with pytest.raises(ChainMapError):
            apply_chain_map_check(square, square, [0, 1, 3, 2])
        del tri

    def test_map_into_larger_complex(self):
        tri = abstr(meshes.reference_triangle())
        disk = abstr(meshes.disk())
        # the disk's first fan triangle is (0, 1, 2)
        assert apply_chain_map_check(tri, disk, [0, 1, 2])
