import numpy as np
import pytest
import shapely

from eni._kernels import backend_name, get_backend, star_py

import oracles

pytestmark = pytest.mark.filterwarnings("ignore::DeprecationWarning")


def backends():
    out = [("python", star_py)]
    try:
        out.append(("compiled", get_backend("compiled")))
    except ImportError:
        pass
    return out


@pytest.fixture(params=[name for name, _ in backends()])
def backend(request):
    return get_backend(request.param)


def rotate(pts, theta):
    c, s = np.cos(theta), np.sin(theta)
    return pts @ np.array([[c, s], [-s, c]])


def test_compiled_backend_is_active():
    # the package is built with the extension; the selector must prefer it
    assert backend_name() == "compiled"


class TestStarDifferenceArea:
    def test_containment_arithmetic(self, backend):
        a = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
        assert backend.star_difference_area(a, 0.5 * a, 0.0) == pytest.approx(3.0)
        assert backend.star_difference_area(0.5 * a, a, 0.0) == 0.0
        assert backend.star_difference_area(a, a, 0.0) == 0.0

    def test_rotated_inner_square_still_contained(self, backend):
        a = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
        assert backend.star_difference_area(a, 0.5 * a, np.pi / 4) == pytest.approx(3.0)

    def test_non_star_input_flagged(self, backend):
        crescent = np.array(
            [[2.0, 0.0], [0.5, 0.4], [0.5, -0.4]]
        )  # origin outside this triangle
        ok = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
        assert backend.star_difference_area(crescent, ok, 0.0) == -1.0
        assert backend.star_difference_area(ok, crescent, 0.0) == -1.0

    def test_matches_shapely_on_random_pairs(self, backend):
        rng = np.random.default_rng(31)
        for _ in range(120):
            a = oracles.random_star_polygon(rng, int(rng.integers(4, 36)))
            b = oracles.random_star_polygon(rng, int(rng.integers(4, 36)))
            theta = float(rng.uniform(0, 2 * np.pi))
            want = shapely.Polygon(a).difference(shapely.Polygon(rotate(b, theta))).area
            got = backend.star_difference_area(a, b, theta)
            assert got == pytest.approx(want, rel=1e-9, abs=1e-12)

    def test_backends_agree(self):
        by_name = dict(backends())
        if "compiled" not in by_name:
            pytest.skip("compiled kernel not built")
        rng = np.random.default_rng(17)
        for _ in range(200):
            a = oracles.random_star_polygon(rng, int(rng.integers(4, 50)))
            b = oracles.random_star_polygon(rng, int(rng.integers(4, 50)))
            theta = float(rng.uniform(0, 2 * np.pi))
            va = by_name["python"].star_difference_area(a, b, theta)
            vb = by_name["compiled"].star_difference_area(a, b, theta)
            assert va == pytest.approx(vb, rel=1e-9, abs=1e-12)

    def test_radial_spur_vertices_handled(self, backend):
        # consecutive vertices on the same ray (visibility-polygon spur)
        a = np.array(
            [[2.0, 0.0], [4.0, 0.0], [0.0, 3.0], [-2.0, 0.0], [0.0, -2.0]]
        )
        want = shapely.Polygon(a).area
        tiny = np.array([[0.1, 0.1], [-0.1, 0.1], [-0.1, -0.1], [0.1, -0.1]])
        got = backend.star_difference_area(a, tiny, 0.0)
        assert got == pytest.approx(want - 0.04, rel=1e-9)


class TestBestRotation:
    def test_identical_squares(self, backend):
        a = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
        thetas = 2 * np.pi * np.arange(10) / 10
        score, idx = backend.best_rotation(a, a, thetas)
        assert score == 0.0
        assert idx == 0

    def test_symmetric_decagon_ties_to_first(self, backend):
        ang = 2 * np.pi * np.arange(10) / 10
        decagon = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        a = oracles.random_star_polygon(np.random.default_rng(2), 12)
        thetas = 2 * np.pi * np.arange(10) / 10
        scores = [backend.star_difference_area(a, decagon, t) for t in thetas]
        assert max(scores) - min(scores) < 1e-6
        _, idx = backend.best_rotation(a, decagon, thetas)
        assert idx == 0

    def test_min_over_rotations(self, backend):
        rng = np.random.default_rng(4)
        thetas = 2 * np.pi * np.arange(10) / 10
        a = oracles.random_star_polygon(rng, 20)
        b = oracles.random_star_polygon(rng, 14)
        per_angle = [backend.star_difference_area(a, b, t) for t in thetas]
        score, idx = backend.best_rotation(a, b, thetas)
        assert score == min(per_angle)
        assert idx == int(np.argmin(per_angle))


class TestBestMatch:
    @staticmethod
    def pack(polys):
        counts = np.array([p.shape[0] for p in polys], dtype=np.int64)
        offsets = np.zeros(len(polys) + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        allv = np.concatenate(polys, axis=0)
        px = np.ascontiguousarray(allv[:, 0])
        py = np.ascontiguousarray(allv[:, 1])
        pang = np.mod(np.arctan2(py, px), 2 * np.pi)
        areas = np.array([oracles.shoelace(p) for p in polys])
        return px, py, pang, offsets, areas

    def test_agrees_with_unpruned_double_loop(self, backend):
        rng = np.random.default_rng(8)
        thetas = 2 * np.pi * np.arange(10) / 10
        polys = [oracles.random_star_polygon(rng, int(rng.integers(5, 24))) for _ in range(25)]
        px, py, pang, offsets, areas = self.pack(polys)
        for _ in range(6):
            a = oracles.random_star_polygon(rng, 16)
            a_area = oracles.shoelace(a)
            score, j, t = backend.best_match(a, a_area, px, py, pang, offsets, areas, thetas)
            best = (np.inf, -1, -1)
            for jj, poly in enumerate(polys):
                for tt, theta in enumerate(thetas):
                    v = backend.star_difference_area(a, poly, float(theta))
                    if v < best[0]:
                        best = (v, jj, tt)
            assert score == pytest.approx(best[0], rel=1e-12, abs=1e-12)
            assert (j, t) == (best[1], best[2])

    def test_exact_zero_for_identical_member(self, backend):
        rng = np.random.default_rng(12)
        thetas = 2 * np.pi * np.arange(10) / 10
        polys = [oracles.random_star_polygon(rng, 12) for _ in range(10)]
        a = polys[7]
        px, py, pang, offsets, areas = self.pack(polys)
        score, j, t = backend.best_match(a, oracles.shoelace(a), px, py, pang, offsets, areas, thetas)
        assert score == 0.0
        assert t == 0
        assert j <= 7  # an earlier polygon may legitimately contain a

    def test_backends_identical_results(self):
        by_name = dict(backends())
        if "compiled" not in by_name:
            pytest.skip("compiled kernel not built")
        rng = np.random.default_rng(23)
        thetas = 2 * np.pi * np.arange(10) / 10
        polys = [oracles.random_star_polygon(rng, int(rng.integers(5, 30))) for _ in range(20)]
        px, py, pang, offsets, areas = self.pack(polys)
        for _ in range(5):
            a = oracles.random_star_polygon(rng, 18)
            got_py = by_name["python"].best_match(
                a, oracles.shoelace(a), px, py, pang, offsets, areas, thetas
            )
            got_cy = by_name["compiled"].best_match(
                a, oracles.shoelace(a), px, py, pang, offsets, areas, thetas
            )
            assert got_py[1:] == got_cy[1:]
            assert got_py[0] == pytest.approx(got_cy[0], rel=1e-9, abs=1e-12)
