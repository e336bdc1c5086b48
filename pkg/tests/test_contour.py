import numpy as np
import pytest

from afcmemory.contour import extract_contours


def _sorted_points(contours):
    return sorted(sorted(map(tuple, np.round(c.points, 12).tolist())) for c in contours)


def test_planar_ramp_gives_straight_line():
    x = np.arange(1.0, 61.0)
    y = np.arange(2.0, 15.5, 0.5)
    field = np.repeat(x[:, None], len(y), axis=1)
    out = extract_contours(field, [30.0], x, y, name="ramp")
    assert len(out) == 1
    c = out[0]
    assert not c.closed and c.field == "ramp" and c.level == 30.0
    assert np.allclose(c.points[:, 0], 30.0)
    assert sorted(c.points[:, 1]) == pytest.approx(list(y))


def test_ramp_between_nodes_interpolates():
    x = np.array([0.0, 1.0, 2.0])
    field = np.repeat(np.array([0.0, 10.0, 20.0])[:, None], 3, axis=1)
    (c,) = extract_contours(field, [12.5], x, x)
    assert np.allclose(c.points[:, 0], 1.25)


def test_constant_field_has_no_contours():
    assert extract_contours(np.full((4, 5), 2.0), [1.0, 3.0]) == []


def test_saddle_average_rule_joins_high_diagonal():
    field = np.array([[1.0, 0.0], [0.0, 1.0]])
    out = extract_contours(field, [0.5])
    assert len(out) == 2
    # corner average 0.5 >= level: the low corners (1,0) and (0,1) are cut off
    assert _sorted_points(out) == sorted([[(0.5, 0.0), (1.0, 0.5)], [(0.0, 0.5), (0.5, 1.0)]])


def test_saddle_average_rule_joins_low_diagonal():
    field = np.array([[1.0, 0.0], [0.0, 1.0]])
    out = extract_contours(field, [0.6])
    assert len(out) == 2
    # corner average 0.5 < level: the high corners (0,0) and (1,1) are cut off
    assert _sorted_points(out) == sorted([[(0.0, 0.4), (0.4, 0.0)], [(0.6, 1.0), (1.0, 0.6)]])


def test_closed_loop_around_peak():
    t = np.linspace(-1, 1, 41)
    field = np.exp(-(t[:, None] ** 2 + t[None, :] ** 2))
    (c,) = extract_contours(field, [0.5], t, t)
    assert c.closed
    r = np.hypot(c.points[:, 0], c.points[:, 1])
    assert np.allclose(r, np.sqrt(np.log(2)), atol=2e-3)


def test_vertices_interpolate_between_straddling_cells():
    rng = np.random.default_rng(3)
    x = np.linspace(0, 1, 9)
    y = np.linspace(0, 2, 7)
    field = rng.random((9, 7))
    for c in extract_contours(field, [0.3, 0.5, 0.8], x, y):
        for px, py in c.points:
            i = np.searchsorted(x, px - 1e-12)
            j = np.searchsorted(y, py - 1e-12)
            if np.isclose(x[min(i, 8)], px):
                i = min(i, 8)
                j0 = max(j - 1, 0)
                a, b = field[i, j0], field[i, j0 + 1]
            else:
                assert np.isclose(y[min(j, 6)], py)
                j = min(j, 6)
                i0 = max(i - 1, 0)
                a, b = field[i0, j], field[i0 + 1, j]
            assert min(a, b) <= c.level <= max(a, b)


def test_input_validation():
    with pytest.raises(ValueError):
        extract_contours(np.ones(5), [0.5])
    with pytest.raises(ValueError):
        extract_contours(np.array([[1.0, np.nan], [0.0, 1.0]]), [0.5])


def test_to_dict_is_plain():
    (c,) = extract_contours(np.array([[0.0, 0.0], [1.0, 1.0]]), [0.5])
    d = c.to_dict()
    assert d["level"] == 0.5 and all(isinstance(v, float) for p in d["points"] for v in p)
