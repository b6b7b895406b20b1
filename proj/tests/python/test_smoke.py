import json
from fractions import Fraction

import numpy as np
import pytest

import distrecon


def squared_distances(points):
    diff = points[:, None, :] - points[None, :, :]
    return (diff**2).sum(axis=-1)


def test_eta_values():
    assert distrecon.eta(1) == 2
    assert distrecon.eta(2) == Fraction(8, 3)
    assert distrecon.eta(3) == Fraction(13, 4)
    assert distrecon.p_star(16, 1) == pytest.approx(np.log(16) / np.log(np.log(16)) / 4)


def test_geometry():
    pts = np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 4.0], [2.0, 5.0]])
    d2 = squared_distances(pts)
    back = distrecon.embed_from_distances(d2, 2)
    assert back.shape == (4, 2)
    assert np.allclose(squared_distances(back), d2)

    assert distrecon.is_independent(d2[:3, :3], 2)
    line = squared_distances(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]))
    assert not distrecon.is_independent(line, 2)

    five = squared_distances(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, 3.0]]))
    five[3, 4] = five[4, 3] = np.nan
    assert distrecon.recover_missing_distance(five, 2) == pytest.approx(5.0)

    collinear = squared_distances(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.5, 1.0], [1.5, -1.0]]))
    collinear[3, 4] = collinear[4, 3] = np.nan
    assert distrecon.recover_missing_distance(collinear, 2) is None


def test_closures_and_gadget():
    k4_minus = [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert (0, 1) in distrecon.closure(4, k4_minus, 4)
    assert (0, 1) not in distrecon.polluted_closure(4, k4_minus, 1, [[2, 3]])

    g = distrecon.build_gadget(2, 3)
    assert g["n"] == 3 * 3 + 2
    root = tuple(g["root"])
    assert root not in g["edges"]
    assert root in distrecon.polluted_closure(g["n"], g["edges"], 2)
    single = distrecon.build_gadget(2, 1)
    blocked = distrecon.polluted_closure(single["n"], single["edges"], 2, single["bases"])
    assert tuple(single["root"]) not in blocked


def test_reconstruct_full_reveal():
    pts = distrecon.generate_points({"kind": "UniformCube", "n": 12, "d": 2, "seed": 3})
    assert pts.shape == (12, 2)
    d2 = squared_distances(pts)
    pairs = [[i, j, float(d2[i, j])] for i in range(12) for j in range(i + 1, 12)]
    report = distrecon.reconstruct({"n": 12, "d": 2, "rounds": [pairs]})
    assert report["index_set"] == list(range(12))
    emb = np.array(report["embedding"])
    assert np.allclose(squared_distances(emb), d2, atol=1e-6)


def test_trials_and_scan():
    config = {
        "schema": 1,
        "seed": 4,
        "trials": 3,
        "instance": {"kind": "UniformCube", "n": 30, "d": 2},
        "reveal": {"p": 1.0},
    }
    reports = distrecon.run_trials(config)
    assert len(reports) == 3
    assert all(r["reconstructible_set_fraction"] == 1.0 for r in reports)
    assert reports == distrecon.run_trials(json.dumps(config))

    scan = {"schema": 1, "seed": 1, "scan": {"d": 1, "n": [20, 40], "p": [0.05, 0.2, 0.6, 1.0], "trials": 10}}
    report, csv, svg = distrecon.scan(scan)
    assert csv.splitlines()[0] == "n,p,trials,success_fraction,stderr"
    assert len(csv.splitlines()) == 9
    assert svg.startswith("<svg")
    assert report["d"] == 1


def test_errors():
    with pytest.raises(distrecon.Error, match="schema"):
        distrecon.run_trials({"trials": 1})
    with pytest.raises(distrecon.Error):
        distrecon.build_gadget(0, 1)
