import cmath
import math

import pytest

from diskflow import catalog
from diskflow.errors import UnknownCatalogIdError
from diskflow.expr import evaluate, parse


def test_default_ids_resolve():
    for cid in catalog.DEFAULT_IDS:
        entry = catalog.get(cid)
        assert entry.id == cid
        parse(entry.f_text)


def test_unknown_id_raises():
    with pytest.raises(UnknownCatalogIdError):
        catalog.get("nonsense")
    with pytest.raises(UnknownCatalogIdError):
        catalog.get("power(oops)")


def test_parametrized_families():
    entry = catalog.get("parabolic-auto(2.5)")
    assert evaluate(parse(entry.f_text), 0j) == pytest.approx(2.5j)
    entry = catalog.get("hyperbolic-auto(1,0.5)")
    assert entry.truth["beta"] == pytest.approx(2.0)


def test_quadrant_truth():
    truth = catalog.get("quadrant").truth
    assert truth["alpha"] == 0.5
    assert truth["mu"] == pytest.approx(cmath.exp(0.25j * math.pi) / math.sqrt(2))


def test_power_truth_alpha():
    assert catalog.get("power(0.5,1)").truth["alpha"] == pytest.approx(1.5)


def test_bfid_truth_counts():
    assert catalog.get("bfid-par").truth["bfid_counts"] == {"p": 2, "h": 1}
    assert catalog.get("bfid-hyp").truth["bfid_counts"] == {"p": 0, "h": 1}


def test_power_admissible_region():
    assert catalog.power_admissible(0.5, 1.0)
    assert not catalog.power_admissible(1.5, 1.0)
    assert not catalog.power_admissible(-1.0, 1.0)
    assert catalog.power_admissible(0.0, 1j)  # boundary |arg mu| = pi/2
    assert not catalog.power_admissible(0.5, 1j)
    # negative K narrows the angular budget the same way
    assert not catalog.power_admissible(-0.5, cmath.exp(1.0j))


def test_consistency_error_small():
    entry = catalog.get("bfid-par")
    assert catalog.consistency_error(entry) < 1e-10


def test_validate_all_passes():
    report = catalog.validate_all()
    assert report["ok"], report
