import pytest

from conftest import T0
from tsa.catalog.synthetic import WalkerShell
from tsa.catalog.tle_parser import parse_tle, to_tle_text
from tsa.errors import FormatError


def test_shell_layout():
    shell = WalkerShell("oneweb", planes=6, per_plane=5, inclination=87.9, mean_motion=13.15, epoch=T0,
                        raan_spread=180.0)
    records = shell.records()

    assert shell.size == 30
    assert len(records) == 30
    assert records[0].name == "oneweb-0101"
    assert records[-1].name == "oneweb-0605"
    assert len({r.catalog_number for r in records}) == 30
    assert sorted({r.raan for r in records}) == pytest.approx([0.0, 30.0, 60.0, 90.0, 120.0, 150.0])
    assert records[1].mean_anomaly - records[0].mean_anomaly == pytest.approx(72.0)
    assert all(r.epoch == T0 for r in records)


def test_records_survive_tle_text():
    records = WalkerShell("w", planes=2, per_plane=3, inclination=53.0, mean_motion=15.06, epoch=T0,
                          phasing=1).records()
    parsed = parse_tle(to_tle_text(records))
    assert parsed == records


@pytest.mark.parametrize("kwargs", [
    {"planes": 0},
    {"inclination": 181.0},
    {"mean_motion": 0.0},
    {"eccentricity": 1.0},
])
def test_invalid_shell(kwargs):
    params = dict(constellation_id="x", planes=1, per_plane=1, inclination=50.0, mean_motion=15.0, epoch=T0)
    params.update(kwargs)
    with pytest.raises(FormatError):
        WalkerShell(**params)
