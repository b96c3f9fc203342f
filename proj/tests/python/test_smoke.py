"""Smoke tests for the pm25kit Python bindings."""

import math

import pytest

import pm25kit as pk


def test_version():
    assert pk.__version__ == "0.1.0"


def test_embedded_dataset_lookup():
    ds = pk.embedded_dataset()
    assert len(ds) == 33
    china = ds.find("China")
    assert china is not None
    assert china.pm25.get(2023) == pytest.approx(42.2)
    assert ds.find("Maldives").pm25.get(2023) is None


def test_parse_number():
    assert pk.parse_number("1,234,567") == pytest.approx(1234567.0)
    assert pk.parse_number("") is None


def test_stats():
    assert pk.pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    z = pk.standardize([1.0, 2.0, 3.0])
    assert z[1] == pytest.approx(0.0)

    metrics = pk.evaluate_forecasts([3.0, 5.0], [1.0, 2.0])
    assert metrics["mae"] == pytest.approx(2.5)
    assert metrics["mse"] == pytest.approx(6.5)
    assert metrics["r_squared"] == pytest.approx(-5.5)

    with pytest.raises(ValueError):
        pk.pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])


def test_clustering():
    points = [("a", 1.0), ("b", 2.0), ("c", 10.0), ("d", 11.0), ("e", 30.0), ("f", 31.0)]
    model = pk.label_clusters(pk.kmeans_fit(points, 3, seed=0))
    assert model.wcss == pytest.approx(1.5)
    high = model.assignments["f"]
    assert model.labels[high] == pk.PollutionLevel.High

    groups = [("g%d" % i, base + off) for i, (base, off) in enumerate(
        (b, o) for b in (0.0, 50.0, 100.0) for o in (-0.1, 0.0, 0.1))]
    curve = pk.elbow_curve(groups, k_max=6, seed=0)
    assert curve.knee == 3


def test_arima_round_trip():
    series = [10.0, 12.0, 11.0, 13.0, 15.0]
    model = pk.fit(series, pk.ArimaOrder(0, 1, 0))
    assert model.css == pytest.approx(13.0)
    assert pk.forecast(model, 1)[0] == pytest.approx(15.0)

    order = pk.select_order([10.0, 11.0, 12.0, 13.0, 14.0])
    assert order.drift
    drifted = pk.fit([10.0, 11.0, 12.0, 13.0, 14.0], order)
    assert pk.forecast(drifted, 2) == pytest.approx([15.0, 16.0])

    diffs = pk.difference(series, 1)
    assert pk.integrate(diffs, series[0]) == pytest.approx(series)


def test_studies_on_embedded():
    ds = pk.embedded_dataset()
    table = pk.regional_trends(ds)
    east = table[pk.Region.EastAsia][2023]
    assert east.mean == pytest.approx(196.6 / 7.0)
    assert east.count == 7

    study = pk.cluster_study(ds, k=3, k_max=8, seed=0)
    assert study["knee"] == 3
    assert len(study["model"].assignments) == 24

    with pytest.raises(ValueError):
        pk.corr_density_pm25(ds)

    with pytest.raises(ValueError):
        pk.forecast_study(ds, train_end=2022, test_year=2023)


def test_dataset_csv_round_trip():
    ds = pk.embedded_dataset()
    csv = pk.write_dataset_csv(ds)
    reloaded = pk.load_dataset_string(csv, pk.FillPolicy.Exclude)
    assert len(reloaded) == len(ds)
    assert pk.dataset_hash(reloaded) == pk.dataset_hash(ds)
