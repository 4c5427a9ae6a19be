import json

import pytest

from cdtwist import bench
from cdtwist.bench import bench_basis_products, bench_element_mul, sample_pairs


@pytest.fixture(autouse=True)
def short_timing(monkeypatch):
    monkeypatch.setattr(bench, "MIN_OPS", 200)
    monkeypatch.setattr(bench, "MIN_SECONDS", 0.05)


def test_basis_report():
    report = bench_basis_products(10, 500, seed=1)
    assert [c.strategy for c in report.cases] == ["closed-form", "oracle"]
    for c in report.cases:
        assert c.dim_exp == 10 and c.ops >= 200 and c.elapsed_ns > 0
    assert report.seed == 1


def test_trivial_dimension():
    report = bench_basis_products(1, 10, seed=0)
    assert all(c.ops >= 10 for c in report.cases)


def test_seeded_sampling_repeats():
    assert sample_pairs(16, 100, 5) == sample_pairs(16, 100, 5)
    assert sample_pairs(16, 100, 5) != sample_pairs(16, 100, 6)


def test_env_seed(monkeypatch):
    monkeypatch.setenv("CDTWIST_SEED", "99")
    assert bench_basis_products(4, 10).seed == 99
    monkeypatch.delenv("CDTWIST_SEED")
    assert bench_basis_products(4, 10).seed == bench.DEFAULT_SEED


@pytest.mark.parametrize("args", [(0, 10), (21, 10), (5, 0)])
def test_basis_bounds(args):
    with pytest.raises(ValueError):
        bench_basis_products(*args)


def test_verification_precedes_timing(monkeypatch):
    monkeypatch.setattr(bench, "_oracle", lambda p, q: None)
    with pytest.raises(bench.VerificationError):
        bench_basis_products(4, 10)


@pytest.mark.parametrize("exp,terms,samples", [(10, 4, 100), (2, 1, 10), (14, 8, 20)])
def test_element_report(exp, terms, samples):
    report = bench_element_mul(exp, terms, samples, seed=3)
    assert [c.strategy for c in report.cases] == ["twist", "doubling"]
    assert all(c.terms == terms and c.ops >= samples for c in report.cases)


@pytest.mark.parametrize("args", [(15, 1, 1), (2, 5, 1), (2, 0, 1), (2, 1, 0)])
def test_element_bounds(args):
    with pytest.raises(ValueError):
        bench_element_mul(*args)


def test_text_and_json_formats():
    report = bench_basis_products(6, 50, seed=2)
    lines = report.to_text().splitlines()
    assert lines[1] == "strategy,dim_exp,terms,ops,elapsed_ns"
    assert lines[2].startswith("closed-form,6,1,")
    doc = json.loads(report.to_json())
    assert doc["seed"] == 2
    assert set(doc["cases"][0]) == {"strategy", "dim_exp", "terms", "ops", "elapsed_ns"}


def test_parallel_workers():
    report = bench_basis_products(8, 400, seed=4, workers=2)
    assert all(c.ops >= 400 for c in report.cases)
