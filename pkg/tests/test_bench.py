import math

import pytest

from qmc_american import Method
from qmc_american.bench import SERIAL_LANES, price_option, price_serial, run_benchmark, speedups


def test_minimal_sweep(reference_spec):
    recs = run_benchmark(reference_spec, 10, [10], [1], seed=42)
    assert len(recs) == 1
    r = recs[0]
    assert r.ok and r.elapsed > 0 and math.isfinite(r.price)
    assert (r.n_paths, r.lanes, r.m) == (10, 1, 10)


def test_baseline_added_and_prices_identical(reference_spec):
    recs = run_benchmark(reference_spec, 5, [3000, 20_000], [2, 4], seed=3, chunk=1024)
    assert sorted({r.lanes for r in recs}) == [1, 2, 4]
    for n in (3000, 20_000):
        prices = {r.price for r in recs if r.n_paths == n}
        assert len(prices) == 1
    assert set(speedups(recs)) == {(n, k) for n in (3000, 20_000) for k in (1, 2, 4)}


def test_chunk_does_not_change_price(reference_spec):
    a = run_benchmark(reference_spec, 5, [10_000], [1], seed=3, chunk=512)
    b = run_benchmark(reference_spec, 5, [10_000], [1], seed=3, chunk=8192)
    assert a[0].price == b[0].price


@pytest.mark.parametrize("method", list(Method))
def test_harness_matches_price(reference_spec, method):
    rec = run_benchmark(reference_spec, 4, [5000], [2], seed=8, method=method, repeats=1)[0]
    direct = price_option(reference_spec, method, m=4, n_paths=5000, seed=8, lanes=1)
    assert rec.price == direct.price


@pytest.mark.parametrize("method", [Method.EUROPEAN_MC, Method.AMERICAN_UB])
def test_serial_matches_parallel(reference_spec, method):
    serial = price_serial(reference_spec, method, m=6, n_paths=3000, seed=12)
    parallel = price_option(reference_spec, method, m=6, n_paths=3000, seed=12, lanes=4, chunk=700)
    assert serial.price == parallel.price
    assert serial.std_error == parallel.std_error
    assert serial.lanes == SERIAL_LANES


def test_serial_rows_in_sweep(reference_spec):
    recs = run_benchmark(reference_spec, 3, [500], [1], seed=1, serial=True, repeats=1)
    assert [r.lanes for r in recs] == [SERIAL_LANES, 1]
    assert recs[0].price == recs[1].price


def test_failures_recorded_not_fatal(reference_spec):
    put = reference_spec.replace(kind="put")
    recs = run_benchmark(put, 3, [100], [1, 2], seed=1, repeats=1)
    assert len(recs) == 2
    assert all(not r.ok and "calls only" in r.error for r in recs)


def test_empty_lists_rejected(reference_spec):
    with pytest.raises(ValueError):
        run_benchmark(reference_spec, 3, [], [1], seed=1)
    with pytest.raises(ValueError):
        run_benchmark(reference_spec, 3, [10], [], seed=1)
