import numpy as np
import pytest

from pdem_spectra import jacobi_es, laguerre_es, qes

# (id, constructor kwargs) for every family used across the suite
ES_CATALOG = [
    ("jacobi-00", jacobi_es, dict(q=1.0, a=0.0, b=0.0)),
    ("jacobi-11", jacobi_es, dict(q=1.0, a=1.0, b=1.0)),
    ("jacobi-1.2-0.8", jacobi_es, dict(q=1.0, a=1.2, b=0.8)),
    ("jacobi-q2", jacobi_es, dict(q=2.0, a=0.3, b=1.7, v0=-1.5)),
    ("laguerre-1", laguerre_es, dict(q=1.0, a=1.0)),
    ("laguerre-q2", laguerre_es, dict(q=2.0, a=0.4, v0=0.7)),
]
QES_CATALOG = [
    ("qes-k1-a-1", qes, dict(q=1.0, a=-1.0, xi=2.0, k=1)),
    ("qes-k1-a-3", qes, dict(q=1.0, a=-3.0, xi=1.0, k=1)),
    ("qes-k2", qes, dict(q=1.0, a=-3.0, xi=1.0, k=2)),
    ("qes-k3", qes, dict(q=1.0, a=-5.0, xi=1.0, k=3)),
]
CATALOG = ES_CATALOG + QES_CATALOG


def build(entry):
    _, ctor, kw = entry
    return ctor(**kw)


def n_levels(fam, es_default=5):
    return es_default if fam.n_levels is None else fam.n_levels


@pytest.fixture(params=CATALOG, ids=[c[0] for c in CATALOG])
def family(request):
    return build(request.param)


@pytest.fixture(params=ES_CATALOG, ids=[c[0] for c in ES_CATALOG])
def es_family(request):
    return build(request.param)


@pytest.fixture(params=QES_CATALOG, ids=[c[0] for c in QES_CATALOG])
def qes_family(request):
    return build(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
