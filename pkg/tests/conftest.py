import time

import pytest

from chainfix import index, realization

# filled by test_acceptance.py, printed at the end of the run
ACCEPTANCE_RESULTS = {}


@pytest.fixture(scope="session")
def flagship():
    """Triangle body at eps = 1/4: bundle, chain audits and the four conditions."""
    start = time.perf_counter()
    bundle = realization.build_realization(realization.triangle_body(), "1/4")
    audits = realization.audit_chain_maps(bundle, seed=0)
    conditions = realization.verify_realization_conditions(bundle)
    return bundle, audits, conditions, time.perf_counter() - start


@pytest.fixture(scope="session")
def axiom_suite():
    start = time.perf_counter()
    suite = index.property_suite_axioms()
    return suite, time.perf_counter() - start


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, text = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {text}")
