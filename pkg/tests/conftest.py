import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile("default")

ACCEPTANCE = {
    1: "Secrecy n=4, l=2: rate 1, 4 collectors decode, I(S;view) = 0, < 5 s",
    2: "Resilience n=4, b=1: lying node gives 5/9 errors, exhaustive sweep 0 failures, < 10 s",
    3: "Hash shield n=5, l=b=1: rate 5, block agreement pattern, 10^4-trial failure rate <= 2/q, < 60 s",
    4: "Capacity formulas: golden grid n = 4..8 and asymptotic ratios within 1e-3",
    5: "Min-cut: repair-chain identity for n <= 6 and two-repair cut = 5",
    6: "Nested MDS: theta <= 12 minors, punctures stay MDS, d_min = M - R + 1",
    7: "Secure bit: bit 0 exact under all attacks, bit-1 false zero <= 2 C(n,b)/q^(R-E)",
    8: "Expurgation: 10^3 random scenarios, suspects <= 2b and contain culprits",
    9: "Determinism: identical seeds give byte-identical reports",
}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n): acceptance criterion n")
    config._acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when not in ("setup", "call"):
        return
    n = marker.args[0]
    results = item.config._acceptance
    status, props = results.get(n, ("PASS", {}))
    props = {**props, **dict(item.user_properties)}
    if rep.failed:
        results[n] = ("FAIL", props)
    elif rep.when == "call" and rep.passed:
        results[n] = (status, props)


def pytest_terminal_summary(terminalreporter, config):
    results = getattr(config, "_acceptance", {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n, text in ACCEPTANCE.items():
        status, props = results.get(n, ("NOT RUN", {}))
        extra = ", ".join(f"{k}={v}" for k, v in sorted(props.items()))
        terminalreporter.write_line(f"[{status}] {n}. {text}" + (f"  ({extra})" if extra else ""))
