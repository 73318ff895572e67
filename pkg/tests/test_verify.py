import pytest

from moebiuskit import verify


@pytest.mark.parametrize("suite", ["line", "bound"])
def test_fast_suites_pass_and_repeat(suite):
    a = verify.report(verify.run(suite, 3), suite, 3)
    b = verify.report(verify.run(suite, 3), suite, 3)
    assert a == b
    assert "[FAIL]" not in a
    assert a.splitlines()[0] == f"# moebiuskit 0.1.0 verify suite={suite} seed=3"


def test_seed_changes_samples():
    a = verify.run("line", 1)
    b = verify.run("line", 2)
    assert [r.detail for r in a] != [r.detail for r in b]


def test_unknown_suite():
    with pytest.raises(KeyError):
        verify.run("nope", 0)


def test_result_line_format():
    r = verify.PropertyResult("bound", "example", False, 4, "x")
    assert r.line() == "[FAIL] bound: example (n=4)  x"
