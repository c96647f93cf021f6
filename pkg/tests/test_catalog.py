import pytest

from qvir import catalog
from qvir.coeffield import ParamPoint
from qvir.errors import DegenerateParameterError, UsageError
from qvir.series import DegreeWindow


def test_catalog_covers_every_identity_once():
    expected = {
        "theorem20", "toda21", "commutator22", "wrep24",
        "macdonald_recurrence", "macdonald_solution", "halves_v1", "halves_v2",
        "genfunc", "qseries", "qsaalschutz", "formula_gamma", "qbinomial",
        "phi_functional",
    }
    assert set(catalog.CATALOG) == expected


def test_unknown_identity_and_mutation_are_usage_errors():
    with pytest.raises(UsageError):
        catalog.run_identity("nope")
    with pytest.raises(UsageError):
        catalog.run_identity("qsaalschutz", mutate="nope")


def test_small_symbolic_identities_pass():
    assert catalog.run_qbinomial(order=3).passed
    assert catalog.run_phi_functional().passed
    assert catalog.run_formula_gamma(ks=(0,)).passed


def test_toda21_runner():
    out = catalog.run_toda21(window=DegreeWindow(3, -3, 3), limit_lmax=2, seed=5)
    assert out.passed
    assert out.details["equation_pass"] and out.details["limit_matches_solver"]


def test_draw_points_are_seeded_and_valid():
    import random

    a = [catalog.draw_param_point(random.Random(3)) for _ in range(2)]
    b = [catalog.draw_param_point(random.Random(3)) for _ in range(2)]
    assert [p.substitutions() for p in a] == [p.substitutions() for p in b]
    for p in a:
        for name in ("u", "s", "Q", "T1", "T2", "T3", "T4"):
            val = p.substitutions()[name]
            assert abs(val.numerator) <= 64 and val.denominator <= 64


def test_retry_budget_exhaustion(monkeypatch):
    def always_degenerate(point):
        raise DegenerateParameterError("synthetic")

    with pytest.raises(DegenerateParameterError):
        catalog._with_retries(1, 0, 3, always_degenerate)


def test_cli_maps_exhausted_retries_to_exit_3(monkeypatch, capsys):
    from qvir import cli

    def bad_draw(rng):
        return ParamPoint.numeric(u="2/5", s="3/7", Q=1,
                                  T1="1/2", T2="1/3", T3="1/5", T4="1/7")

    monkeypatch.setattr(catalog, "draw_param_point", bad_draw)
    code = cli.main(["verify", "--identity", "theorem20", "--lmax", "1",
                     "--xmin", "-1", "--xmax", "1", "--trials", "1"])
    assert code == 3
