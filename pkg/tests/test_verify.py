"""Verification suites and the lattice occupation oracle."""

import itertools

import pytest

from ssms import (
    box_occupation,
    conditional_marginal,
    grid_graph,
    hardcore,
    hardcore_box_bracket,
    run_suite,
)
from ssms.errors import UnknownSuiteError
from ssms.verify import (
    NONTERMINATING_CELLS,
    SUITES,
    acceptance_matrix,
    coupling_suite,
    distribution_suite,
    exact_joint_distribution,
    lattice_occupation_check,
    lemma1_suite,
    runtime_suite,
    sample_joint_counts,
)

# Transfer-matrix occupation values for the centered 7x7 box, frozen after
# they were cross-checked against direct enumeration on small boxes.
BRACKET_05 = (0.17195826573181974, 0.17421830874864389)
BRACKET_03 = (0.13460192903783827, 0.13544220013516525)


def grid_center_occupation(lam, rows, cols):
    """Occupation odds of the central cell by direct enumeration."""
    g = grid_graph(rows, cols)
    center = ((rows - 1) // 2) * cols + (cols + 1) // 2
    mu = conditional_marginal(hardcore(lam), g, center, {}, list(g.vertices()))
    return float(mu[1])


def test_box_occupation_matches_enumeration():
    for rows, cols in ((3, 3), (3, 5), (5, 3)):
        for lam in (0.4, 1.0):
            assert box_occupation(lam, rows, cols) == pytest.approx(
                grid_center_occupation(lam, rows, cols), abs=1e-12
            )


def test_box_occupation_single_site():
    for lam in (0.25, 1.0, 2.0):
        assert box_occupation(lam, 1, 1) == pytest.approx(lam / (1 + lam))


def test_bracket_is_ordered_and_frozen():
    lo, hi = hardcore_box_bracket(0.5)
    assert lo < hi
    assert (lo, hi) == pytest.approx(BRACKET_05, abs=1e-12)
    assert hardcore_box_bracket(0.3) == pytest.approx(BRACKET_03, abs=1e-12)


def test_bracket_interpretation():
    # pinning the ring of a 7x7 box occupied empties the frame, which is the
    # same conditional law as a free-standing 5x5 box; an unoccupied ring is
    # vacuous and leaves the free 7x7 law
    lo, hi = hardcore_box_bracket(0.5, size=7)
    assert hi == pytest.approx(box_occupation(0.5, 5, 5), abs=1e-12)
    assert lo == pytest.approx(box_occupation(0.5, 7, 7), abs=1e-12)


def test_nonterminating_cells_are_matrix_labels():
    labels = {cell.label for cell in acceptance_matrix()}
    assert NONTERMINATING_CELLS < labels
    assert len(labels) == 18


def test_exact_joint_distribution_normalizes():
    from ssms import cycle_graph, coloring

    system, graph = coloring(3), cycle_graph(4)
    order, probs = exact_joint_distribution(system, graph)
    assert len(order) == 4
    assert probs.sum() == pytest.approx(1.0)
    # C4 has (3-1)^4 + (3-1) = 18 proper 3-colorings, all equally likely
    assert (probs > 0).sum() == 18
    assert probs.max() == pytest.approx(1 / 18)


def test_sample_joint_counts_reproducible():
    from ssms import path_graph

    a = sample_joint_counts(hardcore(1.0), path_graph(3), 1, 50, seed=3)
    b = sample_joint_counts(hardcore(1.0), path_graph(3), 1, 50, seed=3)
    assert (a == b).all()
    assert a.sum() == 50


def test_distribution_suite_smoke():
    res = distribution_suite(seed=1, samples=4000, nonterminating_budget=20_000)
    assert res.passed
    assert res.name == "distribution"
    rows = dict(res.rows)
    assert len([k for k in rows if k.endswith(".p_value")]) == 14
    confirmed = [
        k for k, v in rows.items() if v == "nonterminating-confirmed"
    ]
    assert len(confirmed) == 4
    for key in confirmed:
        assert key[: -len(".status")] in NONTERMINATING_CELLS


def test_lemma1_suite_smoke():
    res = lemma1_suite(seed=1, instances=20)
    assert res.passed
    rows = dict(res.rows)
    assert rows["violations"] == "0"
    for family in ("hardcore", "ising", "coloring"):
        assert rows[f"{family}.instances"] == "20"
        assert float(rows[f"{family}.min_slack"]) >= 0


def test_runtime_suite_smoke():
    res = runtime_suite(seed=1, runs=1200)
    assert res.passed
    rows = dict(res.rows)
    assert float(rows["hardcore02.limit"]) == pytest.approx(2.0)
    assert float(rows["hardcore02.margin"]) >= 0
    trips = [v for k, v in rows.items() if k.endswith(".budget_trips")]
    assert trips and all(v == "0" for v in trips)


def test_coupling_suite_smoke():
    res = coupling_suite(seed=1, seeds=50, h=10)
    assert res.passed
    rows = dict(res.rows)
    subsets = [k for k in rows if k.endswith(".subset")]
    assert len(subsets) == 6
    for key in subsets:
        stem = key[: -len(".subset")]
        assert rows[stem + ".equal"] == rows[key]


def test_run_suite_dispatch():
    assert set(SUITES) == {"distribution", "lemma1", "runtime", "coupling"}
    with pytest.raises(UnknownSuiteError):
        run_suite("spectral")


def test_suite_csv_shape():
    res = lemma1_suite(seed=1, instances=5)
    text = res.to_csv()
    lines = text.strip().splitlines()
    assert lines[0] == "metric,value"
    assert lines[-1] == f"lemma1.passed,{int(res.passed)}"


def test_lattice_occupation_check_subcritical():
    res = lattice_occupation_check(0.3, 1, 800, seed=5)
    assert res.passed
    assert res.samples == 800
    assert (res.lo, res.hi) == pytest.approx(BRACKET_03, abs=1e-12)
    assert res.lo - 3 * res.std_error <= res.frequency <= res.hi + 3 * res.std_error
