import json

import pytest

from satmetric.errors import DefinitionError
from satmetric.rootcause import (
    Contribution,
    branch_magnitudes,
    build_fishbone,
    dissatisfaction_contributions,
    pareto,
    serialize_fishbone,
)
from satmetric.servqual import item_gaps
from satmetric import xyz


@pytest.fixture(scope="module")
def xyz_contributions():
    gaps = item_gaps(xyz.expectation_descriptives(), xyz.perception_descriptives())
    return dissatisfaction_contributions(gaps, xyz.xyz_weights(), xyz.xyz_instrument())


class TestContributions:
    def test_xyz_has_nine_contributions(self, xyz_contributions):
        assert len(xyz_contributions) == 9
        assert {c.item_id for c in xyz_contributions} == {3, 4, 5, 7, 8, 9, 12, 14, 16}

    def test_magnitudes_from_independent_recomputation(self, xyz_contributions):
        by_id = {c.item_id: c.magnitude for c in xyz_contributions}
        # (91/81) * (1820/82) and (32/81) * (720/82), exact-fraction arithmetic
        assert by_id[4] == pytest.approx(24.93526046371575, abs=1e-9)
        assert by_id[16] == pytest.approx(3.4688346883468837, abs=1e-9)
        assert by_id[7] == pytest.approx(18.69918699186992, abs=1e-9)

    def test_all_nonnegative_gaps_give_empty_list(self):
        expect = xyz.expectation_descriptives()
        gaps = item_gaps(expect, expect)
        assert dissatisfaction_contributions(gaps, xyz.xyz_weights(), xyz.xyz_instrument()) == []

    def test_unweighted_mode_uses_plain_gap(self):
        gaps = item_gaps(xyz.expectation_descriptives(), xyz.perception_descriptives())
        unweighted = dissatisfaction_contributions(
            gaps, xyz.xyz_weights(), xyz.xyz_instrument(), weighted=False)
        by_id = {c.item_id: c.magnitude for c in unweighted}
        assert by_id[4] == pytest.approx(91 / 81, abs=1e-12)


class TestPareto:
    def test_xyz_ranking_order(self, xyz_contributions):
        table = pareto(xyz_contributions)
        assert [row.item_id for row in table.rows] == [4, 3, 7, 5, 8, 14, 12, 9, 16]

    def test_cumulative_percentages(self, xyz_contributions):
        table = pareto(xyz_contributions)
        pcts = [row.cumulative_pct for row in table.rows]
        assert all(b >= a for a, b in zip(pcts, pcts[1:]))
        assert pcts[-1] == pytest.approx(100.0, abs=1e-9)
        total = sum(c.magnitude for c in xyz_contributions)
        assert table.total_magnitude == pytest.approx(total, abs=0)
        assert table.rows[-1].cumulative == pytest.approx(total, abs=0)

    def test_single_contribution(self):
        table = pareto([Contribution(item_id=1, label="only", magnitude=2.5)])
        assert table.rows[0].cumulative_pct == 100.0
        assert table.vital_few_cutoff == 1

    def test_equal_magnitudes_tie_break_on_item_id(self):
        contribs = [Contribution(item_id=9, label="b", magnitude=1.0),
                    Contribution(item_id=2, label="a", magnitude=1.0)]
        table = pareto(contribs)
        assert [row.item_id for row in table.rows] == [2, 9]

    def test_empty_list_yields_empty_marker(self):
        table = pareto([])
        assert table.is_empty
        assert table.rows == ()
        assert table.vital_few_cutoff is None

    def test_cutoff_definition_under_threshold_sweep(self, xyz_contributions):
        previous = 0
        for threshold in (10, 25, 50, 80, 95, 100):
            table = pareto(xyz_contributions, threshold_pct=threshold)
            rows = table.rows
            cutoff = table.vital_few_cutoff
            assert rows[cutoff - 1].cumulative_pct >= threshold
            if cutoff > 1:
                assert rows[cutoff - 2].cumulative_pct < threshold
            assert cutoff >= previous  # raising threshold never moves it earlier
            previous = cutoff

    def test_idempotent_on_sorted_input(self, xyz_contributions):
        first = pareto(xyz_contributions)
        again = pareto([Contribution(r.item_id, r.label, r.magnitude) for r in first.rows])
        assert [(r.item_id, r.magnitude, r.cumulative_pct) for r in first.rows] == \
               [(r.item_id, r.magnitude, r.cumulative_pct) for r in again.rows]

    def test_bad_threshold_rejected(self):
        with pytest.raises(DefinitionError, match="threshold"):
            pareto([], threshold_pct=0)
        with pytest.raises(DefinitionError, match="threshold"):
            pareto([], threshold_pct=101)


class TestFishbone:
    def test_xyz_example_has_five_branches(self):
        tree = xyz.load_xyz_fishbone()
        assert [b.name for b in tree.branches] == [
            "staff social skills",
            "staff technical skills",
            "staff response",
            "physical environment",
            "service cost",
        ]
        assert tree.effect

    def test_empty_branches_is_valid(self):
        tree = build_fishbone({"effect": "late deliveries", "branches": []})
        assert tree.branches == ()

    def test_duplicate_branch_names_rejected(self):
        with pytest.raises(DefinitionError, match="duplicate branch name 'cost'"):
            build_fishbone({"effect": "x", "branches": [{"name": "cost"}, {"name": "cost"}]})

    def test_empty_effect_rejected(self):
        with pytest.raises(DefinitionError, match="effect"):
            build_fishbone({"effect": "  ", "branches": []})

    def test_depth_limit_enforced(self):
        too_deep = {"effect": "x", "branches": [{
            "name": "a",
            "causes": [{"text": "1", "causes": [{"text": "2", "causes": [{"text": "3"}]}]}],
        }]}
        with pytest.raises(DefinitionError, match="deeper than"):
            build_fishbone(too_deep)

    def test_round_trip(self):
        tree = xyz.load_xyz_fishbone()
        doc = serialize_fishbone(tree)
        assert build_fishbone(json.loads(json.dumps(doc))) == tree

    def test_branch_magnitudes_cover_all_contributions(self, xyz_contributions):
        tree = xyz.load_xyz_fishbone()
        sums = branch_magnitudes(tree, xyz_contributions)
        assert set(sums) == {b.name for b in tree.branches}
        assert sum(sums.values()) == pytest.approx(
            sum(c.magnitude for c in xyz_contributions), rel=1e-12)
