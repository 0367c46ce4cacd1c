import math

import numpy as np
import pytest

from arimamerge import (
    ArimaModel,
    InconsistentColumnsError,
    ModelSpec,
    Series,
    SuppressionPolicy,
    build_merge_tree,
    count_suppression_events,
    message_cost,
    average_merge,
    percentage_error,
    run_pipeline,
    should_transmit,
)

INF = SuppressionPolicy(math.inf)


def ar(p, constant=10.0, weight=1):
    return ArimaModel(ModelSpec(p), constant=constant,
                      ar_coeffs=(0.1,) * p, weight=weight)


class TestSuppression:
    def test_no_change_never_transmits(self):
        for beta in (0.0, 1.0, math.inf):
            assert not should_transmit(10.0, 10.0, SuppressionPolicy(beta))

    def test_outside_band(self):
        assert should_transmit(10.0, 12.0, SuppressionPolicy(1.0))

    def test_boundary_is_inside(self):
        assert not should_transmit(10.0, 11.0, SuppressionPolicy(1.0))

    def test_negative_beta_rejected(self):
        with pytest.raises(ValueError):
            SuppressionPolicy(-0.1)

    def test_event_count_resets_reference(self):
        # last-sent updates on each transmission
        values = [0.0, 0.6, 1.2, 1.3, 5.0]
        assert count_suppression_events(values, SuppressionPolicy(1.0)) == 2

    def test_fixture_event_counts(self, example_readings):
        totals = {
            0.0: 144, 0.25: 122, 0.5: 101, 1.0: 34, 2.0: 12, 4.0: 1, math.inf: 0,
        }
        for beta, expected in totals.items():
            total = sum(
                count_suppression_events(s.values, SuppressionPolicy(beta))
                for s in example_readings
            )
            assert total == expected, beta

    def test_fixture_monotone_in_beta(self, example_readings):
        betas = [0.0, 0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 8.0, math.inf]
        for s in example_readings:
            counts = [
                count_suppression_events(s.values, SuppressionPolicy(b)) for b in betas
            ]
            assert counts == sorted(counts, reverse=True)


class TestMessageCost:
    def test_leaf_ar3(self):
        assert message_cost(ar(3)) == 7

    def test_leaf_ar1(self):
        assert message_cost(ar(1)) == 5

    def test_merged_ar3(self):
        mm = average_merge(ar(3), ar(3))
        assert message_cost(mm) == 9


class TestPercentageError:
    def test_root_reference_value(self, example_models):
        models = [example_models[f"Node{i}"] for i in range(1, 17)]
        tree = build_merge_tree(models, ids=list(example_models))
        pct = percentage_error(48.9589, tree.root, example_models)
        assert pct == pytest.approx(53.38, abs=0.05)

    def test_first_pair_reference_value(self, example_models):
        models = [example_models[f"Node{i}"] for i in range(1, 17)]
        tree = build_merge_tree(models, ids=list(example_models))
        pct = percentage_error(2.4219, tree.levels[1][0], example_models)
        assert pct == pytest.approx(2.641, abs=1e-3)

    def test_zero_error(self, example_models):
        models = [example_models[f"Node{i}"] for i in range(1, 17)]
        tree = build_merge_tree(models, ids=list(example_models))
        assert percentage_error(0.0, tree.root, example_models) == 0.0


class TestPipeline:
    def test_example_fixture_message_accounting(self, example_readings, example_models):
        report = run_pipeline(
            example_readings, ModelSpec(3), policy=INF, leaf_models=example_models
        )
        assert report.messages_raw == 160
        # 16 leaves at 7 values + 15 merged nodes at 9 values, no retransmissions
        assert report.messages_model == 16 * 7 + 15 * 9 == 247
        assert report.suppression_events == 0
        assert [len(lvl.rows) for lvl in report.levels] == [16, 8, 4, 2, 1]

    def test_example_fixture_beta_accounting(self, example_readings, example_models):
        report = run_pipeline(
            example_readings, ModelSpec(3), policy=SuppressionPolicy(0.5),
            leaf_models=example_models,
        )
        assert report.suppression_events == 101
        assert report.messages_model == 247 + 101

    def test_merged_rows_match_plain_averaging(self, example_readings, example_models):
        report = run_pipeline(
            example_readings, ModelSpec(3), policy=INF, leaf_models=example_models
        )
        row = report.levels[1].rows[0]
        assert row.node_ids == ("Node1", "Node2")
        assert row.constant == pytest.approx(93.6986, abs=1e-9)
        np.testing.assert_allclose(row.ar_coeffs, (0.58725, 0.036, -0.21665), atol=1e-9)
        assert row.weight == 2

    def test_report_arithmetic_invariant(self, example_readings, example_models):
        report = run_pipeline(
            example_readings, ModelSpec(3), policy=INF, leaf_models=example_models
        )
        for lvl in report.levels:
            for row in lvl.rows:
                assert row.error_percent == 100.0 * row.error_value / row.reference_used

    def test_level_errors_grow_toward_root(self, example_readings, example_models):
        report = run_pipeline(
            example_readings, ModelSpec(3), policy=INF, leaf_models=example_models
        )
        maxes = [max(r.error_value for r in lvl.rows) for lvl in report.levels]
        assert all(a <= b for a, b in zip(maxes[1:], maxes[2:]))

    def test_fitted_leaves_when_no_models_given(self, example_readings):
        report = run_pipeline(example_readings[:4], ModelSpec(3), policy=INF)
        assert [len(lvl.rows) for lvl in report.levels] == [4, 2, 1]
        leaf0 = report.levels[0].rows[0]
        assert leaf0.constant == pytest.approx(95.52297, abs=1e-6)

    def test_single_column(self):
        s = Series("solo", (1.0, 2.0, 3.0, 4.0))
        report = run_pipeline([s], ModelSpec(1), policy=INF)
        assert len(report.levels) == 1
        assert report.messages_raw == 4
        assert report.messages_model == 5  # one AR(1) leaf, no retransmissions
        assert report.suppression_events == 0

    def test_ragged_columns_rejected(self):
        a = Series("a", (1.0, 2.0, 3.0))
        b = Series("b", (1.0, 2.0))
        with pytest.raises(InconsistentColumnsError):
            run_pipeline([a, b], ModelSpec(1), policy=INF)

    def test_savings_once_enough_timesteps(self, example_models):
        # message balance favours the model once N*T exceeds the setup cost
        rng = np.random.default_rng(3)
        t = 20
        readings = [
            Series(f"Node{i}", tuple(100.0 + i + rng.normal(0, 0.5, t).cumsum()))
            for i in range(1, 17)
        ]
        report = run_pipeline(readings, ModelSpec(3), policy=INF)
        assert report.messages_raw == 16 * t == 320
        assert report.messages_model == 247
        assert report.messages_model < report.messages_raw

    def test_suppression_monotone_full_pipeline(self, example_readings, example_models):
        events = []
        for beta in (0.0, 0.5, 1.0, 2.0, math.inf):
            report = run_pipeline(
                example_readings, ModelSpec(3), policy=SuppressionPolicy(beta),
                leaf_models=example_models,
            )
            events.append(report.suppression_events)
        assert events == sorted(events, reverse=True)

    def test_odd_node_count_promotes_through_levels(self, example_readings):
        report = run_pipeline(example_readings[:3], ModelSpec(3), policy=INF)
        assert [len(lvl.rows) for lvl in report.levels] == [3, 2, 1]
        promoted = report.levels[1].rows[1]
        assert promoted.node_ids == ("Node3",)
        assert promoted.weight == 1
        # promoted leaf is costed once: 2 merged nodes, 3 leaves
        assert report.messages_model == 3 * 7 + 2 * 9
        assert report.levels[2].rows[0].weight == 3

    def test_similarity_strategy_runs(self, example_readings, example_models):
        report = run_pipeline(
            example_readings, ModelSpec(3), strategy="similarity", policy=INF,
            leaf_models=example_models,
        )
        assert [len(lvl.rows) for lvl in report.levels] == [16, 8, 4, 2, 1]
        # fixture constants are already sorted, so the grouping matches adjacent
        assert report.levels[1].rows[0].node_ids == ("Node1", "Node2")
