import numpy as np
import pytest

import mdboost.training as training_mod
from mdboost import (
    Dataset,
    Ensemble,
    MDBoostError,
    Stump,
    TrainParams,
    best_stump,
    load_ensemble,
    predict,
    predict_many,
    save_ensemble,
    train,
)
from mdboost.stumps import ScoredStump
from conftest import random_dataset


class TestTrainParams:
    def test_validation(self):
        with pytest.raises(MDBoostError):
            TrainParams(d=0.0)
        with pytest.raises(MDBoostError):
            TrainParams(d=1.0, epsilon=0.0)
        with pytest.raises(MDBoostError):
            TrainParams(d=1.0, delta=-1e-9)
        with pytest.raises(MDBoostError):
            TrainParams(d=1.0, n_max=0)

    def test_defaults(self):
        p = TrainParams(d=5.0)
        assert p.epsilon == 1e-5 and p.delta == 1e-6 and p.n_max == 1000


class TestTrainLoop:
    def test_separable_pair_single_stump(self):
        # one column already satisfies dual feasibility on a 2-point dataset
        ds = Dataset([[0.0], [1.0]], [-1.0, 1.0])
        ensemble, trace = train(ds, TrainParams(d=4.0, n_max=50))
        assert trace.termination == "converged"
        assert len(trace.records) == 1  # converged on iteration 2 before solving
        assert len(ensemble) == 1
        assert ensemble.weights[0] == pytest.approx(4.0, abs=1e-9)

    def test_trace_objectives_non_increasing(self, rng):
        for _ in range(5):
            ds = random_dataset(rng, 40, 3)
            _, trace = train(ds, TrainParams(d=8.0, n_max=60))
            objs = trace.objectives()
            assert np.all(np.diff(objs) <= 0.0)
            assert trace.termination in ("converged", "max_iterations",
                                         "duplicate_column")

    def test_weight_budget_every_iteration(self, rng):
        ds = random_dataset(rng, 30, 2)
        params = TrainParams(d=6.0, n_max=40)
        ensemble, _ = train(ds, params)
        assert abs(ensemble.weight_sum() - 6.0) <= 1e-6 * 6.0

    def test_max_iterations_reason(self, rng):
        ds = random_dataset(rng, 60, 3)
        _, trace = train(ds, TrainParams(d=10.0, n_max=2))
        assert trace.termination == "max_iterations"
        assert len(trace.records) == 2

    def test_determinism_bitwise(self, rng):
        ds = random_dataset(rng, 50, 3)
        params = TrainParams(d=7.0, n_max=30)
        ens1, trace1 = train(ds, params)
        ens2, trace2 = train(ds, params)
        assert ens1.members == ens2.members
        for r1, r2 in zip(trace1.records, trace2.records):
            # wall_time is the only field allowed to differ
            assert (r1.iteration, r1.edge, r1.r, r1.objective,
                    r1.margin_mean, r1.margin_variance) == \
                   (r2.iteration, r2.edge, r2.r, r2.objective,
                    r2.margin_mean, r2.margin_variance)

    def test_convergence_audit(self, rng):
        # Re-running the exhaustive search on the final duals confirms no
        # candidate stump beats the edge cap by more than epsilon.
        from mdboost import RestrictedProblem, ScatterOperator, recover_dual, solve_restricted
        for _ in range(5):
            ds = random_dataset(rng, 50, 3)
            params = TrainParams(d=5.0, n_max=400)
            ensemble, trace = train(ds, params)
            if trace.termination != "converged":
                continue
            B = np.column_stack([
                ds.labels * s.predict_many(ds.features) for s in ensemble.stumps])
            prob = RestrictedProblem(B, params.d, ScatterOperator(ds.n_examples, params.delta))
            sol = solve_restricted(prob, warm_start=ensemble.weights)
            dual = recover_dual(prob, sol)
            audit = best_stump(ds, dual.u)
            assert audit.edge <= dual.r + params.epsilon

    def test_single_class_degenerate(self):
        feats = np.arange(6, dtype=float).reshape(-1, 1)
        ds = Dataset(feats, np.ones(6))
        ensemble, trace = train(ds, TrainParams(d=2.0, n_max=20))
        assert trace.termination == "converged"
        assert np.all(predict_many(ensemble, feats) == 1.0)

    def test_duplicate_column_termination(self, monkeypatch, rng):
        # force the search to return the same stump with an inflated edge
        ds = random_dataset(rng, 20, 2)
        fixed = best_stump(ds, np.full(20, 1 / 20))
        calls = []

        def stuck_search(dataset, u):
            calls.append(1)
            return ScoredStump(stump=fixed.stump, edge=1e9)

        monkeypatch.setattr(training_mod, "best_stump", stuck_search)
        _, trace = train(ds, TrainParams(d=3.0, n_max=50))
        assert trace.termination == "duplicate_column"
        assert len(calls) == 2

    def test_too_few_examples(self):
        with pytest.raises(MDBoostError):
            train(Dataset([[1.0]], [1.0]), TrainParams(d=1.0))


class TestPredict:
    def test_single_stump(self):
        ens = Ensemble(((3.0, Stump(0, 0.5, 1)),), weight_sum_target=3.0)
        assert predict(ens, [1.0]) == 1
        assert predict(ens, [0.0]) == -1

    def test_majority_by_weight(self):
        # two disagreeing stumps: the weight-2 one wins
        ens = Ensemble(((2.0, Stump(0, 0.5, 1)), (1.0, Stump(0, 0.5, -1))),
                       weight_sum_target=3.0)
        assert predict(ens, [1.0]) == 1
        assert predict(ens, [0.0]) == -1

    def test_sign_zero_is_positive(self):
        ens = Ensemble(((1.0, Stump(0, 0.5, 1)), (1.0, Stump(0, 0.5, -1))),
                       weight_sum_target=2.0)
        assert predict(ens, [1.0]) == 1
        assert predict(ens, [0.0]) == 1

    def test_matches_scalar_loop(self, rng):
        members = tuple(
            (float(rng.uniform(0, 2)),
             Stump(int(rng.integers(3)), float(rng.normal()), int(rng.choice([-1, 1]))))
            for _ in range(6))
        ens = Ensemble(members, weight_sum_target=sum(w for w, _ in members))
        for _ in range(20):
            x = rng.normal(size=3)
            score = sum(w * s.predict(x) for w, s in members)
            expected = 1 if score >= 0 else -1
            assert predict(ens, x) == expected

    def test_dimension_mismatch(self):
        ens = Ensemble(((1.0, Stump(2, 0.0, 1)),), weight_sum_target=1.0)
        with pytest.raises(MDBoostError, match="feature"):
            predict(ens, [1.0, 2.0])
        with pytest.raises(MDBoostError, match="feature"):
            predict_many(ens, np.ones((4, 2)))


class TestModelRoundTrip:
    def test_save_load_predict_exact(self, rng, tmp_path):
        ds = random_dataset(rng, 40, 2)
        ensemble, _ = train(ds, TrainParams(d=5.0, n_max=30))
        path = tmp_path / "model.json"
        save_ensemble(path, ensemble, 1e-6)
        loaded, _ = load_ensemble(path)
        np.testing.assert_array_equal(predict_many(ensemble, ds.features),
                                      predict_many(loaded, ds.features))
        assert loaded.members == ensemble.members
