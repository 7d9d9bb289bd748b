"""Smoke tests for the python module."""

import math

import pytest

art = pytest.importorskip("art_engine")


def test_entropy_uniform_is_ln_v():
    assert art.entropy([[[0.0, 0.0]]]) == pytest.approx(math.log(2), abs=1e-12)
    assert art.entropy([[[5.0] * 7] * 3] * 2) == pytest.approx(math.log(7), abs=1e-12)


def test_entropy_sharp_is_small():
    assert art.entropy([[[50.0, 0.0, 0.0, 0.0]]]) <= 1e-12


def test_templates_are_byte_exact():
    assert art.render_question("boat", "water", "semantic") == (
        "Is there a prominent semantic relation between boat (subject) "
        "and water (object) in the image?"
    )
    assert art.render_positive("girl", "has", "hair") == "Yes, girl has hair."
    assert art.render_negative("person", "hat", "spatial") == (
        "No, there is no prominent spatial relation between person and hat."
    )


def test_round_robin_allocation():
    assert art.allocate_round_robin({"a": 5, "b": 2, "c": 1}, 6) == {
        "a": 3,
        "b": 2,
        "c": 1,
    }


def test_recall_weighted_allocation():
    got = art.allocate_budget(
        {"a": 1.0, "b": 0.5, "c": 0.0}, {"a": 99, "b": 99, "c": 99}, 9
    )
    assert got == {"a": 0, "b": 3, "c": 6}


def test_similarity_shared_tokens():
    assert art.similarity("a b", "a c", dimension=4096, seed=1) == pytest.approx(0.5)
    assert art.similarity("girl has hair", "girl has hair") == pytest.approx(1.0)


def test_generate_instances_counter_mode():
    vocab = {"on": "spatial", "has": "possessive", "eating": "semantic"}
    triplets = [
        {"id": "t1", "subject": "bag", "predicate": "on", "object": "table"},
        {"id": "t2", "subject": "girl", "predicate": "has", "object": "hair"},
    ]
    instances = art.generate_instances(triplets, vocab, seed=3)
    assert len(instances) == 2
    assert instances[0]["positive_response"] == "Yes, bag on table."
    assert instances[0]["negative_categories"] == ["possessive"]
    assert instances[1]["positive_category"] == "possessive"
    assert instances[1]["negative_categories"][0] in ("spatial", "semantic")


def test_thresholds_two_point_stats():
    t = art.compute_thresholds([0.2, 0.4], [], [], 1.0)
    assert t["mu_tp"] == pytest.approx(0.3)
    assert t["sigma_tp"] == pytest.approx(0.1)
    assert t["h_tp"] == pytest.approx(0.4)


def test_select_prefers_the_outlier_fp():
    fp = [("fp%d" % i, 0.90 + 0.01 * i) for i in range(9)] + [("outlier", -0.9)]
    selected = art.select_for_predicate([], [], fp, budget=1)
    assert selected == ["outlier"]


def test_simulate_round_trip(tmp_path):
    config = "\n".join(
        [
            "seed = 5",
            "val_fraction = 0.1",
            "budget_fraction_per_loop = 0.05",
            "total_fraction = 0.2",
            "mock.learning_tau = 8",
            "mock.heldout_count = 8",
            "mock.accuracy.default = 0.5",
            "mock.frequencies.on = 40",
            "mock.frequencies.has = 20",
            "mock.category.on = spatial",
            "mock.category.has = possessive",
        ]
    )
    summary = art.simulate(config, str(tmp_path / "run"))
    assert summary["strategy"] == "art"
    assert summary["train_size"] > 0
    assert (tmp_path / "run" / "summary.json").exists()
    again = art.simulate(config, str(tmp_path / "run2"))
    assert again["train_counts"] == summary["train_counts"]
