import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ctxnoise import (
    Dataset,
    Instance,
    SyntheticConfig,
    build_relationship,
    empty_relationship,
    generate_synthetic,
    load_relationship,
    prior_conditionals,
    save_relationship,
    update_relationship,
)


def linked_dataset(n_classes=3, labels=(0, 1, 2), links=((0, 1),), m=0, attr_obs=None):
    """Tiny hand-built dataset: instance i has class labels[i]."""
    link_sets = [set() for _ in labels]
    for a, b in links:
        link_sets[a].add(b)
        link_sets[b].add(a)
    instances = []
    for i, label in enumerate(labels):
        obs = [np.asarray(o, dtype=float) for o in (attr_obs or {}).get(i, [])]
        instances.append(
            Instance(
                id=i,
                features=np.array([float(i)]),
                true_label=label,
                attribute_obs=obs,
                link_ids=sorted(link_sets[i]),
            )
        )
    ds = Dataset(instances, n_classes, m, [f"class_{c}" for c in range(n_classes)])
    ds.validate()
    return ds


class TestBuildRelationship:
    def test_single_link_counts_both_cells(self):
        ds = linked_dataset(labels=(1, 2, 0), links=((0, 1),))
        model = build_relationship(ds, {0: 1, 1: 2, 2: 0})
        expected = np.zeros((3, 3))
        expected[1, 2] = expected[2, 1] = 1.0
        assert np.array_equal(model.data_counts, expected)

    def test_no_links_all_zero(self):
        ds = linked_dataset(labels=(0, 1), links=(), n_classes=2)
        model = build_relationship(ds, {0: 0, 1: 1})
        assert np.array_equal(model.data_counts, np.zeros((2, 2)))

    def test_same_class_link_adds_two_on_diagonal(self):
        ds = linked_dataset(labels=(1, 1, 0), links=((0, 1),))
        model = build_relationship(ds, {0: 1, 1: 1, 2: 0})
        assert model.data_counts[1, 1] == 2.0

    def test_link_with_unlabeled_endpoint_skipped(self):
        ds = linked_dataset(labels=(0, 1, 2), links=((0, 1), (1, 2)))
        model = build_relationship(ds, {0: 0, 1: 1})
        assert model.data_counts[1, 2] == 0.0
        assert model.data_counts[0, 1] == 1.0

    def test_soft_attribute_accumulation(self):
        obs = {0: [[0.7, 0.3]], 1: [[0.2, 0.8], [0.5, 0.5]]}
        ds = linked_dataset(labels=(0, 0, 1), m=2, attr_obs=obs)
        model = build_relationship(ds, {0: 0, 1: 0, 2: 1})
        assert np.allclose(model.attr_counts[0], [1.4, 1.6])
        assert np.allclose(model.attr_counts[1], [0.0, 0.0])

    def test_hard_attribute_counting(self):
        obs = {0: [[0.7, 0.3]], 1: [[0.2, 0.8]]}
        ds = linked_dataset(labels=(0, 0, 1), m=2, attr_obs=obs)
        model = build_relationship(ds, {0: 0, 1: 0, 2: 1}, hard_attributes=True)
        assert np.allclose(model.attr_counts[0], [1.0, 1.0])

    def test_unlabeled_counted_instance_rejected(self):
        ds = linked_dataset(labels=(0, 1, 2))
        with pytest.raises(ValueError):
            build_relationship(ds, {0: None})
        with pytest.raises(KeyError):
            build_relationship(ds, {99: 0})

    def test_synthetic_rows_match_generator(self):
        config = SyntheticConfig(
            n_classes=3, n_features=4, instances_per_class=500, concentration=0.7,
            links_per_instance=4, seed=2,
        )
        dataset, truth = generate_synthetic(config)
        model = build_relationship(dataset, {i: dataset.by_id(i).true_label for i in dataset.ids()})
        assert model.data_counts.sum(axis=1).min() >= 2000
        rows = prior_conditionals(model).data_rows
        tv = 0.5 * np.abs(rows - truth.data_conditionals).sum(axis=1)
        assert tv.max() < 0.05


class TestUpdateRelationship:
    def test_empty_update_is_identity(self):
        ds = linked_dataset(labels=(0, 1, 2), links=((0, 1),))
        model = build_relationship(ds, {0: 0, 1: 1})
        updated = update_relationship(model, ds, {})
        assert np.array_equal(updated.data_counts, model.data_counts)

    def test_double_submission_doubles_counts(self):
        ds = linked_dataset(labels=(0, 1, 2), links=((0, 1),))
        once = build_relationship(ds, {0: 0, 1: 1})
        twice = update_relationship(once, ds, {0: 0, 1: 1})
        assert np.array_equal(twice.data_counts, 2 * once.data_counts)

    def test_build_full_equals_build_half_plus_update(self):
        config = SyntheticConfig(
            n_classes=3, n_features=3, instances_per_class=10, concentration=0.6,
            links_per_instance=3, seed=5,
        )
        dataset, _ = generate_synthetic(config)
        labels = {i: dataset.by_id(i).true_label for i in dataset.ids()}
        full = build_relationship(dataset, labels)
        ids = sorted(labels)
        first = {i: labels[i] for i in ids[:15]}
        second = {i: labels[i] for i in ids[15:]}
        stepwise = update_relationship(build_relationship(dataset, first), dataset, second)
        assert np.array_equal(full.data_counts, stepwise.data_counts)
        assert full.labels == stepwise.labels

    def test_update_does_not_mutate_input(self):
        ds = linked_dataset(labels=(0, 1, 2), links=((0, 1), (1, 2)))
        model = build_relationship(ds, {0: 0, 1: 1})
        before = model.data_counts.copy()
        update_relationship(model, ds, {2: 2})
        assert np.array_equal(model.data_counts, before)

    def test_unknown_id_rejected(self):
        ds = linked_dataset(labels=(0, 1, 2))
        model = empty_relationship(3)
        with pytest.raises(KeyError):
            update_relationship(model, ds, {42: 0})

    @given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), min_size=1, max_size=30))
    @settings(max_examples=50, deadline=None)
    def test_symmetry_preserved_under_any_update_sequence(self, pairs):
        ds = linked_dataset(
            n_classes=3,
            labels=(0, 1, 2, 0, 1, 2),
            links=tuple({(min(a, b), max(a, b)) for a, b in pairs if a != b}),
        )
        model = empty_relationship(3)
        ids = sorted(ds.ids())
        for cut in (2, 4, 6):
            chunk = {i: ds.by_id(i).true_label for i in ids[cut - 2 : cut]}
            model = update_relationship(model, ds, chunk)
            assert np.array_equal(model.data_counts, model.data_counts.T)


class TestPriorConditionals:
    def test_direct_normalization(self):
        model = empty_relationship(2, epsilon=1e-6)
        model.data_counts[:] = [[2.0, 2.0], [0.0, 4.0]]
        rows = prior_conditionals(model).data_rows
        assert np.allclose(rows[0], [0.5, 0.5], atol=1e-6)
        assert np.allclose(rows[1], [0.0, 1.0], atol=1e-6)

    def test_all_zero_counts_give_uniform(self):
        rows = prior_conditionals(empty_relationship(4)).data_rows
        assert np.allclose(rows, 0.25)

    def test_hand_normalized_three_class_row(self):
        model = empty_relationship(3)
        model.data_counts[0] = [1.0, 2.0, 3.0]
        rows = prior_conditionals(model).data_rows
        assert np.allclose(rows[0], [1 / 6, 2 / 6, 3 / 6], atol=1e-5)

    @given(
        st.lists(
            st.lists(st.floats(0.0, 1e6, allow_nan=False), min_size=3, max_size=3),
            min_size=3,
            max_size=3,
        )
    )
    @settings(max_examples=100, deadline=None)
    def test_rows_always_distributions(self, counts):
        model = empty_relationship(3)
        model.data_counts[:] = counts
        rows = prior_conditionals(model).data_rows
        assert (rows > 0).all()
        assert np.allclose(rows.sum(axis=1), 1.0, atol=1e-9)

    def test_smoothing_negligible_for_large_counts(self):
        model = empty_relationship(3, epsilon=1e-6)
        model.data_counts[:] = [[10.0, 20.0, 30.0], [5.0, 5.0, 5.0], [1.0, 2.0, 1.0]]
        smoothed = prior_conditionals(model).data_rows
        raw = model.data_counts / model.data_counts.sum(axis=1, keepdims=True)
        assert np.abs(smoothed - raw).max() < 10 * model.epsilon


class TestSerialization:
    def test_round_trip(self, tmp_path):
        obs = {0: [[0.7, 0.3]], 2: [[0.1, 0.9]]}
        ds = linked_dataset(labels=(0, 1, 2), links=((0, 1), (1, 2)), m=2, attr_obs=obs)
        model = build_relationship(ds, {0: 0, 1: 1, 2: 2}, epsilon=1e-5)
        path = tmp_path / "rel.txt"
        save_relationship(model, path)
        loaded = load_relationship(path)
        assert np.array_equal(loaded.data_counts, model.data_counts)
        assert np.array_equal(loaded.attr_counts, model.attr_counts)
        assert loaded.labels == model.labels
        assert loaded.epsilon == model.epsilon
