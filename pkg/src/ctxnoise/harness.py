"""Batch-incremental active-learning experiments with simulated annotation noise.

A run trains the classifier and the relationship model on a correctly
labeled initial batch, then walks the remaining batches: select informative
instances, simulate annotation (true labels plus injected noise), filter per
the configured mode, update both models on the kept labels, and score
accuracy on the held-out test set.

Modes for :func:`run_active_learning`:

* ``sn``    update with the noisy labels as they come (no filter)
* ``pb``    remove by the probabilistic detector, budgeted to match cnld
* ``cl``    remove truly flipped labels (ground-truth upper bound), budgeted
* ``cnld``  remove by the context detector's beta threshold

Modes for :func:`run_pseudo` (queried labels are noise-free there):
``manual``, ``manual_pseudo``, ``manual_pseudo_cnld``.

:func:`run_detection_suite` is the pure detection benchmark: train on batch
0, inject noise into the evaluation split, and remove a fixed fraction with
every detector.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from .baselines import consensus_detect, majority_detect, probabilistic_detect
from .classifiers import (
    AuxConfig,
    MlrConfig,
    MlrModel,
    predict_proba,
    train_aux,
    train_mlr,
)
from .dataset import (
    Dataset,
    GroundTruth,
    Instance,
    SyntheticConfig,
    generate_synthetic,
    load_cora,
    split_batches,
)
from .detector import DEFAULT_BETA, cnld_detect, detect_topk
from .metrics import DetectionMetrics, accuracy, detection_metrics, ranking_auc
from .noise import inject_nar, inject_ncar, estimate_transition, _round_half_up
from .relationship import DEFAULT_SMOOTHING, build_relationship, update_relationship

LEARNING_MODES = ("sn", "pb", "cl", "cnld")
PSEUDO_MODES = ("manual", "manual_pseudo", "manual_pseudo_cnld")
SELECTION_STRATEGIES = ("entropy", "random")
NOISE_MODELS = ("ncar", "nar")

CORA_FOLDS = 10

# salts for deriving independent rng streams from one run seed
_SALT_SPLIT = 1
_SALT_TEST = 2
_SALT_SELECT = 3
_SALT_NOISE = 4
_SALT_MLR = 5
_SALT_AUX = 6


class ConfigError(ValueError):
    """Bad or missing experiment configuration."""


def derive_seed(seed: int, *salts: int) -> int:
    return int(np.random.SeedSequence([seed, *salts]).generate_state(1)[0])


@dataclass
class ExperimentConfig:
    dataset_kind: str
    synthetic: SyntheticConfig | None = None
    cora_content: str | None = None
    cora_cites: str | None = None
    n_batches: int = 10
    query_fraction: float = 0.3
    selection: str = "entropy"
    mode: str = "cnld"
    noise: str = "ncar"
    omega: float = 0.4
    beta: float = DEFAULT_BETA
    seeds: list[int] = field(default_factory=lambda: [0])
    test_fraction: float = 0.3
    cora_fold: int = 0
    replay: bool = False
    omegas: list[float] = field(default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5])
    betas: list[float] = field(default_factory=lambda: [0.80, 0.85, 0.90])
    mlr_learning_rate: float = 0.1
    mlr_l2: float = 1e-4
    mlr_epochs: int = 200
    mlr_batch_size: int | None = 32
    knn_k: int = 5
    # count smoothing; raise toward 1 (Laplace) when the labeled pool yields
    # few links per class, or near-zero cells overwhelm the leaf evidence
    epsilon: float = DEFAULT_SMOOTHING

    def validate(self) -> None:
        if self.dataset_kind not in ("synthetic", "cora"):
            raise ConfigError(f"unknown dataset kind {self.dataset_kind!r}")
        if self.dataset_kind == "synthetic" and self.synthetic is None:
            raise ConfigError("missing required config key: synthetic.n_classes")
        if self.dataset_kind == "cora" and not (self.cora_content and self.cora_cites):
            raise ConfigError("missing required config key: cora_content / cora_cites")
        if not 0.0 < self.query_fraction <= 1.0:
            raise ConfigError("query_fraction must lie in (0, 1]")
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError("test_fraction must lie in (0, 1)")
        if self.selection not in SELECTION_STRATEGIES:
            raise ConfigError(f"unknown selection strategy {self.selection!r}")
        if self.mode not in LEARNING_MODES + PSEUDO_MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.noise not in NOISE_MODELS:
            raise ConfigError(f"unknown noise model {self.noise!r}")
        if not 0.0 <= self.beta < 1.0:
            raise ConfigError("beta must lie in [0, 1)")
        if not 0.0 <= self.omega <= 1.0:
            raise ConfigError("omega must lie in [0, 1]")
        if self.n_batches < 2:
            raise ConfigError("n_batches must be >= 2")
        if not self.seeds:
            raise ConfigError("need at least one seed")
        if not 0 <= self.cora_fold < CORA_FOLDS:
            raise ConfigError(f"cora_fold must lie in [0, {CORA_FOLDS})")
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be positive")

    def mlr_config(self, n_classes: int, seed: int) -> MlrConfig:
        return MlrConfig(
            n_classes=n_classes,
            learning_rate=self.mlr_learning_rate,
            l2=self.mlr_l2,
            epochs=self.mlr_epochs,
            batch_size=self.mlr_batch_size,
            seed=seed,
        )


def config_hash(config: ExperimentConfig) -> str:
    return hashlib.sha256(dump_config(config).encode()).hexdigest()[:16]


@dataclass
class BatchRecord:
    batch: int
    accuracy: float
    removed: int
    kept: int
    er1: float | None
    er2: float | None
    nep: float | None
    queried: list[int]
    elapsed: float


@dataclass
class ExperimentLog:
    mode: str
    omega: float
    seed: int
    config_hash: str
    records: list[BatchRecord]

    @property
    def final_accuracy(self) -> float:
        return self.records[-1].accuracy

    def key_rows(self) -> list[tuple]:
        """Deterministic content (everything except wall-clock timing)."""
        return [
            (r.batch, r.accuracy, r.removed, r.kept, r.er1, r.er2, r.nep, tuple(r.queried))
            for r in self.records
        ]


@dataclass
class DetectionSuiteRow:
    method: str
    omega: float
    seed: int
    metrics: DetectionMetrics
    auc: float | None = None


def load_experiment_dataset(config: ExperimentConfig) -> tuple[Dataset, GroundTruth | None]:
    if config.dataset_kind == "synthetic":
        dataset, truth = generate_synthetic(config.synthetic)
        return dataset, truth
    return load_cora(config.cora_content, config.cora_cites), None


def split_train_test(dataset: Dataset, config: ExperimentConfig, seed: int) -> tuple[list[int], list[int]]:
    """Synthetic: per-seed random test fraction.  CORA: one of 10 folds."""
    ids = sorted(dataset.ids())
    rng = np.random.default_rng(derive_seed(seed, _SALT_TEST))
    order = [ids[k] for k in rng.permutation(len(ids))]
    if config.dataset_kind == "cora":
        folds = np.array_split(np.arange(len(order)), CORA_FOLDS)
        test_pos = set(folds[config.cora_fold].tolist())
        test = [order[k] for k in sorted(test_pos)]
        train = [order[k] for k in range(len(order)) if k not in test_pos]
        return train, test
    n_test = _round_half_up(config.test_fraction * len(order))
    return order[n_test:], order[:n_test]


def select_informative(
    classifier: MlrModel,
    batch_instances: Sequence[Instance],
    k: int,
    strategy: str,
    seed: int,
) -> list[int]:
    """Pick k instances to query: top prediction entropy, or uniform at random.

    Entropy ties break toward the lower instance id.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > len(batch_instances):
        raise ValueError("k exceeds the batch size")
    ordered = sorted(batch_instances, key=lambda inst: inst.id)
    if strategy == "random":
        rng = np.random.default_rng(seed)
        picks = rng.choice(len(ordered), size=k, replace=False)
        return [ordered[i].id for i in picks]
    if strategy != "entropy":
        raise ValueError(f"unknown selection strategy {strategy!r}")
    X = np.stack([inst.features for inst in ordered])
    P = predict_proba(classifier, X)
    H = -(P * np.log(P)).sum(axis=1)
    ranked = sorted(range(len(ordered)), key=lambda i: (-H[i], ordered[i].id))
    return [ordered[i].id for i in ranked[:k]]


def _initial_models(dataset: Dataset, pool: Sequence[int], config: ExperimentConfig, seed: int):
    X = dataset.feature_matrix(pool)
    y = dataset.true_labels(pool)
    model = train_mlr(None, X, y, config.mlr_config(dataset.n_classes, derive_seed(seed, _SALT_MLR)))
    rel = build_relationship(
        dataset, {i: dataset.by_id(i).true_label for i in pool}, epsilon=config.epsilon
    )
    return model, rel, X, y


def run_active_learning(config: ExperimentConfig, seed: int | None = None) -> ExperimentLog:
    """One noisy-annotation active-learning run; returns per-batch records."""
    config.validate()
    if config.mode not in LEARNING_MODES:
        raise ConfigError(f"mode {config.mode!r} is not an active-learning mode")
    seed = config.seeds[0] if seed is None else seed

    dataset, _ = load_experiment_dataset(config)
    train_ids, test_ids = split_train_test(dataset, config, seed)
    plan = split_batches(dataset, config.n_batches, derive_seed(seed, _SALT_SPLIT), ids=train_ids)
    model, rel, pool_X, pool_y = _initial_models(dataset, plan.batches[0], config, seed)
    n = dataset.n_classes

    transition = None
    if config.noise == "nar":
        transition = estimate_transition(pool_X, pool_y, n, seed)

    test_instances = [dataset.by_id(i) for i in test_ids]
    accepted: list[tuple[int, int]] = [(i, dataset.by_id(i).true_label) for i in plan.batches[0]]
    records: list[BatchRecord] = []
    chash = config_hash(config)

    for t in range(1, config.n_batches):
        start = time.perf_counter()
        batch_ids = plan.batches[t]
        k = min(len(batch_ids), max(1, _round_half_up(config.query_fraction * len(batch_ids))))
        queried = select_informative(
            model,
            [dataset.by_id(i) for i in batch_ids],
            k,
            config.selection,
            derive_seed(seed, _SALT_SELECT, t),
        )
        true_q = dataset.true_labels(queried)
        noise_seed = derive_seed(seed, _SALT_NOISE, t)
        if config.noise == "ncar":
            noise_plan = inject_ncar(true_q, n, config.omega, noise_seed)
        else:
            noise_plan = inject_nar(true_q, transition, noise_seed)
        assigned = noise_plan.assigned
        flip_mask = {qid: bool(f) for qid, f in zip(queried, noise_plan.flipped)}

        if config.mode == "sn":
            removed: set[int] = set()
            batch_metrics = None
        else:
            det = cnld_detect(queried, assigned, dataset, model, rel, config.beta)
            budget = len(det.removed_ids())
            if config.mode == "cnld":
                removed = det.removed_ids()
            elif config.mode == "pb":
                removed = probabilistic_detect(
                    model, [dataset.by_id(i) for i in queried], assigned, budget
                )
            else:  # cl: drop truly flipped labels only, up to the shared budget
                flipped_ids = sorted(qid for qid in queried if flip_mask[qid])
                removed = set(flipped_ids[: min(budget, len(flipped_ids))])
            batch_metrics = detection_metrics(removed, flip_mask)

        kept = [(qid, int(a)) for qid, a in zip(queried, assigned) if qid not in removed]
        if kept:
            accepted.extend(kept)
            if config.replay:
                ids = [i for i, _ in accepted]
                X = dataset.feature_matrix(ids)
                y = np.array([c for _, c in accepted])
            else:
                X = dataset.feature_matrix([i for i, _ in kept])
                y = np.array([c for _, c in kept])
            model = train_mlr(
                model, X, y, config.mlr_config(n, derive_seed(seed, _SALT_MLR, t))
            )
            rel = update_relationship(rel, dataset, dict(kept))

        records.append(
            BatchRecord(
                batch=t,
                accuracy=accuracy(model, test_instances),
                removed=len(removed),
                kept=len(kept),
                er1=batch_metrics.er1 if batch_metrics else None,
                er2=batch_metrics.er2 if batch_metrics else None,
                nep=batch_metrics.nep if batch_metrics else None,
                queried=list(queried),
                elapsed=time.perf_counter() - start,
            )
        )
    return ExperimentLog(mode=config.mode, omega=config.omega, seed=seed, config_hash=chash, records=records)


def run_pseudo(config: ExperimentConfig, seed: int | None = None) -> ExperimentLog:
    """Pseudo-labeling run: queried labels are correct, the rest of each batch
    gets classifier predictions, optionally filtered by the context detector."""
    config.validate()
    if config.mode not in PSEUDO_MODES:
        raise ConfigError(f"mode {config.mode!r} is not a pseudo-labeling mode")
    seed = config.seeds[0] if seed is None else seed

    dataset, _ = load_experiment_dataset(config)
    train_ids, test_ids = split_train_test(dataset, config, seed)
    plan = split_batches(dataset, config.n_batches, derive_seed(seed, _SALT_SPLIT), ids=train_ids)
    model, rel, _, _ = _initial_models(dataset, plan.batches[0], config, seed)
    n = dataset.n_classes
    test_instances = [dataset.by_id(i) for i in test_ids]
    records: list[BatchRecord] = []
    chash = config_hash(config)

    for t in range(1, config.n_batches):
        start = time.perf_counter()
        batch_ids = plan.batches[t]
        k = min(len(batch_ids), max(1, _round_half_up(config.query_fraction * len(batch_ids))))
        queried = select_informative(
            model,
            [dataset.by_id(i) for i in batch_ids],
            k,
            config.selection,
            derive_seed(seed, _SALT_SELECT, t),
        )
        queried_set = set(queried)
        rest = sorted(i for i in batch_ids if i not in queried_set)
        kept = [(qid, dataset.by_id(qid).true_label) for qid in queried]

        removed: set[int] = set()
        batch_metrics = None
        if rest and config.mode != "manual":
            pseudo = predict_proba(model, dataset.feature_matrix(rest)).argmax(axis=1)
            if config.mode == "manual_pseudo_cnld":
                det = cnld_detect(rest, pseudo, dataset, model, rel, config.beta)
                removed = det.removed_ids()
                flip_mask = {
                    rid: int(p) != dataset.by_id(rid).true_label for rid, p in zip(rest, pseudo)
                }
                batch_metrics = detection_metrics(removed, flip_mask)
            kept.extend((rid, int(p)) for rid, p in zip(rest, pseudo) if rid not in removed)

        if kept:
            X = dataset.feature_matrix([i for i, _ in kept])
            y = np.array([c for _, c in kept])
            model = train_mlr(model, X, y, config.mlr_config(n, derive_seed(seed, _SALT_MLR, t)))
            rel = update_relationship(rel, dataset, dict(kept))

        records.append(
            BatchRecord(
                batch=t,
                accuracy=accuracy(model, test_instances),
                removed=len(removed),
                kept=len(kept),
                er1=batch_metrics.er1 if batch_metrics else None,
                er2=batch_metrics.er2 if batch_metrics else None,
                nep=batch_metrics.nep if batch_metrics else None,
                queried=list(queried),
                elapsed=time.perf_counter() - start,
            )
        )
    return ExperimentLog(mode=config.mode, omega=config.omega, seed=seed, config_hash=chash, records=records)


def run_detection_suite(config: ExperimentConfig) -> list[DetectionSuiteRow]:
    """Fixed-budget detection benchmark over methods x noise levels x seeds.

    Trains on batch 0 only, injects noise into the evaluation split and
    removes exactly the injected fraction with each detector.
    """
    config.validate()
    dataset, _ = load_experiment_dataset(config)
    n = dataset.n_classes
    rows: list[DetectionSuiteRow] = []

    for seed in config.seeds:
        train_ids, test_ids = split_train_test(dataset, config, seed)
        plan = split_batches(dataset, config.n_batches, derive_seed(seed, _SALT_SPLIT), ids=train_ids)
        model, rel, pool_X, pool_y = _initial_models(dataset, plan.batches[0], config, seed)
        knn_k = min(config.knn_k, len(plan.batches[0]))
        if knn_k % 2 == 0:
            knn_k -= 1
        aux = train_aux(
            pool_X,
            pool_y,
            AuxConfig(
                n_classes=n,
                knn_k=knn_k,
                normalize=config.dataset_kind == "synthetic",
                seed=derive_seed(seed, _SALT_AUX),
            ),
        )
        test_instances = [dataset.by_id(i) for i in test_ids]
        y_test = dataset.true_labels(test_ids)

        if config.noise == "ncar":
            cells = []
            for omega in config.omegas:
                noise_seed = derive_seed(seed, _SALT_NOISE, int(round(omega * 1000)))
                noise_plan = inject_ncar(y_test, n, omega, noise_seed)
                cells.append((omega, noise_plan, _round_half_up(omega * len(test_ids))))
        else:
            transition = estimate_transition(pool_X, pool_y, n, seed)
            noise_plan = inject_nar(y_test, transition, derive_seed(seed, _SALT_NOISE, 0))
            cells = [(noise_plan.rate, noise_plan, int(noise_plan.flipped.sum()))]

        for omega, noise_plan, removal_count in cells:
            removal_count = min(removal_count, len(test_ids))
            assigned = noise_plan.assigned
            flip_mask = {tid: bool(f) for tid, f in zip(test_ids, noise_plan.flipped)}

            det = detect_topk(test_ids, assigned, dataset, model, rel, removal_count)
            auc = None
            if 0 < noise_plan.flipped.sum() < len(test_ids):
                auc = ranking_auc(det.scores, noise_plan.flipped)
            rows.append(
                DetectionSuiteRow("cnld", omega, seed, detection_metrics(det.removed_ids(), flip_mask), auc)
            )
            removed = probabilistic_detect(model, test_instances, assigned, removal_count)
            rows.append(DetectionSuiteRow("probabilistic", omega, seed, detection_metrics(removed, flip_mask)))
            removed = consensus_detect(aux, test_instances, assigned, removal_count)
            rows.append(DetectionSuiteRow("consensus", omega, seed, detection_metrics(removed, flip_mask)))
            removed = majority_detect(aux, test_instances, assigned, removal_count)
            rows.append(DetectionSuiteRow("majority", omega, seed, detection_metrics(removed, flip_mask)))
    return rows


def _mean_std(values: list[float]) -> tuple[float | None, float | None]:
    known = [v for v in values if v is not None]
    if not known:
        return None, None
    arr = np.asarray(known)
    return float(arr.mean()), float(arr.std())


def summarize_detection(rows: list[DetectionSuiteRow]) -> dict:
    """Mean and stddev of each metric per (method, omega), None-safe."""
    cells: dict[tuple[str, float], list[DetectionSuiteRow]] = {}
    for row in rows:
        cells.setdefault((row.method, row.omega), []).append(row)
    out = {}
    for (method, omega), group in sorted(cells.items()):
        entry = {"seeds": len(group)}
        for name in ("er1", "er2", "nep"):
            mean, std = _mean_std([getattr(r.metrics, name) for r in group])
            entry[name] = mean
            entry[f"{name}_std"] = std
        auc_mean, auc_std = _mean_std([r.auc for r in group])
        entry["auc"] = auc_mean
        entry["auc_std"] = auc_std
        out[f"{method}@omega={omega:g}"] = entry
    return out


def summarize_learning(logs: list[ExperimentLog]) -> dict:
    """Mean and stddev of final accuracy per mode across seeds."""
    groups: dict[str, list[ExperimentLog]] = {}
    for log in logs:
        groups.setdefault(log.mode, []).append(log)
    out = {}
    for mode, group in sorted(groups.items()):
        finals = [g.final_accuracy for g in group]
        mean, std = _mean_std(finals)
        out[mode] = {"final_accuracy": mean, "final_accuracy_std": std, "seeds": len(group)}
    return out


# ---------------------------------------------------------------------------
# result files


def _csv_cell(value) -> str:
    if value is None or value == "":
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


RESULTS_HEADER = ["run_id", "seed", "mode", "omega", "batch", "accuracy", "er1", "er2", "nep", "removed", "kept"]


def learning_result_rows(log: ExperimentLog) -> list[dict]:
    run_id = f"{log.mode}-omega{log.omega:g}-seed{log.seed}"
    return [
        {
            "run_id": run_id,
            "seed": log.seed,
            "mode": log.mode,
            "omega": log.omega,
            "batch": r.batch,
            "accuracy": r.accuracy,
            "er1": r.er1,
            "er2": r.er2,
            "nep": r.nep,
            "removed": r.removed,
            "kept": r.kept,
        }
        for r in log.records
    ]


def detection_result_rows(rows: list[DetectionSuiteRow]) -> list[dict]:
    out = []
    for row in rows:
        m = row.metrics
        out.append(
            {
                "run_id": f"{row.method}-omega{row.omega:g}-seed{row.seed}",
                "seed": row.seed,
                "mode": row.method,
                "omega": row.omega,
                "batch": "",
                "accuracy": "",
                "er1": m.er1,
                "er2": m.er2,
                "nep": m.nep,
                "removed": m.removed,
                "kept": m.correct_total + m.mislabeled_total - m.removed,
            }
        )
    return out


def write_results_csv(path: str | Path, rows: list[dict]) -> None:
    with Path(path).open("w") as fh:
        fh.write(",".join(RESULTS_HEADER) + "\n")
        for row in rows:
            fh.write(",".join(_csv_cell(row.get(k)) for k in RESULTS_HEADER) + "\n")


def write_summary_json(path: str | Path, summary: dict) -> None:
    with Path(path).open("w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# key=value config files

_SYN_FIELDS = {f.name: f.type for f in fields(SyntheticConfig)}

_INT_KEYS = {"n_batches", "cora_fold", "mlr_epochs", "knn_k"}
_FLOAT_KEYS = {"query_fraction", "omega", "beta", "test_fraction", "mlr_learning_rate", "mlr_l2", "epsilon"}
_STR_KEYS = {"selection", "mode", "noise", "cora_content", "cora_cites"}
_BOOL_KEYS = {"replay"}
_INT_LIST_KEYS = {"seeds"}
_FLOAT_LIST_KEYS = {"omegas", "betas"}
_SYN_INT_KEYS = {
    "n_classes",
    "n_features",
    "instances_per_class",
    "m_attribute_classes",
    "links_per_instance",
    "attributes_per_instance",
    "seed",
}
_SYN_FLOAT_KEYS = {"concentration", "separation", "noise_scale"}


def parse_config(text: str, source: str = "<config>") -> ExperimentConfig:
    """Parse the documented ``key = value`` format (# starts a comment)."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = value

    if "dataset" not in values:
        raise ConfigError("missing required config key: dataset")
    kind = values.pop("dataset")

    syn_values: dict[str, str] = {}
    for key in list(values):
        if key.startswith("synthetic."):
            syn_values[key.removeprefix("synthetic.")] = values.pop(key)

    config = ExperimentConfig(dataset_kind=kind)
    if kind == "synthetic":
        for required in ("n_classes", "n_features", "instances_per_class"):
            if required not in syn_values:
                raise ConfigError(f"missing required config key: synthetic.{required}")
        syn_kwargs = {}
        for key, value in syn_values.items():
            if key in _SYN_INT_KEYS:
                syn_kwargs[key] = int(value)
            elif key in _SYN_FLOAT_KEYS:
                syn_kwargs[key] = float(value)
            else:
                raise ConfigError(f"unknown config key: synthetic.{key}")
        config.synthetic = SyntheticConfig(**syn_kwargs)
    elif kind == "cora":
        pass  # paths parsed below
    else:
        raise ConfigError(f"unknown dataset kind {kind!r}")

    for key, value in values.items():
        if key in _INT_KEYS:
            setattr(config, key, int(value))
        elif key in _FLOAT_KEYS:
            setattr(config, key, float(value))
        elif key in _STR_KEYS:
            setattr(config, key, value)
        elif key in _BOOL_KEYS:
            setattr(config, key, value.lower() in ("1", "true", "yes"))
        elif key in _INT_LIST_KEYS:
            setattr(config, key, [int(t) for t in value.replace(",", " ").split()])
        elif key in _FLOAT_LIST_KEYS:
            setattr(config, key, [float(t) for t in value.replace(",", " ").split()])
        elif key == "mlr_batch_size":
            config.mlr_batch_size = None if value.lower() == "none" else int(value)
        else:
            raise ConfigError(f"unknown config key: {key}")

    config.validate()
    return config


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    return parse_config(path.read_text(), source=str(path))


def dump_config(config: ExperimentConfig) -> str:
    """Canonical key=value rendering; input for the config hash."""
    lines = [f"dataset = {config.dataset_kind}"]
    if config.synthetic is not None:
        for f in fields(SyntheticConfig):
            lines.append(f"synthetic.{f.name} = {getattr(config.synthetic, f.name)!r}")
    for key in sorted(
        _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | _BOOL_KEYS | _INT_LIST_KEYS | _FLOAT_LIST_KEYS | {"mlr_batch_size"}
    ):
        lines.append(f"{key} = {getattr(config, key)!r}")
    return "\n".join(lines) + "\n"
