"""Common fit/predict surface over the four model families, plus the JSON
model file format."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Union

import numpy as np

from .bayes import NBConfig, NBModel, fit_naive_bayes
from .forest import ForestConfig, ForestModel, fit_forest
from .logistic import LogisticConfig, LogisticModel, fit_logistic
from .tree import TreeConfig, TreeModel, fit_tree

FORMAT_VERSION = 1
MODEL_TYPES = ("lr", "dt", "nb", "rf")
CONFIG_TYPES = {"lr": LogisticConfig, "dt": TreeConfig, "nb": NBConfig, "rf": ForestConfig}


class ModelError(ValueError):
    """Prediction input does not fit the model, or a model file is invalid."""


class ModelFormatError(ModelError):
    pass


@dataclass(frozen=True, eq=False)
class TrainedModel:
    model_type: str
    feature_names: tuple
    model: Union[LogisticModel, TreeModel, NBModel, ForestModel]

    @property
    def n_features(self):
        return len(self.feature_names)


def fit_model(model_type: str, train, config=None) -> TrainedModel:
    """Fit one model family on a :class:`~patentcite.dataset.Dataset`."""
    if model_type not in MODEL_TYPES:
        raise ValueError(f"unknown model type {model_type!r}")
    if config is None:
        config = CONFIG_TYPES[model_type]()
    X, y = train.features, train.labels
    if model_type == "lr":
        model = fit_logistic(X, y, config)
    elif model_type == "dt":
        model = fit_tree(X, y, config)
    elif model_type == "nb":
        model = fit_naive_bayes(X, y, config)
    else:
        model = fit_forest(X, y, config)
    return TrainedModel(model_type, tuple(train.feature_names), model)


def _as_rows(model: TrainedModel, features):
    X = np.asarray(features, dtype=np.float64)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.ndim != 2 or X.shape[1] != model.n_features:
        raise ModelError(
            f"model expects {model.n_features} features "
            f"({', '.join(model.feature_names)}), got {X.shape[-1]}"
        )
    return X, single


def predict_proba(model: TrainedModel, features):
    """Probability of class 1 for one feature vector (float) or a matrix
    of rows (array)."""
    X, single = _as_rows(model, features)
    p = model.model.predict_proba(X)
    return float(p[0]) if single else p


def predict(model: TrainedModel, features, threshold: float = 0.5):
    """1 where ``predict_proba >= threshold``.

    Trees and forests resolve an exact 50/50 leaf or vote tie at the default
    threshold to class 0.
    """
    p = predict_proba(model, features)
    arr = np.atleast_1d(p)
    labels = (arr >= threshold).astype(np.int64)
    if model.model_type in ("dt", "rf") and threshold == 0.5:
        labels[arr == 0.5] = 0
    return int(labels[0]) if np.ndim(p) == 0 else labels


# ---------------------------------------------------------------------------
# serialization


def _dumps(obj) -> str:
    """JSON with every float written as 17-significant-digit scientific."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ModelError("cannot serialize non-finite parameter")
        return f"{float(obj):.16e}"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dumps(v) for v in obj) + "]"
    if isinstance(obj, np.ndarray):
        return _dumps(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _tree_params(tree: TreeModel):
    return {
        "feature": tree.feature,
        "threshold": tree.threshold,
        "left": tree.left,
        "right": tree.right,
        "counts": tree.counts,
    }


def _params(model: TrainedModel) -> dict:
    m = model.model
    if model.model_type == "lr":
        return {"weights": m.weights, "bias": m.bias, "transform": m.transform,
                "config": asdict(m.config)}
    if model.model_type == "dt":
        return {"tree": _tree_params(m), "config": asdict(m.config)}
    if model.model_type == "nb":
        return {"class_priors": m.class_priors, "means": m.means,
                "variances": m.variances, "variance_floor": m.variance_floor}
    return {
        "trees": [_tree_params(t) for t in m.trees],
        "features_per_split": m.features_per_split,
        "bootstrap": m.bootstrap,
        "master_seed": m.master_seed,
        "config": asdict(m.config),
    }


def model_to_json(model: TrainedModel) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "model_type": model.model_type,
        "feature_names": list(model.feature_names),
        "parameters": _params(model),
    }
    return _dumps(doc) + "\n"


def serialize_model(model: TrainedModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model_to_json(model))


def _load_tree(p, config: TreeConfig) -> TreeModel:
    tree = TreeModel(
        feature=np.array(p["feature"], dtype=np.int64),
        threshold=np.array(p["threshold"], dtype=np.float64),
        left=np.array(p["left"], dtype=np.int64),
        right=np.array(p["right"], dtype=np.int64),
        counts=np.array(p["counts"], dtype=np.int64).reshape(-1, 2),
        config=config,
    )
    n = tree.n_nodes
    if n == 0 or not (len(tree.threshold) == len(tree.left) == len(tree.right)
                      == len(tree.counts) == n):
        raise ModelFormatError("corrupt model file: inconsistent tree arrays")
    internal = tree.feature >= 0
    for child in (tree.left[internal], tree.right[internal]):
        if ((child <= 0) | (child >= n)).any():
            raise ModelFormatError("corrupt model file: dangling tree child")
    return tree


def _tree_config(cfg: dict) -> TreeConfig:
    return TreeConfig(cfg["max_depth"], cfg["min_samples_split"], cfg["min_impurity_decrease"])


def model_from_json(text: str) -> TrainedModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"corrupt model file: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ModelFormatError("corrupt model file: expected a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported model format version {version!r} (expected {FORMAT_VERSION})"
        )
    kind = doc.get("model_type")
    if kind not in MODEL_TYPES:
        raise ModelFormatError(f"unknown model tag {kind!r}")
    try:
        names = tuple(doc["feature_names"])
        p = doc["parameters"]
        if kind == "lr":
            model = LogisticModel(
                weights=np.array(p["weights"], dtype=np.float64),
                bias=float(p["bias"]),
                transform=p["transform"],
                config=LogisticConfig(**p["config"]),
            )
            if model.weights.shape != (len(names),):
                raise ModelFormatError("corrupt model file: weight count != feature count")
        elif kind == "dt":
            model = _load_tree(p["tree"], _tree_config(p["config"]))
        elif kind == "nb":
            model = NBModel(
                class_priors=np.array(p["class_priors"], dtype=np.float64),
                means=np.array(p["means"], dtype=np.float64).reshape(2, len(names)),
                variances=np.array(p["variances"], dtype=np.float64).reshape(2, len(names)),
                variance_floor=float(p["variance_floor"]),
            )
        else:
            config = ForestConfig(**p["config"])
            model = ForestModel(
                trees=tuple(_load_tree(t, config.tree_config) for t in p["trees"]),
                features_per_split=int(p["features_per_split"]),
                bootstrap=bool(p["bootstrap"]),
                master_seed=int(p["master_seed"]),
                config=config,
            )
            if not model.trees:
                raise ModelFormatError("corrupt model file: forest has no trees")
    except ModelFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"corrupt model file: {exc}") from None
    return TrainedModel(kind, names, model)


def deserialize_model(path) -> TrainedModel:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ModelFormatError(f"cannot read model file {path}: {exc.strerror}") from None
    return model_from_json(text)
