"""From-scratch classifiers: logistic regression, CART tree, Gaussian naive
Bayes and random forest, behind one fit/predict surface."""

from .bayes import NBConfig, NBModel, fit_naive_bayes, nb_posterior
from .forest import ForestConfig, ForestModel, fit_forest
from .logistic import (
    LogisticConfig,
    LogisticModel,
    fit_logistic,
    logistic_loss_and_gradient,
    sigmoid,
)
from .model import (
    MODEL_TYPES,
    ModelError,
    ModelFormatError,
    TrainedModel,
    deserialize_model,
    fit_model,
    model_from_json,
    model_to_json,
    predict,
    predict_proba,
    serialize_model,
)
from .tree import TreeConfig, TreeModel, best_split, fit_tree, gini_impurity

__all__ = [
    "ForestConfig", "ForestModel", "LogisticConfig", "LogisticModel", "MODEL_TYPES",
    "ModelError", "ModelFormatError", "NBConfig", "NBModel", "TrainedModel",
    "TreeConfig", "TreeModel", "best_split", "deserialize_model", "fit_forest",
    "fit_logistic", "fit_model", "fit_naive_bayes", "fit_tree", "gini_impurity",
    "logistic_loss_and_gradient", "model_from_json", "model_to_json",
    "nb_posterior", "predict", "predict_proba", "serialize_model", "sigmoid",
]
