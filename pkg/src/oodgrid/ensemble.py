"""Ensemble detection of out-of-distribution samples.

A family of multinomial (softmax) logistic regressions is trained for
every combination of feature set and regularization coefficient, the
coefficients spread over powers of ten in [1e-5, 1e5].  Each test sample's
score is the entropy (nats) of the class distribution averaged over all
classifiers: members that latch onto different aspects of the training
distribution disagree on samples it never covered, and the disagreement
shows up as entropy.

The objective per classifier is 0.5*||W||^2 + C * sum_i CE_i with C the
inverse regularization strength multiplying the data term and the bias
unregularized.  Objective and gradient are written out explicitly (the
gradient is verified against finite differences in the test suite);
minimization uses a deterministic full-batch quasi-Newton iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize


class InvalidCountError(ValueError):
    """Requested ensemble size is outside 1..11."""


class DegenerateLabelsError(ValueError):
    """Training split does not cover at least two classes."""


class ConfigurationError(ValueError):
    """Classifier/feature-set wiring is inconsistent."""


class InvalidThresholdsError(ValueError):
    """Sample-type thresholds violate their ordering constraints."""


COEFFICIENT_EXPONENTS = (-5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5)


def select_coefficients(n_models: int) -> list[float]:
    """Regularization coefficients maximizing mutual spread over the
    10^-5..10^5 grid; a single model gets coefficient 1."""
    if not 1 <= n_models <= 11:
        raise InvalidCountError(f"n_models must be in 1..11, got {n_models}")
    if n_models == 1:
        return [1.0]
    exps = np.round(np.linspace(-5.0, 5.0, n_models)).astype(int)
    seen: list[int] = []
    for e in exps:
        if e not in seen:
            seen.append(int(e))
    return [10.0 ** e for e in seen]


def softmax_objective(theta: np.ndarray, X: np.ndarray, onehot: np.ndarray,
                      reg_coefficient: float) -> tuple[float, np.ndarray]:
    """Value and gradient of 0.5*||W||^2 + C * total cross-entropy.

    theta packs the (D, C) weight matrix followed by the C bias terms.
    """
    n, dim = X.shape
    n_classes = onehot.shape[1]
    W = theta[: dim * n_classes].reshape(dim, n_classes)
    b = theta[dim * n_classes :]
    Z = X @ W + b
    Z_shift = Z - Z.max(axis=1, keepdims=True)
    expz = np.exp(Z_shift)
    denom = expz.sum(axis=1, keepdims=True)
    logp = Z_shift - np.log(denom)
    ce = -float((onehot * logp).sum())
    P = expz / denom
    R = P - onehot
    grad_W = W + reg_coefficient * (X.T @ R)
    grad_b = reg_coefficient * R.sum(axis=0)
    value = 0.5 * float((W * W).sum()) + reg_coefficient * ce
    return value, np.concatenate([grad_W.ravel(), grad_b])


@dataclass
class ClassifierSpec:
    """One trained family member: feature set x regularization coefficient."""

    feature_set: str
    reg_coefficient: float
    weights: np.ndarray  # (D, C)
    bias: np.ndarray  # (C,)
    mean: np.ndarray
    std: np.ndarray
    n_classes: int
    converged: bool
    grad_norm: float

    def predict_proba(self, X) -> np.ndarray:
        Xz = (np.asarray(X, dtype=np.float64) - self.mean) / self.std
        Z = Xz @ self.weights + self.bias
        Z -= Z.max(axis=1, keepdims=True)
        expz = np.exp(Z)
        return expz / expz.sum(axis=1, keepdims=True)

    def cross_entropy(self, X, labels) -> float:
        P = self.predict_proba(X)
        return -float(np.log(np.maximum(P[np.arange(len(labels)), labels], 1e-300)).sum())


def train_one(X, labels, reg_coefficient: float, n_classes: int, feature_set: str = "",
              grad_tol: float = 1e-6, max_iter: int = 1000) -> ClassifierSpec:
    """Fit one softmax regression on z-scored features."""
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std[std == 0.0] = 1.0
    Xz = (X - mean) / std
    onehot = np.zeros((len(labels), n_classes))
    onehot[np.arange(len(labels)), labels] = 1.0
    dim = X.shape[1]
    theta0 = np.zeros(dim * n_classes + n_classes)
    result = minimize(
        softmax_objective,
        theta0,
        args=(Xz, onehot, reg_coefficient),
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": max_iter, "gtol": grad_tol, "ftol": 1e-14},
    )
    theta = result.x
    grad_norm = float(np.max(np.abs(result.jac)))
    return ClassifierSpec(
        feature_set=feature_set,
        reg_coefficient=float(reg_coefficient),
        weights=theta[: dim * n_classes].reshape(dim, n_classes).copy(),
        bias=theta[dim * n_classes :].copy(),
        mean=mean,
        std=std,
        n_classes=n_classes,
        converged=grad_norm < grad_tol,
        grad_norm=grad_norm,
    )


def train_family(feature_sets: dict[str, np.ndarray], labels, coefficients,
                 train_mask, n_classes: int | None = None) -> list[ClassifierSpec]:
    """One classifier per (feature set, coefficient) pair.

    feature_sets maps a name to the full N x D matrix; only rows where
    train_mask holds are used for fitting.  The z-scoring statistics come
    from the training split and are stored on each classifier.
    """
    labels = np.asarray(labels, dtype=np.int64)
    train_mask = np.asarray(train_mask, dtype=bool)
    y_train = labels[train_mask]
    present = np.unique(y_train)
    if len(present) < 2:
        raise DegenerateLabelsError(f"training labels cover {len(present)} class(es), need at least 2")
    if n_classes is None:
        n_classes = int(labels.max()) + 1
    classifiers = []
    for name, X in feature_sets.items():
        X = np.asarray(X, dtype=np.float64)
        for coeff in coefficients:
            classifiers.append(
                train_one(X[train_mask], y_train, coeff, n_classes, feature_set=name)
            )
    return classifiers


@dataclass(frozen=True)
class SampleTypeThresholds:
    """Cutoffs for the five-way sample taxonomy.

    ood_hi splits low/high detection scores (in nats, so it must sit
    inside (0, ln C)); conf_hi and conf_reliable split the prediction
    model's confidence range.
    """

    ood_hi: float
    conf_hi: float = 0.7
    conf_reliable: float = 0.9

    @classmethod
    def for_classes(cls, n_classes: int, ood_fraction: float = 0.6) -> "SampleTypeThresholds":
        return cls(ood_hi=ood_fraction * np.log(n_classes))

    def validate(self, n_classes: int) -> None:
        if not 0.0 < self.ood_hi < np.log(n_classes):
            raise InvalidThresholdsError(f"ood_hi must be in (0, ln {n_classes}), got {self.ood_hi}")
        if not 0.0 < self.conf_hi <= self.conf_reliable <= 1.0:
            raise InvalidThresholdsError(
                f"need 0 < conf_hi <= conf_reliable <= 1, got {self.conf_hi}, {self.conf_reliable}"
            )


SAMPLE_TYPES = ("known_unknown", "unknown_unknown", "reliable", "normal", "boundary")


def classify_sample_type(ood_score: float, confidence: float,
                         thresholds: SampleTypeThresholds) -> str:
    """Five-way taxonomy from detection score and prediction confidence.

    High-score samples split into those the prediction model is unsure
    about (near decision boundaries) and those it is confidently wrong
    about (blended in with normal samples); low-score samples split into
    reliable, normal and boundary by confidence.
    """
    if ood_score >= thresholds.ood_hi:
        return "known_unknown" if confidence < thresholds.conf_hi else "unknown_unknown"
    if confidence >= thresholds.conf_reliable:
        return "reliable"
    if confidence < thresholds.conf_hi:
        return "boundary"
    return "normal"


@dataclass
class OoDScoreTable:
    """Per-sample outputs of the ensemble scorer."""

    sample_ids: np.ndarray
    classes: list[str]
    avg_dist: np.ndarray  # (N, C), rows sum to 1
    ood_score: np.ndarray  # nats
    confidence: np.ndarray
    predicted_class: np.ndarray
    sample_type: list[str] = field(default_factory=list)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def ood_score_normalized(self) -> np.ndarray:
        return self.ood_score / np.log(self.n_classes)


def entropy(dist: np.ndarray) -> np.ndarray:
    """Shannon entropy in nats along the last axis, with 0 log 0 = 0."""
    d = np.asarray(dist, dtype=np.float64)
    terms = np.where(d > 0.0, d * np.log(np.where(d > 0.0, d, 1.0)), 0.0)
    return -terms.sum(axis=-1)


def score(
    classifiers: list[ClassifierSpec],
    feature_sets_test: dict[str, np.ndarray],
    classes: list[str] | None = None,
    sample_ids=None,
    thresholds: SampleTypeThresholds | None = None,
    prediction_set: str | None = None,
) -> OoDScoreTable:
    """Average the class distributions of all classifiers and score each
    sample by the entropy of that average.

    Classifiers are averaged in a canonical (feature set, coefficient)
    order, so permuting the input list cannot change a single bit of the
    output.  Confidence and predicted class come from a designated
    prediction model: the classifier on prediction_set (default: the first
    feature set) whose coefficient is closest to 1.
    """
    if not classifiers:
        raise ConfigurationError("no classifiers to score with")
    for clf in classifiers:
        if clf.feature_set not in feature_sets_test:
            raise ConfigurationError(f"feature set {clf.feature_set!r} missing from the test data")
    ordered = sorted(classifiers, key=lambda c: (c.feature_set, c.reg_coefficient))
    probs = np.stack([clf.predict_proba(feature_sets_test[clf.feature_set]) for clf in ordered])
    avg = probs.mean(axis=0)
    scores = entropy(avg)

    if prediction_set is None:
        prediction_set = classifiers[0].feature_set
    candidates = [c for c in ordered if c.feature_set == prediction_set]
    if not candidates:
        raise ConfigurationError(f"no classifier trained on prediction set {prediction_set!r}")
    predictor = min(candidates, key=lambda c: abs(np.log10(c.reg_coefficient)))
    pred_probs = predictor.predict_proba(feature_sets_test[prediction_set])
    confidence = pred_probs.max(axis=1)
    predicted = pred_probs.argmax(axis=1)

    n = avg.shape[0]
    n_classes = avg.shape[1]
    if classes is None:
        classes = [str(c) for c in range(n_classes)]
    if sample_ids is None:
        sample_ids = np.arange(n)
    if thresholds is None:
        thresholds = SampleTypeThresholds.for_classes(n_classes)
    thresholds.validate(n_classes)
    types = [classify_sample_type(s, c, thresholds) for s, c in zip(scores, confidence)]
    return OoDScoreTable(
        sample_ids=np.asarray(sample_ids),
        classes=list(classes),
        avg_dist=avg,
        ood_score=scores,
        confidence=confidence,
        predicted_class=predicted,
        sample_type=types,
    )
