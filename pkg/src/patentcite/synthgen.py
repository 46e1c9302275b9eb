"""Synthetic altmetric-like corpora with a planted, tunable signal.

Labels are drawn first. Highly cited papers (paper citations above
``citation_threshold``) are patent-cited with probability ``citation_link``
and the rest at whatever rate keeps the overall positive fraction at
``positive_fraction``. Each mention count is then Poisson with mean
``base_mean * (1 + signal_strength * label)``, independently per feature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import PREDICTOR_SOURCES, Dataset, RawRecord

DEFAULT_BASE_MEANS = {
    "news": 0.8,
    "blogs": 0.6,
    "policy": 0.3,
    "twitter": 8.0,
    "facebook": 1.2,
    "wikipedia": 0.4,
    "googleplus": 0.3,
    "mendeley": 25.0,
}


@dataclass(frozen=True)
class SynthConfig:
    n_records: int = 5000
    positive_fraction: float = 0.475
    signal_strength: float = 0.5
    base_means: dict = field(default_factory=lambda: dict(DEFAULT_BASE_MEANS))
    citation_link: float = 0.8
    citation_threshold: int = 100
    citation_median: float = 20.0
    citation_sigma: float = 1.9
    seed: int = 0

    def __post_init__(self):
        if self.n_records < 10:
            raise ValueError("n_records must be at least 10")
        if not 0.0 < self.positive_fraction < 1.0:
            raise ValueError("positive_fraction must lie strictly between 0 and 1")
        if self.signal_strength < 0:
            raise ValueError("signal_strength must be non-negative")
        if not 0.0 <= self.citation_link <= 1.0:
            raise ValueError("citation_link must be a probability")
        if self.citation_median <= 0 or self.citation_sigma <= 0:
            raise ValueError("citation_median and citation_sigma must be positive")
        if set(self.base_means) != set(PREDICTOR_SOURCES):
            raise ValueError(f"base_means needs exactly the sources {PREDICTOR_SOURCES}")
        if any(not v > 0 for v in self.base_means.values()):
            raise ValueError("base_means must all be positive")
        low = self.low_cohort_rate()
        if not 0.0 <= low <= 1.0:
            raise ValueError(
                "citation_link is incompatible with positive_fraction: "
                f"the low-citation cohort would need rate {low:.3f}"
            )

    def high_cohort_share(self) -> float:
        """P(floor(lognormal) > citation_threshold)."""
        z = (math.log(self.citation_threshold + 1) - math.log(self.citation_median))
        z /= self.citation_sigma
        return 0.5 * math.erfc(z / math.sqrt(2.0))

    def low_cohort_rate(self) -> float:
        q = self.high_cohort_share()
        return (self.positive_fraction - q * self.citation_link) / (1.0 - q)


def _draw(config: SynthConfig):
    rng = np.random.default_rng(config.seed)
    n = config.n_records
    paper = np.floor(rng.lognormal(math.log(config.citation_median),
                                   config.citation_sigma, size=n)).astype(np.int64)
    high = paper > config.citation_threshold
    rate = np.where(high, config.citation_link, config.low_cohort_rate())
    labels = (rng.random(n) < rate).astype(np.int64)
    base = np.array([config.base_means[s] for s in PREDICTOR_SOURCES])
    means = base[None, :] * (1.0 + config.signal_strength * labels[:, None])
    features = rng.poisson(means).astype(np.int64)
    patents = np.where(labels == 1, 1 + rng.poisson(1.5, size=n), 0)
    years = rng.integers(2011, 2020, size=n)
    ids = tuple(f"synth-{i:06d}" for i in range(n))
    return ids, years, features, paper, patents, labels


def generate(config: SynthConfig = SynthConfig()) -> Dataset:
    ids, years, features, paper, patents, labels = _draw(config)
    return Dataset(
        feature_names=PREDICTOR_SOURCES,
        features=features.astype(np.float64),
        labels=labels,
        paper_citations=paper,
        ids=ids,
        patent_citations=patents,
        years=years,
    )


def generate_records(config: SynthConfig = SynthConfig()) -> list[RawRecord]:
    """The same corpus as :func:`generate`, in pre-cleaning record form.

    Sparse sources (weibo, f1000, qna, reddit) are left null throughout.
    """
    ids, years, features, paper, patents, _ = _draw(config)
    records = []
    for i, rid in enumerate(ids):
        mentions = {s: int(features[i, j]) for j, s in enumerate(PREDICTOR_SOURCES)}
        records.append(RawRecord(
            id=rid,
            year=int(years[i]),
            mentions=mentions,
            paper_citations=int(paper[i]),
            patent_citations=int(patents[i]),
        ))
    return records
