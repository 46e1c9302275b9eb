import numpy as np

from patentcite.dataset import Dataset


def make_dataset(X, y, paper=None, names=None):
    X = np.asarray(X, dtype=float)
    n, d = X.shape
    names = names or tuple(f"f{j}" for j in range(d))
    return Dataset(
        feature_names=names,
        features=X,
        labels=np.asarray(y),
        paper_citations=np.zeros(n, dtype=int) if paper is None else paper,
        ids=tuple(str(i) for i in range(n)),
    )
