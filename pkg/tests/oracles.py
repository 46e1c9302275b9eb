"""Independent reference computations used to check the library.

Everything here is written in plain Python (fractions/math) and shares no
code with the package under test.
"""

import math
from fractions import Fraction


def metrics_bruteforce(tp, fp, fn, tn):
    total = tp + fp + fn + tn
    acc = Fraction(tp + tn, total)
    prec = Fraction(tp, tp + fp) if tp + fp else Fraction(0)
    rec = Fraction(tp, tp + fn) if tp + fn else Fraction(0)
    f1 = 2 * prec * rec / (prec + rec) if prec + rec else Fraction(0)
    return acc, prec, rec, f1


def _gini(counts):
    n = sum(counts)
    return 1 - sum(Fraction(c, n) ** 2 for c in counts)


def stump_bruteforce(X, y):
    """Exhaustive depth-1 search in exact arithmetic.

    Returns (feature, threshold, decrease) for the largest decrease, ties to
    the lower feature then the lower threshold, or None if nothing improves.
    """
    n = len(y)
    parent = _gini([y.count(0), y.count(1)])
    best = None
    for f in range(len(X[0])):
        values = sorted(set(row[f] for row in X))
        for a, b in zip(values, values[1:]):
            thr = (a + b) / 2.0
            left = [y[i] for i in range(n) if X[i][f] <= thr]
            right = [y[i] for i in range(n) if X[i][f] > thr]
            child = (Fraction(len(left), n) * _gini([left.count(0), left.count(1)])
                     + Fraction(len(right), n) * _gini([right.count(0), right.count(1)]))
            dec = parent - child
            if dec > 0 and (best is None or dec > best[2]):
                best = (f, thr, dec)
    return best


def pearson_formula(x, y):
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def gaussian_pdf(x, mean, var):
    return math.exp(-((x - mean) ** 2) / (2 * var)) / math.sqrt(2 * math.pi * var)


def nb_bayes_rule(priors, means, variances, x):
    """P(class 1 | x) for Gaussian NB on log1p features, by direct products."""
    z = [math.log1p(v) for v in x]
    joint = []
    for c in (0, 1):
        p = priors[c]
        for j, zj in enumerate(z):
            p *= gaussian_pdf(zj, means[c][j], variances[c][j])
        joint.append(p)
    return joint[1] / (joint[0] + joint[1])


def nb_fit_by_hand(X, y):
    """Class priors, means and population variances of log1p features."""
    out_means, out_vars, priors = [], [], []
    for c in (0, 1):
        rows = [[math.log1p(v) for v in X[i]] for i in range(len(y)) if y[i] == c]
        priors.append(len(rows) / len(y))
        d = len(rows[0])
        mu = [sum(r[j] for r in rows) / len(rows) for j in range(d)]
        var = [sum((r[j] - mu[j]) ** 2 for r in rows) / len(rows) for j in range(d)]
        out_means.append(mu)
        out_vars.append(var)
    return priors, out_means, out_vars


def central_difference(f, params, h=1e-5):
    grads = []
    for i in range(len(params)):
        up = list(params)
        down = list(params)
        up[i] += h
        down[i] -= h
        grads.append((f(up) - f(down)) / (2 * h))
    return grads
