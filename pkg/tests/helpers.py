"""Random objects for property tests, built independently of the library."""
import itertools

import numpy as np
from scipy.stats import unitary_group


def random_state(d, rng, rank=None):
    rank = rank or d
    a = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_unitary(d, rng):
    return unitary_group.rvs(d, random_state=rng)


def random_kraus(d, rng, n_kraus=3):
    # Stinespring: columns of a random isometry C^d -> C^(d n_kraus)
    v = unitary_group.rvs(d * n_kraus, random_state=rng)[:, :d]
    return v.reshape(n_kraus, d, d)


def random_povm(d, rng, outcomes=3):
    parts = [random_state(d, rng) for _ in range(outcomes)]
    total = sum(parts)
    w, v = np.linalg.eigh(total)
    inv_sqrt = v @ np.diag(w ** -0.5) @ v.conj().T
    return [inv_sqrt @ p @ inv_sqrt for p in parts]


def random_bistochastic(n, rng, terms=None):
    """Convex combination of random permutation matrices."""
    terms = terms or n + 1
    weights = rng.dirichlet(np.ones(terms))
    out = np.zeros((n, n))
    for w in weights:
        out[np.arange(n), rng.permutation(n)] += w
    return out


def random_quasi_state(n, rng, spread=1.0):
    q = rng.normal(scale=spread, size=n)
    return q - (q.sum() - 1.0) / n


def all_permutations(n):
    return [np.eye(n)[list(p)] for p in itertools.permutations(range(n))]
