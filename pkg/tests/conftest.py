import pytest

from invint.cli import bundled_corpus_path, load_corpus
from invint.expr import parse
from invint.monotone import IntervalDomain, build

# interior codomain fractions; last pair is reversed on purpose
_BOUND_FRACTIONS = [(0.05, 0.95), (0.2, 0.8), (0.35, 0.65), (0.1, 0.6), (0.75, 0.25)]


@pytest.fixture(scope="session")
def corpus_tasks():
    return load_corpus(bundled_corpus_path())


@pytest.fixture(scope="session")
def corpus_functions(corpus_tasks):
    """(task, MonotoneFunction, exact antiderivative expression or None)."""
    out = []
    for task in corpus_tasks:
        f = build(parse(task.f_text, ("x",)), IntervalDomain(*task.domain))
        F_expr = (
            parse(task.antiderivative_text, ("x",))
            if task.antiderivative_text
            else None
        )
        out.append((task, f, F_expr))
    return out


@pytest.fixture(scope="session")
def bound_pairs():
    """Five deterministic bound pairs inside a codomain."""

    def make(codomain):
        c, d = codomain
        width = d - c
        return [(c + lo * width, c + hi * width) for lo, hi in _BOUND_FRACTIONS]

    return make
