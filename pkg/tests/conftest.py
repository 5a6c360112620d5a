import random
from fractions import Fraction

import pytest

from valkit.algebra import Knowledgebase
from valkit.core import Assignment, NONNEG_RATIONAL, VariableUniverse, enumerate_assignments
from valkit.potentials import Potential
from valkit.relations import Relation


@pytest.fixture
def screening_universe():
    return VariableUniverse.of([("a", ("54-", "54+")), ("e", ("M", "CBE")), ("f", ("Y", "2Y"))])


@pytest.fixture
def binary_universe():
    return VariableUniverse.of([(n, ("0", "1")) for n in ("w", "x", "y", "z")])


def random_universe(rng: random.Random, max_vars: int = 6, max_frame: int = 3) -> VariableUniverse:
    n = rng.randint(2, max_vars)
    labels = ("u", "v", "w")
    return VariableUniverse.of(
        [(f"x{i}", labels[: rng.randint(2, max_frame)]) for i in range(n)]
    )


def random_relation(rng: random.Random, universe: VariableUniverse, domain=None, keep=0.6) -> Relation:
    if domain is None:
        names = sorted(universe.vars)
        size = rng.randint(1, min(3, len(names)))
        domain = frozenset(rng.sample(names, size))
    tuples = [a for a in enumerate_assignments(domain, universe) if rng.random() < keep]
    return Relation(universe, domain, frozenset(tuples))


def random_potential(rng: random.Random, universe: VariableUniverse, domain=None) -> Potential:
    if domain is None:
        names = sorted(universe.vars)
        size = rng.randint(1, min(3, len(names)))
        domain = frozenset(rng.sample(names, size))
    table = {
        a: Fraction(rng.randint(0, 4), rng.randint(1, 4))
        for a in enumerate_assignments(domain, universe)
    }
    return Potential(universe, domain, NONNEG_RATIONAL, table)


def random_relation_kb(rng: random.Random, max_vars=6, max_frame=3, max_vals=5) -> Knowledgebase:
    universe = random_universe(rng, max_vars, max_frame)
    count = rng.randint(1, max_vals)
    return Knowledgebase(universe, tuple(random_relation(rng, universe) for _ in range(count)))


def random_potential_kb(rng: random.Random, max_vars=6, max_frame=3, max_vals=5) -> Knowledgebase:
    universe = random_universe(rng, max_vars, max_frame)
    count = rng.randint(1, max_vals)
    return Knowledgebase(universe, tuple(random_potential(rng, universe) for _ in range(count)))


def assignment_of(universe: VariableUniverse, **values) -> Assignment:
    return Assignment.of(values)
