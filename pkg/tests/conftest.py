import random

import pytest

from cproof.corpus import acyclic, odd_implies_nat, stuttering, two_hydra, two_root
from cproof.families import random_document


@pytest.fixture(scope="session")
def hydra_doc():
    return two_hydra()


@pytest.fixture(scope="session")
def stutter_doc():
    return stuttering()


@pytest.fixture(scope="session")
def acyclic_doc():
    return acyclic()


@pytest.fixture(scope="session")
def odd_nat_doc():
    return odd_implies_nat()


@pytest.fixture(scope="session")
def two_root_doc():
    return two_root()


@pytest.fixture(scope="session")
def corpus_docs(hydra_doc, odd_nat_doc, stutter_doc, acyclic_doc, two_root_doc):
    return [hydra_doc, odd_nat_doc, stutter_doc, acyclic_doc, two_root_doc]


def make_random_docs(count, seed, max_nodes=8):
    rng = random.Random(seed)
    return [random_document(rng, max_nodes, name=f"rand-{seed}-{i}")
            for i in range(count)]
