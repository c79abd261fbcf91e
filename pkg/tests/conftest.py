import random

import pytest

from sboxevo.sbox import SBox


def random_perm_sbox(n, rng):
    table = list(range(1 << n))
    rng.shuffle(table)
    return SBox(n, tuple(table))


class ScriptedRandom(random.Random):
    """random.Random whose randrange/randint return queued values first."""

    def __new__(cls, *values):
        return super().__new__(cls)

    def __init__(self, *values):
        super().__init__(0)
        self.queue = list(values)

    def randrange(self, *args, **kwargs):
        if self.queue:
            return self.queue.pop(0)
        return super().randrange(*args, **kwargs)

    def randint(self, a, b):
        if self.queue:
            return self.queue.pop(0)
        return super().randint(a, b)


@pytest.fixture
def rng():
    return random.Random(20240601)
