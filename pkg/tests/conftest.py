import random

import pytest

from hcie import rsa

# 512-bit keys keep the suite fast; anything security-sensitive about key
# size is exercised explicitly where it matters (acceptance criterion 10
# uses 1024-bit keys).


@pytest.fixture(scope="session")
def recipient_pair():
    return rsa.keygen(512, random.Random(0x52454350))


@pytest.fixture(scope="session")
def sender_pair():
    return rsa.keygen(512, random.Random(0x53454E44))


@pytest.fixture(scope="session")
def other_pair():
    return rsa.keygen(512, random.Random(0x4F544852))


@pytest.fixture(scope="session")
def textbook_priv():
    # the classic worked example: p=61, q=53, n=3233, e=17, d=2753
    return rsa.RsaPrivateKey(n=3233, e=17, d=2753, p=61, q=53)
