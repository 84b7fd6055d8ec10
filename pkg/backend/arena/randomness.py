import hashlib

import numpy as np


def stream_seed(*keys):
    """128-bit integer derived from an ordered tuple of keys."""
    material = '\x1f'.join(str(key) for key in keys).encode('utf-8')
    return int.from_bytes(hashlib.sha256(material).digest()[:16], 'big')


def keyed_rng(*keys):
    """Generator whose stream depends only on the keys, never on call order."""
    return np.random.default_rng(stream_seed(*keys))
