"""Exponent bounds side by side, as exact fractions."""
from threepowers import bound_catalog

for e in [(1, 3), (1, 4), (2, 3), (2, 4), (1, 12), (1, 13), (3, 7)]:
    cat = bound_catalog(e)
    name, value = cat.best()
    print(e, {k: str(v) for k, v in cat.applicable().items()}, "best:", name, value)
