"""Shorthand constructors shared by the test modules."""

from cubicjac import QQ, PolyMap, parse_map, parse_polynomial


def poly(text, n, F=QQ):
    return parse_polynomial(text, n, F)


def pmap(text, F=None, nvars=None) -> PolyMap:
    return parse_map(text, F, nvars)
