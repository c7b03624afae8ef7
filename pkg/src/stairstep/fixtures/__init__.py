"""Frozen fixture surfaces with their named curves and words.

The JSON files are generated by `python -m stairstep.fixtures.build`; tests
re-derive them from scratch and compare, so the frozen data is the single
source the rest of the package trusts.
"""

from __future__ import annotations

import json
import os

from ..surface import Surface
from ..curves import validate_multicurve
from ..homology import HomologyBasis

HERE = os.path.dirname(os.path.abspath(__file__))
_CACHE = {}


class Fixture:
    """A surface with named curves, words and symmetries."""

    def __init__(self, data):
        self.data = data
        self.surface = Surface.from_json(data["surface"])
        self.curves = {name: validate_multicurve(self.surface, coords)
                       for name, coords in data["curves"].items()}
        self.word_specs = data.get("words", {})
        self.symmetries = {name: list(perm)
                           for name, perm in data.get("symmetries", {}).items()}
        self.basis_names = data.get("basis", [])
        self._homology = None

    @property
    def homology(self):
        if self._homology is None:
            self._homology = HomologyBasis(
                self.surface, [self.curves[n] for n in self.basis_names])
        return self._homology

    def curve(self, name):
        return self.curves[name]

    def word(self, name):
        """The MappingClass for a named fixture word."""
        from ..mcg import MappingClass
        return MappingClass.from_spec(self, self.word_specs[name])


def load(name):
    if name not in _CACHE:
        path = os.path.join(HERE, "%s.json" % name)
        with open(path) as fh:
            _CACHE[name] = Fixture(json.load(fh))
    return _CACHE[name]


def torus():
    return load("torus")


def genus2():
    return load("genus2")


def genus3():
    return load("genus3")
