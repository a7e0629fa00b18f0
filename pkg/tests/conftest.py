from __future__ import annotations

import pytest

from germcalc.germ import Branch, MultiGerm
from germcalc.ops import Unfolding, augment
from germcalc.ring import Poly


@pytest.fixture
def augmentation_adjacency_family():
    """The family obtained by augmenting a fixed codimension-1 base with
    z^k, for descending k: adjacent members drop one codimension step.

    The base is (x, z^4+x*z) with the quartic swallowtail as its
    1-parameter stable unfolding total; the k-th member has codimension
    k - 1.
    """
    x, z, w = Poly.variable(3, 0), Poly.variable(3, 1), Poly.variable(3, 2)
    total = MultiGerm((Branch((x, z ** 4 + x * z + w * z * z, w)),))
    u = Unfolding(total, s=1)
    phi = Poly.variable(1, 0)

    def family(k_values=(4, 3, 2)):
        return [(k, augment(u, phi ** k)) for k in k_values]

    return family
