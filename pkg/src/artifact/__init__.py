"""Zeta functions of degenerating Schottky families.

Subpackages cover truncated Laurent arithmetic, free-group combinatorics,
Schottky families of Mobius transformations, graph (Ihara) zeta functions,
Selberg zeta functions via Euler products and transfer-operator determinants,
intermediate zeta functions, and zero/resonance location.
"""

__version__ = "0.1.0"
