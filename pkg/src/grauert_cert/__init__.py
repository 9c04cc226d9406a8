"""Symbolic verification of Grauert's ruled-surface example.

The package rebuilds the transition data of the compactified affine bundle,
expands the line-bundle transitions along the section at infinity, extracts
the first obstruction cocycle, and assembles a certificate that the line
bundle ``L = p*F (x) [Y]`` is nef and big but not semipositive.
"""

__version__ = "0.1.0"
