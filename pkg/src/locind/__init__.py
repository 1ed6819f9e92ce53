"""locind: exact verification of localization against cohomological induction.

Computes both sides of a family of equivariant-module comparisons for
sl(2) acting on the projective line — an algebraic side built from a
Hecke-style convolution algebra and standard resolutions, and a
geometric side built from twisted differential operators, delta-function
modules, Laurent modules and Cech covers — entirely over the rational
numbers, and checks that the resulting characters agree.
"""

__version__ = "1.0.0"

__all__ = [
    "exactla",
    "liealg",
    "pbw",
    "gkmod",
    "hecke",
    "cohind",
    "locp1",
    "harness",
]
