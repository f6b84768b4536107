"""Hull perimeter statistics of random planar quadrangulations and triangulations.

Subpackages and modules:

* ``exactalg``  — exact rationals, polynomials, truncated power series
* ``genfun``    — perimeter-weighted slice generating functions
* ``planarmap`` — half-edge maps, slices, hull walks, enumeration, sampling
* ``asympt``    — closed-form asymptotic laws and scaling-limit evaluators
* ``numlab``    — numerical inverse Laplace transform, quadrature, statistics
* ``cli``       — the ``hullmaps`` command-line tool
"""

__version__ = "0.1.0"
