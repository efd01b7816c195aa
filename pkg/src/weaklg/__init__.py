"""Exact series, operator, and lattice checks for a catalog of torus Laurent models.

Submodules:
  laurent    exact Laurent polynomials in x, y, z and their parser
  periods    constant-term power series of polynomial powers
  pfops      differential operators in t and D = t d/dt, exact recovery
  polytopes  Newton polytopes, duals, lattice-point counts, fans
  critical   numeric critical points and critical values
  catalog    the built-in table of rank-one models and file loading
  cli        command-line entry point
"""

__version__ = "0.1.0"
