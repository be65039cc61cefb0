"""Exact E-infinity coalgebra machinery over prime fields.

Subpackage map:

  linalg      dense mod-p / packed GF(2) elimination
  algebra     permutations, signs, group rings
  dgmod       finite-type DG modules, tensor, cones, homology
  lifting     null-homotopy extension and relative lifting
  lcat        finite ordinals with partial maps and their generators
  trees       leaf-labeled tree monomials with Koszul bookkeeping
  operad      quasi-free truncated operads, truncation functors
  resolution  the Sigma_2 resolution, acyclic extensions, the operad tower
  simplicial  finite pointed simplicial sets
  chains      normalized chains, Eilenberg-Zilber operators, contractions
  lalgebra    evaluable functor-with-product structures on ordinals
  coalgebra   structure maps on the main element with homotopy witnesses
  steenrod    cup-i products and Steenrod squares (characteristic 2)
  cli         command line front end
"""

__version__ = "0.1.0"
