"""Gluing finite topological spaces.

Modules:
  fintop   finite spaces, maps, subspace/coproduct/pullback/quotient,
           brute-force enumeration oracles
  glidx    the gluing index category (normalized objects, generators, hom)
  gdata    concrete gluing data, its validator, and the functor realization
  glue     glued quotient spaces, cones, mediating maps, universal property
  refine   reindexing, refinements, induced maps, meta gluing composition
  cover    gluing coverings and the Grothendieck-topology axioms
  specfile declaration-document parser
  cli      command dispatcher
"""

__version__ = "0.1.0"
