"""equichain - equivariant chain homotopy equivalences and equivariant homology.

This package turns a non-equivariant strong equivalence of chain complexes into a
G-linear one through the bar construction and transfer of R-infinity module
structures, and computes (co)homology of free G-complexes by Smith normal form.
"""

__version__ = "0.1.0"
