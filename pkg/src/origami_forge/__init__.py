"""origami-forge: exact arithmetic for square-tiled surfaces.

An origami is a pair of permutations (p1, p2) gluing unit squares by
translations.  The package computes cylinder decompositions, singularity
data and genus; a horizontal Schottky cut system of g closed horizontal
curves; Veech-group membership of parabolic twists through free-group
automorphisms; the induced action on first homology with block-form and
characteristic-polynomial certificates; and Moebius-map fixed-point
coordinates for the loxodromic normal form.
"""

__version__ = "0.1.0"
