"""Physical constants (CODATA 2018), SI units.

Pinned here in one place so every derived quantity in the package is
reproducible bit-for-bit.
"""

HBAR = 1.054571817e-34      # J s (exact, via h = 6.62607015e-34)
H_PLANCK = 6.62607015e-34   # J s (exact)
K_B = 1.380649e-23          # J/K (exact)
C_LIGHT = 2.99792458e8      # m/s (exact)
EPSILON_0 = 8.8541878128e-12  # F/m
