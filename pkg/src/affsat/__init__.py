"""Exact kernel for affine Satake-side formulas and function-field
Eisenstein/Tamagawa computations.

Submodules:

* qrat      -- exact rational functions of q, truncated q^{-1} expansions
* rootdata  -- Cartan data, finite/affine Weyl groups, affine coroots
* series    -- lattice-exponent formal series with delta truncation
* satake    -- Macdonald formulas, characters, q-analogs, Delta, GK series
* hecke     -- Iwahori-Hecke algebra in Bernstein presentation
* zeta      -- curve zeta functions and Tamagawa volume formulas
* eisenstein-- Borel constant terms, residues, affine correction products
* cli       -- command-line front end
"""

from .qrat import QRat, LaurentQ
from .rootdata import (LatticeVector, RootDatum, build_root_datum,
                       weyl_enumerate, affine_positive_coroots,
                       stabilizer_poincare)
from .errors import PreconditionError, StabilizationError, PoleError

__version__ = "0.1.0"
