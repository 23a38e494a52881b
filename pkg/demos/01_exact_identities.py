#!/usr/bin/env python3
"""Walk through the exact discrete identities on a tiny grid.

The whole library rests on four facts that hold to rounding error at every
finite grid parameter n (not just in a limit):

  1. the transform round trip multiplies by exactly 2,
  2. convolutions factorise under the transform,
  3. forward differences transform through their symbol plus explicit
     boundary corrections,
  4. the explicit heat stepper has a closed form in frequency space.

This script demonstrates each one on an n=4 grid (32 points) with random
complex data, printing the measured residuals.
"""

import numpy as np

from hyperheat import (
    GridFunction,
    GridParams,
    boundary_corrections,
    check_convolution_theorem,
    check_dx_identity,
    check_dxx_identity,
    evolve,
    forward,
    inverse,
    spectral_hat,
)

rng = np.random.default_rng(7)
params = GridParams(4)
M = params.space_count
print(f"grid: n={params.n}, {M} space points of spacing {params.dx} covering [-4, 4)")


def random_data():
    return GridFunction(params, rng.standard_normal(M) + 1j * rng.standard_normal(M))


# 1. The round trip is exactly twice the identity --------------------------------
f = random_data()
round_trip = inverse(forward(f))
resid = np.abs(round_trip.values - 2 * f.values).max()
print(f"\n1. inverse(forward(f)) vs 2f:        max residual {resid:.3e}")

# 2. Convolutions factorise -------------------------------------------------------
g = random_data()
print(f"2. hat(f*g) vs hat(f)*hat(g):        max residual {check_convolution_theorem(f, g):.3e}")

# 3. Differences transform exactly through symbol + boundary corrections ---------
print(f"3. hat(d_x f) vs psi*hat(f) - e:     max residual {check_dx_identity(f):.3e}")
print(f"   hat(d_xx f) vs psi^2*hat(f) - F:  max residual {check_dxx_identity(f):.3e}")

# Without the corrections the identity fails at the boundary-sensitive
# frequencies -- they are not an optional refinement:
from hyperheat import d_x, spectral_symbols

sym = spectral_symbols(params)
naive = np.abs(forward(d_x(f)).values - (sym.psi * forward(f)).values).max()
print(f"   ... dropping the corrections:     residual jumps to {naive:.3e}")

# 4. The stepper has an exact closed form in frequency space ---------------------
steps = 6
field = evolve(f, steps)
corr = [boundary_corrections(field.slice(j)).f_corr for j in range(steps)]
ref = forward(field.slice(steps))
got = spectral_hat(forward(f), corr, steps)
resid = np.abs(got.values - ref.values).max() / ref.max_abs()
print(f"4. spectral closed form vs {steps} explicit steps: relative residual {resid:.3e}")
print(f"   (the stepper amplified the data to max |f| = {field.slice(steps).max_abs():.3e};")
print("    the closed form tracks it exactly, corrections included)")
