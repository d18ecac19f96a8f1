# # Weak coupling: eigenvalues escaping to infinity
#
# For eps V with small eps, eigenvalues appear deep in the band. A rank-one
# approximation L(z) of Q(z) leads to the first-order condition
# 4m/(4|z|^2 + m^2) = eps a_z, whose solutions move out like eps^(-1/2).

import numpy as np

from dislocated_dirac.birman_schwinger import (find_det_zero, first_order_root, m_operator_bound,
                                               potential_grid, weak_coupling_first_order)
from dislocated_dirac.params import SpectralPoint
from dislocated_dirac.potential import MatrixPotential

m = 1.0
# a narrow smooth bump, normalised to unit L1 norm
base = MatrixPotential.bump(0.0, 0.005, np.diag([-1.0, 1.0]))
V = base.scaled(1 / base.norms["L1"])
grid = potential_grid(V, 16, 400.0)

eps_list = (1e-2, 5e-3, 2.5e-3, 1.25e-3)
z = np.sqrt(m / eps_list[0])
roots = []
print("   eps        z* (determinant)          z1 (first order)        residual/eps^2")
for eps in eps_list:
    z = find_det_zero(z, m, V, grid, coupling=eps)
    rep = weak_coupling_first_order(SpectralPoint.from_complex(z, m), V, grid)
    z1 = first_order_root(m, V, eps, z, grid)
    roots.append(z)
    print(f"{eps:.2e}  {z:.6f}  {z1:.6f}  {rep.residual(eps) / eps**2:.4f}")
    z = z * np.sqrt(2)

slope = np.polyfit(np.log(1 / np.array(eps_list)), np.log(np.abs(np.real(roots))), 1)[0]
print("escape exponent:", slope)

# The remainder M = Q - L stays bounded as Re z grows, which is what makes
# the first-order condition accurate.

for tau in (20.0, 40.0, 80.0):
    print(tau, m_operator_bound(SpectralPoint(tau, 0.3, m), MatrixPotential.bump(0.0, 0.5, np.diag([-1.0, 1.0]))))
