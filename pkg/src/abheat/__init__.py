"""Numerics for charged particles in a uniform magnetic field pierced by one
or two Aharonov-Bohm solenoids: heat kernels, the bound state above the first
Landau level, and the energy shift caused by the second solenoid.

Units: hbar = mu = 1, so energies are measured in the same unit as the
cyclotron frequency ``omega_c`` and lengths in ``omega_c**-1/2``.
"""

__version__ = "0.1.0"
