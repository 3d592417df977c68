# majorana/utilities/constants.py

from typing import Dict

# CODATA 2018, SI units
BOHR_MAGNETON: float = 9.2740100783e-24  # J/T
HBAR: float = 1.054571817e-34  # J s
ATOMIC_MASS_UNIT: float = 1.66053906660e-27  # kg
BOLTZMANN: float = 1.380649e-23  # J/K

# Lab units accepted at the config boundary
GAUSS: float = 1.0e-4  # T
GAUSS_PER_CM: float = 1.0e-2  # T/m
CENTIMETER: float = 1.0e-2  # m

# Rules of thumb quoted in lab units for omega_prec and omega0
PRECESSION_PER_GAUSS: float = 8.8e6  # 1/(s G), multiplies g B0
TRAP_FREQUENCY_PER_GRADIENT: float = 74.6  # 1/s per G/cm, multiplies lambda sqrt(g/(A B0))

# Largest doubled spin label handled with exact factorials
MAX_TWO_F: int = 24


def constants_table() -> Dict[str, float]:
    """
    Physical constants embedded in every report.

    Returns:
        Dict[str, float]: constant name to SI value
    """
    return {
        "bohr_magneton_J_per_T": BOHR_MAGNETON,
        "hbar_J_s": HBAR,
        "atomic_mass_unit_kg": ATOMIC_MASS_UNIT,
        "boltzmann_J_per_K": BOLTZMANN,
        "gauss_T": GAUSS,
        "gauss_per_cm_T_per_m": GAUSS_PER_CM,
    }
