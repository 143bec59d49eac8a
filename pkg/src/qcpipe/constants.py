"""Physical constants and unit conversions (Hartree atomic units internally)."""

BOHR_IN_ANGSTROM = 0.529177210903
HARTREE_IN_EV = 27.211386245988
HARTREE_IN_KJ_PER_MOL = 2625.4996394799
# 1 kcal/mol expressed in hartree, rounded the conventional way.
CHEMICAL_ACCURACY = 1.6e-3


def angstrom_to_bohr(x):
    return x / BOHR_IN_ANGSTROM


def bohr_to_angstrom(x):
    return x * BOHR_IN_ANGSTROM


def hartree_to_ev(e):
    return e * HARTREE_IN_EV


def hartree_to_kj_per_mol(e):
    return e * HARTREE_IN_KJ_PER_MOL
