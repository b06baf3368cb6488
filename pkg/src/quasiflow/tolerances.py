"""Numerical tolerances shared by every module."""

STRUCTURAL = 1e-12      # frame identities, column sums, hermiticity
RECONSTRUCTION = 1e-10  # roundtrips, trace preservation, Born-rule agreement
PSD_FLOOR = -1e-10      # lowest eigenvalue accepted for a density matrix
CHOI_FLOOR = -1e-8      # lowest Choi eigenvalue accepted for a CPTP map
GRAM_CONDITION = 1e10   # dual frame refused above this condition number
DECOHERENCE_EPS = 1e-12  # |G| below this makes rates undefined
ZETA_EPS = 1e-12        # dead-band on the witness flow
NEGATIVITY_EPS = 1e-12  # quasi-channel entry counted as negative below -this
SLOPE_EPS = 1e-10       # entropy decrease counted as a violation below -this
QUADRATURE = 1e-10
JACOBI_OFFDIAG = 1e-14
LP_FEASIBILITY = 1e-9
PROB_WARN = -1e-8
