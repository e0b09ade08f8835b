"""Physical constants in Gaussian (CGS) units.

Values are CODATA 2018. The elementary charge in esu is the exact SI value
scaled by c/10, so every derived number below is reproducible bit-for-bit.
"""

C_LIGHT = 2.99792458e10  # cm s^-1 (exact)
G_NEWTON = 6.67430e-8  # cm^3 g^-1 s^-2
HBAR = 1.054571817e-27  # erg s
ELECTRON_MASS = 9.1093837015e-28  # g
ELEMENTARY_CHARGE = 1.602176634e-19 * C_LIGHT / 10.0  # esu
PLANCK_LENGTH = (HBAR * G_NEWTON / C_LIGHT**3) ** 0.5  # cm

TABLE = {
    "c": (C_LIGHT, "cm/s"),
    "G": (G_NEWTON, "cm^3/(g s^2)"),
    "hbar": (HBAR, "erg s"),
    "m_e": (ELECTRON_MASS, "g"),
    "e": (ELEMENTARY_CHARGE, "esu"),
    "l_planck": (PLANCK_LENGTH, "cm"),
}
