"""Published tables and displayed formulas, kept as text exactly as printed.

Entries are strings in the ``symexpr`` grammar so that tests can parse them
and compare against what the code computes.  Where a printed item is known to
be wrong the transcription keeps the printed form and the correction lives in
the computing code; tests document the difference.
"""
from __future__ import annotations

# Generators as printed.  The first one reads gamma*d_x + gamma*d_y; the
# determining equations give gamma*x*d_x + gamma*y*d_y, which is what the code uses.
GENERATORS_PRINTED = {
    1: ("gamma", "gamma", "t", "-phi/(theta-1)"),
    2: ("0", "0", "1", "0"),
    3: ("y", "-x", "0", "0"),
    4: ("1", "0", "0", "0"),
    5: ("0", "1", "0", "0"),
}

# Commutation table: (i, j) -> {k: coefficient of X_k in [X_i, X_j]}.
COMMUTATORS = {
    (1, 2): {2: "-1"}, (1, 4): {4: "-gamma"}, (1, 5): {5: "-gamma"},
    (2, 1): {2: "1"},
    (3, 4): {5: "1"}, (3, 5): {4: "-1"},
    (4, 1): {4: "gamma"}, (4, 3): {5: "-1"},
    (5, 1): {5: "gamma"}, (5, 3): {4: "1"},
}

# Adjoint representation table: (i, j) -> coefficients of Ad(exp(eps X_i)) X_j.
ADJOINT = {
    (1, 1): {1: "1"}, (1, 2): {2: "exp(eps)"}, (1, 3): {3: "1"},
    (1, 4): {4: "exp(gamma*eps)"}, (1, 5): {5: "exp(gamma*eps)"},
    (2, 1): {1: "1", 2: "-eps"}, (2, 2): {2: "1"}, (2, 3): {3: "1"},
    (2, 4): {4: "1"}, (2, 5): {5: "1"},
    (3, 1): {1: "1"}, (3, 2): {2: "1"}, (3, 3): {3: "1"},
    (3, 4): {4: "cos(eps)", 5: "-sin(eps)"}, (3, 5): {4: "sin(eps)", 5: "cos(eps)"},
    (4, 1): {1: "1", 4: "-gamma*eps"}, (4, 2): {2: "1"}, (4, 3): {3: "1", 5: "eps"},
    (4, 4): {4: "1"}, (4, 5): {5: "1"},
    (5, 1): {1: "1", 5: "-gamma*eps"}, (5, 2): {2: "1"}, (5, 3): {3: "1", 4: "-eps"},
    (5, 4): {4: "1"}, (5, 5): {5: "1"},
}

# Coefficient action: i -> transformed (alpha1..alpha5) under Ad(exp(eps X_i)).
COEFFICIENT_ACTION = {
    1: ("alpha1", "exp(eps)*alpha2", "alpha3", "exp(gamma*eps)*alpha4", "exp(gamma*eps)*alpha5"),
    2: ("alpha1", "alpha2 - eps*alpha1", "alpha3", "alpha4", "alpha5"),
    3: ("alpha1", "alpha2", "alpha3", "alpha4*cos(eps) + alpha5*sin(eps)",
        "alpha5*cos(eps) - alpha4*sin(eps)"),
    4: ("alpha1", "alpha2", "alpha3", "alpha4 - gamma*eps*alpha1", "alpha5 + eps*alpha3"),
    5: ("alpha1", "alpha2", "alpha3", "alpha4 - eps*alpha3", "alpha5 - gamma*eps*alpha1"),
}

# First-order change of the coefficients under Ad(exp(eps*B)), B = sum beta_j X_j.
LAMBDA = (
    "0",
    "-alpha2*beta1 + alpha1*beta2",
    "0",
    "gamma*(-alpha4*beta1 + alpha1*beta4) - alpha5*beta3 + alpha3*beta5",
    "gamma*(-alpha5*beta1 + alpha1*beta5) + alpha4*beta3 - alpha3*beta4",
)

# Matrix shown in the Killing-form proof.
AD_MATRIX = (
    ("0", "0", "0", "0", "0"),
    ("-alpha2", "alpha1", "0", "0", "0"),
    ("0", "0", "0", "0", "0"),
    ("-gamma*alpha4", "0", "-alpha5", "gamma*alpha1", "alpha3"),
    ("-gamma*alpha5", "0", "alpha4", "-alpha3", "gamma*alpha1"),
)

KILLING = "(2*gamma^2 + 1)*alpha1^2 - 2*alpha3^2"

# Single-generator adjoint matrices M_1..M_5 (row-vector convention alpha . M).
M_MATRICES = {
    1: (("1", "0", "0", "0", "0"),
        ("0", "exp(eps1)", "0", "0", "0"),
        ("0", "0", "1", "0", "0"),
        ("0", "0", "0", "exp(gamma*eps1)", "0"),
        ("0", "0", "0", "0", "exp(gamma*eps1)")),
    2: (("1", "-eps2", "0", "0", "0"),
        ("0", "1", "0", "0", "0"),
        ("0", "0", "1", "0", "0"),
        ("0", "0", "0", "1", "0"),
        ("0", "0", "0", "0", "1")),
    3: (("1", "0", "0", "0", "0"),
        ("0", "1", "0", "0", "0"),
        ("0", "0", "1", "0", "0"),
        ("0", "0", "0", "cos(eps3)", "-sin(eps3)"),
        ("0", "0", "0", "sin(eps3)", "cos(eps3)")),
    4: (("1", "0", "0", "-gamma*eps4", "0"),
        ("0", "1", "0", "0", "0"),
        ("0", "0", "1", "0", "eps4"),
        ("0", "0", "0", "1", "0"),
        ("0", "0", "0", "0", "1")),
    5: (("1", "0", "0", "0", "-gamma*eps5"),
        ("0", "1", "0", "0", "0"),
        ("0", "0", "1", "-eps5", "0"),
        ("0", "0", "0", "1", "0"),
        ("0", "0", "0", "0", "1")),
}

SIGMA1 = "eps4*cos(eps3) + eps5*sin(eps3)"
SIGMA2 = "eps4*sin(eps3) - eps5*cos(eps3)"

# Product M5 M4 M3 M2 M1 as printed, with sigma1/sigma2 left as names.
TRANSFORM_MATRIX = (
    ("1", "-eps2*exp(eps1)", "0", "-gamma*sigma1*exp(gamma*eps1)", "gamma*sigma2*exp(gamma*eps1)"),
    ("0", "exp(eps1)", "0", "0", "0"),
    ("0", "0", "1", "sigma2*exp(gamma*eps1)", "sigma1*exp(gamma*eps1)"),
    ("0", "0", "0", "exp(gamma*eps1)*cos(eps3)", "-exp(gamma*eps1)*sin(eps3)"),
    ("0", "0", "0", "exp(gamma*eps1)*sin(eps3)", "exp(gamma*eps1)*cos(eps3)"),
)

# Transformed element alpha . A as printed.  The X5 coefficient lacks the
# exp(gamma*eps1) factor that the matrix product carries.
TRANSFORMED_ELEMENT = (
    "alpha1",
    "(-alpha1*eps2 + alpha2)*exp(eps1)",
    "alpha3",
    "(-gamma*alpha1*sigma1 + alpha3*sigma2 + alpha4*cos(eps3) + alpha5*sin(eps3))*exp(gamma*eps1)",
    "gamma*alpha1*sigma2 + alpha3*sigma1 - alpha4*sin(eps3) + alpha5*cos(eps3)",
)

# Normalizing group parameters for the four classification cases.
CASE_EPS = {
    1: {"eps2": "alpha2", "eps4": "(gamma*alpha4 - k*alpha5)/(k^2 + gamma^2)",
        "eps5": "(gamma*alpha5 + k*alpha4)/(k^2 + gamma^2)"},
    2: {"eps5": "alpha4", "eps4": "-alpha5"},
    3: {"eps2": "alpha2", "eps4": "alpha4/gamma", "eps5": "alpha5/gamma"},
    4: {},
}

# Invariant table.  Each row: (label, sample alpha, K, M, N, P, Q, R, S, T).
# The printed symbols a_j in R, S, T stand for sgn(a_j); the sample rows use
# a2 = 3, a4 = -2, a5 = 5 so the signs are visible.
INVARIANT_ROWS = (
    ("X1+X3", (1, 0, 1, 0, 0), "2*gamma^2-1", 1, 1, 1, 1, 0, 0, 0),
    ("X1-X3", (1, 0, -1, 0, 0), "2*gamma^2-1", 1, -1, 1, 1, 0, 0, 0),
    ("X2+X3", (0, 1, 1, 0, 0), "-2", 0, 1, 1, 1, 0, 1, 0),
    ("X3", (0, 0, 1, 0, 0), "-2", 0, 1, 1, 1, 0, 0, 0),
    ("-X2+X3", (0, -1, 1, 0, 0), "-2", 0, 1, 1, 1, 0, -1, 0),
    ("X1", (1, 0, 0, 0, 0), "2*gamma^2+1", 1, 0, 1, 1, 0, 0, 0),
    ("a4*X4+a5*X5", (0, 0, 0, -2, 5), "0", 0, 0, 0, 1, 0, 0, 0),
    ("a2*X2+a5*X5", (0, 3, 0, 0, 5), "0", 0, 0, 1, 1, 0, "a2", "a5"),
    ("a2*X2+a4*X4", (0, 3, 0, -2, 0), "0", 0, 0, 1, 1, "a4", "a2", 0),
    ("a5*X5", (0, 0, 0, 0, 5), "0", 0, 0, 0, 1, 0, 0, "a5"),
    ("a2*X2", (0, 3, 0, 0, 0), "0", 0, 0, 1, 0, 0, "a2", 0),
    ("a4*X4", (0, 0, 0, -2, 0), "0", 0, 0, 0, 1, "a4", 0, 0),
)
