"""Reference data for the four-partite symmetric-witness landscape.

Coefficient rows are over the canonical partition order
(4), (3,1), (2,2), (2,1,1), (1,1,1,1).
"""

# S_4 character table; columns follow the conjugacy classes
# (1,1,1,1), (2,1,1), (2,2), (3,1), (4).
S4_CLASSES = [(1, 1, 1, 1), (2, 1, 1), (2, 2), (3, 1), (4,)]
S4_CHARACTERS = {
    (4,): (1, 1, 1, 1, 1),
    (3, 1): (3, 1, -1, 0, -1),
    (2, 2): (2, 0, 2, -1, 0),
    (2, 1, 1): (3, -1, -1, 0, 1),
    (1, 1, 1, 1): (1, -1, 1, 1, -1),
}

# Four-qudit witness rows: coefficients, local dimension, and the tabulated
# minimum expectation values over the [3|1], [2|2], [2|1|1] structures plus
# the FPPT minimum.  W_6..W_8 are tabulated for the unshifted rows.
FOUR_QUDIT_WITNESSES = {
    "W1": {"coeffs": (9, -1, 0, 0, 0), "d": 2,
           "alpha_31": -1.0, "alpha_22": -1.0, "alpha_211": -1.0, "alpha_fppt": 0.0},
    "W2": {"coeffs": (0, 9, 0, -9, 0), "d": 3,
           "alpha_31": -1.0, "alpha_22": -0.5, "alpha_211": -0.31, "alpha_fppt": 0.0},
    "W3": {"coeffs": (0, 0, 0, 1, -9), "d": 4,
           "alpha_31": -9 / 4, "alpha_22": -1.5, "alpha_211": -0.5, "alpha_fppt": 0.0},
    "W4": {"coeffs": (4, 0, -1, 0, 0), "d": 2,
           "alpha_31": -0.5, "alpha_22": -1.0, "alpha_211": -0.5, "alpha_fppt": 0.0},
    "W5": {"coeffs": (0, 0, 1, 0, -4), "d": 4,
           "alpha_31": -1.0, "alpha_22": -1 / 3, "alpha_211": -1 / 6, "alpha_fppt": 0.0},
    "W6": {"coeffs": (8, 0, -4, 1, -1), "d": 4,
           "alpha_31": -2.0, "alpha_22": -4.0, "alpha_211": -2.0, "alpha_fppt": -4 / 7},
    "W7": {"coeffs": (12, -1, -3, 1, 0), "d": 3,
           "alpha_31": -2.0, "alpha_22": -3.0, "alpha_211": -2.0, "alpha_fppt": -3 / 20},
    "W8": {"coeffs": (0, 2, -3, -1, 3), "d": 4,
           "alpha_31": -1.0, "alpha_22": -3.0, "alpha_211": -0.5, "alpha_fppt": -9 / 86},
}

# Semiseparable minima derived from the closed form for the same rows (the
# hook-family corollary pins W2 = 81*W^(1) and W3 = 9*W^(2) exactly); the
# tabulated W2/W3 cells above are inconsistent with the rows as printed.
DERIVED_ALPHA_31 = {
    "W1": -1.0, "W2": -9.0, "W3": -1.5, "W4": -0.5, "W5": -1.0,
    "W6": -2.0, "W7": -2.0, "W8": -1.0,
}

# Vertices of the four-ququart fully-PPT polytope: integer coordinates
# N * tr(Pi_lam rho), their normalization, and the separability certificate
# (a product ket) when the vertex is fully separable.
FPPT_VERTICES_D4 = [
    {"coords": (1, 0, 0, 0, 0), "norm": 1, "separable": True, "ket": (0, 0, 0, 0)},
    {"coords": (1, 3, 0, 0, 0), "norm": 4, "separable": True, "ket": (0, 0, 0, 1)},
    {"coords": (1, 9, 4, 0, 0), "norm": 14, "separable": False, "witness": "W6"},
    {"coords": (2, 9, 6, 0, 0), "norm": 17, "separable": False, "witness": "W6"},
    {"coords": (1, 9, 4, 6, 0), "norm": 20, "separable": False, "witness": "W7"},
    {"coords": (5, 36, 18, 27, 0), "norm": 86, "separable": False, "witness": "W8"},
    {"coords": (1, 9, 4, 9, 1), "norm": 24, "separable": True, "ket": (0, 1, 2, 3)},
]

# Facets of the same polytope (all decomposable witnesses).
FPPT_FACETS_D4 = {
    "F1": (0, 0, 0, 0, 1),
    "F2": (0, 0, 0, 1, -9),
    "F3": (0, 0, 3, -2, 6),
    "F4": (0, 6, -9, -2, 0),
    "F5": (6, -2, 3, 0, 0),
    "F6": (18, 2, -9, 0, 0),
}

# Indecomposable witness rows with their tabulated certified shifts.  The
# shifts are not reproducible from these integer rows under the stated
# relaxation (see the epsilon suite); independently solved values for the
# trace-normalized rows are kept alongside as the implementation oracle.
INDECOMPOSABLE_ROWS_D4 = {
    "w1": (8, 0, -4, 1, -1),
    "w2": (12, -1, -3, 1, 0),
    "w3": (0, 2, -3, -1, 3),
}
EPSILON_TARGETS = {"w1": 4.048e-2, "w2": 5.476e-3, "w3": 1.759e-2}
EPSILON_TOLERANCES = {"w1": 0.20, "w2": 0.50, "w3": 0.50}
EPSILON_SDP_VALUES = {"w1": 1.4683e-3, "w2": 1.0779e-3, "w3": 4.0963e-4}
