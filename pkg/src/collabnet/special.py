import math

# Lanczos approximation, g = 7, n = 9
_G = 7.0
_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x):
    """Gamma function for real ``x`` (not a non-positive integer)."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise ValueError("gamma is undefined at non-positive integers")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    x -= 1.0
    acc = _COEF[0]
    for i in range(1, len(_COEF)):
        acc += _COEF[i] / (x + i)
    t = x + _G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def weibull_cv(k):
    """Coefficient of variation of a Weibull law with shape ``k``."""
    g1 = gamma(1.0 + 1.0 / k)
    g2 = gamma(1.0 + 2.0 / k)
    return math.sqrt(max(g2 / (g1 * g1) - 1.0, 0.0))
