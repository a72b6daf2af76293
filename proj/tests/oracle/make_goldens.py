"""Golden values for the unit tests, computed with numpy.

Independent of the C++ implementation: the LMS inverse comes from
numpy.linalg.inv, histogram equalization from a direct CDF evaluation,
and every correction formula is written out per channel.

Run: python3 tests/oracle/make_goldens.py
"""
import math
from fractions import Fraction
import numpy as np

T = np.array([[17.8824, 43.5161, 4.1194],
              [3.4557, 27.1554, 3.8671],
              [0.0300, 0.1843, 1.4671]])
TI = np.linalg.inv(T)


def q(v):
    return int(math.floor(min(max(v, 0.0), 1.0) * 255.0 + 0.5))


def sim_matrix(ap, ad):
    return np.array([[1 - ap, 2.0234 * ap, -2.5258 * ap],
                     [0.4942 * ad, 1 - ad, 1.2483 * ad],
                     [0, 0, 1]])


def simulate(px, ap, ad):
    rgb = np.array(px, dtype=float) / 255.0
    out = TI @ (sim_matrix(ap, ad) @ (T @ rgb))
    return tuple(q(v) for v in out)


def eq_plane(vals):
    n = len(vals)
    hist = [0] * 256
    for v in vals:
        hist[v] += 1
    cum, lut = 0, []
    for c in hist:
        cum += c
        lut.append(int(math.floor(255.0 * cum / n + 0.5)))
    return [lut[v] for v in vals]


def method_a_filter(pixels, protan, equalize):
    f = [np.array(p, dtype=float) / 255.0 for p in pixels]
    out = []
    for r, g, b in f:
        if protan:
            out.append([r, (r + g) / 2, (r + b) / 2])
        else:
            out.append([(r + g) / 2, g, (g + b) / 2])
    if equalize:
        chans = (1, 2) if protan else (0, 2)
        for c in chans:
            plane = eq_plane([q(o[c]) for o in out])
            for i, v in enumerate(plane):
                out[i][c] = v / 255.0
    return out


def weights(beta, ap, ad, an):
    xp, xd, xn = min(beta, ap), min(beta, ad), min(an, 1 - beta)
    s = xp + xd + xn
    return (0, 0, 1) if s == 0 else (xp / s, xd / s, xn / s)


def method_a(pixels, profile, equalize):
    xp, xd, xn = weights(*profile)
    fp = method_a_filter(pixels, True, equalize)
    fd = method_a_filter(pixels, False, equalize)
    res = []
    for i, p in enumerate(pixels):
        f = np.array(p, dtype=float) / 255.0
        v = xp * np.array(fp[i]) + xd * np.array(fd[i]) + xn * f
        res.append(tuple(q(x) for x in v))
    return res


def q_exact(v):
    """Half-up quantization of an exact rational in [0,1] scale."""
    v = min(max(v, Fraction(0)), Fraction(1)) * 255
    return math.floor(v + Fraction(1, 2))


def method_b(pixels, ap, ad):
    # the matrix is rational, so evaluate exactly: half-level ties then round
    # half-up instead of wherever float error happens to fall
    ap, ad = Fraction(str(ap)), Fraction(str(ad))
    m = [[1 - ad / 2, ad / 2, 0],
         [ap / 2, 1 - ap / 2, 0],
         [ap / 4, ad / 4, 1 - (ap + ad) / 4]]
    out = []
    for p in pixels:
        f = [Fraction(c, 255) for c in p]
        out.append(tuple(q_exact(sum(m[r][k] * f[k] for k in range(3))) for r in range(3)))
    return out


def method_a_exact(pixels, profile):
    """Unequalized Method A in exact rational arithmetic."""
    beta, ap, ad, an = (Fraction(str(x)) for x in profile)
    xp, xd, xn = min(beta, ap), min(beta, ad), min(an, 1 - beta)
    s = xp + xd + xn
    xp, xd, xn = (xp / s, xd / s, xn / s) if s else (0, 0, 1)
    out = []
    for p in pixels:
        r, g, b = (Fraction(c, 255) for c in p)
        fp = (r, (r + g) / 2, (r + b) / 2)
        fd = ((r + g) / 2, g, (g + b) / 2)
        out.append(tuple(q_exact(xp * fp[c] + xd * fd[c] + xn * (r, g, b)[c]) for c in range(3)))
    return out


def tie_distance(pixels, ap, ad):
    """Smallest distance of any simulated channel from a rounding boundary, in levels."""
    worst = 1.0
    for px in pixels:
        rgb = np.array(px, dtype=float) / 255.0
        for v in TI @ (sim_matrix(ap, ad) @ (T @ rgb)):
            x = min(max(v, 0.0), 1.0) * 255.0
            if 0.0 < x < 255.0:
                worst = min(worst, abs((x - math.floor(x)) - 0.5))
    return worst


PIXELS = [(255, 0, 0), (0, 255, 0), (0, 0, 255), (200, 30, 40), (10, 220, 90),
          (128, 128, 128), (250, 200, 20), (60, 90, 200), (12, 34, 56), (240, 240, 250)]

print("T^-1 =", TI.tolist())
print("row sums T =", T.sum(axis=1).tolist())
print("simulate red, ap=1:", simulate((255, 0, 0), 1, 0))
print("simulate fixture ap=0.75:", [simulate(p, 0.75, 0) for p in PIXELS])
print("equalize {0,64,128,255}:", eq_plane([0, 64, 128, 255]))
three = [(200, 30, 40), (10, 220, 90), (128, 128, 128)]
print("method_a_protan eq 3px:", [tuple(q(v) for v in p) for p in method_a_filter(three, True, True)])
print("method_a_deuteran eq 3px:", [tuple(q(v) for v in p) for p in method_a_filter(three, False, True)])
print("weights (0.6,0.5,0.3,0.4):", weights(0.6, 0.5, 0.3, 0.4))
print("method_a mixed (0.6,0.5,0.3,0.4) noeq:", method_a(PIXELS, (0.6, 0.5, 0.3, 0.4), False))
print("method_a mixed exact:", method_a_exact(PIXELS, (0.6, 0.5, 0.3, 0.4)))
print("simulate fixture tie distance (levels):", tie_distance(PIXELS, 0.75, 0))
print("method_b red (1,0):", method_b([(255, 0, 0)], 1, 0))
print("method_b fixture (0.3,0.8):", method_b(PIXELS, 0.3, 0.8))
