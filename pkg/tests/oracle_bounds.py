"""Independent straight-line transcription of the estimate-chain formulas.

Kept deliberately flat (no helper functions, every constant written out once
in display order) as the second codepath for the dual-transcription check.
The arithmetic shapes (math.sqrt, explicit powers, term order) follow the
displayed formulas so the comparison can be bitwise.
"""

import math


def straight_line_report(gamma, L, norm_f, mu, v_X, c, xi):
    g, nf, vx = gamma, norm_f, v_X
    out = {}

    r0t = nf / g + math.sqrt(mu / g) * vx
    out["r0t"] = r0t

    k1tt = (6.0 * g * nf * r0t + 6.0 * mu * g * vx * r0t
            + mu ** 2 * c ** 2 * r0t ** 6 / g + 2.0 * mu * nf * r0t
            + 2.0 * mu ** 2 * vx * r0t + 2.0 * mu * vx * r0t)
    k2tt = (c ** 2 * r0t ** 6 / (16.0 * xi) + 0.5 * c * r0t ** 4
            + 2.0 * nf * r0t + 2.0 * mu * vx * r0t + (1.0 - xi) * r0t ** 2)
    k3tt = 3.0 * g * k2tt / (1.0 - xi) + k1tt
    k4tt = (1.0 - xi) / ((1.0 - 4.0 * xi) * g) * k3tt
    r1tt = math.sqrt((k4tt + k2tt) / (1.0 - xi))
    out.update(k1tt=k1tt, k2tt=k2tt, k3tt=k3tt, k4tt=k4tt, r1tt=r1tt)

    r0 = (nf / math.sqrt(g * (g + mu))
          + math.sqrt(mu / (g + mu)) * vx + math.sqrt(mu / (g + mu)))
    out["r0"] = r0

    k1t = (6.0 * g * nf * r0 + 6.0 * mu * g * vx * r0
           + mu ** 2 * c ** 2 * r0 ** 6 / g + 2.0 * mu * nf * r0
           + 2.0 * mu ** 2 * vx * r0 + 2.0 * mu * vx * r0)
    k2t = (c ** 2 * r0 ** 6 / (16.0 * xi) + 0.5 * c * r0 ** 4
           + 2.0 * nf * r0 + 2.0 * mu * vx * r0 + (1.0 - xi) * r0 ** 2)
    k3t = 3.0 * g * k2t / (1.0 - xi) + k1t
    k4t = (1.0 - xi) / ((1.0 - 4.0 * xi) * g) * k3t
    r1t = math.sqrt((k4t + k2t) / (1.0 - xi))
    out.update(k1t=k1t, k2t=k2t, r1t=r1t)

    k5t = (c * (math.sqrt(r0) * r1t ** 2) ** 4 / g ** 3
           + c * (r0 * r1t * (r0 ** 2 * r1t + (g + mu) * r0 + mu * vx + nf)) ** 2 / g)
    k6t = (2.0 * k5t + c * mu ** 2 * vx ** 2 / g + c * g * mu ** 2 * vx ** 2
           + c * g * nf ** 2 + c * mu * (r0 ** 2 * r1t) ** 2 + c * mu * nf ** 2
           + c * mu ** 3 * vx ** 2)
    k7t = c * (r0 * r1t ** 3 + nf ** 2 + mu ** 2 * vx ** 2)
    r2t = math.sqrt(4.0 * k6t / g + 4.0 * k7t) + r0
    out.update(k5t=k5t, k6t=k6t, k7t=k7t, r2t=r2t)

    k1 = (6.0 * g * nf * r0 + 6.0 * mu * g * vx * r0
          + mu * (c ** 2 * r0 ** 6 + r0 ** 2) + 2.0 * mu
          + 2.0 * mu * nf * r0 + 2.0 * mu * vx * r0)
    k2 = (3.0 * c ** 2 * r0 ** 6 / 16.0 + 0.5 * c * r0 ** 4 + 2.0 * nf * r0
          + 2.0 * mu * vx * r0 + (2.0 / 3.0) * r0 ** 2)
    r1 = math.sqrt(((1.5 * mu + 6.0 * g) * k2 + k1) / (g + mu))
    out.update(k1=k1, k2=k2, r1=r1)

    k5 = (c * (math.sqrt(r0) * r1 ** 2) ** 4 / g ** 3
          + c * (r0 * r1 * (r0 ** 2 * r1 + (g + mu) * r0 + mu * vx + nf)) ** 2 / g)
    k6 = (2.0 * k5 + c * mu ** 2 * vx ** 2 / g + c * g * mu ** 2 * vx ** 2
          + c * g * nf ** 2 + c * mu * (r0 ** 2 * r1) ** 2 + c * mu * nf ** 2
          + c * mu ** 3 * vx ** 2)
    k7 = c * (r0 * r1 ** 3 + nf ** 2 + mu ** 2 * vx ** 2)
    r2 = math.sqrt(4.0 * k6 / g + 4.0 * k7) + r0
    rprime = r2 + c * r0 ** 2 * r1 + (g + mu) * r0 + nf + mu * vx
    rinf = c * r0 * r1
    out.update(k5=k5, k6=k6, k7=k7, r2=r2, rprime=rprime, rinf=rinf)
    return out


def straight_line_difference(gamma, c, rinf, rinf0, rprime, rprime0, mu):
    g = gamma
    sqrt_pair = math.sqrt(rinf) * math.sqrt(rinf0)
    k8 = (mu * (rinf + rinf0) + mu * sqrt_pair
          + math.sqrt(rinf0) * rprime
          + g ** (-1.0 / 3.0) * rinf0 ** (2.0 / 3.0) * rprime ** (4.0 / 3.0)
          + math.sqrt(rinf) * rprime0
          + g ** (-1.0 / 3.0) * rinf ** (2.0 / 3.0) * rprime0 ** (4.0 / 3.0))
    k9 = sqrt_pair * (k8 + g * (rinf + rinf0 + sqrt_pair))
    k10 = rinf * ((mu + g) * rinf
                  + g ** (-1.0 / 3.0) * rinf ** (2.0 / 3.0) * rprime ** (4.0 / 3.0))
    k11 = math.sqrt((c * g * rinf0
                     + c * g ** (-1.0 / 3.0) * rinf0 ** (2.0 / 3.0) * rprime0 ** (4.0 / 3.0)) / g)
    return {"k8": k8, "k9": k9, "k10": k10, "k11": k11}


def straight_line_lw(gamma, L, c, rinf, mu, m):
    g = gamma
    return ((m ** 2 + c * rinf + g + mu + 1.0)
            * (c * rinf * (mu + 3.0 * g * mu)
               / ((2.0 * math.pi / L) ** 2 * (m + 1) ** 2 * g))
            + mu)
