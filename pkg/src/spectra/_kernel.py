"""Performance kernel for the iteration engine.

The recursion is run with series coefficients that are dense polynomials in
the energy E (the seeds are affine in E, so polynomial degrees grow by one
every second step).  Arithmetic uses gmpy2.mpfr when available and falls back
to mpmath.mpf; both are driven through plain operators and boundary
conversions are exact (mantissa/exponent), so backends agree to the working
precision.

The decisive optimization: about any center |x0| < 1 the seed series are
geometric,

    k0[i] = q^(i+1)                        q = 1/(1 - x0)
    z0    = A + E*B
    A[i]  = aq*q^(i+1) + as*(-1)^i s^(i+1) s = 1/(1 + x0)
    B[i]  = -c*(i+1)*q^(i+2)               c = 2/lam^2

so the three convolutions against the running state collapse to one-term
recurrences (Gq, Gs, H below), costing O(1) per coefficient instead of O(j).
Custom seeds that lack this structure go through the reference TaylorSeries
path in spectra.aim instead.
"""

from __future__ import annotations

from mpmath import mp, mpf
from mpmath.libmp import from_man_exp

try:
    import gmpy2
    from gmpy2 import mpfr as _mpfr, mpz as _mpz

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    HAVE_GMPY2 = False


def set_backend_precision(bits: int) -> None:
    if HAVE_GMPY2:
        gmpy2.get_context().precision = bits


def to_backend(x: mpf):
    """Exact mpf -> backend scalar conversion."""
    if not HAVE_GMPY2:
        return x
    sign, man, exp, _ = x._mpf_
    g = _mpfr(_mpz(-man if sign else man))
    if exp >= 0:
        return gmpy2.mul_2exp(g, exp)
    return gmpy2.div_2exp(g, -exp)


def from_backend(v) -> mpf:
    """Exact backend -> mpf conversion (ambient precision must cover it)."""
    if not HAVE_GMPY2:
        return v
    if v == 0:
        return mpf(0)
    m, e = v.as_mantissa_exp()
    return mpf(from_man_exp(int(m), int(e), mp.prec))


def backend_float(x: float):
    return to_backend(mpf(x)) if HAVE_GMPY2 else mpf(x)


def build_delta_table(
    v0: float, lam: float, gamma: float, x0: float, n_max: int, length: int, prec_bits: int
) -> list:
    """Termination-determinant polynomials in E for n = 1 .. n_max.

    Returns a list indexed by n (entry 0 unused) of E-coefficient lists in
    backend scalars.  ``length`` is the seed series length; needs
    length >= n_max + 2.
    """
    if length < n_max + 2:
        raise ValueError(
            f"series length {length} too short for {n_max} iterations; need >= {n_max + 2}"
        )
    if not abs(x0) < 1:
        raise ValueError(f"seeds have poles at x = +-1; got x0 = {x0}")
    set_backend_precision(prec_bits)
    # the ambient mpmath precision must cover the whole build for the
    # fallback backend, whose arithmetic rounds at mp.prec
    with mp.workprec(prec_bits):
        return _build(v0, lam, gamma, x0, n_max, length)


def _build(v0: float, lam: float, gamma: float, x0: float, n_max: int, length: int) -> list:
    one = to_backend(mpf(1))
    zero = to_backend(mpf(0))
    v0b = to_backend(mpf(repr(float(v0))))
    lamb = to_backend(mpf(repr(float(lam))))
    gammab = to_backend(mpf(repr(float(gamma))))
    x0b = to_backend(mpf(repr(float(x0))))
    c = 2 / (lamb * lamb)
    q = 1 / (one - x0b)
    s = 1 / (one + x0b)
    aq = -c * v0b * gammab / 2
    a_s = c * v0b * (one - gammab) / 2
    neg_c = -c

    L = length
    # seed coefficient arrays (x-power j, then E-power m)
    qpow = [q]
    for _ in range(L - 1):
        qpow.append(qpow[-1] * q)
    spow_alt = [s]
    for i in range(1, L):
        spow_alt.append(-spow_alt[-1] * s)
    k = [[qpow[j]] for j in range(L)]
    z = [
        [aq * qpow[j] + a_s * spow_alt[j], neg_c * (j + 1) * qpow[j] * q]
        for j in range(L)
    ]

    deltas: list = [None] * (n_max + 1)
    for n in range(1, n_max + 1):
        lo = L - n
        dk = len(k[0])
        dz = len(z[0])
        dk_new = max(dk, dz)
        dz_new = max(dz, dk + 1)
        knew = [None] * lo
        znew = [None] * lo
        gq = [zero] * dk
        gs = [zero] * dk
        h = [zero] * dk
        for j in range(lo):
            kj = k[j]
            kj1 = k[j + 1]
            zj = z[j]
            zj1 = z[j + 1]
            jp1 = j + 1
            kacc = [None] * dk_new
            zacc = [zj1[m] * jp1 for m in range(dz)]
            zacc += [zero] * (dz_new - dz)
            for m in range(dk):
                kv = kj[m]
                gqm = q * (kv + gq[m])
                gq[m] = gqm
                gsm = s * (kv - gs[m])
                gs[m] = gsm
                hm = q * (h[m] + gqm)
                h[m] = hm
                kacc[m] = kj1[m] * jp1 + zj[m] + gqm
                zacc[m] += aq * gqm + a_s * gsm
                zacc[m + 1] += neg_c * hm
            # the state k has no coefficients beyond dk; only z contributes
            for m in range(dk, dk_new):
                kacc[m] = zj[m] if m < dz else zero
            knew[j] = kacc
            znew[j] = zacc
        kc = k[0]
        zc = z[0]
        knc = knew[0]
        znc = znew[0]
        dpoly = [zero] * (max(len(kc) + len(znc), len(zc) + len(knc)) - 1)
        for i, ka in enumerate(kc):
            if not ka:
                continue
            for j2, zb in enumerate(znc):
                dpoly[i + j2] += ka * zb
        for i, za in enumerate(zc):
            if not za:
                continue
            for j2, kb in enumerate(knc):
                dpoly[i + j2] -= za * kb
        deltas[n] = dpoly
        k = knew
        z = znew
    return deltas


def horner(poly, x):
    acc = poly[-1]
    for c in reversed(poly[:-1]):
        acc = acc * x + c
    return acc
