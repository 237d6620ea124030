"""Pure-Python reduction kernels.

The compiled twin in _speedups.pyx implements the same two functions with the
same semantics; kernel.get_kernels picks one pair per packing.  Keys are
packed monomials (see kernel.Packing): integer comparison of keys equals the
monomial-order comparison, multiplying by a monomial adds a fixed delta, and
divisibility within one module position is the single masked-subtraction test
below.
"""

from __future__ import annotations


def axpy(kf, cf, a, delta_f, kg, cg, b, delta_g, modulus):
    """Merged combination a*shift(f, delta_f) + b*shift(g, delta_g).

    kf/kg are strictly decreasing key lists, cf/cg the parallel coefficient
    lists.  Returns (keys, coeffs) with zero coefficients dropped.  Shifts
    must come from monomial multiplication so key order is preserved.
    """
    nf = len(kf)
    ng = len(kg)
    out_k = []
    out_c = []
    i = 0
    j = 0
    while i < nf and j < ng:
        key_f = kf[i] + delta_f
        key_g = kg[j] + delta_g
        if key_f > key_g:
            c = a * cf[i]
            if modulus:
                c %= modulus
            if c:
                out_k.append(key_f)
                out_c.append(c)
            i += 1
        elif key_f < key_g:
            c = b * cg[j]
            if modulus:
                c %= modulus
            if c:
                out_k.append(key_g)
                out_c.append(c)
            j += 1
        else:
            c = a * cf[i] + b * cg[j]
            if modulus:
                c %= modulus
            if c:
                out_k.append(key_f)
                out_c.append(c)
            i += 1
            j += 1
    while i < nf:
        c = a * cf[i]
        if modulus:
            c %= modulus
        if c:
            out_k.append(kf[i] + delta_f)
            out_c.append(c)
        i += 1
    while j < ng:
        c = b * cg[j]
        if modulus:
            c %= modulus
        if c:
            out_k.append(kg[j] + delta_g)
            out_c.append(c)
        j += 1
    return out_k, out_c


def find_reducer(key, lead_keys, ecarts, mask):
    """Index of the minimal-ecart divisor of `key` among lead_keys, else -1.

    Ties go to the earliest index.  All keys must share the module position;
    `mask` holds the guard bit of every variable lane, so the masked
    subtraction checks no lane borrows, i.e. divisibility.
    """
    best = -1
    best_ecart = -1
    for i in range(len(lead_keys)):
        lk = lead_keys[i]
        if ((lk | mask) - key) & mask == mask:
            e = ecarts[i]
            if best < 0 or e < best_ecart:
                best = i
                best_ecart = e
                if e == 0:
                    break
    return best
