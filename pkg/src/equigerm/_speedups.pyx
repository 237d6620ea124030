# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the _kernel_py reduction kernels.

Used only for packings whose keys fit in 64 bits (kernel.get_kernels checks);
valid keys never set the top guard bit, so signed/unsigned conversions below
cannot overflow.  Coefficients stay arbitrary Python ints: exact arithmetic
over QQ is the whole point, so only the key handling is lowered to C.
"""


def axpy(list kf, list cf, object a, object delta_f,
         list kg, list cg, object b, object delta_g, object modulus):
    """Merged combination a*shift(f, delta_f) + b*shift(g, delta_g)."""
    cdef Py_ssize_t i = 0, j = 0, nf = len(kf), ng = len(kg)
    cdef long long df = delta_f, dg = delta_g
    cdef long long key_f = 0, key_g = 0
    cdef bint have_mod = modulus is not None
    cdef list out_k = [], out_c = []
    cdef object c
    if i < nf:
        key_f = <long long> kf[0] + df
    if j < ng:
        key_g = <long long> kg[0] + dg
    while i < nf and j < ng:
        if key_f > key_g:
            c = a * cf[i]
            if have_mod:
                c = c % modulus
            if c:
                out_k.append(key_f)
                out_c.append(c)
            i += 1
            if i < nf:
                key_f = <long long> kf[i] + df
        elif key_f < key_g:
            c = b * cg[j]
            if have_mod:
                c = c % modulus
            if c:
                out_k.append(key_g)
                out_c.append(c)
            j += 1
            if j < ng:
                key_g = <long long> kg[j] + dg
        else:
            c = a * cf[i] + b * cg[j]
            if have_mod:
                c = c % modulus
            if c:
                out_k.append(key_f)
                out_c.append(c)
            i += 1
            j += 1
            if i < nf:
                key_f = <long long> kf[i] + df
            if j < ng:
                key_g = <long long> kg[j] + dg
    while i < nf:
        c = a * cf[i]
        if have_mod:
            c = c % modulus
        if c:
            out_k.append(<long long> kf[i] + df)
            out_c.append(c)
        i += 1
    while j < ng:
        c = b * cg[j]
        if have_mod:
            c = c % modulus
        if c:
            out_k.append(<long long> kg[j] + dg)
            out_c.append(c)
        j += 1
    return out_k, out_c


def find_reducer(object key, object lead_keys, object ecarts, object mask):
    """Index of the minimal-ecart divisor of `key` among lead_keys, else -1.

    Ties go to the earliest index.  Fast path for the typed-array pools;
    plain lists (cloned pools on the wide-key path never reach here) are
    handled by the same loop through buffer coercion.
    """
    cdef unsigned long long k = key, m = mask, lk
    cdef unsigned long long[::1] leads = lead_keys
    cdef long long[::1] ecs = ecarts
    cdef Py_ssize_t i, n = leads.shape[0]
    cdef Py_ssize_t best = -1
    cdef long long e, best_ecart = -1
    for i in range(n):
        lk = leads[i]
        if ((lk | m) - k) & m == m:
            e = ecs[i]
            if best < 0 or e < best_ecart:
                best = i
                best_ecart = e
                if e == 0:
                    break
    return best
