"""Packed monomial keys and kernel selection.

A key packs (module position, total degree, exponent lanes) into one integer
so that integer comparison realizes the module order: position-over-term,
with negative degree reverse lexicographic terms in local mode and degree
reverse lexicographic in global mode.  Layout, least significant first:

    lane 0 | lane 1 | ... | lane n-1 | degree | position

Each field is `width` bits with the top bit a guard.  Variable lanes store
cap - exponent and the position field stores npos-1 - position, so larger
key means larger module term.  The degree field stores cap - degree in local
mode (smaller degree wins) and the degree itself in global mode.  Multiplying
a term by a monomial adds a constant (possibly negative) delta to the key;
within one position, divisibility is a guard-bit test (see _kernel_py).

When all fields fit in 64 bits the compiled kernels from _speedups are used
if they imported; set EQUIGERM_PURE=1 to force the pure-Python kernels.
"""

from __future__ import annotations

import os

from . import _kernel_py

try:  # pragma: no cover - exercised only when the extension was built
    from . import _speedups
except ImportError:  # pragma: no cover
    _speedups = None

_FORCE_PURE = os.environ.get("EQUIGERM_PURE", "") not in ("", "0")


class Packing:
    """Key layout for a fixed number of variables and module positions."""

    __slots__ = (
        "nvars",
        "npos",
        "width",
        "cap",
        "is_global",
        "deg_shift",
        "pos_shift",
        "div_mask",
        "field_mask",
        "fits_u64",
    )

    def __init__(self, nvars: int, npos: int, degree_cap: int, is_global: bool):
        if nvars < 1 or npos < 1:
            raise ValueError("need at least one variable and one position")
        width64 = 64 // (nvars + 2)
        cap64 = (1 << (width64 - 1)) - 1 if width64 >= 2 else 0
        if cap64 >= degree_cap and cap64 >= npos - 1:
            width = width64
            fits_u64 = True
        else:
            width = max(16, degree_cap.bit_length() + 1, npos.bit_length() + 1)
            fits_u64 = (nvars + 2) * width <= 64
        self.nvars = nvars
        self.npos = npos
        self.width = width
        self.cap = (1 << (width - 1)) - 1
        self.is_global = is_global
        self.deg_shift = nvars * width
        self.pos_shift = (nvars + 1) * width
        self.field_mask = (1 << width) - 1
        guard = 1 << (width - 1)
        mask = 0
        for i in range(nvars):
            mask |= guard << (i * width)
        self.div_mask = mask
        self.fits_u64 = fits_u64

    def pack(self, pos: int, mono) -> int:
        cap = self.cap
        deg = 0
        key = 0
        width = self.width
        for i, e in enumerate(mono):
            deg += e
            key |= (cap - e) << (i * width)
        if deg > cap or pos >= self.npos:
            raise OverflowError("monomial does not fit the packing")
        degfield = deg if self.is_global else cap - deg
        key |= degfield << self.deg_shift
        key |= (self.npos - 1 - pos) << self.pos_shift
        return key

    def mul_delta(self, mono) -> int:
        """Additive key action of multiplication by `mono`."""
        delta = 0
        deg = 0
        width = self.width
        for i, e in enumerate(mono):
            deg += e
            delta -= e << (i * width)
        if self.is_global:
            delta += deg << self.deg_shift
        else:
            delta -= deg << self.deg_shift
        return delta

    def key_degree(self, key: int) -> int:
        field = (key >> self.deg_shift) & self.field_mask
        return field if self.is_global else self.cap - field

    def key_position(self, key: int) -> int:
        return self.npos - 1 - ((key >> self.pos_shift) & self.field_mask)

    def key_monomial(self, key: int):
        cap = self.cap
        width = self.width
        return tuple(
            cap - ((key >> (i * width)) & self.field_mask) for i in range(self.nvars)
        )

    def key_fits_degree(self, deg: int) -> bool:
        return deg <= self.cap


def get_kernels(packing: Packing):
    """Return (axpy, find_reducer) appropriate for the packing."""
    if _speedups is not None and not _FORCE_PURE and packing.fits_u64:
        return _speedups.axpy, _speedups.find_reducer
    return _kernel_py.axpy, _kernel_py.find_reducer


def kernels_compiled() -> bool:
    return _speedups is not None
