"""Compiled inner loops for statevector manipulation.

Everything in this module works on a flat ``complex128`` amplitude array in
big-endian basis order (qubit 0 owns the most significant bit of the index).
The kernels are deliberately sequential: a fixed evaluation order keeps
seeded trajectories bitwise reproducible across runs and across worker
processes, which the experiment harness relies on.

``stride`` always means the bit weight of a qubit, ``2**(n - 1 - q)``.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def apply_2x2(state, stride, u00, u01, u10, u11):
    """Apply a one-qubit unitary in place to the qubit with the given stride."""
    dbl = 2 * stride
    for base in range(0, state.size, dbl):
        for i0 in range(base, base + stride):
            i1 = i0 + stride
            a = state[i0]
            b = state[i1]
            state[i0] = u00 * a + u01 * b
            state[i1] = u10 * a + u11 * b


@njit(cache=True)
def apply_cz(state, s_hi, s_lo):
    """Flip the sign of every amplitude whose two control bits are both 1.

    ``s_hi`` must be the larger stride of the pair.
    """
    for bh in range(s_hi, state.size, 2 * s_hi):
        for bl in range(bh + s_lo, bh + s_hi, 2 * s_lo):
            for off in range(bl, bl + s_lo):
                state[off] = -state[off]


@njit(cache=True)
def cz_pair(psi, lam, s_hi, s_lo):
    """Apply CZ in place to two arrays in a single pass (backward sweep helper)."""
    for bh in range(s_hi, psi.size, 2 * s_hi):
        for bl in range(bh + s_lo, bh + s_hi, 2 * s_lo):
            for off in range(bl, bl + s_lo):
                psi[off] = -psi[off]
                lam[off] = -lam[off]


@njit(cache=True)
def apply_givens2(state, sa, sb, c, s):
    """Rotate the (|01>, |10>) subspace of qubit pair (a, b) in place.

    The rotation acts as [[c, -s], [s, c]] on the ordered pair of amplitudes
    (a=0 b=1, a=1 b=0); all other amplitudes are untouched.
    """
    hi = sa if sa > sb else sb
    lo = sb if sa > sb else sa
    for bh in range(0, state.size, 2 * hi):
        for bl in range(bh, bh + hi, 2 * lo):
            for off in range(bl, bl + lo):
                i01 = off + sb
                i10 = off + sa
                a = state[i01]
                b = state[i10]
                state[i01] = c * a - s * b
                state[i10] = s * a + c * b


@njit(cache=True)
def givens2_grad(lam, psi, sa, sb):
    """Cross inner products over the (|01>, |10>) subspace of qubit pair (a, b).

    Returns (za, zb) with za = <lam_01|psi_10> and zb = <lam_10|psi_01>,
    summed over all bystander configurations.
    """
    hi = sa if sa > sb else sb
    lo = sb if sa > sb else sa
    za = 0.0 + 0.0j
    zb = 0.0 + 0.0j
    for bh in range(0, psi.size, 2 * hi):
        for bl in range(bh, bh + hi, 2 * lo):
            for off in range(bl, bl + lo):
                i01 = off + sb
                i10 = off + sa
                za += np.conj(lam[i01]) * psi[i10]
                zb += np.conj(lam[i10]) * psi[i01]
    return za, zb


@njit(cache=True)
def apply_givens4(state, so1, so2, sv1, sv2, c, s):
    """Rotate the (|0011>, |1100>) subspace of qubits (o1, o2, v1, v2) in place.

    |0011> is the configuration with the v bits set, |1100> the one with the
    o bits set. The rotation acts as [[c, -s], [s, c]] on that ordered pair.
    """
    h1 = so1
    h2 = so2
    h3 = sv1
    h4 = sv2
    # Sort the four strides descending with a tiny fixed network.
    if h1 < h2:
        h1, h2 = h2, h1
    if h3 < h4:
        h3, h4 = h4, h3
    if h1 < h3:
        h1, h3 = h3, h1
    if h2 < h4:
        h2, h4 = h4, h2
    if h2 < h3:
        h2, h3 = h3, h2
    fa = sv1 + sv2
    fb = so1 + so2
    for b1 in range(0, state.size, 2 * h1):
        for b2 in range(b1, b1 + h1, 2 * h2):
            for b3 in range(b2, b2 + h2, 2 * h3):
                for b4 in range(b3, b3 + h3, 2 * h4):
                    for off in range(b4, b4 + h4):
                        ia = off + fa
                        ib = off + fb
                        a = state[ia]
                        b = state[ib]
                        state[ia] = c * a - s * b
                        state[ib] = s * a + c * b


@njit(cache=True)
def givens4_grad(lam, psi, so1, so2, sv1, sv2):
    """Cross inner products over the (|0011>, |1100>) subspace.

    Returns (za, zb) with za = <lam_0011|psi_1100> and zb = <lam_1100|psi_0011>.
    """
    h1 = so1
    h2 = so2
    h3 = sv1
    h4 = sv2
    if h1 < h2:
        h1, h2 = h2, h1
    if h3 < h4:
        h3, h4 = h4, h3
    if h1 < h3:
        h1, h3 = h3, h1
    if h2 < h4:
        h2, h4 = h4, h2
    if h2 < h3:
        h2, h3 = h3, h2
    fa = sv1 + sv2
    fb = so1 + so2
    za = 0.0 + 0.0j
    zb = 0.0 + 0.0j
    for b1 in range(0, psi.size, 2 * h1):
        for b2 in range(b1, b1 + h1, 2 * h2):
            for b3 in range(b2, b2 + h2, 2 * h3):
                for b4 in range(b3, b3 + h3, 2 * h4):
                    for off in range(b4, b4 + h4):
                        ia = off + fa
                        ib = off + fb
                        za += np.conj(lam[ia]) * psi[ib]
                        zb += np.conj(lam[ib]) * psi[ia]
    return za, zb


@njit(cache=True)
def rot_backward(psi, lam, stride, u00, u01, u10, u11):
    """Fused backward step for a one-qubit rotation.

    Accumulates the two cross inner products of the current vectors,
    z01 = <lam_0|psi_1> and z10 = <lam_1|psi_0>, then applies the supplied
    2x2 matrix (the gate inverse) to both arrays in the same pass. The
    returned sums are taken before the matrix is applied.
    """
    z01 = 0.0 + 0.0j
    z10 = 0.0 + 0.0j
    dbl = 2 * stride
    for base in range(0, psi.size, dbl):
        for i0 in range(base, base + stride):
            i1 = i0 + stride
            pa = psi[i0]
            pb = psi[i1]
            la = lam[i0]
            lb = lam[i1]
            z01 += np.conj(la) * pb
            z10 += np.conj(lb) * pa
            psi[i0] = u00 * pa + u01 * pb
            psi[i1] = u10 * pa + u11 * pb
            lam[i0] = u00 * la + u01 * lb
            lam[i1] = u10 * la + u11 * lb
    return z01, z10


@njit(cache=True)
def pauli_acc(out, psi, flip, signmask, wr, wi):
    """Accumulate ``out += w * P @ psi`` for one Pauli string.

    ``flip`` is the OR of strides carrying X or Y, ``signmask`` the OR of
    strides carrying Y or Z, and (wr, wi) the term coefficient already
    multiplied by i**(number of Y letters).
    """
    for i in range(psi.size):
        v = i & signmask
        v ^= v >> 16
        v ^= v >> 8
        v ^= v >> 4
        v ^= v >> 2
        v ^= v >> 1
        if v & 1:
            w = complex(-wr, -wi)
        else:
            w = complex(wr, wi)
        out[i ^ flip] += w * psi[i]
