"""Built-in codes."""

import numpy as np

from . import linalg
from .errors import ValidationError
from .pauli import PauliElement
from .stabilizer import CodeSpec, CSSPresentation, StabilizerGroup

HAMMING = np.array(
    [[0, 0, 0, 1, 1, 1, 1], [0, 1, 1, 0, 0, 1, 1], [1, 0, 1, 0, 1, 0, 1]], dtype=np.int64
)


def _from_strings(labels):
    return [PauliElement.from_label(s) for s in labels]


def css_spec(name, hx, hz, d=2, distance=None, max_elements=None):
    css = CSSPresentation.from_arrays(hx, hz)
    kw = {} if max_elements is None else {"max_elements": max_elements}
    S = StabilizerGroup(css.generators(d), **kw)
    n = S.n
    k = n - linalg.rank_mod_p(hx, d) - linalg.rank_mod_p(hz, d)
    return CodeSpec(name, S, k=k, distance=distance, css=css)


def bell(d=2):
    """Stabilizer ``<X⊗X, Z⊗Z^{-1}>`` of the maximally entangled two-qudit state."""
    if d == 2:
        return CodeSpec("bell", StabilizerGroup(_from_strings(["XX", "ZZ"])), k=0, distance=2,
                        css=CSSPresentation.from_arrays([[1, 1]], [[1, 1]]))
    gens = [PauliElement(d, 2, 0, (1, 1), (0, 0)), PauliElement(d, 2, 0, (0, 0), (1, d - 1))]
    return CodeSpec(f"bell{d}", StabilizerGroup(gens), k=0, distance=2)


def code_422():
    return css_spec("422", [[1, 1, 1, 1]], [[1, 1, 1, 1]], distance=2)


def code_513():
    gens = _from_strings(["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"])
    return CodeSpec("513", StabilizerGroup(gens), k=1, distance=3)


def steane():
    return css_spec("steane", HAMMING, HAMMING, distance=3)


def shor():
    hx = [[1, 1, 1, 1, 1, 1, 0, 0, 0], [0, 0, 0, 1, 1, 1, 1, 1, 1]]
    hz = []
    for block in range(3):
        for i in range(2):
            row = [0] * 9
            row[3 * block + i] = row[3 * block + i + 1] = 1
            hz.append(row)
    return css_spec("shor", hx, hz, distance=3)


def reed_muller_punctured(m=4):
    """Generator rows of the punctured first-order Reed-Muller code RM*(1, m).

    Coordinates are the nonzero points ``v = 1..2^m-1`` of ``GF(2)^m``; the
    rows are the all-ones vector and the ``m`` coordinate functions.
    """
    pts = [[(v >> (m - 1 - i)) & 1 for i in range(m)] for v in range(1, 2**m)]
    coord = np.array(pts, dtype=np.int64).T
    return np.vstack([np.ones(2**m - 1, dtype=np.int64), coord])


def rm15():
    """[[15,1,3]]: X checks from the even subcode of RM*(1,4), Z checks from its dual."""
    g = reed_muller_punctured(4)
    hx = g[1:]
    hz = linalg.nullspace_mod_p(g, 2)
    return css_spec("rm15", hx, hz, distance=3)


def golay23():
    """[[23,1,7]] CSS code from the binary Golay code (structural use only)."""
    # cyclic code with generator polynomial x^11+x^10+x^6+x^5+x^4+x^2+1
    poly = [1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1]
    n = 23
    rows = []
    for s in range(12):
        r = [0] * n
        for i, c in enumerate(poly):
            r[s + i] = c
        rows.append(r)
    gen = np.array(rows, dtype=np.int64)
    # the dual of the Golay code is its even-weight subcode, so it serves as both check matrices
    dual = linalg.nullspace_mod_p(gen, 2)
    return css_spec("golay23", dual, dual, distance=7)


BUILDERS = {
    "bell": bell,
    "422": code_422,
    "513": code_513,
    "steane": steane,
    "shor": shor,
    "rm15": rm15,
}
OPTIONAL = {"golay23": golay23}


def names(include_optional=False):
    out = list(BUILDERS)
    if include_optional:
        out += list(OPTIONAL)
    return out


def get(name):
    key = str(name).lower()
    if key in BUILDERS:
        return BUILDERS[key]()
    if key in OPTIONAL:
        return OPTIONAL[key]()
    raise ValidationError(
        f"unknown catalog code {name!r}; available: {', '.join(names(True))}"
    )


def tensor_codes(first, second, name=None):
    """Disjoint union of two codes on ``n1 + n2`` qudits."""
    S1, S2 = first.stabilizer, second.stabilizer
    if S1.d != S2.d:
        raise ValidationError("cannot combine codes of different d")
    i1 = PauliElement.identity(S1.d, S1.n)
    i2 = PauliElement.identity(S2.d, S2.n)
    gens = [g.tensor(i2) for g in S1.generators] + [i1.tensor(g) for g in S2.generators]
    k = None if first.k is None or second.k is None else first.k + second.k
    return CodeSpec(name or f"{first.name}+{second.name}", StabilizerGroup(gens), k=k)


def pair_code(d, n):
    """``<X^{⊗n}, Z^{⊗n}>`` when it is a valid stabilizer (``d | n``)."""
    gens = [PauliElement(d, n, 0, (1,) * n, (0,) * n), PauliElement(d, n, 0, (0,) * n, (1,) * n)]
    return CodeSpec(f"pair-d{d}-n{n}", StabilizerGroup(gens))


def all_codes():
    return [get(n) for n in names()]
