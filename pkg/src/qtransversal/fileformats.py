"""Plain-text code files and gate files.

Code file::

    d=2 n=7 name=steane k=1 delta=3
    stabilizer:
    IIIXXXX
    ...
    gauge:
    ...

Generators are length-``n`` strings over ``IXYZ`` (qubits, optional sign
prefix ``+ - i -i``) or, for any ``d``, comma-separated ``x<a>z<b>`` tokens
with an optional leading ``w<k>`` for a global ``tau**k`` phase.  Optional
``css_x:`` / ``css_z:`` sections hold rows of the two check matrices as
digit strings.  ``#`` starts a comment.

Gate file::

    r=1
    all: H
    3: Z(0.3)
    4: matrix [[1, 0], [0, 1j]]

Unlisted coordinates get the identity.
"""

import ast
import re

import numpy as np

from .errors import CodeFileError, QTransversalError, ValidationError
from .pauli import PauliElement
from .stabilizer import CodeSpec, CSSPresentation, StabilizerGroup
from . import unitary

SECTIONS = ("stabilizer", "gauge", "css_x", "css_z")
_TOKEN = re.compile(r"x(\d+)z(\d+)$")
_SIGNS = {"": 0, "+": 0, "i": 1, "-": 2, "-i": 3, "+i": 1}


def _strip(line):
    return line.split("#", 1)[0].rstrip()


def _parse_header(text, lineno):
    fields = {}
    col = 1
    for tok in text.split():
        col = text.index(tok, col - 1) + 1
        if "=" not in tok:
            raise CodeFileError(f"expected key=value, got {tok!r}", lineno, col)
        key, val = tok.split("=", 1)
        if key in fields:
            raise CodeFileError(f"duplicate header field {key!r}", lineno, col)
        fields[key] = val
    for req in ("d", "n"):
        if req not in fields:
            raise CodeFileError(f"header must define {req}=<int>", lineno, 1)
    for key in ("d", "n", "k", "delta", "gauge"):
        if key in fields:
            try:
                fields[key] = int(fields[key])
            except ValueError:
                raise CodeFileError(f"{key} must be an integer", lineno, 1) from None
    if fields["d"] < 2 or fields["n"] < 1:
        raise CodeFileError("need d >= 2 and n >= 1", lineno, 1)
    return fields


def parse_generator(text, d, n, lineno=None):
    """One generator in either syntax."""
    text = text.strip()
    if "," in text or text.startswith("x") or text.startswith("w"):
        return _parse_tokens(text, d, n, lineno)
    if d != 2:
        raise CodeFileError("Pauli-letter strings are only allowed for d=2", lineno, 1)
    m = re.match(r"([+-]?i?)([IXYZ]+)$", text)
    if not m:
        bad = next((i for i, ch in enumerate(text) if ch not in "+-iIXYZ"), 0)
        raise CodeFileError(f"unexpected character {text[bad]!r}", lineno, bad + 1)
    sign, body = m.groups()
    if len(body) != n:
        raise CodeFileError(f"generator has length {len(body)}, expected {n}", lineno, len(sign) + 1)
    p = PauliElement.from_label(body)
    return p.with_phase(p.phase + _SIGNS[sign])


def _parse_tokens(text, d, n, lineno):
    parts = [t.strip() for t in text.split(",")]
    phase = 0
    col = 1
    if parts and parts[0].startswith("w"):
        try:
            phase = int(parts[0][1:])
        except ValueError:
            raise CodeFileError(f"bad phase token {parts[0]!r}", lineno, 1) from None
        col += len(parts[0]) + 1
        parts = parts[1:]
    if len(parts) != n:
        raise CodeFileError(f"generator has {len(parts)} tokens, expected {n}", lineno, col)
    a, b = [], []
    for tok in parts:
        m = _TOKEN.match(tok)
        if not m:
            raise CodeFileError(f"bad token {tok!r}; expected x<a>z<b>", lineno, col)
        a.append(int(m.group(1)))
        b.append(int(m.group(2)))
        col += len(tok) + 1
    return PauliElement(d, n, phase, tuple(a), tuple(b))


def _parse_row(text, n, lineno):
    digits = [ch for ch in text if not ch.isspace() and ch != ","]
    if len(digits) != n or not all(ch.isdigit() for ch in digits):
        raise CodeFileError(f"check-matrix row must have {n} digits", lineno, 1)
    return [int(ch) for ch in digits]


def parse_code_file(text, name=None, max_elements=None):
    """Parse and validate a code file into a :class:`CodeSpec`."""
    lines = text.splitlines()
    header = None
    sections = {s: [] for s in SECTIONS}
    current = None
    for lineno, raw in enumerate(lines, 1):
        line = _strip(raw)
        if not line.strip():
            continue
        if header is None:
            header = _parse_header(line, lineno)
            d, n = header["d"], header["n"]
            continue
        key = line.strip()
        if key.endswith(":"):
            sec = key[:-1].strip()
            if sec not in SECTIONS:
                raise CodeFileError(f"unknown section {sec!r}", lineno, 1)
            current = sec
            continue
        if current is None:
            raise CodeFileError("generator outside of a section", lineno, 1)
        if current in ("css_x", "css_z"):
            sections[current].append(_parse_row(key, n, lineno))
        else:
            sections[current].append(parse_generator(key, d, n, lineno))
    if header is None:
        raise CodeFileError("empty code file", 1, 1)
    if not sections["stabilizer"]:
        raise CodeFileError("missing stabilizer: section")
    kw = {} if max_elements is None else {"max_elements": max_elements}
    S = StabilizerGroup(sections["stabilizer"], **kw)
    css = None
    if sections["css_x"] or sections["css_z"]:
        css = CSSPresentation.from_arrays(
            np.array(sections["css_x"], dtype=int).reshape(-1, n),
            np.array(sections["css_z"], dtype=int).reshape(-1, n),
        )
    return CodeSpec(
        name or header.get("name", "code"), S, gauge=sections["gauge"],
        k=header.get("k"), distance=header.get("delta"), gauge_count=header.get("gauge", 0),
        css=css,
    )


def format_generator(p):
    if p.d == 2:
        return p.label()
    body = ",".join(f"x{x}z{y}" for x, y in zip(p.a, p.b))
    return f"w{p.phase},{body}" if p.phase else body


def format_code_file(spec):
    """Canonical text form; ``parse_code_file(format_code_file(s))`` reproduces ``s``."""
    S = spec.stabilizer
    head = [f"d={S.d}", f"n={S.n}", f"name={spec.name}"]
    if spec.k is not None:
        head.append(f"k={spec.k}")
    if spec.distance is not None:
        head.append(f"delta={spec.distance}")
    if spec.gauge_count:
        head.append(f"gauge={spec.gauge_count}")
    out = [" ".join(head), "stabilizer:"]
    out += [format_generator(g) for g in S.generators]
    if spec.gauge:
        out.append("gauge:")
        out += [format_generator(g) for g in spec.gauge]
    if spec.css is not None:
        out.append("css_x:")
        out += ["".join(str(x) for x in row) for row in spec.css.hx]
        out.append("css_z:")
        out += ["".join(str(x) for x in row) for row in spec.css.hz]
    return "\n".join(out) + "\n"


def load_code(path_or_name, **kw):
    """A catalog name or the path of a code file."""
    from . import catalog

    key = str(path_or_name)
    if key.lower() in catalog.names(include_optional=True):
        return catalog.get(key)
    try:
        with open(key) as fh:
            text = fh.read()
    except OSError as exc:
        raise CodeFileError(f"cannot read {key!r}: {exc.strerror}") from None
    return parse_code_file(text, **kw)


# gate files -----------------------------------------------------------------------


_ROT = re.compile(r"([XZ])\(\s*([^)]+)\s*\)$")


def _eval_number(text, lineno):
    try:
        node = ast.parse(text.strip(), mode="eval")
        return float(_safe_eval(node.body))
    except (ValueError, SyntaxError, TypeError):
        raise CodeFileError(f"bad angle {text!r}", lineno, 1) from None


def _safe_eval(node):
    # arithmetic over numbers and pi only
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
        return node.value
    if isinstance(node, ast.Name) and node.id == "pi":
        return np.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _safe_eval(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult, ast.Div)):
        left, right = _safe_eval(node.left), _safe_eval(node.right)
        op = type(node.op)
        return {ast.Add: left + right, ast.Sub: left - right,
                ast.Mult: left * right, ast.Div: left / right}[op]
    raise ValueError("unsupported expression")


def parse_gate_spec(text, d, r, lineno=None):
    """A single gate token: a name, ``Z(theta)``, ``X(theta)`` or ``matrix [[...]]``."""
    text = text.strip()
    if text.startswith("matrix"):
        body = text[len("matrix"):].strip()
        try:
            node = ast.parse(body, mode="eval").body
            if not isinstance(node, ast.List):
                raise ValueError
            M = np.array([[complex(_safe_eval(x)) for x in row.elts] for row in node.elts])
        except (ValueError, SyntaxError, AttributeError, TypeError):
            raise CodeFileError("bad matrix literal", lineno, 1) from None
    else:
        m = _ROT.match(text)
        if m:
            if d != 2:
                raise CodeFileError("rotation gates are qubit-only", lineno, 1)
            theta = _eval_number(m.group(2), lineno)
            M = unitary.z_rotation(theta) if m.group(1) == "Z" else unitary.x_rotation(theta)
        else:
            try:
                M = unitary.named_gate(text, d)
            except ValidationError as exc:
                raise CodeFileError(str(exc), lineno, 1) from None
    if M.shape != (d**r, d**r):
        if M.shape == (d, d) and r > 1:
            # same single-qudit gate on every block
            out = M
            for _ in range(r - 1):
                out = np.kron(out, M)
            M = out
        else:
            raise CodeFileError(f"gate has shape {M.shape}, expected {(d**r, d**r)}", lineno, 1)
    try:
        return unitary.check_unitary(M)
    except ValidationError as exc:
        raise CodeFileError(str(exc), lineno, 1) from None


def parse_gate_file(text, d, n, r=None):
    """Parse a gate file into a :class:`~qtransversal.unitary.TransversalGate`."""
    entries = []
    file_r = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw).strip()
        if not line:
            continue
        if re.match(r"r\s*=", line):
            try:
                file_r = int(line.split("=", 1)[1])
            except ValueError:
                raise CodeFileError("r must be an integer", lineno, 1) from None
            continue
        if ":" not in line:
            raise CodeFileError("expected '<coordinate|all>: <gate>'", lineno, 1)
        where, spec = line.split(":", 1)
        entries.append((lineno, where.strip(), spec))
    if r is None:
        r = file_r or 1
    elif file_r is not None and file_r != r:
        raise CodeFileError(f"gate file declares r={file_r} but r={r} was requested")
    factors = [np.eye(d**r, dtype=complex) for _ in range(n)]
    for lineno, where, spec in entries:
        M = parse_gate_spec(spec, d, r, lineno)
        if where == "all":
            factors = [M.copy() for _ in range(n)]
            continue
        try:
            coords = [int(x) for x in where.replace(",", " ").split()]
        except ValueError:
            raise CodeFileError(f"bad coordinate list {where!r}", lineno, 1) from None
        for j in coords:
            if not 1 <= j <= n:
                raise CodeFileError(f"coordinate {j} outside 1..{n}", lineno, 1)
            factors[j - 1] = M
    return unitary.TransversalGate(d, r, factors)


def load_gate(path, d, n, r=None):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise CodeFileError(f"cannot read {path!r}: {exc.strerror}") from None
    return parse_gate_file(text, d, n, r)


__all__ = [
    "parse_code_file", "format_code_file", "parse_generator", "format_generator",
    "load_code", "parse_gate_file", "parse_gate_spec", "load_gate", "QTransversalError",
]
