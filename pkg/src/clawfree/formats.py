"""Line-based text formats for graphs and set systems.

Graph::

    c <comment>
    p mwis <n> <m> <d>
    v <id> <numerator>[/<denominator>]
    e <u> <v>

Set system::

    c <comment>
    p setpack <num_sets> <k>
    s <weight> <elem> [<elem> ...]
"""

from __future__ import annotations

from fractions import Fraction

from .graph_core import InputError, ProblemInstance
from .setpacking import SetSystem


class ParseError(InputError):
    def __init__(self, lineno: int | None, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


def format_weight(w: Fraction) -> str:
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


def _parse_weight(token: str, lineno: int) -> Fraction:
    try:
        w = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(lineno, f"bad weight {token!r}") from None
    if "." in token or "e" in token.lower():
        raise ParseError(lineno, f"weight {token!r} must be an integer or a fraction p/q")
    if w <= 0:
        raise ParseError(lineno, f"nonpositive weight {token}")
    return w


def _int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(lineno, f"{what} must be an integer, got {token!r}") from None


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line:
            yield lineno, line, line.split()


def read_comments(text: str) -> list[str]:
    """Comment payloads (text after ``c``), in file order."""
    return [line[1:].strip() for _, line, parts in _lines(text) if parts[0] == "c"]


def comment_field(text: str, key: str) -> list[str] | None:
    """Tokens following ``c <key>`` in the first matching comment, if any."""
    for payload in read_comments(text):
        parts = payload.split()
        if parts and parts[0] == key:
            return parts[1:]
    return None


def parse_graph(text: str) -> ProblemInstance:
    header = None
    weights: dict[int, Fraction] = {}
    edges: list[tuple[int, int]] = []
    seen: set[frozenset[int]] = set()
    for lineno, _, parts in _lines(text):
        kind = parts[0]
        if kind == "c":
            continue
        if kind == "p":
            if header is not None:
                raise ParseError(lineno, "duplicate header")
            if len(parts) != 5 or parts[1] != "mwis":
                raise ParseError(lineno, "header must read 'p mwis <n> <m> <d>'")
            header = tuple(_int(t, lineno, "header field") for t in parts[2:])
            if header[0] < 0 or header[1] < 0:
                raise ParseError(lineno, "negative vertex or edge count")
            if header[2] < 2:
                raise ParseError(lineno, f"claw parameter d must be >= 2, got {header[2]}")
            continue
        if header is None:
            raise ParseError(lineno, f"'{kind}' line before the header")
        n = header[0]
        if kind == "v":
            if len(parts) != 3:
                raise ParseError(lineno, "vertex line must read 'v <id> <weight>'")
            v = _int(parts[1], lineno, "vertex id")
            if not 0 <= v < n:
                raise ParseError(lineno, f"vertex id {v} outside 0..{n - 1}")
            if v in weights:
                raise ParseError(lineno, f"duplicate vertex {v}")
            weights[v] = _parse_weight(parts[2], lineno)
        elif kind == "e":
            if len(parts) != 3:
                raise ParseError(lineno, "edge line must read 'e <u> <v>'")
            u, v = _int(parts[1], lineno, "endpoint"), _int(parts[2], lineno, "endpoint")
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(lineno, f"dangling edge endpoint in {u} {v}")
            if u == v:
                raise ParseError(lineno, f"self-loop at {u}")
            key = frozenset((u, v))
            if key in seen:
                raise ParseError(lineno, f"duplicate edge {u} {v}")
            seen.add(key)
            edges.append((u, v))
        else:
            raise ParseError(lineno, f"unknown line type {kind!r}")
    if header is None:
        raise ParseError(None, "missing 'p mwis' header")
    n, m, d = header
    missing = [v for v in range(n) if v not in weights]
    if missing:
        raise ParseError(None, f"no weight line for vertices {missing[:5]}")
    if len(edges) != m:
        raise ParseError(None, f"header announces {m} edges, found {len(edges)}")
    return ProblemInstance.from_edges([weights[v] for v in range(n)], edges, d)


def serialize_graph(inst: ProblemInstance, comments: list[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"p mwis {inst.n} {inst.num_edges} {inst.d}")
    out += [f"v {v} {format_weight(w)}" for v, w in enumerate(inst.weights)]
    out += [f"e {u} {v}" for u, v in inst.edges]
    return "\n".join(out) + "\n"


def parse_set_system(text: str) -> SetSystem:
    header = None
    raw: list[tuple[Fraction, list[str]]] = []
    for lineno, _, parts in _lines(text):
        kind = parts[0]
        if kind == "c":
            continue
        if kind == "p":
            if header is not None:
                raise ParseError(lineno, "duplicate header")
            if len(parts) != 4 or parts[1] != "setpack":
                raise ParseError(lineno, "header must read 'p setpack <num_sets> <k>'")
            header = (_int(parts[2], lineno, "set count"), _int(parts[3], lineno, "k"))
            if header[0] < 0 or header[1] < 1:
                raise ParseError(lineno, "need num_sets >= 0 and k >= 1")
            continue
        if header is None:
            raise ParseError(lineno, f"'{kind}' line before the header")
        if kind != "s":
            raise ParseError(lineno, f"unknown line type {kind!r}")
        if len(parts) < 3:
            raise ParseError(lineno, "set line must read 's <weight> <elem> ...'")
        w = _parse_weight(parts[1], lineno)
        elems = parts[2:]
        if len(set(elems)) != len(elems):
            raise ParseError(lineno, "repeated element in a set")
        if len(elems) > header[1]:
            raise ParseError(lineno, f"set of size {len(elems)} exceeds k={header[1]}")
        raw.append((w, elems))
    if header is None:
        raise ParseError(None, "missing 'p setpack' header")
    if len(raw) != header[0]:
        raise ParseError(None, f"header announces {header[0]} sets, found {len(raw)}")
    return SetSystem.from_sets(header[1], raw)


def serialize_set_system(sys: SetSystem, comments: list[str] = ()) -> str:
    labels = sys.labels or None
    out = [f"c {c}" for c in comments]
    out.append(f"p setpack {len(sys)} {sys.k}")
    for w, elems in sys.sets:
        tokens = sorted((str(labels[e]) if labels else str(e) for e in elems), key=_token_key)
        out.append(f"s {format_weight(w)} {' '.join(tokens)}")
    return "\n".join(out) + "\n"


def _token_key(token: str) -> tuple:
    # numeric tokens first, in numeric order, so output does not depend on internal ids
    return (0, int(token), "") if token.isdigit() else (1, 0, token)


def detect_format(text: str) -> str:
    """``"mwis"`` or ``"setpack"`` according to the header line."""
    for lineno, _, parts in _lines(text):
        if parts[0] == "p" and len(parts) > 1:
            if parts[1] in ("mwis", "setpack"):
                return parts[1]
            raise ParseError(lineno, f"unknown problem type {parts[1]!r}")
    raise ParseError(None, "no header line found")
