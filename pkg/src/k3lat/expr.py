"""Named-lattice expressions such as ``U+2E8+A1`` or ``[32]+D4``.

Grammar (ASCII, whitespace ignored)::

    expr  := term { "+" term }
    term  := [count] atom [ "(" scale ")" ]
    atom  := "U" | "A" int | "D" int | "E" int | "[" int "]"

``[k]`` is the rank-one lattice with Gram matrix ``(k)``; ``k`` must be even
and nonzero.  ``X(n)`` multiplies the Gram matrix of ``X`` by ``n``.
"""

from dataclasses import dataclass

__all__ = [
    "Atom", "Summand", "LatticeExpr", "LatticeSyntaxError", "parse_lattice_expr",
]


class LatticeSyntaxError(ValueError):
    """Malformed or semantically invalid lattice expression.

    ``offset`` is the byte offset into the input where the problem was found.
    """

    def __init__(self, message, offset, text=""):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.text = text


@dataclass(frozen=True, order=True)
class Atom:
    kind: str  # "U", "A", "D", "E" or "Scalar"
    n: int = 0  # rank index for A/D/E, the value k for Scalar

    def __post_init__(self):
        if self.kind == "A" and self.n < 1:
            raise ValueError(f"A{self.n}: A_n needs n >= 1")
        if self.kind == "D" and self.n < 4:
            raise ValueError(f"D{self.n}: D_n needs n >= 4")
        if self.kind == "E" and self.n not in (6, 7, 8):
            raise ValueError(f"E{self.n}: only E6, E7, E8 exist")
        if self.kind == "Scalar" and (self.n == 0 or self.n % 2):
            raise ValueError(f"[{self.n}]: rank-one atom needs an even nonzero value")
        if self.kind not in ("U", "A", "D", "E", "Scalar"):
            raise ValueError(f"unknown atom kind {self.kind!r}")

    @property
    def rank(self):
        if self.kind == "U":
            return 2
        if self.kind == "Scalar":
            return 1
        return self.n

    def __str__(self):
        if self.kind == "U":
            return "U"
        if self.kind == "Scalar":
            return f"[{self.n}]"
        return f"{self.kind}{self.n}"


@dataclass(frozen=True)
class Summand:
    multiplicity: int
    atom: Atom
    scale: int = 1

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")
        if self.scale == 0:
            raise ValueError("scale must be nonzero")

    def __str__(self):
        count = "" if self.multiplicity == 1 else str(self.multiplicity)
        scale = "" if self.scale == 1 else f"({self.scale})"
        return f"{count}{self.atom}{scale}"


_KIND_ORDER = {"U": 0, "Scalar": 1, "A": 2, "D": 3, "E": 4}


@dataclass(frozen=True)
class LatticeExpr:
    summands: tuple

    def __str__(self):
        return "+".join(str(s) for s in self.summands)

    @property
    def rank(self):
        return sum(s.multiplicity * s.atom.rank for s in self.summands)

    def blocks(self):
        """Summands expanded by multiplicity: a list of ``(atom, scale)``."""
        out = []
        for s in self.summands:
            out.extend([(s.atom, s.scale)] * s.multiplicity)
        return out

    def normal_form(self):
        """Summands sorted (U first, then rank-one atoms, A, D, E) with equal
        ``(atom, scale)`` pairs merged."""
        counts = {}
        for atom, scale in self.blocks():
            counts[(atom, scale)] = counts.get((atom, scale), 0) + 1

        def key(item):
            (atom, scale), _ = item
            return (_KIND_ORDER[atom.kind], atom.n, scale)

        return LatticeExpr(tuple(Summand(m, a, s) for (a, s), m in
                                 sorted(counts.items(), key=key)))


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def error(self, msg, pos=None):
        raise LatticeSyntaxError(msg, self.pos if pos is None else pos, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self, signed=False):
        self.skip()
        start = self.pos
        if signed and self.peek() in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.error("expected integer", start)
        return int(self.text[start:self.pos]), start

    def term(self):
        start = self.pos
        count = 1
        if self.peek().isdigit():
            count, at = self.integer()
            if count < 1:
                self.error("count must be positive", at)
        ch = self.peek()
        atom_at = self.pos
        if ch == "U":
            self.pos += 1
            atom = ("U", 0)
        elif ch in ("A", "D", "E"):
            self.pos += 1
            n, at = self.integer()
            atom = (ch, n)
        elif ch == "[":
            self.pos += 1
            k, at = self.integer(signed=True)
            if self.peek() != "]":
                self.error("expected ']'")
            self.pos += 1
            atom = ("Scalar", k)
        else:
            self.error("expected atom U, A<n>, D<n>, E<n> or [k]")
        try:
            atom = Atom(*atom)
        except ValueError as exc:
            self.error(str(exc), atom_at)
        scale = 1
        if self.peek() == "(":
            self.pos += 1
            scale, at = self.integer(signed=True)
            if scale == 0:
                self.error("scale must be nonzero", at)
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
        if count == 0:
            self.error("count must be positive", start)
        return Summand(count, atom, scale)

    def parse(self):
        terms = [self.term()]
        while self.peek() == "+":
            self.pos += 1
            terms.append(self.term())
        self.skip()
        if self.pos != len(self.text):
            self.error(f"unexpected character {self.text[self.pos]!r}")
        return LatticeExpr(tuple(terms))


def parse_lattice_expr(text):
    """Parse a lattice expression; summands keep their left-to-right order.

    >>> str(parse_lattice_expr("U + 2E8 + A1"))
    'U+2E8+A1'
    """
    if isinstance(text, LatticeExpr):
        return text
    return _Parser(text.replace("−", "-")).parse()
