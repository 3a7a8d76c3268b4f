"""Words, finite presentations, and a small textual input language.

A *word* is stored as a tuple of signed nonzero integers: letter ``k`` (k >= 1)
is the k-th generator, ``-k`` its inverse.  This is compact, hashable, and
makes inversion and free reduction trivial.

The input language::

    group< a, b | a^3, (b*a^-1)^2, [a, b] >

``*`` multiplies, ``^`` raises to a (possibly negative) integer power,
``[u, v]`` is the commutator u^-1 v^-1 u v, and ``(u, v)`` is accepted as a
synonym for ``[u, v]``.  ``1`` denotes the identity.  ``#`` starts a comment
running to the end of the line.
"""

from __future__ import annotations

from importlib import resources

MAX_EXPONENT = 2**31 - 1

# Eager exponent expansion could otherwise be used as a memory bomb.
_MAX_RELATOR_LETTERS = 10**7


class ParseError(ValueError):
    """Malformed presentation text.  Knows where the problem is."""

    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def free_reduce(letters):
    """Cancel adjacent inverse pairs.  Returns a tuple."""
    out = []
    push = out.append
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            push(x)
    return tuple(out)


def cyclically_reduce(letters):
    """Freely reduce, then strip conjugating prefix/suffix pairs."""
    word = free_reduce(letters)
    lo, hi = 0, len(word)
    while hi - lo >= 2 and word[lo] == -word[hi - 1]:
        lo += 1
        hi -= 1
    return word[lo:hi]


class Word:
    """An immutable, freely reduced word in abstract generators."""

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        if isinstance(letters, Word):
            letters = letters.letters
        letters = free_reduce(letters)
        if any(x == 0 for x in letters):
            raise ValueError("letter 0 is not a generator")
        object.__setattr__(self, "letters", letters)

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __mul__(self, other):
        return Word(self.letters + Word(other).letters)

    def __invert__(self):
        return Word(tuple(-x for x in reversed(self.letters)))

    def inverse(self):
        return ~self

    def __pow__(self, n):
        if n == 0:
            return Word()
        base = self if n > 0 else ~self
        return Word(base.letters * abs(n))

    def is_identity(self):
        return not self.letters

    def cyclic_reduction(self):
        return Word(cyclically_reduce(self.letters))

    def __repr__(self):
        return f"Word({self.letters!r})"


def commutator(u, v):
    """[u, v] = u^-1 v^-1 u v."""
    u, v = Word(u), Word(v)
    return ~u * ~v * u * v


def render_word(word, names):
    """Render a word using generator ``names``, collapsing runs into powers."""
    letters = Word(word).letters
    if not letters:
        return "1"
    parts = []
    i = 0
    while i < len(letters):
        x = letters[i]
        j = i
        while j < len(letters) and letters[j] == x:
            j += 1
        run = j - i
        name = names[abs(x) - 1]
        exponent = run if x > 0 else -run
        parts.append(name if exponent == 1 else f"{name}^{exponent}")
        i = j
    return "*".join(parts)


class Presentation:
    """A finite presentation ``<generators | relators>``.

    ``generators`` is a tuple of distinct names; ``relators`` a tuple of
    freely reduced nonempty :class:`Word` objects (trivial relators are
    dropped on construction, order otherwise preserved).
    """

    __slots__ = ("generators", "relators")

    def __init__(self, generators, relators=()):
        generators = tuple(generators)
        if not generators:
            raise ValueError("a presentation needs at least one generator")
        if len(set(generators)) != len(generators):
            raise ValueError("duplicate generator name")
        rels = []
        ngens = len(generators)
        for r in relators:
            w = Word(r)
            if any(abs(x) > ngens for x in w):
                raise ValueError(f"relator {w!r} uses an undefined generator")
            if not w.is_identity():
                rels.append(w)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "relators", tuple(rels))

    def __setattr__(self, name, value):
        raise AttributeError("Presentation is immutable")

    @property
    def n_generators(self):
        return len(self.generators)

    def __eq__(self, other):
        return (
            isinstance(other, Presentation)
            and self.generators == other.generators
            and self.relators == other.relators
        )

    def __hash__(self):
        return hash((self.generators, self.relators))

    def word(self, text):
        """Parse a word written in this presentation's generators."""
        return parse_word(text, self.generators)

    def render(self):
        """Serialize back into the input language (parses to an equal object)."""
        gens = ", ".join(self.generators)
        rels = ", ".join(render_word(r, self.generators) for r in self.relators)
        return f"group< {gens} | {rels} >"

    def __repr__(self):
        return f"<Presentation on {self.generators} with {len(self.relators)} relators>"


# --------------------------------------------------------------------------
# Tokenizer / recursive-descent parser
# --------------------------------------------------------------------------

_PUNCT = set("<>()[],|^*")


class _Tokenizer:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens = []
        self._scan()
        self.index = 0

    def _error(self, message, line=None, col=None):
        raise ParseError(message, line or self.line, col or self.col)

    def _scan(self):
        text, n = self.text, len(self.text)
        while self.pos < n:
            ch = text[self.pos]
            if ch == "\n":
                self.pos += 1
                self.line += 1
                self.col = 1
            elif ch in " \t\r":
                self.pos += 1
                self.col += 1
            elif ch == "#":
                while self.pos < n and text[self.pos] != "\n":
                    self.pos += 1
            elif ch.isalpha() or ch == "_":
                start, line, col = self.pos, self.line, self.col
                while self.pos < n and (text[self.pos].isalnum() or text[self.pos] == "_"):
                    self.pos += 1
                    self.col += 1
                self.tokens.append(("ident", text[start : self.pos], line, col))
            elif ch.isdigit():
                start, line, col = self.pos, self.line, self.col
                while self.pos < n and text[self.pos].isdigit():
                    self.pos += 1
                    self.col += 1
                self.tokens.append(("int", text[start : self.pos], line, col))
            elif ch == "-":
                self.tokens.append(("-", "-", self.line, self.col))
                self.pos += 1
                self.col += 1
            elif ch in _PUNCT:
                self.tokens.append((ch, ch, self.line, self.col))
                self.pos += 1
                self.col += 1
            else:
                self._error(f"unexpected character {ch!r}")
        self.tokens.append(("end", "", self.line, self.col))

    def peek(self):
        return self.tokens[self.index]

    def next(self):
        tok = self.tokens[self.index]
        if tok[0] != "end":
            self.index += 1
        return tok

    def expect(self, kind, what=None):
        tok = self.next()
        if tok[0] != kind:
            shown = tok[1] if tok[0] != "end" else "end of input"
            raise ParseError(f"expected {what or kind}, found {shown!r}", tok[2], tok[3])
        return tok


class _Parser:
    def __init__(self, text):
        self.toks = _Tokenizer(text)
        self.gen_index = {}

    def parse_presentation(self):
        kind, value, line, col = self.toks.next()
        if kind != "ident" or value.lower() != "group":
            raise ParseError("presentation must start with 'group<'", line, col)
        self.toks.expect("<")
        generators = self._genlist()
        self.gen_index = {name: i + 1 for i, name in enumerate(generators)}
        self.toks.expect("|")
        relators = []
        if self.toks.peek()[0] != ">":
            relators.append(self._relator())
            while self.toks.peek()[0] == ",":
                self.toks.next()
                relators.append(self._relator())
        self.toks.expect(">")
        tok = self.toks.peek()
        if tok[0] != "end":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2], tok[3])
        return Presentation(generators, relators)

    def parse_bare_word(self, generators):
        self.gen_index = {name: i + 1 for i, name in enumerate(generators)}
        letters = self._relator()
        tok = self.toks.peek()
        if tok[0] != "end":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2], tok[3])
        return Word(letters)

    def _genlist(self):
        names = []
        while True:
            tok = self.toks.expect("ident", "generator name")
            if tok[1].lower() == "group":
                raise ParseError("'group' is reserved", tok[2], tok[3])
            if tok[1] in names:
                raise ParseError(f"duplicate generator {tok[1]!r}", tok[2], tok[3])
            names.append(tok[1])
            if self.toks.peek()[0] == ",":
                self.toks.next()
            else:
                return names

    def _relator(self):
        letters = list(self._term())
        while self.toks.peek()[0] == "*":
            self.toks.next()
            letters.extend(self._term())
        return tuple(letters)

    def _term(self):
        base = self._atom()
        if self.toks.peek()[0] != "^":
            return base
        self.toks.next()
        exponent = self._signed_int()
        if exponent < 0:
            base = tuple(-x for x in reversed(base))
            exponent = -exponent
        if len(base) * exponent > _MAX_RELATOR_LETTERS:
            tok = self.toks.peek()
            raise ParseError("relator too long after expanding powers", tok[2], tok[3])
        return base * exponent

    def _signed_int(self):
        sign = 1
        tok = self.toks.next()
        if tok[0] == "-":
            sign = -1
            tok = self.toks.next()
        if tok[0] != "int":
            raise ParseError("expected an integer exponent", tok[2], tok[3])
        value = sign * int(tok[1])
        if value == 0:
            raise ParseError("zero exponent is not allowed", tok[2], tok[3])
        if abs(value) > MAX_EXPONENT:
            raise ParseError(f"exponent out of range (|e| <= {MAX_EXPONENT})", tok[2], tok[3])
        return value

    def _atom(self):
        kind, value, line, col = self.toks.next()
        if kind == "ident":
            index = self.gen_index.get(value)
            if index is None:
                raise ParseError(f"unknown generator {value!r}", line, col)
            return (index,)
        if kind == "int" and value == "1":
            return ()
        if kind == "(":
            first = self._relator()
            if self.toks.peek()[0] == ",":
                self.toks.next()
                second = self._relator()
                self.toks.expect(")")
                return self._commutator(first, second)
            self.toks.expect(")")
            return first
        if kind == "[":
            first = self._relator()
            self.toks.expect(",")
            second = self._relator()
            self.toks.expect("]")
            return self._commutator(first, second)
        shown = value if kind != "end" else "end of input"
        raise ParseError(f"expected a generator or '(', found {shown!r}", line, col)

    @staticmethod
    def _commutator(u, v):
        inv = lambda w: tuple(-x for x in reversed(w))
        return inv(u) + inv(v) + u + v


def parse_presentation(text):
    """Parse ``group< gens | relators >`` text into a :class:`Presentation`."""
    return _Parser(text).parse_presentation()


def parse_word(text, generators):
    """Parse a bare word (no ``group<>`` wrapper) over the given generators."""
    return _Parser(text).parse_bare_word(tuple(generators))


def load_presentation(path):
    """Parse a presentation file: ``group< ... >`` text, ``#`` comments."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    stripped = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    return parse_presentation(stripped)


# --------------------------------------------------------------------------
# Named catalog
# --------------------------------------------------------------------------

_catalog_cache = None


def _load_catalog():
    global _catalog_cache
    if _catalog_cache is None:
        text = resources.files("grpkit").joinpath("catalog.grp").read_text()
        entries = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            name, sep, body = line.partition(":")
            name = name.strip()
            if not sep or not name:
                raise ValueError(f"catalog.grp line {lineno}: expected 'name: group<...>'")
            if name in entries:
                raise ValueError(f"catalog.grp line {lineno}: duplicate entry {name!r}")
            entries[name] = parse_presentation(body)
        _catalog_cache = entries
    return _catalog_cache


def catalog_keys():
    """Names of the built-in presentations, in file order."""
    return list(_load_catalog())


def catalog(name):
    """Look up a built-in presentation by name."""
    table = _load_catalog()
    if name not in table:
        known = ", ".join(table)
        raise KeyError(f"no catalog entry {name!r} (known: {known})")
    return table[name]
