"""Scenario files and the expression language.

Expressions use integers and ``p/q`` rationals, ``+ - * / ^``, parentheses,
and ``@`` for the tensor product of module elements::

    3*y*n1            4*x*(n2@n2)          1/2*x^2*(e1@e2)

A scenario file is sectioned::

    [ring]
    vars = x:3, y:4, z:5
    ideal = y^2 - x*z

    [module]
    gens = n1:-2, n2:-3
    rel = x*n1 - y*n2

    [derivation]
    degree = -1
    D(x) = 3*y*n1

    [connection]
    G(n1) = 4*x*(n2@n2)

    [options]
    order = 5

``ideal`` and ``rel`` may repeat. ``[connection]`` and ``[options]`` are
optional; every other section is mandatory. ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .elements import Space, TensorElement, concat
from .polynomial import Polynomial
from .presentation import ModulePresentation, Presentation, RingPresentation


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# ------------------------------------------------------------------- lexer

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*/^@()]))")


def _tokenize(text: str, line: int, col0: int):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = len(text[pos:]) - len(text[pos:].lstrip()) + pos
            raise ParseError(f"unexpected character {text[bad]!r}", line, col0 + bad)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), col0 + start))
        pos = m.end()
    toks.append(("eof", "", col0 + len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, nvars: int, var_names: Sequence[str], gen_names: Sequence[str],
                 line: int = 1, col: int = 1):
        self.toks = _tokenize(text, line, col)
        self.i = 0
        self.line = line
        self.nvars = nvars
        self.vars = {n: k for k, n in enumerate(var_names)}
        self.gens = {n: k for k, n in enumerate(gen_names)}

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok[2])

    def expect(self, op: str):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            self.error(f"expected {op!r}", t)

    def parse(self) -> TensorElement:
        if self.peek()[0] == "eof":
            self.error("empty expression")
        v = self.sum()
        if self.peek()[0] != "eof":
            self.error(f"unexpected {self.peek()[1]!r}")
        return v

    def sum(self) -> TensorElement:
        v = self.tensor()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()
            w = self.tensor()
            if v.length != w.length:
                self.error(f"tensor length mismatch ({v.length} vs {w.length})", op)
            v = v + w if op[1] == "+" else v - w
        return v

    def tensor(self) -> TensorElement:
        v = self.product()
        while self.peek()[0] == "op" and self.peek()[1] == "@":
            self.take()
            v = concat(v, self.product(), "T")
        return v

    def product(self) -> TensorElement:
        v = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()
            w = self.unary()
            if op[1] == "/":
                c = self._constant(w)
                if c is None or c == 0:
                    self.error("division only by a nonzero rational constant", op)
                v = v.scale(1 / c)
            elif v.length and w.length:
                self.error("'*' between module elements; use '@' for tensor products", op)
            else:
                v = concat(v, w, "T")
        return v

    def unary(self) -> TensorElement:
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            v = self.unary()
            return -v if t[1] == "-" else v
        return self.power()

    def power(self) -> TensorElement:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            op = self.take()
            t = self.take()
            if t[0] != "num":
                self.error("exponent must be a non-negative integer", t)
            if base.length:
                self.error("'^' applies to ring elements only", op)
            p = base.as_polynomial() ** int(t[1])
            return TensorElement.scalar(p, "T")
        return base

    def atom(self) -> TensorElement:
        t = self.take()
        if t[0] == "num":
            return TensorElement.scalar(Polynomial.constant(self.nvars, int(t[1])), "T")
        if t[0] == "ident":
            if t[1] in self.vars:
                return TensorElement.scalar(Polynomial.variable(self.nvars, self.vars[t[1]]), "T")
            if t[1] in self.gens:
                return TensorElement.word((self.gens[t[1]],), self.nvars)
            self.error(f"unknown identifier {t[1]!r}", t)
        if t[0] == "op" and t[1] == "(":
            v = self.sum()
            self.expect(")")
            return v
        self.error("unexpected end of expression" if t[0] == "eof" else f"unexpected {t[1]!r}", t)

    @staticmethod
    def _constant(v: TensorElement) -> Fraction | None:
        if v.length:
            return None
        if not v.terms:
            return Fraction(0)
        if len(v.terms) == 1:
            ((_, m), c), = v.terms.items()
            if not any(m):
                return c
        return None


def parse_expression(text: str, context, *, line: int = 1, col: int = 1):
    """Parse ``text`` against a :class:`Presentation` (or a ring alone).

    Returns a :class:`Polynomial` for ring elements and a
    :class:`TensorElement` (tag ``T``) otherwise.
    """
    if isinstance(context, Presentation):
        ring, gens = context.ring, context.module.names
    elif isinstance(context, RingPresentation):
        ring, gens = context, ()
    else:
        ring, gens = context
    v = _Parser(text, ring.nvars, ring.names, gens, line, col).parse()
    if v.length == 0:
        return v.as_polynomial()
    return v


# ---------------------------------------------------------------- rendering

def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_mono(exps, names) -> str:
    parts = []
    for e, n in zip(exps, names):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts)


def _join(terms: list[tuple[Fraction, str]]) -> str:
    if not terms:
        return "0"
    out = []
    for i, (c, body) in enumerate(terms):
        mag = abs(c)
        if body:
            s = body if mag == 1 else f"{_fmt_coeff(mag)}*{body}"
        else:
            s = _fmt_coeff(mag)
        if i == 0:
            out.append(f"-{s}" if c < 0 else s)
        else:
            out.append(f" - {s}" if c < 0 else f" + {s}")
    return "".join(out)


def render_polynomial(p: Polynomial, ring: RingPresentation) -> str:
    items = sorted(p.terms.items(), key=lambda mc: (ring.weight(mc[0]), mc[0]))
    return _join([(c, _fmt_mono(m, ring.names)) for m, c in items])


def render_tensor(t: TensorElement, pres: Presentation) -> str:
    if t.length == 0:
        return render_polynomial(t.as_polynomial(), pres.ring)
    ring = pres.ring
    names = pres.module.names
    items = sorted(t.terms.items(), key=lambda kc: (kc[0][0], ring.weight(kc[0][1]), kc[0][1]))
    terms = []
    for (word, exps), c in items:
        w = "@".join(names[g] for g in word)
        if len(word) > 1:
            w = f"({w})"
        mono = _fmt_mono(exps, ring.names)
        terms.append((c, f"{mono}*{w}" if mono else w))
    return _join(terms)


def render_expression(value, pres: Presentation) -> str:
    if isinstance(value, Polynomial):
        return render_polynomial(value, pres.ring)
    return render_tensor(value, pres)


# ---------------------------------------------------------------- scenarios

@dataclass(frozen=True)
class Options:
    order: int = 5
    degree: int | None = None
    flat: bool = False
    seed: int = 0


@dataclass(frozen=True)
class Scenario:
    ring: RingPresentation
    module: ModulePresentation
    derivation_degree: int
    derivation: tuple[TensorElement, ...]
    connection: tuple[TensorElement, ...] | None = None
    options: Options = field(default_factory=Options)

    @property
    def presentation(self) -> Presentation:
        return _presentation(self.ring, self.module)

    @property
    def connection_degree(self) -> int:
        return self.derivation_degree if self.options.degree is None else self.options.degree


_PRES_CACHE: dict = {}


def _presentation(ring: RingPresentation, module: ModulePresentation) -> Presentation:
    key = (ring, module)
    pres = _PRES_CACHE.get(key)
    if pres is None:
        pres = _PRES_CACHE[key] = Presentation(ring, module)
    return pres


_SECTIONS = ("ring", "module", "derivation", "connection", "options")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


def _weighted_list(value: str, line: int, what: str) -> tuple[tuple[str, ...], tuple[int, ...]]:
    names, weights = [], []
    for item in value.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" not in item:
            raise ParseError(f"{what} entry {item!r} needs the form name:weight", line)
        n, w = (s.strip() for s in item.split(":", 1))
        if not _NAME.match(n):
            raise ParseError(f"bad {what} name {n!r}", line)
        try:
            weights.append(int(w))
        except ValueError:
            raise ParseError(f"weight of {n!r} must be an integer", line) from None
        names.append(n)
    if len(set(names)) != len(names):
        raise ParseError(f"duplicate {what} name", line)
    return tuple(names), tuple(weights)


def parse_scenario(text: str) -> Scenario:
    sections: dict[str, list[tuple[int, str, str, int]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ParseError("unterminated section header", lineno)
            name = stripped[1:-1].strip().lower()
            if name not in _SECTIONS:
                raise ParseError(f"unknown section [{name}]", lineno)
            if name in sections:
                raise ParseError(f"duplicate section [{name}]", lineno)
            sections[name] = []
            current = name
            continue
        if current is None:
            raise ParseError("content before the first section", lineno)
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno)
        key, value = line.split("=", 1)
        col = len(key) + 2 + (len(value) - len(value.lstrip()))
        sections[current].append((lineno, key.strip(), value.strip(), col))

    for name in ("ring", "module", "derivation"):
        if name not in sections:
            raise ParseError(f"missing [{name}]", 1)

    # ring
    names = weights = None
    ideal_src = []
    for lineno, key, value, col in sections["ring"]:
        if key == "vars":
            if names is not None:
                raise ParseError("duplicate 'vars'", lineno)
            names, weights = _weighted_list(value, lineno, "variable")
        elif key == "ideal":
            ideal_src.append((lineno, value, col))
        else:
            raise ParseError(f"unknown key {key!r} in [ring]", lineno)
    if names is None:
        raise ParseError("[ring] needs 'vars'", 1)
    bare = RingPresentation(names, weights)
    ideal = []
    for lineno, value, col in ideal_src:
        v = parse_expression(value, bare, line=lineno, col=col)
        if not isinstance(v, Polynomial):
            raise ParseError("ideal generators must be ring elements", lineno)
        ideal.append(v)
    ring = RingPresentation(names, weights, tuple(ideal))

    # module
    gnames = gweights = None
    rel_src = []
    for lineno, key, value, col in sections["module"]:
        if key == "gens":
            if gnames is not None:
                raise ParseError("duplicate 'gens'", lineno)
            gnames, gweights = _weighted_list(value, lineno, "generator")
        elif key == "rel":
            rel_src.append((lineno, value, col))
        else:
            raise ParseError(f"unknown key {key!r} in [module]", lineno)
    if gnames is None:
        raise ParseError("[module] needs 'gens'", 1)
    clash = set(gnames) & set(names)
    if clash:
        raise ParseError(f"names used for both variables and generators: {sorted(clash)}", 1)
    ctx = (ring, gnames)
    rels = []
    for lineno, value, col in rel_src:
        v = parse_expression(value, ctx, line=lineno, col=col)
        if isinstance(v, Polynomial) or v.length != 1:
            raise ParseError("relations must be module elements", lineno)
        rels.append(tuple(v.module_coefficients(len(gnames))))
    module = ModulePresentation(gnames, gweights, tuple(rels))

    # derivation
    degree = None
    dvals: dict[int, TensorElement] = {}
    for lineno, key, value, col in sections["derivation"]:
        if key == "degree":
            degree = _int(value, lineno)
            continue
        m = re.fullmatch(r"D\(\s*([A-Za-z_][A-Za-z0-9_']*)\s*\)", key)
        if not m:
            raise ParseError(f"unknown key {key!r} in [derivation]", lineno)
        if m.group(1) not in names:
            raise ParseError(f"unknown variable {m.group(1)!r}", lineno)
        v = ring.index(m.group(1))
        if v in dvals:
            raise ParseError(f"duplicate D({m.group(1)})", lineno)
        dvals[v] = _module_value(parse_expression(value, ctx, line=lineno, col=col), ring, lineno, 1)
    if degree is None:
        raise ParseError("[derivation] needs 'degree'", 1)
    for v, n in enumerate(names):
        if v not in dvals:
            raise ParseError(f"missing D({n})", 1)
    derivation = tuple(dvals[v] for v in range(len(names)))

    # connection
    connection = None
    if "connection" in sections:
        cvals: dict[int, TensorElement] = {}
        for lineno, key, value, col in sections["connection"]:
            m = re.fullmatch(r"G\(\s*([A-Za-z_][A-Za-z0-9_']*)\s*\)", key)
            if not m:
                raise ParseError(f"unknown key {key!r} in [connection]", lineno)
            if m.group(1) not in gnames:
                raise ParseError(f"unknown generator {m.group(1)!r}", lineno)
            j = gnames.index(m.group(1))
            if j in cvals:
                raise ParseError(f"duplicate G({m.group(1)})", lineno)
            cvals[j] = _module_value(parse_expression(value, ctx, line=lineno, col=col), ring, lineno, 2)
        for j, n in enumerate(gnames):
            if j not in cvals:
                raise ParseError(f"missing G({n})", 1)
        connection = tuple(cvals[j] for j in range(len(gnames)))

    # options
    opts = {}
    for lineno, key, value, col in sections.get("options", []):
        if key in ("order", "seed"):
            opts[key] = _int(value, lineno)
        elif key == "degree":
            opts[key] = _int(value, lineno)
        elif key == "flat":
            if value.lower() not in ("true", "false"):
                raise ParseError("flat must be true or false", lineno)
            opts[key] = value.lower() == "true"
        else:
            raise ParseError(f"unknown option {key!r}", lineno)
    return Scenario(ring, module, degree, derivation, connection, Options(**opts))


def _int(value: str, line: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"expected an integer, got {value!r}", line) from None


def _module_value(v, ring: RingPresentation, line: int, length: int) -> TensorElement:
    if isinstance(v, Polynomial):
        if v.is_zero():
            return TensorElement.zero(Space("T", length), ring.nvars)
        raise ParseError(f"expected a tensor of length {length}, got a ring element", line)
    if v.length != length:
        raise ParseError(f"expected a tensor of length {length}, got length {v.length}", line)
    return v


def render_scenario(s: Scenario) -> str:
    pres = s.presentation
    lines = ["[ring]", "vars = " + ", ".join(f"{n}:{w}" for n, w in zip(s.ring.names, s.ring.weights))]
    lines += [f"ideal = {render_polynomial(f, s.ring)}" for f in s.ring.ideal]
    lines += ["", "[module]",
              "gens = " + ", ".join(f"{n}:{w}" for n, w in zip(s.module.names, s.module.weights))]
    lines += [f"rel = {render_tensor(pres.module_element(r), pres)}" for r in s.module.relations]
    lines += ["", "[derivation]", f"degree = {s.derivation_degree}"]
    lines += [f"D({n}) = {render_tensor(v, pres)}" for n, v in zip(s.ring.names, s.derivation)]
    if s.connection is not None:
        lines += ["", "[connection]"]
        lines += [f"G({n}) = {render_tensor(v, pres)}" for n, v in zip(s.module.names, s.connection)]
    o = s.options
    lines += ["", "[options]", f"order = {o.order}"]
    if o.degree is not None:
        lines.append(f"degree = {o.degree}")
    lines += [f"flat = {'true' if o.flat else 'false'}", f"seed = {o.seed}"]
    return "\n".join(lines) + "\n"
