#!/usr/bin/env python3
"""
Strategy Language

A strategy describes a classical distribution as deterministic functions of
independent uniform bits:

    # bilocal strategy reproducing one extremal ray
    source A bit
    source C2 bits 2
    var X = xor(A, C2_1), C2_2
    let T = and(A, C2_1)
    var Y = or(T, not(C2_2))

`source NAME bit` declares one bit NAME; `source NAME bits k` declares
NAME_1..NAME_k. `var` defines an observed variable (a comma-separated list
packs a tuple), `let` a hidden helper bit. Expressions are xor/and/or/not,
the constants 0 and 1, and names of bits or scalar definitions. Definitions
may appear in any order but must be acyclic.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
from entspace.coords import EntropySpaceError
from entspace.distribution import JointDistribution, Outcome
from loguru import logger

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")
_OPERATORS = ("xor", "and", "or", "not")


class StrategyError(EntropySpaceError):
    """Exception raised for invalid strategies."""

    pass


class StrategyParseError(StrategyError):
    """Exception raised for malformed strategy text, with the offending line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class CyclicStrategyError(StrategyError):
    """Exception raised when definitions depend on each other cyclically."""

    pass


@dataclass(frozen=True)
class Expr:
    """Boolean expression node: op is const, ref, xor, and, or or not."""

    op: str
    args: Tuple["Expr", ...] = ()
    value: Union[int, str, None] = None

    def references(self) -> List[str]:
        if self.op == "ref":
            return [str(self.value)]
        return [name for arg in self.args for name in arg.references()]

    def evaluate(self, env: Dict[str, int]) -> int:
        if self.op == "const":
            return int(self.value)  # type: ignore[arg-type]
        if self.op == "ref":
            return env[str(self.value)]
        values = [arg.evaluate(env) for arg in self.args]
        if self.op == "xor":
            result = 0
            for v in values:
                result ^= v
            return result
        if self.op == "and":
            return int(all(values))
        if self.op == "or":
            return int(any(values))
        if self.op == "not":
            return 1 - values[0]
        raise StrategyError(f"Unknown operator '{self.op}'")

    def __str__(self) -> str:
        if self.op in ("const", "ref"):
            return str(self.value)
        return f"{self.op}({', '.join(str(a) for a in self.args)})"


def const(value: int) -> Expr:
    return Expr("const", value=value)


def ref(name: str) -> Expr:
    return Expr("ref", value=name)


def xor(*args: Expr) -> Expr:
    return Expr("xor", tuple(args))


@dataclass
class Strategy:
    """Uniform source bits plus tuple-valued observed definitions."""

    sources: List[str] = field(default_factory=list)
    definitions: Dict[str, Tuple[Expr, ...]] = field(default_factory=dict)
    helpers: Dict[str, Expr] = field(default_factory=dict)
    name: str = ""

    @property
    def observed(self) -> List[str]:
        return list(self.definitions)

    def add_source(self, name: str, bits: int = 1) -> List[str]:
        names = [name] if bits == 1 else [f"{name}_{i}" for i in range(1, bits + 1)]
        for bit in names:
            if bit in self.sources:
                raise StrategyError(f"Source bit '{bit}' declared twice")
        self.sources.extend(names)
        return names

    def define(self, name: str, *components: Expr) -> None:
        if not components:
            raise StrategyError(f"Definition of '{name}' is empty")
        self.definitions[name] = tuple(components)

    def _dependency_order(self) -> List[str]:
        graph = nx.DiGraph()
        symbols = set(self.sources) | set(self.helpers) | set(self.definitions)
        for name in list(self.helpers) + list(self.definitions):
            graph.add_node(name)
            if name in self.helpers:
                exprs: Sequence[Expr] = (self.helpers[name],)
            else:
                exprs = self.definitions[name]
            for expr in exprs:
                for dep in expr.references():
                    if dep not in symbols:
                        raise StrategyError(
                            f"'{name}' references undeclared symbol '{dep}'"
                        )
                    if dep in self.definitions and len(self.definitions[dep]) != 1:
                        raise StrategyError(
                            f"'{name}' uses tuple-valued '{dep}' inside an expression"
                        )
                    if dep not in self.sources:
                        graph.add_edge(dep, name)
        try:
            return list(nx.lexicographical_topological_sort(graph))
        except nx.NetworkXUnfeasible:
            cycle = nx.find_cycle(graph)
            raise CyclicStrategyError(
                f"Cyclic definitions: {' -> '.join(edge[0] for edge in cycle)}"
            )

    def validate(self) -> List[str]:
        """Check symbols and acyclicity; returns the evaluation order."""
        clash = set(self.sources) & (set(self.definitions) | set(self.helpers))
        if clash:
            raise StrategyError(
                f"Names used both as source and definition: {sorted(clash)}"
            )
        return self._dependency_order()

    def evaluate(
        self, bits: Sequence[int], order: Optional[List[str]] = None
    ) -> Outcome:
        """Observed outcome for one assignment of the source bits."""
        order = order if order is not None else self.validate()
        env: Dict[str, int] = dict(zip(self.sources, bits))
        values: Dict[str, Union[int, Tuple[int, ...]]] = {}
        for name in order:
            if name in self.helpers:
                env[name] = self.helpers[name].evaluate(env)
                continue
            parts = tuple(expr.evaluate(env) for expr in self.definitions[name])
            if len(parts) == 1:
                env[name] = parts[0]
                values[name] = parts[0]
            else:
                values[name] = parts
        return tuple(values[name] for name in self.observed)

    def __str__(self) -> str:
        lines = [f"source {s} bit" for s in self.sources]
        lines += [f"let {k} = {v}" for k, v in self.helpers.items()]
        lines += [
            f"var {k} = {', '.join(str(e) for e in v)}"
            for k, v in self.definitions.items()
        ]
        return "\n".join(lines)


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            break
        number, word, other = match.groups()
        if number is not None:
            tokens.append(("num", number))
        elif word is not None:
            tokens.append(("word", word))
        elif other is not None and other.strip():
            tokens.append(("sym", other))
        pos = match.end()
    return tokens


class _ExprParser:
    def __init__(self, tokens: List[Tuple[str, str]], line: int):
        self.tokens = tokens
        self.pos = 0
        self.line = line

    def peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(
        self, kind: Optional[str] = None, text: Optional[str] = None
    ) -> Tuple[str, str]:
        token = self.peek()
        if token is None:
            raise StrategyParseError("unexpected end of expression", self.line)
        if (kind and token[0] != kind) or (text and token[1] != text):
            raise StrategyParseError(f"unexpected '{token[1]}'", self.line)
        self.pos += 1
        return token

    def expression(self) -> Expr:
        kind, text = self.take()
        if kind == "num":
            if text not in ("0", "1"):
                raise StrategyParseError(
                    f"constant must be 0 or 1, got {text}", self.line
                )
            return const(int(text))
        if kind != "word":
            raise StrategyParseError(f"unexpected '{text}'", self.line)
        following = self.peek()
        if text in _OPERATORS and following is not None and following[1] == "(":
            self.take(text="(")
            args = [self.expression()]
            while self.peek() is not None and self.peek()[1] == ",":  # type: ignore
                self.take(text=",")
                args.append(self.expression())
            self.take(text=")")
            if text == "not" and len(args) != 1:
                raise StrategyParseError("not() takes exactly one argument", self.line)
            return Expr(text, tuple(args))
        return ref(text)

    def components(self) -> List[Expr]:
        parts = [self.expression()]
        while self.peek() is not None:
            self.take(text=",")
            parts.append(self.expression())
        return parts


def _source_bits(parts: List[str]) -> Optional[int]:
    """Bit count of `NAME`, `NAME bit` or `NAME bits k`; None when malformed."""
    if len(parts) == 1 or (len(parts) == 2 and parts[1] == "bit"):
        return 1
    if (
        len(parts) == 3
        and parts[1] == "bits"
        and parts[2].isdigit()
        and int(parts[2]) >= 1
    ):
        return int(parts[2])
    return None


def parse_strategy(text: str, name: str = "") -> Strategy:
    """
    Parse strategy text.

    Raises:
        StrategyParseError: On malformed lines, with the line number
        CyclicStrategyError: If definitions are cyclic
    """
    strategy = Strategy(name=name)
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        if keyword == "source":
            parts = rest.split()
            bits = _source_bits(parts)
            if bits is None:
                raise StrategyParseError(f"bad source declaration '{line}'", number)
            try:
                strategy.add_source(parts[0], bits)
            except StrategyError as e:
                raise StrategyParseError(str(e), number)
            continue
        if keyword in ("var", "let"):
            target, eq, body = rest.partition("=")
            target = target.strip()
            if not eq or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", target):
                raise StrategyParseError(f"bad definition '{line}'", number)
            if target in strategy.definitions or target in strategy.helpers:
                raise StrategyParseError(f"'{target}' defined twice", number)
            parser = _ExprParser(_tokenize(body), number)
            parts = parser.components()
            if keyword == "let":
                if len(parts) != 1:
                    raise StrategyParseError("helpers must be single bits", number)
                strategy.helpers[target] = parts[0]
            else:
                strategy.define(target, *parts)
            continue
        raise StrategyParseError(f"unknown statement '{keyword}'", number)
    strategy.validate()
    return strategy


def read_strategy(path: Union[str, Path]) -> Strategy:
    path = Path(path)
    return parse_strategy(path.read_text(encoding="utf-8"), name=path.stem)


def strategy_eval(strategy: Strategy) -> JointDistribution:
    """
    Exact distribution of the observed variables.

    Every assignment of the source bits has weight 2^-(number of bits), so all
    probabilities are dyadic rationals.

    Raises:
        StrategyError: If the strategy has no observed variables or is invalid
    """
    if not strategy.definitions:
        raise StrategyError("Strategy defines no observed variables")
    order = strategy.validate()
    weight = Fraction(1, 2 ** len(strategy.sources))
    pmf: Dict[Outcome, Fraction] = {}
    for bits in product((0, 1), repeat=len(strategy.sources)):
        outcome = strategy.evaluate(bits, order)
        pmf[outcome] = pmf.get(outcome, Fraction(0)) + weight
    logger.debug(
        f"Strategy {strategy.name or '<anonymous>'}: "
        f"{len(strategy.sources)} source bits, "
        f"{len(pmf)} observed outcomes"
    )
    return JointDistribution(tuple(strategy.observed), pmf)
