#!/usr/bin/env python3
"""
Entropy Coordinate Systems

A CoordSystem fixes the order of the joint-entropy coordinates of an entropy
vector. The default order lists every nonempty subset of the variables by
cardinality, then lexicographically on the sorted member positions:

    H(X1), H(X2), H(X3), H(X1X2), H(X1X3), H(X2X3), H(X1X2X3)

Restricted systems (marginal scenarios, quantum coexisting sets) keep the
same order on the subsets they retain.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple, Union

Names = Union[str, Iterable[str]]


class EntropySpaceError(Exception):
    """Base exception for entropy-space computations."""

    pass


class MissingCoordinateError(EntropySpaceError):
    """Exception raised when a subset has no coordinate in a CoordSystem."""

    pass


def as_names(names: Names) -> Tuple[str, ...]:
    """A single variable name or an iterable of names, as a tuple."""
    if isinstance(names, str):
        return (names,)
    return tuple(names)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def members(mask: int) -> List[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def card_lex_key(mask: int) -> Tuple[int, Tuple[int, ...]]:
    """Sort key: cardinality first, then the sorted member positions."""
    return popcount(mask), tuple(members(mask))


@dataclass(frozen=True)
class CoordSystem:
    """Ordered family of nonempty variable subsets indexing entropy coordinates."""

    variables: Tuple[str, ...]
    masks: Tuple[int, ...]
    _position: Dict[int, int] = field(
        default_factory=dict, init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise EntropySpaceError(f"Duplicate variable names in {self.variables}")
        full = (1 << len(self.variables)) - 1
        for mask in self.masks:
            if mask <= 0 or mask & ~full:
                raise EntropySpaceError(
                    f"Subset mask {mask} is not over {self.variables}"
                )
        if len(set(self.masks)) != len(self.masks):
            raise EntropySpaceError("Coordinate subsets must be distinct")
        object.__setattr__(self, "_position", {m: i for i, m in enumerate(self.masks)})

    @classmethod
    def full(cls, variables: Sequence[str]) -> "CoordSystem":
        """All 2^n − 1 nonempty subsets in cardinality-lexicographic order."""
        n = len(variables)
        masks = sorted(range(1, 1 << n), key=card_lex_key)
        return cls(tuple(variables), tuple(masks))

    @classmethod
    def standard(cls, n: int) -> "CoordSystem":
        """Full system over X1..Xn."""
        return cls.full([f"X{i}" for i in range(1, n + 1)])

    @classmethod
    def from_families(
        cls, variables: Sequence[str], families: Iterable[Iterable[str]]
    ) -> "CoordSystem":
        """
        Every nonempty subset of every family, in the default order.

        Args:
            variables: All variable names (fixes bit positions)
            families: Variable sets whose subsets are retained
        """
        position = {v: i for i, v in enumerate(variables)}
        masks = set()
        for family in families:
            family_mask = 0
            for name in family:
                if name not in position:
                    raise MissingCoordinateError(f"Unknown variable '{name}'")
                family_mask |= 1 << position[name]
            sub = family_mask
            while sub:
                masks.add(sub)
                sub = (sub - 1) & family_mask
        return cls(tuple(variables), tuple(sorted(masks, key=card_lex_key)))

    @classmethod
    def from_subset_names(
        cls, subsets: Sequence[Sequence[str]], variables: Sequence[str] = ()
    ) -> "CoordSystem":
        """
        System with an explicit coordinate order, e.g. from a COORDS header.

        Variables default to their order of first appearance.
        """
        names: List[str] = list(variables)
        for subset in subsets:
            for name in subset:
                if name not in names:
                    names.append(name)
        position = {v: i for i, v in enumerate(names)}
        masks = tuple(sum(1 << position[v] for v in subset) for subset in subsets)
        return cls(tuple(names), masks)

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def dim(self) -> int:
        return len(self.masks)

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[int]:
        return iter(self.masks)

    def __contains__(self, names: object) -> bool:
        if isinstance(names, int):
            return names in self._position
        try:
            return self.mask(names) in self._position  # type: ignore[arg-type]
        except MissingCoordinateError:
            return False

    def mask(self, names: Names) -> int:
        """Bitmask of a variable set."""
        mask = 0
        for name in as_names(names):
            try:
                mask |= 1 << self.variables.index(name)
            except ValueError:
                raise MissingCoordinateError(f"Unknown variable '{name}'")
        return mask

    def index(self, subset: Union[int, Names]) -> int:
        """
        Coordinate position of a subset given as mask or names.

        Raises:
            MissingCoordinateError: If the subset has no coordinate
        """
        mask = subset if isinstance(subset, int) else self.mask(subset)
        try:
            return self._position[mask]
        except KeyError:
            raise MissingCoordinateError(
                f"Subset {self.names(mask) if mask else '{}'} is not a coordinate"
            )

    def has_mask(self, mask: int) -> bool:
        return mask in self._position

    def names(self, mask: int) -> Tuple[str, ...]:
        return tuple(self.variables[i] for i in members(mask))

    def subset_names(self) -> List[Tuple[str, ...]]:
        return [self.names(m) for m in self.masks]

    def label(self, mask: int) -> str:
        """Compact label: XYZ for single-letter names, else comma-joined."""
        parts = self.names(mask)
        if all(len(p) == 1 for p in parts):
            return "".join(parts)
        return ",".join(parts)

    def labels(self) -> List[str]:
        return [self.label(m) for m in self.masks]

    def positions_outside(self, keep: Iterable[str]) -> List[int]:
        """Coordinates whose subset is not contained in `keep`."""
        keep_mask = self.mask(tuple(keep))
        return [i for i, m in enumerate(self.masks) if m & ~keep_mask]

    def positions_not_in(self, retained: "CoordSystem") -> List[int]:
        """Coordinates whose subset (by names) is absent from another system."""
        wanted = {frozenset(s) for s in retained.subset_names()}
        return [
            i
            for i, m in enumerate(self.masks)
            if frozenset(self.names(m)) not in wanted
        ]

    def restrict(self, keep: Iterable[str]) -> "CoordSystem":
        """Subsystem over the coordinates whose subsets lie inside `keep`."""
        wanted = set(keep)
        keep_names = [v for v in self.variables if v in wanted]
        keep_mask = self.mask(tuple(keep_names))
        kept = [self.names(m) for m in self.masks if not m & ~keep_mask]
        return CoordSystem.from_subset_names(kept, keep_names)

    def is_full(self) -> bool:
        return self.dim == (1 << self.n) - 1

    def __str__(self) -> str:
        return f"CoordSystem({', '.join(self.labels())})"


@dataclass(frozen=True)
class EntropyVector:
    """Joint entropies in bits aligned to a CoordSystem."""

    coords: CoordSystem
    values: Tuple[float, ...]

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.values)
        if len(values) != self.coords.dim:
            raise EntropySpaceError(
                f"Vector has {len(values)} entries, "
                f"coordinate system has {self.coords.dim}"
            )
        for v in values:
            if not math.isfinite(v):
                raise EntropySpaceError(f"Entropy vector entry {v} is not finite")
            if v < -1e-12:
                raise EntropySpaceError(f"Entropy vector entry {v} is negative")
        object.__setattr__(self, "values", tuple(max(v, 0.0) for v in values))

    def __getitem__(self, subset: Union[int, Names]) -> float:
        if isinstance(subset, int):
            return self.values[self.coords.index(subset)] if subset else 0.0
        names = as_names(subset)
        if not names:
            return 0.0
        return self.values[self.coords.index(names)]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def dot(self, row: Sequence[object]) -> float:
        total = sum(float(a) * v for a, v in zip(row, self.values) if a)  # type: ignore
        return float(total)

    def project(self, retained: CoordSystem) -> "EntropyVector":
        """Marginal vector on the coordinates of another system (matched by names)."""
        return EntropyVector(
            retained, tuple(self[names] for names in retained.subset_names())
        )

    def __str__(self) -> str:
        return "(" + ", ".join(f"{v:.4g}" for v in self.values) + ")"
