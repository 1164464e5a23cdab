"""Network model: channel exponents, decoding thresholds, GDoF tuples and
power allocations, all held as exact rationals.

Indices are 0-based in code. Documents and human-readable output use the
1-based convention (user 1, state 1, order 1).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Any, Iterable, Iterator, Sequence


class SpecError(ValueError):
    """Invalid input document or value; ``path`` names the offending field."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class InstanceTooLarge(ValueError):
    pass


# ---------------------------------------------------------------------------
# rational <-> text
# ---------------------------------------------------------------------------

def to_rational(value: Any, path: str = "") -> Fraction:
    """Convert an int, decimal string, ``"p/q"`` string, Decimal or Fraction
    to an exact Fraction. Binary floats are rejected."""
    if isinstance(value, bool):
        raise SpecError("expected a number, got a boolean", path)
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise SpecError(f"non-finite number {value}", path)
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                return Fraction(text)
            dec = Decimal(text)
        except (ValueError, ZeroDivisionError, InvalidOperation):
            raise SpecError(f"cannot parse number {value!r}", path) from None
        if not dec.is_finite():
            raise SpecError(f"non-finite number {value!r}", path)
        return Fraction(dec)
    if isinstance(value, float):
        raise SpecError("binary floats are not accepted; quote the value as a decimal string", path)
    raise SpecError(f"expected a number, got {type(value).__name__}", path)


def format_rational(x: Fraction) -> str:
    """Exact decimal text when the expansion terminates, ``p/q`` otherwise."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{x.numerator}/{x.denominator}"
    digits = max(twos, fives)
    scaled = abs(x.numerator) * (10 ** digits // x.denominator)
    whole, frac = divmod(scaled, 10 ** digits)
    sign = "-" if x < 0 else ""
    return f"{sign}{whole}.{str(frac).rjust(digits, '0').rstrip('0')}"


def load_json(text: str) -> Any:
    # JSON decimals are read exactly rather than through binary floats
    return json.loads(text, parse_float=Decimal)


# ---------------------------------------------------------------------------
# core types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NetworkSpec:
    """K-user, M-state interference network.

    ``alpha[m][k][i]`` is the strength exponent of the link from transmitter
    ``i`` to receiver ``k`` in state ``m``; ``pi[k][m]`` is the number of
    message orders receiver ``k`` decodes in state ``m`` (1..M).
    """

    users: int
    states: int
    alpha: tuple[tuple[tuple[Fraction, ...], ...], ...]
    pi: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        validate(self)

    @classmethod
    def build(cls, alpha: Sequence, pi: Sequence) -> "NetworkSpec":
        """Convenience constructor from nested lists of numbers/strings."""
        M = len(alpha)
        K = len(alpha[0]) if M else 0
        a = tuple(
            tuple(tuple(to_rational(v, f"alpha[{m}][{k}][{i}]") for i, v in enumerate(row))
                  for k, row in enumerate(state))
            for m, state in enumerate(alpha)
        )
        p = tuple(tuple(int(v) for v in row) for row in pi)
        return cls(K, M, a, p)

    def a(self, k: int, i: int, m: int) -> Fraction:
        return self.alpha[m][k][i]

    def max_order(self, k: int) -> int:
        """Highest message order receiver ``k`` decodes in any state."""
        return max(self.pi[k])

    def variables(self) -> list[tuple[int, int]]:
        """Deliverable (user, order) pairs, order-major: all order-1
        variables first, then order-2, ... ."""
        return [(k, m) for m in range(self.states) for k in range(self.users)
                if m < self.max_order(k)]

    def alpha_max(self) -> Fraction:
        return max(v for state in self.alpha for row in state for v in row)

    def with_pi(self, pi: Sequence[Sequence[int]]) -> "NetworkSpec":
        return NetworkSpec(self.users, self.states, self.alpha,
                           tuple(tuple(int(v) for v in row) for row in pi))


def validate(spec: NetworkSpec) -> None:
    K, M = spec.users, spec.states
    if not isinstance(K, int) or isinstance(K, bool) or K < 1:
        raise SpecError("must be an integer >= 1", "users")
    if not isinstance(M, int) or isinstance(M, bool) or M < 1:
        raise SpecError("must be an integer >= 1", "states")
    if len(spec.alpha) != M:
        raise SpecError(f"expected {M} states, got {len(spec.alpha)}", "alpha")
    for m, state in enumerate(spec.alpha):
        if len(state) != K:
            raise SpecError(f"expected {K} receiver rows, got {len(state)}", f"alpha[{m}]")
        for k, row in enumerate(state):
            if len(row) != K:
                raise SpecError(f"expected {K} transmitter entries, got {len(row)}",
                                f"alpha[{m}][{k}]")
            for i, v in enumerate(row):
                if not isinstance(v, Fraction):
                    raise SpecError("not an exact rational", f"alpha[{m}][{k}][{i}]")
                if v < 0:
                    raise SpecError(f"negative exponent {format_rational(v)}",
                                    f"alpha[{m}][{k}][{i}]")
    if len(spec.pi) != K:
        raise SpecError(f"expected {K} receiver rows, got {len(spec.pi)}", "pi")
    for k, row in enumerate(spec.pi):
        if len(row) != M:
            raise SpecError(f"expected {M} entries, got {len(row)}", f"pi[{k}]")
        for m, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, int):
                raise SpecError("must be an integer", f"pi[{k}][{m}]")
            if not 1 <= v <= M:
                raise SpecError(f"value {v} outside 1..{M}", f"pi[{k}][{m}]")


@dataclass(frozen=True)
class GdofTuple:
    """GDoF values ``d[k][m]`` for user ``k`` and message order ``m``."""

    d: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def zeros(cls, spec: NetworkSpec) -> "GdofTuple":
        return cls(tuple((Fraction(0),) * spec.states for _ in range(spec.users)))

    @classmethod
    def from_matrix(cls, spec: NetworkSpec, rows: Sequence[Sequence[Any]]) -> "GdofTuple":
        if len(rows) != spec.users:
            raise SpecError(f"expected {spec.users} users, got {len(rows)}", "d")
        d = []
        for k, row in enumerate(rows):
            if len(row) != spec.states:
                raise SpecError(f"expected {spec.states} orders, got {len(row)}", f"d[{k}]")
            d.append(tuple(to_rational(v, f"d[{k}][{m}]") for m, v in enumerate(row)))
        t = cls(tuple(d))
        check_tuple(spec, t)
        return t

    @classmethod
    def from_flat(cls, spec: NetworkSpec, values: Sequence[Any]) -> "GdofTuple":
        """Build from values listed in ``spec.variables()`` order; undeliverable
        orders are zero."""
        var = spec.variables()
        if len(values) != len(var):
            raise SpecError(f"expected {len(var)} values, got {len(values)}", "vars")
        d = [[Fraction(0)] * spec.states for _ in range(spec.users)]
        for n, ((k, m), v) in enumerate(zip(var, values)):
            d[k][m] = to_rational(v, f"vars[{n}]")
        t = cls(tuple(tuple(row) for row in d))
        check_tuple(spec, t)
        return t

    def flat(self, spec: NetworkSpec) -> list[Fraction]:
        return [self.d[k][m] for k, m in spec.variables()]

    def partial(self, k: int, t: int) -> Fraction:
        """Sum of the first ``t`` orders of user ``k``."""
        return sum(self.d[k][:t], Fraction(0))

    def dominates(self, other: "GdofTuple") -> bool:
        return all(a >= b for ra, rb in zip(self.d, other.d) for a, b in zip(ra, rb))


def check_tuple(spec: NetworkSpec, t: GdofTuple) -> None:
    if len(t.d) != spec.users or any(len(row) != spec.states for row in t.d):
        raise SpecError(f"tuple must be {spec.users} x {spec.states}", "d")
    for k, row in enumerate(t.d):
        top = spec.max_order(k)
        for m, v in enumerate(row):
            if v < 0:
                raise SpecError("GDoF values must be nonnegative", f"d[{k}][{m}]")
            if m >= top and v != 0:
                raise SpecError(f"order {m + 1} of user {k + 1} is never decoded; its GDoF must be 0",
                                f"d[{k}][{m}]")


@dataclass(frozen=True)
class PowerAllocation:
    """Transmit power exponents ``r[k][m]`` for orders ``m = 0..M-1`` plus the
    auxiliary floor ``r[k][M]``."""

    r: tuple[tuple[Fraction, ...], ...]

    @property
    def base(self) -> tuple[Fraction, ...]:
        return tuple(row[0] for row in self.r)

    def is_ordered(self) -> bool:
        return all(row[0] <= 0 and all(a >= b for a, b in zip(row, row[1:])) for row in self.r)

    @classmethod
    def layered(cls, base: Sequence[Fraction], t: GdofTuple) -> "PowerAllocation":
        """Stack each user's layers below its base exponent, spaced by the
        per-order GDoF: ``r[k][m+1] = r[k][m] - d[k][m]``."""
        rows = []
        for rk, dk in zip(base, t.d):
            row = [Fraction(rk)]
            for v in dk:
                row.append(row[-1] - v)
            rows.append(tuple(row))
        return cls(tuple(rows))


MixedState = tuple[int, ...]


def mixed_states(spec: NetworkSpec) -> Iterator[MixedState]:
    return product(range(spec.states), repeat=spec.users)


def mixed_state_alpha(spec: NetworkSpec, ms: Sequence[int]) -> list[list[Fraction]]:
    """K x K exponent matrix whose row ``k`` is receiver ``k``'s row in its own
    state ``ms[k]``."""
    if len(ms) != spec.users or any(not 0 <= m < spec.states for m in ms):
        raise SpecError(f"mixed state {tuple(ms)} invalid for K={spec.users}, M={spec.states}")
    return [list(spec.alpha[m][k]) for k, m in enumerate(ms)]


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

def _require(doc: dict, key: str) -> Any:
    if key not in doc:
        raise SpecError("missing field", key)
    return doc[key]


def parse_spec(document: str | dict) -> NetworkSpec:
    doc = load_json(document) if isinstance(document, str) else document
    if not isinstance(doc, dict):
        raise SpecError("spec document must be an object")
    K, M = _require(doc, "users"), _require(doc, "states")
    for name, v in (("users", K), ("states", M)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise SpecError("must be an integer >= 1", name)
    alpha, pi = _require(doc, "alpha"), _require(doc, "pi")
    if not isinstance(alpha, list) or len(alpha) != M:
        raise SpecError(f"expected a list of {M} states", "alpha")
    a = []
    for m, state in enumerate(alpha):
        if not isinstance(state, list) or len(state) != K:
            raise SpecError(f"expected {K} receiver rows", f"alpha[{m}]")
        rows = []
        for k, row in enumerate(state):
            if not isinstance(row, list) or len(row) != K:
                raise SpecError(f"expected {K} transmitter entries", f"alpha[{m}][{k}]")
            rows.append(tuple(to_rational(v, f"alpha[{m}][{k}][{i}]") for i, v in enumerate(row)))
        a.append(tuple(rows))
    if not isinstance(pi, list) or len(pi) != K:
        raise SpecError(f"expected {K} receiver rows", "pi")
    p = []
    for k, row in enumerate(pi):
        if not isinstance(row, list) or len(row) != M:
            raise SpecError(f"expected {M} entries", f"pi[{k}]")
        vals = []
        for m, v in enumerate(row):
            if isinstance(v, str) and v.strip().isdigit():
                v = int(v)
            if isinstance(v, bool) or not isinstance(v, int):
                raise SpecError("must be an integer", f"pi[{k}][{m}]")
            vals.append(v)
        p.append(tuple(vals))
    return NetworkSpec(K, M, tuple(a), tuple(p))


def spec_to_doc(spec: NetworkSpec) -> dict:
    return {
        "users": spec.users,
        "states": spec.states,
        "alpha": [[[format_rational(v) for v in row] for row in state] for state in spec.alpha],
        "pi": [list(row) for row in spec.pi],
    }


def dump_spec(spec: NetworkSpec) -> str:
    return json.dumps(spec_to_doc(spec), indent=2, sort_keys=True)


def parse_tuple(spec: NetworkSpec, doc: dict) -> GdofTuple:
    """Accepts ``{"d": K x M matrix}`` or ``{"vars": [...]}`` in
    ``spec.variables()`` order."""
    if not isinstance(doc, dict):
        raise SpecError("tuple document must be an object")
    if "d" in doc:
        return GdofTuple.from_matrix(spec, doc["d"])
    if "vars" in doc:
        return GdofTuple.from_flat(spec, doc["vars"])
    raise SpecError("expected field 'd' or 'vars'")


def tuple_to_doc(spec: NetworkSpec, t: GdofTuple) -> dict:
    return {
        "d": [[format_rational(v) for v in row] for row in t.d],
        "vars": [format_rational(v) for v in t.flat(spec)],
    }


def parse_allocation(spec: NetworkSpec, doc: dict) -> PowerAllocation:
    """Accepts ``{"r": K x (M+1)}``; a missing floor column is filled with
    ``r[k][M-1]`` (zero headroom for the last layer)."""
    if not isinstance(doc, dict) or "r" not in doc:
        raise SpecError("expected field 'r'", "r")
    rows = doc["r"]
    if not isinstance(rows, list) or len(rows) != spec.users:
        raise SpecError(f"expected {spec.users} rows", "r")
    out = []
    for k, row in enumerate(rows):
        if not isinstance(row, list) or len(row) not in (spec.states, spec.states + 1):
            raise SpecError(f"expected {spec.states} or {spec.states + 1} entries", f"r[{k}]")
        vals = [to_rational(v, f"r[{k}][{m}]") for m, v in enumerate(row)]
        if len(vals) == spec.states:
            vals.append(vals[-1])
        out.append(tuple(vals))
    return PowerAllocation(tuple(out))


def allocation_to_doc(alloc: PowerAllocation) -> dict:
    return {"r": [[format_rational(v) for v in row] for row in alloc.r]}


# ---------------------------------------------------------------------------
# the worked 3-user, 2-state network
# ---------------------------------------------------------------------------

EXAMPLE_DOC = {
    "users": 3,
    "states": 2,
    "alpha": [
        [["2", "0.2", "1"], ["0.6", "1.5", "0.6"], ["0.1", "0.5", "1.5"]],
        [["2", "0.2", "1"], ["0.5", "1", "0.5"], ["0.6", "0.3", "2"]],
    ],
    "pi": [[1, 1], [2, 1], [1, 2]],
}


def example_spec() -> NetworkSpec:
    return parse_spec(EXAMPLE_DOC)


def common_denominator(spec: NetworkSpec, values: Iterable[Fraction] = ()) -> int:
    """LCM of the denominators of all exponents and ``values``. Scaling every
    exponent and GDoF by it leaves the region and potential inequalities
    invariant and makes them integral."""
    L = 1
    for state in spec.alpha:
        for row in state:
            for v in row:
                L = lcm(L, v.denominator)
    for v in values:
        L = lcm(L, Fraction(v).denominator)
    return L
