"""Finite-jump cadlag step paths on [0, 1] with values in R^d.

A path with breakpoints ``tau_1 < ... < tau_J`` and values ``v_0, ..., v_J``
takes the value ``v_k`` on the piece ``[tau_k, tau_{k+1})`` (with
``tau_0 = 0``, ``tau_{J+1} = 1``); the last piece is closed, so ``f(1) = v_J``.

Pieces are addressed by integer index throughout the package.  Every
supremum over times reduces to a maximum over piece indices, which is why
the sided time type below exists: ``SidedTime(t, LEFT)`` stands for the
limit ``f(t-)``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BadMu,
    BadP,
    BadParams,
    BreakpointOutOfRange,
    DimensionMismatch,
    LeftLimitAtZero,
    LengthMismatch,
    MalformedInput,
    NonFiniteValue,
    NonMonotoneBreakpoints,
)

AT = "at"
LEFT = "left-limit"

# breakpoints closer than this are treated as coincident
BREAKPOINT_EPS = 1e-15


@dataclass(frozen=True)
class SidedTime:
    """A time in [0, 1], either evaluated ``at`` t or as the left limit at t."""

    t: float
    side: str = AT

    def __post_init__(self):
        t = float(self.t)
        object.__setattr__(self, "t", t)
        if self.side not in (AT, LEFT):
            raise ValueError(f"side must be {AT!r} or {LEFT!r}, got {self.side!r}")
        if not (0.0 <= t <= 1.0):
            raise BreakpointOutOfRange(f"time {t} outside [0, 1]")
        if self.side == LEFT and t <= 0.0:
            raise LeftLimitAtZero("left limit requested at t = 0")

    @property
    def key(self) -> tuple[float, int]:
        """Sort key: at equal times the left limit comes first."""
        return (self.t, 0 if self.side == LEFT else 1)


def as_sided(x) -> SidedTime:
    if isinstance(x, SidedTime):
        return x
    return SidedTime(float(x), AT)


@dataclass(frozen=True)
class FunctionalParams:
    """Exponents shared by all functionals: 0 < mu < 1 and p > 1."""

    mu: float
    p: float

    def __post_init__(self):
        object.__setattr__(self, "mu", check_mu(self.mu))
        object.__setattr__(self, "p", check_p(self.p))


def check_mu(mu) -> float:
    mu = float(mu)
    if not (0.0 < mu < 1.0):
        raise BadMu(f"mu must lie in (0, 1), got {mu}")
    return mu


def check_p(p) -> float:
    p = float(p)
    if not (p > 1.0) or not math.isfinite(p):
        raise BadP(f"p must be a finite real > 1, got {p}")
    return p


def as_params(params) -> FunctionalParams:
    if isinstance(params, FunctionalParams):
        return params
    try:
        mu, p = params
    except (TypeError, ValueError) as exc:
        raise BadParams(f"cannot interpret {params!r} as (mu, p)") from exc
    return FunctionalParams(mu, p)


class CadlagStep:
    """Canonical step path.  Build instances with :func:`make_step_path`.

    Arrays are stored read-only; instances are safe to share between workers.
    """

    __slots__ = ("_breakpoints", "_values")

    def __init__(self, breakpoints: np.ndarray, values: np.ndarray):
        # trusted constructor: inputs must already be canonical
        bp = np.array(breakpoints, dtype=float)
        vals = np.array(values, dtype=float)
        bp.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "_breakpoints", bp)
        object.__setattr__(self, "_values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("CadlagStep is immutable")

    @property
    def breakpoints(self) -> np.ndarray:
        return self._breakpoints

    @property
    def values(self) -> np.ndarray:
        """Piece values, shape ``(J + 1, dim)``."""
        return self._values

    @property
    def dim(self) -> int:
        return self._values.shape[1]

    @property
    def n_jumps(self) -> int:
        return self._breakpoints.shape[0]

    @property
    def n_pieces(self) -> int:
        return self._values.shape[0]

    @property
    def knots(self) -> np.ndarray:
        """``[0, tau_1, ..., tau_J, 1]``; piece k is ``[knots[k], knots[k+1])``."""
        return np.concatenate(([0.0], self._breakpoints, [1.0]))

    @property
    def piece_lengths(self) -> np.ndarray:
        return np.diff(self.knots)

    def piece_index(self, x) -> int:
        x = as_sided(x)
        side = "right" if x.side == AT else "left"
        return int(np.searchsorted(self._breakpoints, x.t, side=side))

    def __call__(self, x) -> np.ndarray:
        return self._values[self.piece_index(x)]

    def scaled(self, c: float) -> "CadlagStep":
        """Values multiplied by ``c > 0`` (canonical form is preserved)."""
        if not c > 0:
            raise ValueError("scale factor must be positive")
        return CadlagStep(self._breakpoints, self._values * c)

    def __eq__(self, other):
        if not isinstance(other, CadlagStep):
            return NotImplemented
        return (
            self._values.shape == other._values.shape
            and np.array_equal(self._breakpoints, other._breakpoints)
            and np.array_equal(self._values, other._values)
        )

    def __hash__(self):
        return hash((self._breakpoints.tobytes(), self._values.tobytes()))

    def __repr__(self):
        return f"CadlagStep(dim={self.dim}, n_jumps={self.n_jumps})"

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "breakpoints": self._breakpoints.tolist(),
            "values": self._values.tolist(),
        }


def _as_value_array(dim: int, values) -> np.ndarray:
    rows = []
    for i, v in enumerate(values):
        arr = np.atleast_1d(np.asarray(v, dtype=float))
        if arr.ndim != 1 or arr.shape[0] != dim:
            raise DimensionMismatch(
                f"value has {arr.size} coordinates, path dimension is {dim}",
                "values", i,
            )
        if not np.all(np.isfinite(arr)):
            raise NonFiniteValue("non-finite coordinate", "values", i)
        rows.append(arr)
    if not rows:
        return np.empty((0, dim))
    return np.vstack(rows)


def make_step_path(dim: int, breakpoints: Sequence[float], values) -> CadlagStep:
    """Validate and canonicalize a step path.

    Adjacent pieces with equal values are merged and their shared breakpoint
    dropped, so two descriptions of the same function give equal paths.
    """
    if int(dim) != dim or dim < 1:
        raise DimensionMismatch(f"dimension must be a positive integer, got {dim}", "dim")
    dim = int(dim)
    bp = np.asarray(list(breakpoints), dtype=float).reshape(-1)
    values = list(values)
    if len(values) != bp.size + 1:
        raise LengthMismatch(
            f"{len(values)} values for {bp.size} breakpoints (need {bp.size + 1})", "values"
        )
    for i, tau in enumerate(bp):
        if not math.isfinite(tau) or not (0.0 < tau < 1.0):
            raise BreakpointOutOfRange(f"breakpoint {tau} not in open (0, 1)", "breakpoints", i)
    gaps = np.diff(bp)
    bad = np.flatnonzero(gaps <= BREAKPOINT_EPS)
    if bad.size:
        i = int(bad[0]) + 1
        raise NonMonotoneBreakpoints(
            f"breakpoint {bp[i]} does not exceed its predecessor {bp[i - 1]}", "breakpoints", i
        )
    vals = _as_value_array(dim, values)
    keep = np.ones(vals.shape[0], dtype=bool)
    keep[1:] = np.any(vals[1:] != vals[:-1], axis=1)
    return CadlagStep(bp[keep[1:]], vals[keep])


def constant_path(value, dim: int | None = None) -> CadlagStep:
    v = np.atleast_1d(np.asarray(value, dtype=float))
    return make_step_path(dim or v.size, [], [v])


def eval_path(f: CadlagStep, x) -> np.ndarray:
    """Value at a sided time: ``f(t)`` for ``at``, ``f(t-)`` for ``left-limit``."""
    return f(x)


def dist(x, y) -> float:
    """Euclidean distance between two points of equal dimension."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape != y.shape:
        raise DimensionMismatch(f"points of dimension {x.size} and {y.size}")
    return float(np.sqrt(np.sum((x - y) ** 2)))


def distance_matrix(values: np.ndarray) -> np.ndarray:
    """All pairwise Euclidean distances between rows of ``values``."""
    v = np.asarray(values, dtype=float)
    if v.shape[1] == 1:
        col = v[:, 0]
        return np.abs(col[:, None] - col[None, :])
    diff = v[:, None, :] - v[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def path_from_json(obj) -> CadlagStep:
    """Build a path from the JSON path format (a dict or a JSON string)."""
    if isinstance(obj, (str, bytes)):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    if not isinstance(obj, dict):
        raise MalformedInput("path must be a JSON object")
    for key in ("dim", "breakpoints", "values"):
        if key not in obj:
            raise MalformedInput("missing field", key)
    dim = obj["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise MalformedInput("dim must be an integer", "dim")
    if not isinstance(obj["breakpoints"], list):
        raise MalformedInput("breakpoints must be a list", "breakpoints")
    if not isinstance(obj["values"], list):
        raise MalformedInput("values must be a list", "values")
    for i, b in enumerate(obj["breakpoints"]):
        if not isinstance(b, (int, float)) or isinstance(b, bool):
            raise MalformedInput("breakpoint must be a number", "breakpoints", i)
    for i, v in enumerate(obj["values"]):
        items = v if isinstance(v, list) else [v]
        if not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in items):
            raise MalformedInput("value must be a number or list of numbers", "values", i)
    return make_step_path(dim, obj["breakpoints"], obj["values"])
