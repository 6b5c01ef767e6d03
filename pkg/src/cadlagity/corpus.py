"""Random step-path corpora with a guaranteed minimum breakpoint gap."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadParams, CadlagError, MalformedInput
from .paths import CadlagStep, make_step_path, path_from_json

LAWS = ("normal", "rademacher", "uniform")


@dataclass(frozen=True)
class CorpusSpec:
    count: int = 1000
    min_jumps: int = 0
    max_jumps: int = 10
    min_gap: float = 0.01
    law: str = "normal"
    dim: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise BadParams("count must be positive", "count")
        if not 0 <= self.min_jumps <= self.max_jumps:
            raise BadParams("need 0 <= min_jumps <= max_jumps", "max_jumps")
        if not self.min_gap > 0:
            raise BadParams("min_gap must be positive", "min_gap")
        if not self.min_gap * (self.max_jumps + 1) < 1:
            raise BadParams("min_gap * (max_jumps + 1) must be < 1", "min_gap")
        if self.law not in LAWS:
            raise BadParams(f"law must be one of {LAWS}", "law")
        if self.dim < 1:
            raise BadParams("dim must be positive", "dim")


def _one_path(spec: CorpusSpec, rng: np.random.Generator) -> CadlagStep:
    J = int(rng.integers(spec.min_jumps, spec.max_jumps + 1))
    g = spec.min_gap
    # sorted uniforms on the shrunk interval, then re-inflated by the gap
    x = np.sort(rng.uniform(0.0, 1.0 - (J + 1) * g, J))
    bp = x + g * np.arange(1, J + 1)
    shape = (J + 1, spec.dim)
    if spec.law == "normal":
        vals = rng.normal(size=shape)
    elif spec.law == "uniform":
        vals = rng.uniform(-1.0, 1.0, shape)
    else:
        steps = np.where(rng.random(shape) < 0.5, -1.0, 1.0)
        steps[0] = 0.0
        vals = np.cumsum(steps, axis=0)
    return make_step_path(spec.dim, bp, vals)


def generate_corpus(spec: CorpusSpec = CorpusSpec()) -> list[CadlagStep]:
    """Path ``i`` depends only on ``(spec, i)``: each path has its own spawned stream."""
    children = np.random.SeedSequence(int(spec.seed)).spawn(spec.count)
    return [_one_path(spec, np.random.Generator(np.random.Philox(c))) for c in children]


def write_corpus(paths, out) -> None:
    with open(out, "w") as fh:
        for i, f in enumerate(paths):
            fh.write(json.dumps({"id": i, **f.to_json()}) + "\n")


def read_corpus(src) -> list[tuple[str, CadlagStep]]:
    """Read JSON-lines paths; ids default to the line position."""
    out = []
    text = Path(src).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"invalid JSON: {exc.msg}", "line", lineno) from None
        try:
            f = path_from_json(obj)
        except CadlagError as exc:
            raise MalformedInput(f"line {lineno}: {exc}", "line", lineno) from None
        out.append((str(obj.get("id", len(out))), f))
    return out
