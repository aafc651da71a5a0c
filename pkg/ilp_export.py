#!/usr/bin/env python3
"""
Integer-program formulation of the maximum arc problem, written as CPLEX LP text.

One binary x_<x>_<y> per cell, maximize their sum, and one row per line of
Z_n^2 keeping at most 2 of its n cells. Feasible 0/1 points are exactly the arcs.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Tuple, Union

import numpy as np

from errors import ArcError, IoFailure
from geometry import enumerate_lines
from modular_core import Modulus, Point

logger = logging.getLogger(__name__)

LP_LINE_LIMIT = 255
LINE_CAPACITY = 2


def var_name(x: int, y: int) -> str:
    return f"x_{x}_{y}"


@dataclass(frozen=True)
class IlpModel:
    n: int
    variables: Tuple[str, ...]
    rows: Tuple[Tuple[str, Tuple[str, ...]], ...]
    rhs: int = LINE_CAPACITY
    incidence: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def objective(self) -> Tuple[str, ...]:
        return self.variables


def build_model(n: Union[int, Modulus]) -> IlpModel:
    n = n.n if isinstance(n, Modulus) else n
    Modulus(n)
    table = enumerate_lines(n)
    variables = tuple(var_name(x, y) for x in range(n) for y in range(n))
    rows = tuple((f"l{i}", tuple(var_name(p.x, p.y) for p in line.points))
                 for i, line in enumerate(table.lines))
    logger.debug(f"built model n={n}: {len(variables)} binaries, {len(rows)} rows")
    return IlpModel(n, variables, rows, incidence=table.incidence_matrix())


def _selection_vector(model: IlpModel, selection) -> np.ndarray:
    n = model.n
    if isinstance(selection, np.ndarray):
        vector = selection.astype(np.int64).reshape(-1)
        if vector.size != n * n:
            raise ValueError(f"expected {n * n} entries, got {vector.size}")
        return vector
    vector = np.zeros(n * n, dtype=np.int64)
    for p in selection:
        x, y = (p.x, p.y) if isinstance(p, Point) else p
        vector[(x % n) * n + (y % n)] = 1
    return vector


def is_feasible(model: IlpModel, selection) -> bool:
    """
    Args:
        selection: cells as points / (x, y) pairs, or a 0/1 vector in variable order
    """
    counts = model.incidence.astype(np.int64) @ _selection_vector(model, selection)
    return bool(np.all(counts <= model.rhs))


def _wrap(head: str, terms: Iterable[str], tail: str = "") -> List[str]:
    """Pack ` head: a + b + ... tail` into lines of at most LP_LINE_LIMIT characters"""
    terms = list(terms)
    pieces = [f" {head}: {terms[0]}"] + [f" + {t}" for t in terms[1:]]
    if tail:
        pieces.append(f" {tail}")
    lines: List[str] = []
    current = ""
    for piece in pieces:
        if current and len(current) + len(piece) > LP_LINE_LIMIT:
            lines.append(current)
            current = piece
        else:
            current += piece
    lines.append(current)
    return lines


def render_lp(model: IlpModel) -> str:
    out = [f"\\ maximum arc of Z_{model.n}^2: {len(model.variables)} binaries, {len(model.rows)} line rows",
           "Maximize"]
    out += _wrap("obj", model.objective)
    out.append("Subject To")
    for name, terms in model.rows:
        out += _wrap(name, terms, f"<= {model.rhs}")
    out.append("Binaries")
    out += [f" {v}" for v in model.variables]
    out.append("End")
    return "\n".join(out) + "\n"


def write_lp(model: IlpModel, sink: Union[str, Path, TextIO, None] = None) -> str:
    """Render the model; also write it to a path or an open text stream when given"""
    text = render_lp(model)
    if sink is None:
        return text
    try:
        if isinstance(sink, (str, Path)):
            Path(sink).write_text(text)
        else:
            sink.write(text)
    except OSError as e:
        raise IoFailure(f"cannot write LP file: {e}") from e
    return text


def parse_lp(text: str) -> Dict[str, List[str]]:
    """Row name -> sorted member variables, objective included as `obj`"""
    rows: Dict[str, List[str]] = {}
    section = None
    current: Optional[str] = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        if line in ("Maximize", "Minimize", "Subject To", "Binaries", "End"):
            section = line
            current = None
            continue
        if section not in ("Maximize", "Subject To"):
            continue
        if ":" in line:
            current, line = (s.strip() for s in line.split(":", 1))
            rows[current] = []
        if current is None:
            raise ArcError(f"continuation line outside a row: {raw!r}")
        line = line.split("<=")[0]
        rows[current] += [t.strip() for t in line.split("+") if t.strip()]
    return {name: sorted(terms) for name, terms in rows.items()}
