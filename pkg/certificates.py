#!/usr/bin/env python3
"""
Certificate files: a serialized arc plus the claims it makes about itself.

    {"n": 6, "points": [[0, 0], [0, 1], ...], "claims": {"arc": true, "complete": true, "maximum": true}}

Points are written sorted lexicographically so saved files are byte-stable.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ValidationError, field_validator, model_validator

from arc_model import ArcSet, is_arc, is_complete, upper_bounds
from config import FIXTURES_DIR
from errors import ArcError, MalformedCertificate

logger = logging.getLogger(__name__)


class Claims(BaseModel):
    arc: Optional[bool] = None
    complete: Optional[bool] = None
    maximum: Optional[bool] = None


class Certificate(BaseModel):
    n: int
    points: List[List[int]]
    claims: Optional[Claims] = None

    @field_validator("points")
    @classmethod
    def _pairs(cls, points: List[List[int]]) -> List[List[int]]:
        for p in points:
            if len(p) != 2:
                raise ValueError(f"point {p} is not an [x, y] pair")
        return points

    @model_validator(mode="after")
    def _in_range(self) -> "Certificate":
        if self.n < 2:
            raise ValueError(f"modulus {self.n} < 2")
        for x, y in self.points:
            if not (0 <= x < self.n and 0 <= y < self.n):
                raise ValueError(f"point ({x}, {y}) outside Z_{self.n}^2")
        if len({tuple(p) for p in self.points}) != len(self.points):
            raise ValueError("duplicate points")
        return self


class VerifyReport(BaseModel):
    arc: bool
    complete: bool
    maximum: Optional[bool] = None
    ok: bool

    def summary(self) -> str:
        line = f"arc={str(self.arc).lower()} complete={str(self.complete).lower()}"
        if self.maximum is not None:
            line += f" maximum={str(self.maximum).lower()}"
        return line


def to_arcset(cert: Certificate) -> ArcSet:
    try:
        return ArcSet.of(cert.n, cert.points)
    except ArcError as e:
        raise MalformedCertificate(str(e)) from e


def from_arcset(X: ArcSet, arc: Optional[bool] = None, complete: Optional[bool] = None,
                maximum: Optional[bool] = None) -> Certificate:
    claims = None
    if arc is not None or complete is not None or maximum is not None:
        claims = Claims(arc=arc, complete=complete, maximum=maximum)
    return Certificate(n=X.n, points=X.coords(), claims=claims)


def parse_certificate(text: str) -> Certificate:
    try:
        return Certificate.model_validate_json(text)
    except ValidationError as e:
        raise MalformedCertificate(f"invalid certificate: {e.errors()[0]['msg']}") from e


def load_certificate(path: Union[str, Path]) -> Certificate:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise MalformedCertificate(f"cannot read {path}: {e}") from e
    return parse_certificate(text)


def dump_certificate(cert: Certificate) -> str:
    data: Dict = {"n": cert.n, "points": sorted([list(p) for p in cert.points])}
    if cert.claims is not None:
        data["claims"] = cert.claims.model_dump(exclude_none=True)
    return json.dumps(data) + "\n"


def save_certificate(cert: Certificate, path: Union[str, Path]) -> None:
    Path(path).write_text(dump_certificate(cert))
    logger.info(f"wrote certificate n={cert.n} size={len(cert.points)} to {path}")


def verify_certificate(cert: Certificate) -> VerifyReport:
    """
    Check every stated claim. `maximum` holds when the size reaches the best
    known upper bound on tau; without a claim it is not reported.
    """
    X = to_arcset(cert)
    arc = is_arc(X)
    complete = is_complete(X) if arc else False
    claims = cert.claims or Claims()
    # maximum=false only records that optimality was not proven, so it is never checked
    maximum = None
    if claims.maximum:
        maximum = arc and len(X) == upper_bounds(X.n).upper
    ok = all(stated is None or stated == actual for stated, actual in (
        (claims.arc, arc), (claims.complete, complete), (claims.maximum or None, maximum)))
    logger.debug(f"verified n={X.n} size={len(X)}: arc={arc} complete={complete} maximum={maximum}")
    return VerifyReport(arc=arc, complete=complete, maximum=maximum, ok=ok)


def fixture_witnesses(directory: Union[str, Path, None] = None) -> Dict[int, ArcSet]:
    """Largest verified arc per modulus among the bundled certificates"""
    found: Dict[int, ArcSet] = {}
    root = Path(directory or FIXTURES_DIR)
    if not root.is_dir():
        return found
    for path in sorted(root.glob("*.json")):
        try:
            X = to_arcset(load_certificate(path))
        except MalformedCertificate as e:
            logger.warning(f"skipping {path.name}: {e}")
            continue
        if not is_arc(X):
            logger.error(f"{path.name}: bundled point set for n={X.n} is not an arc, not used as a witness")
            continue
        if len(X) > len(found.get(X.n, ())):
            found[X.n] = X
    return found
