"""Curve-spec documents: JSON describing a plane model and optionally a linear series.

Example::

    {"p": 3, "k": 2, "kind": "affine",
     "poly": [[0, 3, "1"], [0, 1, "1"], [4, 0, "-1"]],
     "genus": 3, "infinity_branches": 1,
     "series": {"kind": "lines"}}
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from .curve import AFFINE, PROJECTIVE, PlaneCurveModel
from .errors import UsageError
from .gf import FieldCtx, is_irreducible, is_prime, make_field, make_field_with_modulus, parse_element
from .weierstrass import LinearSeriesSpec

Monomial = list[Union[int, str]]

REFERENCE_SPECS = ("hermitian2", "hermitian3", "hermitian4", "klein", "suzuki8")


class SeriesDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["lines", "conics", "custom"]
    basis: Optional[list[list[Optional[list[Monomial]]]]] = None
    degree: Optional[int] = None

    @model_validator(mode="after")
    def _custom_fields(self):
        if self.kind == "custom":
            if not self.basis:
                raise ValueError("basis: required for custom series")
            if self.degree is None:
                raise ValueError("degree: required for custom series")
        elif self.basis is not None or self.degree is not None:
            raise ValueError(f"basis/degree: not allowed for {self.kind} series")
        return self


class CurveDoc(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = ""
    p: int
    k: int = 1
    modulus: Optional[list[int]] = None
    kind: Literal["projective", "affine"]
    poly: list[Monomial]
    genus: Optional[int] = None
    infinity_branches: Optional[int] = None
    series: Optional[SeriesDoc] = None

    @field_validator("p")
    @classmethod
    def _prime(cls, v):
        if not is_prime(v):
            raise ValueError(f"{v} is not prime")
        return v

    @field_validator("k")
    @classmethod
    def _degree(cls, v):
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @model_validator(mode="after")
    def _kind_rules(self):
        if self.kind == "projective" and self.infinity_branches is not None:
            raise ValueError("infinity_branches: not allowed for projective models")
        if self.kind == "affine":
            if self.genus is None:
                raise ValueError("genus: required for affine models")
            if self.infinity_branches is None:
                raise ValueError("infinity_branches: required for affine models")
        return self


def _field(doc: CurveDoc) -> FieldCtx:
    if doc.modulus is None:
        return make_field(doc.p, doc.k)
    mod = tuple(c % doc.p for c in doc.modulus)
    if len(mod) != doc.k + 1 or mod[-1] != 1:
        raise UsageError(f"modulus: must be monic of degree {doc.k}")
    if not is_irreducible(mod, doc.p):
        raise UsageError("modulus: polynomial is reducible")
    return make_field_with_modulus(doc.p, doc.k, mod)


def _poly(ctx: FieldCtx, monos: list[Monomial], nvars: int, where: str) -> dict:
    out: dict = {}
    for i, m in enumerate(monos):
        if len(m) != nvars + 1:
            raise UsageError(f"{where}[{i}]: expected {nvars} exponents and a coefficient")
        exps, c = m[:nvars], m[nvars]
        if any(not isinstance(e, int) or isinstance(e, bool) or e < 0 for e in exps):
            raise UsageError(f"{where}[{i}]: exponents must be non-negative integers")
        code = ctx.code_of(c) if isinstance(c, int) else parse_element(ctx, str(c))
        key = tuple(exps)
        out[key] = ctx.add(out.get(key, 0), code)
    return out


def parse_curve_spec(document: str | dict, *, check_smooth: bool = True
                     ) -> tuple[PlaneCurveModel, LinearSeriesSpec | None]:
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise UsageError(f"curve spec is not valid JSON: {exc.msg}") from exc
    try:
        doc = CurveDoc.model_validate(document)
    except ValidationError as exc:
        err = exc.errors()[0]
        loc = ".".join(str(x) for x in err["loc"])
        msg = err["msg"].removeprefix("Value error, ")
        raise UsageError(f"{loc}: {msg}" if loc else msg) from exc
    ctx = _field(doc)
    nvars = 3 if doc.kind == "projective" else 2
    poly = _poly(ctx, doc.poly, nvars, "poly")
    kind = PROJECTIVE if doc.kind == "projective" else AFFINE
    model = PlaneCurveModel(ctx, kind, poly, genus=doc.genus,
                            infinity_branches=doc.infinity_branches, name=doc.name,
                            check_smooth=check_smooth)
    series = None
    if doc.series is not None:
        s = doc.series
        if s.kind == "lines":
            series = LinearSeriesSpec.lines(model)
        elif s.kind == "conics":
            series = LinearSeriesSpec.conics(model)
        else:
            basis = []
            for i, pair in enumerate(s.basis):
                if not 1 <= len(pair) <= 2 or pair[0] is None:
                    raise UsageError(f"series.basis[{i}]: expected [numerator, denominator]")
                num = _poly(ctx, pair[0], 2, f"series.basis[{i}].numerator")
                den = _poly(ctx, pair[1], 2, f"series.basis[{i}].denominator") if len(pair) > 1 and pair[1] else None
                basis.append((num, den))
            series = LinearSeriesSpec.custom(model, basis, s.degree)
    return model, series


def load_curve_spec(path: str | Path, **kw):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_curve_spec(text, **kw)


def reference_spec(name: str) -> str:
    """Text of a shipped reference spec (hermitian2, hermitian3, hermitian4, klein, suzuki8)."""
    if name not in REFERENCE_SPECS:
        raise UsageError(f"unknown reference spec {name!r}")
    return resources.files("ffcurves.data").joinpath(f"{name}.json").read_text(encoding="utf-8")


def reference_curve(name: str, **kw):
    return parse_curve_spec(reference_spec(name), **kw)
