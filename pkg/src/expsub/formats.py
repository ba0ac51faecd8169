"""Plain-text input files and report documents.

Input grammar (one directive per line, ``#`` starts a comment):

    dim: <d>
    vars: <name> <name> ...            optional, defaults u v w x1 ...
    gens: <poly>; <poly>; ...          generators of the ideal
    row: <poly>, <poly>, ...           a presentation row (repeat for a module)
    modulus: <p>                       optional prime for the coding oracle
    param_map: <expr>, <expr>, ...     optional rational map in z

Exactly one of ``gens`` or ``row`` must be present.  Polynomials use the
laurent grammar (``+ - *``, ``^`` with signed integer exponents, brackets).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .groebner import Ideal, ModulePresentation, NoetherianCertificate
from .laurent import ParseError, default_vars, format_poly, parse_poly

KEYS = ("dim", "vars", "gens", "row", "modulus", "param_map")


@dataclass
class InputSpec:
    dim: int
    vars: tuple
    gens: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    modulus: int | None = None
    param_map: list | None = None
    param_text: str | None = None

    def target(self):
        if self.rows:
            return ModulePresentation(self.rows, self.dim)
        return Ideal(self.gens, self.dim)

    def ideal(self) -> Ideal:
        from .groebner import fitting_ideal

        if self.rows:
            return fitting_ideal(self.target())[0]
        return self.target()


def parse_input(text: str) -> InputSpec:
    """Parse an input document; raises ParseError with a line-based position."""
    fields: dict = {}
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.match(r"([a-z_]+)\s*:(.*)$", line)
        if not m or m.group(1) not in KEYS:
            raise ParseError(f"line {lineno}: expected one of {', '.join(KEYS)}", lineno, line=True)
        key, val = m.group(1), m.group(2).strip()
        if key == "row":
            rows.append((lineno, val))
        elif key in fields:
            raise ParseError(f"line {lineno}: duplicate {key!r}", lineno, line=True)
        else:
            fields[key] = (lineno, val)
    if "dim" not in fields:
        raise ParseError("missing 'dim' line", 0, line=True)
    try:
        d = int(fields["dim"][1])
    except ValueError:
        raise ParseError(f"line {fields['dim'][0]}: dim must be an integer", fields["dim"][0], line=True)
    if d < 1:
        raise ParseError("dim must be positive", fields["dim"][0], line=True)
    names = tuple(fields["vars"][1].replace(",", " ").split()) if "vars" in fields else default_vars(d)
    if len(names) != d:
        raise ParseError(f"{len(names)} variable names for dim {d}", fields.get("vars", (0,))[0], line=True)
    if ("gens" in fields) == bool(rows):
        raise ParseError("give exactly one of 'gens' or 'row'", 0, line=True)

    def poly(s, lineno):
        try:
            return parse_poly(s, names, d)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}", lineno, line=True) from exc

    spec = InputSpec(d, names)
    if "gens" in fields:
        ln, val = fields["gens"]
        spec.gens = [poly(s, ln) for s in val.split(";") if s.strip()]
        if not spec.gens:
            raise ParseError(f"line {ln}: no generators", ln, line=True)
    for ln, val in rows:
        spec.rows.append([poly(s, ln) for s in val.split(",")])
    if "modulus" in fields:
        ln, val = fields["modulus"]
        try:
            spec.modulus = int(val)
        except ValueError:
            raise ParseError(f"line {ln}: modulus must be an integer", ln, line=True)
    if "param_map" in fields:
        from .amoeba import parse_param_map

        ln, val = fields["param_map"]
        try:
            spec.param_map = parse_param_map(val)
        except ParseError as exc:
            raise ParseError(f"line {ln}: {exc}", ln, line=True) from exc
        if len(spec.param_map) != d:
            raise ParseError(f"line {ln}: parameter map has {len(spec.param_map)} components", ln, line=True)
        spec.param_text = val
    return spec


def read_input(path) -> InputSpec:
    with open(path) as fh:
        return parse_input(fh.read())


# ---------------------------------------------------------------------------
# reports

def _num(x):
    if isinstance(x, float):
        return round(x, 12)
    if isinstance(x, complex):
        return [round(x.real, 12), round(x.imag, 12)]
    if isinstance(x, (list, tuple)):
        return [_num(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _num(v) for k, v in x.items()}
    if hasattr(x, "terms"):
        return format_poly(x)
    if hasattr(x, "item"):
        return _num(x.item())
    return x


def cert_dict(c: NoetherianCertificate, names=None) -> dict:
    return {"verdict": c.verdict,
            "direction": [round(float(x), 12) for x in c.direction.unit] if c.direction else None,
            "direction_int": list(c.direction.witness) if c.direction and c.direction.witness else None,
            "witness": format_poly(c.witness, names) if c.witness is not None else None,
            "method": c.method, "detail": c.detail}


def ranks_dict(rk) -> dict | None:
    if rk is None:
        return None
    return {"kdim": rk.kdim, "exprk": rk.exprk, "exprk_lower": rk.exprk_lower,
            "exprk_upper": rk.exprk_upper, "exprk_lower_sampled": rk.exprk_lower_sampled,
            "entrk_lower": rk.entrk_lower, "entrk_upper": rk.entrk_upper,
            "expansive": rk.expansive, "planes_searched": {str(k): v for k, v in rk.searched.items()},
            "expansive_planes": {str(k): v for k, v in rk.expansive_planes.items()},
            "notes": list(rk.notes)}


def report_dict(rep, names=None) -> dict:
    ev = rep.expansive
    return {
        "ideal": [format_poly(g, names) for g in rep.ideal.gens],
        "dim": rep.ideal.dim,
        "expansive": {"verdict": ev.verdict, "method": ev.method, "witness": _num(ev.witness),
                      "detail": ev.detail},
        "nn": {"kind": rep.nn.mode, "set": rep.nn.to_dict()},
        "nv": {"kind": rep.nv.mode, "set": rep.nv.to_dict()},
        "n": {"kind": rep.n.mode, "set": rep.n.to_dict()},
        "summary": {"nn": rep.nn.describe(), "nv": rep.nv.describe(), "n": rep.n.describe()},
        "expansive_components": rep.component_estimate,
        "flags": _num(rep.flags),
        "certificates": [cert_dict(c, names) for c in rep.certificates],
        "undecided": [cert_dict(c, names) if isinstance(c, NoetherianCertificate) else str(c)
                      for c in rep.undecided],
        "ranks": ranks_dict(rep.ranks),
        "provenance": rep.config.provenance(),
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
