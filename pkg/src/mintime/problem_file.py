"""YAML problem files and the bundled presets.

Layout (SI units: m, m/s, m/s^2)::

    grid:
      s_f: 200            # or "from_path" for spline curvature
      n: 4000
    curvature:
      piecewise_hermite: {l1: 30, l2: 40, l3: 124.2478, l4: 134.2478, R: 60}
      # or  spline: {waypoints: [[x, y], ...]}
      # or  sampled: {values: [k_0, ..., k_n]}
    bounds:
      v_plus: 36.1
      v_minus: 0.0
      v_start: 0.0        # optional
      v_end: 22.0         # optional
      alpha_plus: 4.0
      alpha_minus: -10.5
      beta: 7.0
    tolerances:           # optional
      eps_feas: null
      kappa_eps: 1.0e-9
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

import yaml

from .lattice_fn import Grid
from .problem import (KAPPA_EPS, BoundSet, PiecewiseHermite, ProblemSpec, SampledCurvature,
                      SplinePath)

FROM_PATH = "from_path"
DEFAULT_N = 4000
CURVATURE_KINDS = {
    "piecewise_hermite": ("l1", "l2", "l3", "l4", "R"),
    "spline": ("waypoints",),
    "sampled": ("values",),
}
REQUIRED_BOUNDS = ("v_plus", "alpha_plus", "alpha_minus", "beta")
OPTIONAL_BOUNDS = ("v_minus", "v_start", "v_end")


class ProblemFileError(ValueError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line, self.field = line, field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass(frozen=True)
class ProblemFile:
    s_f: float | str
    n: int
    curvature_kind: str
    curvature: dict
    bounds: BoundSet
    eps_feas: float | None = None
    kappa_eps: float = KAPPA_EPS
    name: str | None = field(default=None, compare=False)

    def with_overrides(self, n: int | None = None, eps_feas: float | None = None) -> "ProblemFile":
        changes = {}
        if n is not None:
            changes["n"] = n
        if eps_feas is not None:
            changes["eps_feas"] = eps_feas
        return replace(self, **changes)

    def to_spec(self) -> ProblemSpec:
        kind, c = self.curvature_kind, self.curvature
        if kind == "spline":
            model = SplinePath(c["waypoints"])
            s_f = model.length if self.s_f == FROM_PATH else self.s_f
        elif self.s_f == FROM_PATH:
            raise ProblemFileError("s_f: from_path requires spline curvature", field="grid.s_f")
        elif kind == "piecewise_hermite":
            s_f = self.s_f
            model = PiecewiseHermite(c["l1"], c["l2"], c["l3"], c["l4"], c["R"], s_f)
        else:
            s_f = self.s_f
            model = SampledCurvature(c["values"])
        return ProblemSpec(Grid(s_f, self.n), model, self.bounds, kappa_eps=self.kappa_eps)

    def to_dict(self) -> dict:
        b = self.bounds
        bounds = {k: getattr(b, k) for k in REQUIRED_BOUNDS + OPTIONAL_BOUNDS}
        return {
            "grid": {"s_f": self.s_f, "n": self.n},
            "curvature": {self.curvature_kind: dict(self.curvature)},
            "bounds": {k: v for k, v in bounds.items() if v is not None},
            "tolerances": {"eps_feas": self.eps_feas, "kappa_eps": self.kappa_eps},
        }


def dumps(problem: ProblemFile) -> str:
    return yaml.safe_dump(problem.to_dict(), sort_keys=False, default_flow_style=None)


# ----------------------------------------------------------------------------- parsing


def _line(node) -> int:
    return node.start_mark.line + 1


def _mapping(node, where: str) -> dict[str, Any]:
    if not isinstance(node, yaml.MappingNode):
        raise ProblemFileError("expected a mapping", _line(node), where)
    out = {}
    for key, value in node.value:
        out[str(key.value)] = value
    return out


def _require(mapping: dict, key: str, where: str, parent):
    if key not in mapping:
        raise ProblemFileError("missing required key", _line(parent), f"{where}.{key}")
    return mapping[key]


def _float(node, where: str, allow_null: bool = False) -> float | None:
    if isinstance(node, yaml.ScalarNode):
        if allow_null and node.tag.endswith(":null"):
            return None
        try:
            return float(node.value)
        except ValueError:
            pass
    raise ProblemFileError(f"expected a number, got {getattr(node, 'value', node)!r}",
                           _line(node), where)


def _float_list(node, where: str) -> list:
    if not isinstance(node, yaml.SequenceNode):
        raise ProblemFileError("expected a list", _line(node), where)
    out = []
    for i, item in enumerate(node.value):
        if isinstance(item, yaml.SequenceNode):
            out.append([_float(x, f"{where}[{i}]") for x in item.value])
        else:
            out.append(_float(item, f"{where}[{i}]"))
    return out


def loads(text: str, name: str | None = None) -> ProblemFile:
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ProblemFileError(f"malformed YAML: {getattr(exc, 'problem', exc)}",
                               mark.line + 1 if mark else None) from None
    if root is None:
        raise ProblemFileError("empty problem file")
    top = _mapping(root, "<root>")

    grid_node = _require(top, "grid", "<root>", root)
    grid = _mapping(grid_node, "grid")
    sf_node = _require(grid, "s_f", "grid", grid_node)
    if isinstance(sf_node, yaml.ScalarNode) and sf_node.value == FROM_PATH:
        s_f: float | str = FROM_PATH
    else:
        s_f = _float(sf_node, "grid.s_f")
    n = DEFAULT_N
    if "n" in grid:
        n_val = _float(grid["n"], "grid.n")
        if n_val != int(n_val) or n_val < 2:
            raise ProblemFileError("n must be an integer >= 2", _line(grid["n"]), "grid.n")
        n = int(n_val)

    curv_node = _require(top, "curvature", "<root>", root)
    curv = _mapping(curv_node, "curvature")
    if len(curv) != 1 or next(iter(curv)) not in CURVATURE_KINDS:
        raise ProblemFileError(f"expected exactly one of {sorted(CURVATURE_KINDS)}",
                               _line(curv_node), "curvature")
    kind, body_node = next(iter(curv.items()))
    body = _mapping(body_node, f"curvature.{kind}")
    params = {}
    for key in CURVATURE_KINDS[kind]:
        where = f"curvature.{kind}.{key}"
        value = _require(body, key, f"curvature.{kind}", body_node)
        params[key] = _float_list(value, where) if kind != "piecewise_hermite" else _float(value, where)

    bounds_node = _require(top, "bounds", "<root>", root)
    braw = _mapping(bounds_node, "bounds")
    bvals = {}
    for key in REQUIRED_BOUNDS:
        bvals[key] = _float(_require(braw, key, "bounds", bounds_node), f"bounds.{key}")
    for key in OPTIONAL_BOUNDS:
        if key in braw:
            bvals[key] = _float(braw[key], f"bounds.{key}", allow_null=True)
    if bvals.get("v_minus") is None:
        bvals["v_minus"] = 0.0
    unknown = set(braw) - set(REQUIRED_BOUNDS) - set(OPTIONAL_BOUNDS)
    if unknown:
        key = sorted(unknown)[0]
        raise ProblemFileError("unknown key", _line(braw[key]), f"bounds.{key}")

    eps_feas, kappa_eps = None, KAPPA_EPS
    if "tolerances" in top:
        tol = _mapping(top["tolerances"], "tolerances")
        if "eps_feas" in tol:
            eps_feas = _float(tol["eps_feas"], "tolerances.eps_feas", allow_null=True)
        if "kappa_eps" in tol:
            kappa_eps = _float(tol["kappa_eps"], "tolerances.kappa_eps")

    return ProblemFile(s_f, n, kind, params, BoundSet(**bvals), eps_feas, kappa_eps, name=name)


def load(path) -> ProblemFile:
    with open(path) as fh:
        return loads(fh.read(), name=str(path))


# ----------------------------------------------------------------------------- presets

_EXAMPLE1 = ProblemFile(
    s_f=200.0,
    n=DEFAULT_N,
    curvature_kind="piecewise_hermite",
    curvature={"l1": 30.0, "l2": 40.0, "l3": 124.2478, "l4": 134.2478, "R": 60.0},
    bounds=BoundSet(v_plus=36.1, alpha_plus=4.0, alpha_minus=-10.5, beta=7.0,
                    v_minus=0.0, v_start=0.0, v_end=22.0),
    name="example1",
)

PRESETS = {
    "example1": _EXAMPLE1,
    "example2": replace(_EXAMPLE1, bounds=replace(_EXAMPLE1.bounds, v_end=35.0), name="example2"),
    "example3": ProblemFile(
        s_f=FROM_PATH,
        n=DEFAULT_N,
        curvature_kind="spline",
        curvature={"waypoints": [[0.0, 0.0], [2.0, -0.5], [2.60, 0.0], [1.75, 2.0], [3.0, 3.0]]},
        bounds=BoundSet(v_plus=1.3, alpha_plus=0.1, alpha_minus=-0.1, beta=0.05,
                        v_minus=0.0, v_start=0.0, v_end=0.0),
        name="example3",
    ),
}


def preset(name: str) -> ProblemFile:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
