"""Benchmark dynamics catalog, control-set discretization, and analytic helpers.

Five built-in minimum-time problems (hjb1..hjb5) are provided.  Every built-in
has dynamics of the form ``f(x, y, a) = speed(x, y, a) * a`` with positive
speed, where ``speed(x, y, a) = gain(x, y) * m_coeff(p(x, y), q(x, y), a)``.
That decomposition is exposed through ``ProblemSpec.coeffs`` so solvers can
precompute speed tables that match the scalar evaluation bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, NamedTuple

__all__ = [
    "Control",
    "ProblemSpec",
    "BUILTIN_IDS",
    "unit_controls",
    "m_coeff",
    "sinusoid_C",
    "layer_params",
    "eval_dynamics",
    "builtin",
    "make_problem",
    "load_problem_file",
]

BUILTIN_IDS = ("hjb1", "hjb2", "hjb3", "hjb4", "hjb5")


class Control(NamedTuple):
    """One discretized control: index k and unit direction a = (cos, sin) of 2*pi*k/N_c."""

    k: int
    a: tuple[float, float]


def unit_controls(n_controls: int) -> list[Control]:
    """N_c equispaced unit vectors starting at angle 0.

    N_c must be a positive multiple of 4 so that the four axis directions are
    present exactly and each quadrant holds the same number of controls.  The
    first quadrant is computed from cos/sin and the rest by exact 90-degree
    rotations, so axis components are exact zeros.
    """
    if not isinstance(n_controls, int) or isinstance(n_controls, bool):
        raise ValueError(f"control count must be an integer, got {n_controls!r}")
    if n_controls < 4 or n_controls % 4 != 0:
        raise ValueError(f"control count must be a multiple of 4 and >= 4, got {n_controls}")
    quarter = n_controls // 4
    base = []
    for r in range(quarter):
        theta = 2.0 * math.pi * r / n_controls
        ax, ay = math.cos(theta), math.sin(theta)
        base.append((0.0 if ax == 0.0 else ax, 0.0 if ay == 0.0 else ay))
    dirs = list(base)
    dirs += [(-ay, ax) for ax, ay in base]
    dirs += [(-ax, -ay) for ax, ay in base]
    dirs += [(ay, -ax) for ax, ay in base]
    return [Control(k, d) for k, d in enumerate(dirs)]


def m_coeff(lam: float, mu: float, a: tuple[float, float]) -> float:
    """Anisotropy factor 1 / sqrt(1 + (lam*a1 + mu*a2)^2); in (0, 1]."""
    t = lam * a[0] + mu * a[1]
    return 1.0 / math.sqrt(1.0 + t * t)


def sinusoid_C(c1: float, c2: float, c3: float, c4: float, x: float) -> tuple[float, float]:
    """Layer interface profile C(x) = c1*sin(c2*pi*x/c3 + c4) and its derivative."""
    if c3 == 0:
        raise ValueError("c3 must be nonzero")
    w = c2 * math.pi / c3
    arg = w * x + c4
    return (c1 * math.sin(arg), c1 * w * math.cos(arg))


def layer_params(
    x: float, y: float, c1: float, c2: float, c3: float, c4: float
) -> tuple[float, float, float, float]:
    """Two-layer medium parameters (F1, F2, p, q) at (x, y).

    The layer is selected by y <= C(x) (interface included in the lower
    layer): (F1, F2) = (0.5, 1) below, (2, 3) above.  The anisotropy axes are
    p = M*C'(x), q = -M with M = sqrt((F2^2/F1^2 - 1) / (1 + C'(x)^2)).
    """
    c, cp = sinusoid_C(c1, c2, c3, c4, x)
    if y <= c:
        f1, f2 = 0.5, 1.0
    else:
        f1, f2 = 2.0, 3.0
    m = math.sqrt((f2 * f2 / (f1 * f1) - 1.0) / (1.0 + cp * cp))
    return (f1, f2, m * cp, -m)


# A coeffs function maps (x, y) -> (gain, p, q) in speed = gain * m_coeff(p, q, a).
SpeedCoeffs = Callable[[float, float], tuple[float, float, float]]


@dataclass(frozen=True)
class ProblemSpec:
    """Immutable minimum-time problem: domain, control set, and dynamics.

    Exactly one of ``coeffs`` (control-aligned speed model) and ``dynamics``
    (general velocity field f(x, y, a) -> (fx, fy)) must be provided.  All
    built-ins are control-aligned.
    """

    pid: str
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    controls: tuple[Control, ...]
    coeffs: SpeedCoeffs | None = None
    dynamics: Callable[[float, float, tuple[float, float]], tuple[float, float]] | None = None
    target_points: tuple[tuple[float, float], ...] = ((0.0, 0.0),)
    params: tuple[tuple[str, float], ...] = ()
    prune_on_velocity: bool = False

    def __post_init__(self) -> None:
        if (self.coeffs is None) == (self.dynamics is None):
            raise ValueError("exactly one of coeffs and dynamics must be set")
        if not self.controls:
            raise ValueError("control set must be nonempty")
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("invalid domain bounds")

    @property
    def aligned(self) -> bool:
        """True when f(x, y, a) = speed(x, y, a) * a with nonnegative speed."""
        return self.coeffs is not None

    def speed(self, x: float, y: float, a: tuple[float, float]) -> float:
        """|f(x, y, a)| for control-aligned dynamics."""
        gain, p, q = self.coeffs(x, y)
        return gain * m_coeff(p, q, a)

    def param(self, name: str) -> float:
        for key, value in self.params:
            if key == name:
                return value
        raise KeyError(name)


def eval_dynamics(spec: ProblemSpec, x: float, y: float, a: tuple[float, float]):
    """Velocity vector f(x, y, a)."""
    if spec.aligned:
        s = spec.speed(x, y, a)
        return (s * a[0], s * a[1])
    return spec.dynamics(x, y, a)


def _norm_id(pid: str) -> str:
    return pid.lower().replace("-", "").replace("_", "").strip()


# Template defaults: (domain half-made as (xmin, xmax, ymin, ymax), parameter dict).
_TEMPLATE_DEFAULTS: dict[str, tuple[tuple[float, float, float, float], dict[str, float]]] = {
    "hjb1": ((-2.0, 2.0, -2.0, 2.0), {}),
    "hjb2": ((-2.0, 2.0, -2.0, 2.0), {"base": 1.0, "boost": 4.0, "threshold": 1.0}),
    "hjb3": ((-2.0, 2.0, -2.0, 2.0), {"lam": 10.0, "mu": 5.0}),
    "hjb4": ((-0.5, 0.5, -0.5, 0.5), {"c1": 0.1225, "c2": 2.0, "c3": 0.5, "c4": 0.0}),
    "hjb5": ((-2.0, 2.0, -2.0, 2.0), {"lam": 10.0, "mu": 5.0}),
}


def _make_coeffs(template: str, p: dict[str, float]) -> SpeedCoeffs:
    if template == "hjb1":

        def coeffs(x: float, y: float):
            return (1.0, 0.0, 0.0)

    elif template == "hjb2":
        base, boost, threshold = p["base"], p["boost"], p["threshold"]
        fast = base + boost

        def coeffs(x: float, y: float):
            return (fast if x > threshold else base, 0.0, 0.0)

    elif template == "hjb3":
        lam, mu = p["lam"], p["mu"]

        def coeffs(x: float, y: float):
            return (1.0, lam, mu)

    elif template == "hjb4":
        c1, c2, c3, c4 = p["c1"], p["c2"], p["c3"], p["c4"]

        def coeffs(x: float, y: float):
            _, f2, pp, qq = layer_params(x, y, c1, c2, c3, c4)
            return (f2, pp, qq)

    elif template == "hjb5":
        lam, mu = p["lam"], p["mu"]

        def coeffs(x: float, y: float):
            return (1.0 + abs(x + y), lam, mu)

    else:  # pragma: no cover - guarded by caller
        raise ValueError(f"unknown template {template!r}")
    return coeffs


def make_problem(
    template: str,
    *,
    xmin: float | None = None,
    xmax: float | None = None,
    ymin: float | None = None,
    ymax: float | None = None,
    n_controls: int = 32,
    target: tuple[float, float] = (0.0, 0.0),
    **params: float,
) -> ProblemSpec:
    """Instantiate a dynamics template with (optionally) overridden numeric parameters."""
    tid = _norm_id(template)
    if tid not in _TEMPLATE_DEFAULTS:
        raise ValueError(f"unknown problem template {template!r}; expected one of {BUILTIN_IDS}")
    (dxmin, dxmax, dymin, dymax), defaults = _TEMPLATE_DEFAULTS[tid]
    unknown = set(params) - set(defaults)
    if unknown:
        raise ValueError(f"unknown parameters for {tid}: {sorted(unknown)}")
    merged = {**defaults, **{k: float(v) for k, v in params.items()}}
    if tid == "hjb4" and merged["c3"] == 0:
        raise ValueError("c3 must be nonzero")
    controls = tuple(unit_controls(n_controls))
    return ProblemSpec(
        pid=tid,
        xmin=dxmin if xmin is None else float(xmin),
        xmax=dxmax if xmax is None else float(xmax),
        ymin=dymin if ymin is None else float(ymin),
        ymax=dymax if ymax is None else float(ymax),
        controls=controls,
        coeffs=_make_coeffs(tid, merged),
        target_points=((float(target[0]), float(target[1])),),
        params=tuple(sorted(merged.items())),
    )


def builtin(pid: str) -> ProblemSpec:
    """One of the five built-in benchmark problems with its standard setup."""
    tid = _norm_id(pid)
    if tid not in _TEMPLATE_DEFAULTS:
        raise ValueError(f"unknown problem id {pid!r}; expected one of {BUILTIN_IDS}")
    return make_problem(tid)


def load_problem_file(path) -> ProblemSpec:
    """Load a custom problem from a flat key=value file.

    Recognized keys: ``template`` (required, one of hjb1..hjb5), the domain
    bounds ``xmin/xmax/ymin/ymax``, ``n_controls``, ``target_x/target_y``, and
    the template's numeric parameters.  Lines starting with ``#`` and blank
    lines are ignored.  No expressions, numbers only.
    """
    text = Path(path).read_text(encoding="utf-8")
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        if key in entries:
            raise ValueError(f"{path}:{lineno}: duplicate key {key!r}")
        entries[key] = value.strip()

    template = entries.pop("template", None)
    if template is None:
        raise ValueError(f"{path}: missing required key 'template'")
    kwargs: dict = {}
    tx = entries.pop("target_x", None)
    ty = entries.pop("target_y", None)
    if (tx is None) != (ty is None):
        raise ValueError(f"{path}: target_x and target_y must be given together")
    if tx is not None:
        kwargs["target"] = (float(tx), float(ty))
    if "n_controls" in entries:
        kwargs["n_controls"] = int(entries.pop("n_controls"))
    for key in ("xmin", "xmax", "ymin", "ymax"):
        if key in entries:
            kwargs[key] = float(entries.pop(key))
    params = {key: float(value) for key, value in entries.items()}
    return make_problem(template, **kwargs, **params)
