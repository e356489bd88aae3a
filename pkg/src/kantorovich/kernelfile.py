"""Kernel definition files (JSON, UTF-8) and kernel lookup by name.

Schema::

    {"type": "bspline", "order": 3}
    {"type": "classical", "which": "jackson", "params": {"k": 2, "alpha": 1.0}}
    {"type": "spline_combination", "order": 2,
     "terms": [{"coef": 3.0, "shift": 2.0, "spline_order": 2},
               {"coef": -2.0, "shift": 3.0, "spline_order": 2}]}

An optional ``"name"`` key is accepted everywhere.  Floats are written with
``repr`` precision, so spline combinations round-trip bit for bit.
"""

from __future__ import annotations

import json
import re
from dataclasses import replace
from pathlib import Path

from .errors import InvalidParameter
from .kernel_builder import SplineCombinationKernel, build_matched_kernel, spline_combination
from .kernels import CentralBSpline, ClassicalKernel, Kernel, bspline, make_classical_kernel

BUILTIN_NAMES = (
    "bspline1", "bspline2", "bspline3", "bspline4", "bspline5",
    "chi2", "fejer", "vallee_poussin", "sinc_product", "jackson",
)


def kernel_to_dict(kernel: Kernel) -> dict:
    if isinstance(kernel, CentralBSpline):
        return {"type": "bspline", "name": kernel.name, "order": kernel.order}
    if isinstance(kernel, SplineCombinationKernel):
        return {
            "type": "spline_combination",
            "name": kernel.name,
            "order": kernel.spline_order,
            "terms": [
                {"coef": a, "shift": e, "spline_order": kernel.spline_order}
                for a, e in zip(kernel.coefficients, kernel.shifts)
            ],
        }
    if isinstance(kernel, ClassicalKernel):
        return {"type": "classical", "name": kernel.name, "which": kernel.which,
                "params": kernel.params}
    raise InvalidParameter(f"cannot serialize kernel of type {type(kernel).__name__}")


def kernel_from_dict(data: dict) -> Kernel:
    kind = data.get("type")
    if kind == "bspline":
        return bspline(int(data["order"]))
    if kind == "classical":
        params = data.get("params", {}) or {}
        return make_classical_kernel(data["which"], **params)
    if kind == "spline_combination":
        terms = data.get("terms") or []
        if not terms:
            raise InvalidParameter("spline_combination needs at least one term")
        order = int(data.get("order", terms[0]["spline_order"]))
        if any(int(t.get("spline_order", order)) != order for t in terms):
            raise InvalidParameter("all terms must share the kernel's spline order")
        terms = sorted(terms, key=lambda t: float(t["shift"]))
        return spline_combination(
            order,
            [float(t["shift"]) for t in terms],
            [float(t["coef"]) for t in terms],
            name=data.get("name"),
        )
    raise InvalidParameter(f"unknown kernel type {kind!r}")


def dumps(kernel: Kernel) -> str:
    return json.dumps(kernel_to_dict(kernel), indent=2) + "\n"


def save(kernel: Kernel, path) -> None:
    Path(path).write_text(dumps(kernel), encoding="utf-8")


def load(path) -> Kernel:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidParameter(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise InvalidParameter(f"{path}: expected a JSON object")
    try:
        return kernel_from_dict(data)
    except (KeyError, TypeError) as exc:
        raise InvalidParameter(f"{path}: malformed kernel definition ({exc!r})") from exc


_JACKSON = re.compile(r"jackson(\d+)?(?::([0-9.eE+-]+))?$")


def kernel_from_name(name: str) -> Kernel:
    """Resolve ``bspline<n>``, ``chi2``, ``fejer``, ``vallee_poussin``,
    ``sinc_product`` or ``jackson[<k>[:<alpha>]]``."""
    key = name.lower().replace("-", "_")
    if key.startswith("bspline") and key[7:].isdigit():
        return bspline(int(key[7:]))
    if key == "chi2":
        return replace(build_matched_kernel(2, (2.0, 3.0)), name="chi2")
    m = _JACKSON.match(key)
    if m:
        return make_classical_kernel("jackson", k=int(m.group(1) or 1), alpha=float(m.group(2) or 1))
    return make_classical_kernel(key)
