"""JSON serialization of kernels and fields, with an optional binary sidecar.

Schema (``lierf.kernel/1`` and ``lierf.field/1``)::

    {
      "schema": "lierf.kernel/1",
      "grid": {"dimension": 2, "n": 32, "spacing": 0.25},
      "lambda": 1.0,                 # kernels only
      "c": [re, im] or null,         # kernels only, declared phase
      "label": "shell",
      "values": [[re, im], ...]      # row-major over the grid
    }

With a sidecar, ``"values"`` is replaced by ``{"sidecar": "name.bin"}`` and
the file holds little-endian float64 pairs ``re, im`` in row-major order.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .fields import GimelField, KernelSpec
from .grid import MomentumGrid

KERNEL_SCHEMA = "lierf.kernel/1"
FIELD_SCHEMA = "lierf.field/1"


class KernelFileError(ValueError):
    pass


def _values_to_json(values: np.ndarray) -> list:
    flat = np.asarray(values, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def _values_from_json(data, grid: MomentumGrid, base: Path | None) -> np.ndarray:
    if isinstance(data, dict) and "sidecar" in data:
        if base is None:
            raise KernelFileError("sidecar reference needs a file location")
        raw = np.fromfile(base / data["sidecar"], dtype="<f8")
        if raw.size != 2 * grid.size:
            raise KernelFileError("sidecar holds %d doubles, expected %d" % (raw.size, 2 * grid.size))
        return (raw[0::2] + 1j * raw[1::2]).reshape(grid.shape)
    arr = np.asarray(data, dtype=float)
    if arr.shape != (grid.size, 2):
        raise KernelFileError("values must be %d [re, im] pairs" % grid.size)
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(grid.shape)


def write_sidecar(values: np.ndarray, path: Path) -> None:
    flat = np.asarray(values, dtype=complex).ravel()
    out = np.empty(2 * flat.size, dtype="<f8")
    out[0::2] = flat.real
    out[1::2] = flat.imag
    out.tofile(path)


def kernel_to_json(k: KernelSpec, sidecar: str | None = None) -> dict:
    return {
        "schema": KERNEL_SCHEMA,
        "grid": k.grid.to_json(),
        "lambda": k.lam,
        "c": None if k.c is None else [k.c.real, k.c.imag],
        "label": k.label,
        "values": {"sidecar": sidecar} if sidecar else _values_to_json(k.values),
    }


def kernel_from_json(d: dict, base: Path | None = None) -> KernelSpec:
    try:
        if d.get("schema") != KERNEL_SCHEMA:
            raise KernelFileError("not a %s document" % KERNEL_SCHEMA)
        grid = MomentumGrid.from_json(d["grid"])
        c = d.get("c")
        c = None if c is None else complex(c[0], c[1])
        values = _values_from_json(d["values"], grid, base)
        return KernelSpec(grid, values, float(d.get("lambda", 1.0)), c, d.get("label", ""))
    except KernelFileError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise KernelFileError("invalid kernel document: %s" % exc) from exc


def field_to_json(f: GimelField, label: str = "") -> dict:
    return {"schema": FIELD_SCHEMA, "grid": f.grid.to_json(), "label": label,
            "values": _values_to_json(f.values)}


def field_from_json(d: dict, base: Path | None = None) -> GimelField:
    if d.get("schema") != FIELD_SCHEMA:
        raise KernelFileError("not a %s document" % FIELD_SCHEMA)
    grid = MomentumGrid.from_json(d["grid"])
    return GimelField(grid, _values_from_json(d["values"], grid, base))


def save_kernel(k: KernelSpec, path, binary: bool = False) -> None:
    path = Path(path)
    sidecar = None
    if binary:
        sidecar = path.with_suffix(".bin").name
        write_sidecar(k.values, path.parent / sidecar)
    path.write_text(json.dumps(kernel_to_json(k, sidecar), sort_keys=True) + "\n")


def load_kernel(path) -> KernelSpec:
    path = Path(path)
    try:
        d = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise KernelFileError("cannot read kernel file %s: %s" % (path, exc)) from exc
    return kernel_from_json(d, path.parent)


SHIPPED = ("shell_c1", "shell_ci", "shell_cpi4", "broken")


def load_shipped(name: str) -> KernelSpec:
    """Kernel fixtures shipped with the package (1+1 dimensions, N = 32)."""
    if name not in SHIPPED:
        raise KernelFileError("unknown shipped kernel %r (choose from %s)" % (name, ", ".join(SHIPPED)))
    text = resources.files("lierf.data").joinpath("kernels", name + ".json").read_text()
    return kernel_from_json(json.loads(text))


def regenerate_shipped(name: str) -> KernelSpec:
    """Rebuild a shipped fixture from its analytic definition."""
    from .library import DEFAULT_GRID, PHASES, broken_kernel, shell_kernel
    if name == "broken":
        return broken_kernel(DEFAULT_GRID)
    key = name.split("_", 1)[1]
    return shell_kernel(DEFAULT_GRID, PHASES[key], label=name)
