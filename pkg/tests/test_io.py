import json

import numpy as np
import pytest

from lierf.kernels.fields import GimelField
from lierf.kernels.grid import MomentumGrid
from lierf.kernels.io import (SHIPPED, KernelFileError, field_from_json, field_to_json,
                              kernel_from_json, kernel_to_json, load_kernel, load_shipped,
                              regenerate_shipped, save_kernel)
from lierf.kernels.library import shell_kernel

GRID = MomentumGrid(2, 8, 0.5)


def same_kernel(a, b):
    return (a.grid == b.grid and np.array_equal(a.values, b.values) and a.lam == b.lam
            and a.c == b.c and a.label == b.label)


@pytest.mark.parametrize("binary", [False, True])
def test_kernel_file_round_trip(tmp_path, binary):
    k = shell_kernel(GRID, 1j, 0.35, label="demo")
    path = tmp_path / "k.json"
    save_kernel(k, path, binary=binary)
    assert same_kernel(load_kernel(path), k)
    doc = json.loads(path.read_text())
    assert doc["schema"] == "lierf.kernel/1"
    if binary:
        assert doc["values"] == {"sidecar": "k.bin"}
        raw = np.fromfile(tmp_path / "k.bin", dtype="<f8")
        assert raw[0] == k.values.ravel()[0].real and raw[1] == k.values.ravel()[0].imag


def test_values_are_row_major_pairs():
    vals = np.arange(GRID.size).reshape(GRID.shape) + 0.5j
    k = shell_kernel(GRID)
    k.values = vals
    doc = kernel_to_json(k)
    assert doc["values"][1] == [1.0, 0.5]
    assert doc["values"][GRID.n] == [float(GRID.n), 0.5]


def test_field_round_trip():
    f = GimelField(GRID, np.full(GRID.shape, 1 - 2j))
    back = field_from_json(json.loads(json.dumps(field_to_json(f, "f"))))
    assert np.array_equal(back.values, f.values)


def test_bad_documents(tmp_path):
    with pytest.raises(KernelFileError):
        kernel_from_json({"schema": "other"})
    doc = kernel_to_json(shell_kernel(GRID))
    doc["values"] = doc["values"][:-1]
    with pytest.raises(KernelFileError):
        kernel_from_json(doc)
    (tmp_path / "bad.json").write_text("{not json")
    with pytest.raises(KernelFileError):
        load_kernel(tmp_path / "bad.json")
    with pytest.raises(KernelFileError):
        load_kernel(tmp_path / "missing.json")
    with pytest.raises(KernelFileError):
        load_shipped("nope")


def test_truncated_sidecar(tmp_path):
    path = tmp_path / "k.json"
    save_kernel(shell_kernel(GRID), path, binary=True)
    (tmp_path / "k.bin").write_bytes(b"\0" * 16)
    with pytest.raises(KernelFileError):
        load_kernel(path)


@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_fixtures_equal_regenerated(name):
    a, b = load_shipped(name), regenerate_shipped(name)
    assert np.array_equal(a.values, b.values)
    assert a.grid == b.grid and a.c == b.c
