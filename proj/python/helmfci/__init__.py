"""Contour-integration preconditioned Helmholtz solver."""

import json
import os

from ._core import (
    DivergenceError,
    IoError,
    impedance_residual,
    impedance_roots,
    richardson_optimal,
    solve,
    tensor_gap_2d,
    tune_all,
    tune_scheme,
)

__all__ = [
    "DivergenceError",
    "IoError",
    "RunResult",
    "impedance_residual",
    "impedance_roots",
    "richardson_optimal",
    "run",
    "solve",
    "tensor_gap_2d",
    "tune_all",
    "tune_scheme",
]


class RunResult:
    def __init__(self, exit_code, message, files, log):
        self.exit_code = exit_code
        self.message = message
        self.files = files
        self.log = log

    @property
    def ok(self):
        return self.exit_code == 0

    def __repr__(self):
        return f"RunResult(exit_code={self.exit_code}, files={len(self.files)})"


def run(config, output_dir=None):
    """Run a CLI config (dict or path to a JSON file) and return its RunResult.

    Schema errors raise ValueError; run failures are reported through exit_code.
    """
    if isinstance(config, (str, os.PathLike)):
        with open(config) as fh:
            config = json.load(fh)
    from ._core import _run

    return RunResult(*_run(json.dumps(config), os.fspath(output_dir) if output_dir else ""))
