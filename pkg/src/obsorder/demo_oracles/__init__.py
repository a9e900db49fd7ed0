"""Bundled oracle child processes for exercising the stdio protocol.

Each module is runnable as ``python -m obsorder.demo_oracles.<name> <dim>``
and serves the newline-delimited JSON request/response loop until stdin
closes.
"""

from __future__ import annotations

import json
import sys
from typing import Callable

import numpy as np

from ..io import hermitian_from_dict, matrix_to_dict


def serve(fn: Callable[[np.ndarray], np.ndarray]) -> None:
    """Answer protocol requests on stdin with fn applied to each matrix."""
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        request = json.loads(line)
        a = hermitian_from_dict(request["matrix"]).mat
        out = fn(a)
        response = {"id": request["id"], "matrix": matrix_to_dict(out)}
        sys.stdout.write(json.dumps(response) + "\n")
        sys.stdout.flush()
