"""Affine oracle A -> 2A + I, i.e. T = sqrt(2) I, X = I."""

import sys

import numpy as np

from . import serve


def main() -> None:
    dim = int(sys.argv[1])
    eye = np.eye(dim, dtype=np.complex128)
    serve(lambda a: 2.0 * a + eye)


if __name__ == "__main__":
    main()
