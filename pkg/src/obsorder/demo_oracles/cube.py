"""Matrix-cube oracle A -> A^3. Not an order-automorphism: it agrees with
the identity on projections (so structure probes pass) but fails on general
Hermitian validation probes."""

import sys

from . import serve


def main() -> None:
    int(sys.argv[1])
    serve(lambda a: a @ a @ a)


if __name__ == "__main__":
    main()
