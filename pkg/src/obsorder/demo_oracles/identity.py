"""Identity oracle: responds with the probe unchanged."""

import sys

from . import serve


def main() -> None:
    int(sys.argv[1])  # dimension, unused beyond the launch convention
    serve(lambda a: a)


if __name__ == "__main__":
    main()
