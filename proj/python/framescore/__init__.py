"""Association scores for named entities from fine-tuned word embeddings."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, run_cli


def main(argv=None):
    """Console entry point mirroring the C++ command-line tool."""
    import sys

    code, out, err = run_cli(list(sys.argv[1:] if argv is None else argv))
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code
