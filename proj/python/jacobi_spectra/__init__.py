"""Python access to the jacobi-spectra core."""

import json
from pathlib import Path

from . import _core
from ._core import JacobiError

__all__ = [
    "JacobiError",
    "converge",
    "curves",
    "default_cutoffs",
    "geometry",
    "ledger",
    "main",
    "run_cli",
    "schema_dir",
    "spectrum",
    "verify",
]


def curves():
    """Catalog labels, e.g. ``Line_CP2`` or ``FactorSphere[K1=2,K2=1]``."""
    return list(_core.curve_labels())


def default_cutoffs(curve):
    return list(_core.default_cutoffs(curve))


def spectrum(curve, cutoff=0, resolution=0, operator="jacobi"):
    """Eigenvalues, clusters and kernel of one operator; ``operator`` is jacobi, area or wplus."""
    return json.loads(_core.spectrum_json(curve, cutoff, resolution, operator))


def converge(curve, cutoffs=(), resolution=0):
    return json.loads(_core.converge_json(curve, list(cutoffs), resolution))


def verify(curve, checks="all", cutoffs=(), samples=20, seed=1):
    if not isinstance(checks, str):
        checks = ",".join(checks)
    return json.loads(_core.verify_json(curve, checks, list(cutoffs), samples, seed))


def geometry(curve, resolution=0):
    return json.loads(_core.geometry_json(curve, resolution))


def ledger(curve):
    return json.loads(_core.ledger_json(curve))


def run_cli(args):
    """Runs the command line tool in-process and returns its exit code."""
    return _core.run_cli([str(a) for a in args])


def main():
    import sys

    raise SystemExit(run_cli(sys.argv[1:]))


def schema_dir():
    """Directory with the JSON schemas of every emitted file, if available."""
    here = Path(__file__).resolve().parent
    for candidate in (here / "schemas", here.parents[1] / "schemas"):
        if candidate.is_dir():
            return candidate
    return None
