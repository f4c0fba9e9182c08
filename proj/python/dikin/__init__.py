"""Dikin walk sampling with Gaussian cooling."""

import json
import os

from ._dikin import (
    DikinError,
    ParseError,
    certify,
    leverage_scores,
    lewis_weights,
    psd_hessian,
    run_cli,
    sample_text,
    sigma0_squared,
    sigma_schedule,
    svec,
)

__all__ = [
    "DikinError",
    "ParseError",
    "certify",
    "leverage_scores",
    "lewis_weights",
    "psd_hessian",
    "run_cli",
    "sample",
    "sigma0_squared",
    "sigma_schedule",
    "svec",
]


def sample(problem, n, seed=None):
    """Samples for a problem given as a dict or a path to a JSON file.

    Returns (samples, report) with samples of shape (n, dimension).
    """
    if isinstance(problem, dict):
        text = json.dumps(problem)
    elif isinstance(problem, (str, os.PathLike)):
        with open(problem, encoding="utf-8") as fh:
            text = fh.read()
    else:
        raise TypeError("problem must be a dict or a path")
    return sample_text(text, int(n), seed)
