# Copyright (c) 2026 The simulst Authors
# SPDX-License-Identifier: Apache-2.0
"""Chunked streaming speech translation with a hold-n output policy.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its operations.
"""

from ._core import (
    average_lagging,
    build_schedule,
    corpus_bleu,
    laal,
    laal_ca,
    output_length,
    run_manifest,
    selective_output,
)

__all__ = [
    "average_lagging",
    "build_schedule",
    "corpus_bleu",
    "laal",
    "laal_ca",
    "output_length",
    "run_manifest",
    "selective_output",
]
