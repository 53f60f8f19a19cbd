# decoyforge - Copyright 2026 The decoyforge Authors.
# SPDX-License-Identifier: Apache-2.0
"""Read-only access to decoyforge datasets as numpy arrays."""

from ._core import (
    Dataset,
    DecoyforgeError,
    GraphArrays,
    __version__,
    get_graph,
    open_dataset,
    plan_batch,
    sample_batch,
)

__all__ = [
    "Dataset",
    "DecoyforgeError",
    "GraphArrays",
    "__version__",
    "get_graph",
    "open_dataset",
    "plan_batch",
    "sample_batch",
]
