"""Atomic file output for graphs and experiment results."""

from __future__ import annotations

import tempfile
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import TextIO


@contextmanager
def atomic_write(path: Path) -> Iterator[TextIO]:
    """
    Open a temporary file next to path and move it into place on success.

    Readers never observe a partially written file; on error the temporary
    file is removed and path is left untouched.

    Args:
        path: Final destination

    Yields:
        Text stream using "\\n" line endings
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with tempfile.NamedTemporaryFile(
        mode="w",
        encoding="utf-8",
        newline="",
        dir=path.parent,
        prefix=f".{path.name}.",
        suffix=".tmp",
        delete=False,
    ) as handle:
        temp_path = Path(handle.name)
        try:
            yield handle
        except BaseException:
            handle.close()
            temp_path.unlink(missing_ok=True)
            raise

    temp_path.replace(path)
