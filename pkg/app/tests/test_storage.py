"""Test atomic file output and environment settings."""

from __future__ import annotations

from pathlib import Path

import pytest
from pydantic import ValidationError

from app.config import Settings
from app.storage import atomic_write


class TestAtomicWrite:
    """Test temp-file-and-rename output."""

    def test_replaces_existing_file(self, tmp_path: Path) -> None:
        """Test that the destination holds the new content only after success."""
        path = tmp_path / "out.csv"
        path.write_text("old\n")

        with atomic_write(path) as stream:
            stream.write("new\n")
            assert path.read_text() == "old\n"

        assert path.read_text() == "new\n"
        assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]

    def test_failure_leaves_destination_untouched(self, tmp_path: Path) -> None:
        """Test that an exception removes the temp file and keeps the old content."""
        path = tmp_path / "out.csv"
        path.write_text("old\n")

        with pytest.raises(RuntimeError):
            with atomic_write(path) as stream:
                stream.write("partial")
                raise RuntimeError("boom")

        assert path.read_text() == "old\n"
        assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]

    def test_creates_parent_directories(self, tmp_path: Path) -> None:
        """Test writing into a directory that does not exist yet."""
        path = tmp_path / "nested" / "dir" / "graph.txt"

        with atomic_write(path) as stream:
            stream.write("0 0\n")

        assert path.read_text() == "0 0\n"


class TestSettings:
    """Test environment-driven settings."""

    def test_threads_from_environment(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test that GRAPH_INDEX_THREADS caps the worker count."""
        monkeypatch.setenv("GRAPH_INDEX_THREADS", "3")

        assert Settings().threads == 3

    @pytest.mark.parametrize("value", ["0", "-2", "many"])
    def test_invalid_threads(self, monkeypatch: pytest.MonkeyPatch, value: str) -> None:
        """Test that a nonpositive or non-integer worker count is rejected."""
        monkeypatch.setenv("GRAPH_INDEX_THREADS", value)

        with pytest.raises(ValidationError):
            Settings()

    def test_defaults(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test the experiment defaults."""
        monkeypatch.delenv("GRAPH_INDEX_THREADS", raising=False)
        settings = Settings()

        assert settings.threads >= 1
        assert settings.default_replications == 200
        assert settings.node_grid == list(range(20, 381, 20))
        assert settings.float_format == "%.17g"
