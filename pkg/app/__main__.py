"""Main entry point for the application."""

from app.cli import run

if __name__ == "__main__":
    run()
