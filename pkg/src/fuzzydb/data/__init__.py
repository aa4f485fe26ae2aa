"""Bundled example data: a cardboard factory's catalog and tables."""

import os


def case_study_dir() -> str:
    """Directory holding the example catalog files and table CSVs."""
    return os.path.join(os.path.dirname(__file__), "casestudy")
