"""Predict whether scholarly articles get cited by patents from their
social-media mention counts."""

from .dataset import CleanConfig, Dataset, RawRecord, clean, load_dataset, parse_records

__version__ = "0.1.0"

__all__ = ["CleanConfig", "Dataset", "RawRecord", "clean", "load_dataset", "parse_records"]
