"""Histogram gradient-boosted classifier grown from binned features."""

from .binning import BinMapper
from .model import HgbcModel, HgbcParams, fit
from .serialize import load_model, save_model

__all__ = ["BinMapper", "HgbcModel", "HgbcParams", "fit", "load_model", "save_model"]
