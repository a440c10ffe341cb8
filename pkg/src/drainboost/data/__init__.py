from .dataset import Dataset, load_dataset, write_dataset
from .generator import SynthResult, synthesize
from .pipeline import (
    PairingReport,
    SampleRecord,
    build_dataset,
    compute_ecpm,
    eliminate,
    ingest_csv,
    label,
    report_text,
)

__all__ = [
    "Dataset",
    "PairingReport",
    "SampleRecord",
    "SynthResult",
    "build_dataset",
    "compute_ecpm",
    "eliminate",
    "ingest_csv",
    "label",
    "load_dataset",
    "report_text",
    "synthesize",
    "write_dataset",
]
