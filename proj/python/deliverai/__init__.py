"""Python bindings for the DeliverAI delivery simulator."""

from ._core import (
    City,
    Delivery,
    IncompleteTraceError,
    SimResult,
    Tables,
    ValidationError,
    __version__,
    generate_city,
    generate_deliveries,
    load_city,
    load_tables,
    metrics,
    simulate,
    train,
)

__all__ = [
    "City",
    "Delivery",
    "IncompleteTraceError",
    "SimResult",
    "Tables",
    "ValidationError",
    "generate_city",
    "generate_deliveries",
    "load_city",
    "load_tables",
    "metrics",
    "simulate",
    "train",
]
