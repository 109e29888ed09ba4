"""Autoregressive lag selection with the CODEC coefficient and FOCI."""

from ._core import (
    CodeclagError,
    __version__,
    codec,
    load_benchmark,
    model_names,
    pacf,
    run_experiment,
    schwert_max_lag,
    select_lags,
    simulate,
    xi_coefficient,
)

__all__ = [
    "CodeclagError",
    "__version__",
    "codec",
    "load_benchmark",
    "model_names",
    "pacf",
    "run_experiment",
    "schwert_max_lag",
    "select_lags",
    "simulate",
    "xi_coefficient",
]
