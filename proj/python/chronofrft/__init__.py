"""Fractional Fourier transforms of pulse envelopes: lens sequences, Wigner maps,
a gradient-echo memory channel model and homodyne detection."""

from ._core import (
    DomainError,
    Envelope,
    IoError,
    TimeGrid,
    WignerMap,
    bandwidth_after_lens,
    cat_state,
    decompose,
    detect,
    fit_angle,
    frft,
    gaussian_pulse,
    hermite_gauss,
    make_grid,
    map_fidelity,
    memory_channel,
    memory_preset_names,
    overlap,
    reference_grid,
    reproduce_table1,
    rotate_map,
    state_fidelity,
    storage_efficiency,
    to_spectrum,
    transition_matrix,
    wigner,
)

__all__ = [name for name in dir() if not name.startswith("_")]
