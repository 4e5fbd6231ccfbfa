# Copyright 2026 The degen Authors - All rights reserved.
# SPDX-License-Identifier: Apache-2.0
"""Exact diagonalization of spin-1/2 models with degenerate ground states.

States are complex numpy vectors over the 2^n computational basis; bit i of
a basis index is site i, 0 meaning spin up. Bases are column-stacked arrays.
"""

from ._degen import (
    ConfigError,
    Hamiltonian,
    Lattice,
    SolverError,
    Triangle,
    chain,
    closed_form_ising_entropy,
    degenerate_average,
    dmi,
    entropy,
    fourier_remix,
    ground_multiplet_degree,
    ising,
    ising_product_basis,
    ks_two_sample,
    local_moments,
    lowest_eigenpairs,
    run_sweep,
    sample_coefficients,
    sample_entropies,
    scalar_chirality,
    schmidt_spectrum,
    single_shot,
    triangular_supercell,
    ursell2,
    ursell3,
    validate_config,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
