"""Korn-constant laboratory for thin cylindrical shells.

Thin wrapper re-exporting the C++ extension module. Supports both the
installed layout (extension placed inside this package) and the build-tree
layout (extension on PYTHONPATH next to the package).
"""

try:
    from ._kornlab import (  # type: ignore[attr-defined]
        ansatz_quotient,
        extreme_eig,
        inequality_corpus,
        k0_constant,
        korn_constant,
        projection_corpus,
        psi,
        psi_checks,
        run_sweep,
        scan_scales,
        sharp_harmonic_check,
    )
except ImportError:
    from _kornlab import (  # type: ignore[no-redef]
        ansatz_quotient,
        extreme_eig,
        inequality_corpus,
        k0_constant,
        korn_constant,
        projection_corpus,
        psi,
        psi_checks,
        run_sweep,
        scan_scales,
        sharp_harmonic_check,
    )

__all__ = [
    "ansatz_quotient",
    "extreme_eig",
    "inequality_corpus",
    "k0_constant",
    "korn_constant",
    "projection_corpus",
    "psi",
    "psi_checks",
    "run_sweep",
    "scan_scales",
    "sharp_harmonic_check",
]
