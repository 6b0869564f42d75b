"""Numerical laboratory for folded hyperkahler structures.

Modules:
    jets       forward-mode second-order jets and scalar fields
    forms      pointwise exterior algebra on coordinate charts
    canonical  the canonical folded model on half-space x sphere
    suinf      area-preserving-diffeomorphism Higgs bundle residuals
    higgs2d    abelian rank-2 Higgs pairs on the disc and their metrics
    toda       circle-invariant reduction and its uniqueness probes
    moments    fibre integrals: pairings, moments, variations
    deform     deformations from holomorphic differentials
    foldlab    fold exemplars: jump model, kernel lines, Gibbons-Hawking
    cli        batch verification front end
"""

__version__ = "0.1.0"

__all__ = [
    "jets",
    "forms",
    "canonical",
    "suinf",
    "higgs2d",
    "toda",
    "moments",
    "deform",
    "foldlab",
    "report",
    "cli",
]
