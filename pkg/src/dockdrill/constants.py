"""Bundled physico-chemical constants used across the package.

Hydrophobicity follows the Kyte-Doolittle scale; charge classes are the
side-chain charges at neutral pH (K/R/H positive, D/E negative, everything
else neutral). Van der Waals radii are the per-element values used as the
Gaussian bandwidth of the spatial density estimator.
"""

from __future__ import annotations

# 20 standard residues, three-letter code -> one-letter code.
STANDARD_RESIDUES = {
    "ALA": "A", "ARG": "R", "ASN": "N", "ASP": "D", "CYS": "C",
    "GLN": "Q", "GLU": "E", "GLY": "G", "HIS": "H", "ILE": "I",
    "LEU": "L", "LYS": "K", "MET": "M", "PHE": "F", "PRO": "P",
    "SER": "S", "THR": "T", "TRP": "W", "TYR": "Y", "VAL": "V",
}

# Kyte-Doolittle hydrophobicity, in [-4.5, 4.5].
HYDROPHOBICITY = {
    "ILE": 4.5, "VAL": 4.2, "LEU": 3.8, "PHE": 2.8, "CYS": 2.5,
    "MET": 1.9, "ALA": 1.8, "GLY": -0.4, "THR": -0.7, "SER": -0.8,
    "TRP": -0.9, "TYR": -1.3, "PRO": -1.6, "HIS": -3.2, "GLU": -3.5,
    "GLN": -3.5, "ASP": -3.5, "ASN": -3.5, "LYS": -3.9, "ARG": -4.5,
}

POSITIVE_RESIDUES = frozenset({"LYS", "ARG", "HIS"})
NEGATIVE_RESIDUES = frozenset({"ASP", "GLU"})

# Van der Waals radii in Angstrom (Bondi). Used as per-atom KDE bandwidth.
VDW_RADII = {
    "H": 1.20, "C": 1.70, "N": 1.55, "O": 1.52, "S": 1.80,
    "P": 1.80, "F": 1.47, "CL": 1.75, "BR": 1.85, "I": 1.98,
    "SE": 1.90, "FE": 2.00, "ZN": 1.39, "MG": 1.73, "CA": 2.00,
    "MN": 2.00, "NA": 2.27, "K": 2.75,
}
DEFAULT_VDW_RADIUS = 1.70

# 12-hue categorical palette for protein identity (ColorBrewer Paired-12).
PROTEIN_PALETTE = (
    "#a6cee3", "#1f78b4", "#b2df8a", "#33a02c", "#fb9a99", "#e31a1c",
    "#fdbf6f", "#ff7f00", "#cab2d6", "#6a3d9a", "#ffff99", "#b15928",
)
MAX_PROTEIN_COLORS = len(PROTEIN_PALETTE)


def is_standard_residue(residue_name: str) -> bool:
    return residue_name.upper() in STANDARD_RESIDUES


def hydrophobicity(residue_name: str) -> float:
    """Kyte-Doolittle value for a residue; 0.0 for non-standard residues."""
    return HYDROPHOBICITY.get(residue_name.upper(), 0.0)


def charge_class(residue_name: str) -> str:
    """'positive', 'negative', or 'neutral' at neutral pH."""
    name = residue_name.upper()
    if name in POSITIVE_RESIDUES:
        return "positive"
    if name in NEGATIVE_RESIDUES:
        return "negative"
    return "neutral"


def vdw_radius(element: str) -> float:
    return VDW_RADII.get(element.upper(), DEFAULT_VDW_RADIUS)
