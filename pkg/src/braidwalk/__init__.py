"""Random walks on B3, B3/Z and dihedral Artin groups: drifts, harmonic measure, Green functions."""

__version__ = "0.1.0"
