"""q-shuffle algebras, power sums and multiple Eisenstein series over F_q[theta]."""

__version__ = "0.1.0"
