"""Numerical laboratory for bilateral weighted shifts and their J-unitary lifts."""
