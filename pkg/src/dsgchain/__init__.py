"""
dsgchain
========

Static periodic and step-like soliton chains of the (multi-)double-Sine-Gordon
equation: kink profiles, Runge-Kutta orbits, period and energy quadratures,
energy/force curves, equations of state and the branch bifurcation.
"""

__version__ = "0.1.0"
