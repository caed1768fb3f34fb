"""Sweep configuration, grid evaluation and CSV/SVG output behind the ``qutrit-cad`` command."""
