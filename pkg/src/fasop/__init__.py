"""Outage probability of fluid antenna systems over correlated Nakagami-m fading."""

__version__ = "0.1.0"
