"""Deterministic 6-DOF simulator and analysis kit for an aerial-aquatic
quadrotor with independently tiltable dual-speed propulsion units."""

__version__ = "0.1.0"
