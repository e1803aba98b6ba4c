"""SKEWTHETA - Source package."""
