"""Mixing-time sensitivity under quasi-isometry: constructions and walk measurements."""
