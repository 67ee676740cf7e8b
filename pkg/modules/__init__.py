"""Core library: Boolean functions, vtrees, SDDs, OBDDs and the HWB constructions."""
