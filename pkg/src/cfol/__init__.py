"""Exact continuous first-order logic and the effective Henkin presentation."""
import sys

# left-nested joins of many wffs are deep trees
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)
# wff codes of long joins run to many thousands of decimal digits
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

__version__ = "0.1.0"
