import sys

# Recursive term traversals need more headroom than CPython's default
# 1000 frames; 10k stays well inside the 8 MB main-thread stack. Tests
# that go deeper route through ordlam.deep.run_deep.
sys.setrecursionlimit(10_000)
