"""
D-RIP Toolkit v1.0
==================
Executable checks of l1-analysis recovery with tight frames

Features:
- Normalized tight frames (identity, Mercedes-Benz, random)
- Exact and Monte-Carlo D-RIP constants
- Convex k-sparse decompositions
- l1-analysis recovery (primal-dual hybrid gradient)
- Reconstruction error bound and experiment harness
"""

__version__ = "1.0.0"
