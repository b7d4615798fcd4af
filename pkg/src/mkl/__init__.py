"""Multiple kernel learning over per-view CWL kernels"""
