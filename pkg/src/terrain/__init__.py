"""
Imprecise terrain models and 1.5D visibility primitives
"""
