"""
Watchtower solvers and brute-force oracles
"""
