"""
Exact geometry package
"""
