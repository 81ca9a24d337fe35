"""Command-line interface and solve reports"""
