"""SVG output for 1.5D solutions"""
