"""
Command-line surfaces
"""
