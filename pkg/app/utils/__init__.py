"""
Helpers: partition tables, named input families, exporters
"""
