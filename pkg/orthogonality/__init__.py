# orthogonality/__init__.py
"""Discrete bilateral and continuous orthogonality relations"""
