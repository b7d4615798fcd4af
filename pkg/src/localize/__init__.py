"""Maliciousness scores of nodes, methods and classes"""
