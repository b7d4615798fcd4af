"""Synthetic multi-view datasets with planted motifs and localization ground truth"""
