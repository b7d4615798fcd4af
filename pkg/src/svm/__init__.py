"""Unbiased linear SVM trained in the dual"""
