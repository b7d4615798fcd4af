"""Chi-squared feature selection for high cardinality views"""
