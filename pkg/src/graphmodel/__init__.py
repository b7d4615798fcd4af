"""Graph model: context annotated graphs and the dataset file format"""
