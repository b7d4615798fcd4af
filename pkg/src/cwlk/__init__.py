"""Contextual Weisfeiler-Lehman relabeling, vocabularies, embeddings and kernel matrices"""
