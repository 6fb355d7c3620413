"""Automatic clustering by validated merging of k-means clusters."""
