"""Exact combinatorics of arithmetic surface models over a discrete valuation ring."""
