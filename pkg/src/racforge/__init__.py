"""Exact RAC drawing toolkit."""
