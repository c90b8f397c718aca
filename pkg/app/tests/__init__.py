"""Test suite for graph indices, generators, oracles and experiments."""
