"""Collatz form analysis: forms, cascades, columns and stopping-time scans."""
