"""Subcommands and the tables they write."""
