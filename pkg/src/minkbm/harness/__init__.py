"""Verification harness: body generators, the inequality battery and the
scenario runner."""
