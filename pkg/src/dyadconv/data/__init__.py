"""Default lexicon data files (plain text, one entry per line)."""
