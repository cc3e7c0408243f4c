"""eatforge test suite."""
