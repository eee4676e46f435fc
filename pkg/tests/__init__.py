"""mixedhodge test package."""
