"""Computing-with-words toolkit."""
