"""Construction families for Deza graphs."""
