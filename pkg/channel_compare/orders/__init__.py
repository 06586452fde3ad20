"""Channel orders: decision problems, Blackwell order, more-capable order."""
