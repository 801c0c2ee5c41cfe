"""Code families: the inner MSR code, outer codes and their composition."""
