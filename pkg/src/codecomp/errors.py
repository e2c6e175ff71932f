class GuardExceeded(OverflowError):
    """A problem size exceeds a documented memory or enumeration guard."""
