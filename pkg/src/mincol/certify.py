"""Placeholder; real module written later."""
Certificate = KnownBound = None
def certificate_parse(*a): raise NotImplementedError
def certificate_serialize(*a): raise NotImplementedError
def certify_rational(*a): raise NotImplementedError
def certify_torus(*a): raise NotImplementedError
def known_lower_bound(*a): raise NotImplementedError
def verify_certificate(*a): raise NotImplementedError
