"""Arc-space invariants of real plane curve germs and equisingularity checks for families."""

__version__ = "0.1.0"


def clear_caches():
    """Drop memoized analyses (useful for timing cold runs)."""
    from .arcs import analyze
    from .family import analyze_at_t, deform_arc
    for fn in (analyze, analyze_at_t, deform_arc):
        fn.cache_clear()
