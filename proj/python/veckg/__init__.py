"""Viewpoint-enabled event-centric knowledge graphs (Python surface)."""

try:
    from ._veckg import (  # type: ignore[attr-defined]
        EngineError,
        Graph,
        Hierarchy,
        Taxonomy,
        group_stance,
        load_hierarchy,
        load_taxonomy,
        parse,
    )
except ImportError:  # pragma: no cover - build-tree layout
    from _veckg import (  # type: ignore[no-redef]
        EngineError,
        Graph,
        Hierarchy,
        Taxonomy,
        group_stance,
        load_hierarchy,
        load_taxonomy,
        parse,
    )

__all__ = [
    "EngineError",
    "Graph",
    "Hierarchy",
    "Taxonomy",
    "group_stance",
    "load_hierarchy",
    "load_taxonomy",
    "parse",
]
