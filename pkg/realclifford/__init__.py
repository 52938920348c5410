"""realclifford - real Clifford circuits, their normal forms and rewriting."""

__version__ = "0.1.0"
