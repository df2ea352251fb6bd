"""seqlab: numeration systems, automatic and morphic sequences, correlation measures."""

__version__ = "1.0.0"
