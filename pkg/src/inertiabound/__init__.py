"""Exact inertia bounds on independence numbers and non-tightness certificates.

The inertia bound says alpha(G) <= min(n - n+(W), n - n-(W)) for every
symmetric weight matrix W supported on the edges of G.  This package computes
that bound with exact integer arithmetic and certifies, through a parity
argument over gadget subgraphs, that no weight matrix attains alpha(G).
"""

from .certify import (NonTightnessCertificate, Verdict, certify_not_tight, enumerate_gadgets,
                      verify_certificate)
from .errors import BudgetExceeded
from .exactla import (Inertia, SymMatrix, WeightMatrix, inertia, inertia_bound,
                      symbolic_determinant)
from .graphs import Graph, PaleyParams, delete_vertex, paley
from .independence import independence_number, is_alpha_critical

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "Graph", "Inertia", "NonTightnessCertificate", "PaleyParams", "SymMatrix",
    "Verdict", "WeightMatrix", "certify_not_tight", "delete_vertex", "enumerate_gadgets",
    "independence_number", "inertia", "inertia_bound", "is_alpha_critical", "paley",
    "symbolic_determinant", "verify_certificate",
]
