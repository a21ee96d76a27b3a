"""Scoring and structure search for discrete Bayesian networks.

Implements the K2 metric, its Dirichlet extension and the Gamma-function
generalization, together with exhaustive posterior enumeration for small
networks and the greedy K2 search.
"""
from .errors import (DataFormatError, EnumerationLimitError, K2Error, MissingValueError,
                     PriorDomainError, StructureError)
from .gamma import log_gamma
from .k2search import SearchConfig, SearchResult, k2_random_restarts, k2_search
from .metric import (PriorKind, PriorSpec, ScoreResult, family_log_score, joint_log_score,
                     noninformative_pseudocounts, parse_prior, structure_log_score)
from .model import (CountTable, Dag, Database, Variable, format_structure, load_database,
                    parse_domains, parse_structure, tabulate_counts)
from .posterior import (PosteriorTable, enumerate_dags, logsumexp, markov_equivalent,
                        posterior_over_structures)

__version__ = "0.1.0"
