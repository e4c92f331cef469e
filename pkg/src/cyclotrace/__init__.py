"""Exact degree-zero computations around the cyclotomic trace of Z[G].

Submodules: ``groups`` (finite groups, classes, power maps, SL(2, Q)
matrices), ``groupring`` (Z[G], matrices, Hattori-Stallings rank),
``witt`` (big Witt vectors), ``trzero`` (the free model of TR_0^r and its
operators), ``bass`` (Frobenius-fixed traces and their consequences) and
``cli``.
"""

from .errors import CyclotraceError
from .groups import Group, GroupSpec, RatMatrix2, build_group, catalog_group, load_group
from .groupring import GRMatrix, GroupRingElem, HH0Vector, hattori_stallings_rank, hh0_project
from .witt import TruncationSet, WittVector
from .trzero import TRElem, TRLimitElem, bracket

__version__ = "0.1.0"
