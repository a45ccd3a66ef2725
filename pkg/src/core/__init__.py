from .ekr import EkrAnalyzer, EkrReport, check_ekr
from .group import PermutationGroup, generate
from .permutation import Permutation, compose, inverse, parse_cycles, to_cycles

__all__ = ['EkrAnalyzer', 'EkrReport', 'check_ekr', 'PermutationGroup', 'generate',
           'Permutation', 'compose', 'inverse', 'parse_cycles', 'to_cycles']
