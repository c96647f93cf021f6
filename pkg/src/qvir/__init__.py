"""Exact computer algebra for q-Virasoro block / instanton-sum identities.

Subpackages by responsibility:

* :mod:`qvir.coeffield` -- exact rationals and multivariate rational functions
* :mod:`qvir.series` -- truncated bivariate Laurent series with certified windows
* :mod:`qvir.qkit` -- q-Pochhammer, quantum dilogarithm, double products, kernels
* :mod:`qvir.nekrasov` -- partitions, instanton sums, Higgsing, parameter map
* :mod:`qvir.operators` -- difference-operator calculus and equation verifiers
* :mod:`qvir.macdonald` -- one-row Macdonald polynomials and the proof chain
* :mod:`qvir.cli` -- the ``qvir`` command line front end
"""

from .coeffield import (
    FunctionFieldDomain,
    LaurentZDomain,
    ParamPoint,
    RationalDomain,
    SymbolTable,
    element_equal,
    element_eval,
    element_text,
    make_element,
    rat,
)
from .series import BiSeries, DegreeWindow, MonomialArg

__all__ = [
    "BiSeries",
    "DegreeWindow",
    "FunctionFieldDomain",
    "LaurentZDomain",
    "MonomialArg",
    "ParamPoint",
    "RationalDomain",
    "SymbolTable",
    "element_equal",
    "element_eval",
    "element_text",
    "make_element",
    "rat",
]
