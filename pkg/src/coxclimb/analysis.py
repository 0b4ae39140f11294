"""Lazily built bundle of every stage for one group type."""

from __future__ import annotations

from functools import cached_property

from .bipartite import build_order, longest_element
from .catalan import (all_climbing, build_dual, catalan_number, classes,
                      falling_of_facet)
from .fan import FacetLocator, enumerate_facets, make_facet
from .geometry import DEFAULT_BUDGET, DEFAULT_TOL, build_system, enumerate_group


class Analysis:
    """Build a system from ``spec`` and compute each stage on first access.

    >>> a = Analysis("A2")
    >>> len(a.group), a.order.h, len(a.facets), a.catalan
    (6, 3, 5, 5)
    """

    def __init__(self, spec, tol=DEFAULT_TOL, budget=DEFAULT_BUDGET):
        self.system = build_system(spec, tol=tol)
        self.budget = budget

    @property
    def name(self):
        return self.system.name

    @cached_property
    def group(self):
        return enumerate_group(self.system, budget=self.budget)

    @cached_property
    def order(self):
        return build_order(self.system)

    @cached_property
    def longest(self):
        return longest_element(self.order)

    @cached_property
    def facets(self):
        return enumerate_facets(self.order)

    @cached_property
    def locator(self):
        return FacetLocator(self.order, self.facets)

    @cached_property
    def assignment(self):
        return self.locator.assign(self.group)

    @cached_property
    def dual(self):
        return build_dual(self.order)

    @cached_property
    def dual_facets(self):
        return [make_facet(self.dual.order, self.dual.flip(f.indices)) for f in self.facets]

    @cached_property
    def dual_locator(self):
        return FacetLocator(self.dual.order, self.dual_facets)

    @cached_property
    def climbing(self):
        """Climbing element of each facet, as stored group elements."""
        return [self.group.lookup(x) for x in all_climbing(self.order, self.facets, self.locator)]

    @cached_property
    def falling(self):
        return [self.group.lookup(falling_of_facet(f, self.order, self.dual, self.dual_locator))
                for f in self.facets]

    @cached_property
    def classes(self):
        return classes(self.order, self.facets, self.group, self.dual, self.assignment)

    @cached_property
    def catalan(self):
        return catalan_number(self.order)
