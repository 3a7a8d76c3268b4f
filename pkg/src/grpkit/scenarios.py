"""Curated end-to-end checks composing the toolkit's modules.

Each scenario packages one multi-step computation whose expected outputs are
frozen here, runs it, and reports a structured pass/fail result: ``evidence``
holds an ``expected`` and an ``actual`` mapping with identical shapes, and
the verdict is exactly their equality.  Evidence values are plain
JSON-serializable data (lists, dicts, strings, arbitrary-size ints).
"""

from __future__ import annotations

from dataclasses import dataclass

from grpkit.errors import OrderBudgetError
from grpkit.intlinalg import (
    abelian_invariants,
    char_poly,
    mapping_torus_h1,
    mat_pow,
    torus_bundle_torsion,
)
from grpkit.low_index import core_table, low_index_subgroups
from grpkit.presentations import catalog
from grpkit.rewrite import reidemeister_schreier

# Monodromy action on the first homology of a once-punctured genus-2 fiber,
# and its sixth power (the 6-fold cyclic cover of the bundle).
FIBER_ACTION = (
    (0, 1, 2, 1),
    (-1, 1, 2, 1),
    (0, 0, 2, 1),
    (1, 0, -1, 0),
)
FIBER_ACTION_SIXTH = (
    (18, 17, 88, 57),
    (9, 9, 48, 31),
    (14, 12, 66, 43),
    (3, 2, 9, 6),
)

# Monodromy of a once-punctured torus bundle with H1 = Z x Z/5.
TORUS_MONODROMY = ((-3, 1), (-1, 0))


@dataclass(frozen=True)
class ScenarioResult:
    """Outcome of one scenario: name, verdict, and the evidence behind it."""

    name: str
    passed: bool
    evidence: dict


def _result(name, expected, actual):
    return ScenarioResult(
        name=name,
        passed=expected == actual,
        evidence={"expected": expected, "actual": actual},
    )


def _invariants_of_record(presentation, record):
    subgroup = reidemeister_schreier(presentation, record.representative)
    return abelian_invariants(subgroup)


def _free_rank(invariants):
    return sum(1 for d in invariants if d == 0)


def _classes_by_index(records, lo, hi):
    by_index = {i: [] for i in range(lo, hi + 1)}
    for record in records:
        by_index[record.index].append(record)
    return by_index


# expected values for subgroup classes of the index-3 triangle-ish quotient
# group: class counts and sorted invariant lists per index
GAMMA_INDEX_COUNTS = {
    2: 0, 3: 1, 4: 1, 5: 1, 6: 2, 7: 4, 8: 2, 9: 1, 10: 1, 11: 0, 12: 7,
}
GAMMA_INDEX_INVARIANTS = {
    2: [],
    3: [[2, 2]],
    4: [[3, 3]],
    5: [[3, 3]],
    6: [[2, 0], [6]],
    7: [[6], [6], [6], [6]],
    8: [[3, 3], [3, 3]],
    9: [[2, 2]],
    10: [[6, 0]],
    11: [],
    12: [[0], [2, 0], [3, 3, 3], [3, 3, 3], [3, 9], [3, 9], [5, 0]],
}


def rank_bound():
    """Every subgroup of index at most 12 has first Betti number <= 1.

    Also pins the full class census: per-index counts and the sorted lists
    of abelian invariants, plus the ambient group's own invariants.
    """
    pres = catalog("Gamma")
    records = low_index_subgroups(pres, 2, 12)
    by_index = _classes_by_index(records, 2, 12)
    counts = {}
    invariant_lists = {}
    max_free_rank = 0
    for index in range(2, 13):
        batch = by_index[index]
        counts[str(index)] = len(batch)
        aqis = sorted(_invariants_of_record(pres, r) for r in batch)
        invariant_lists[str(index)] = aqis
        for aqi in aqis:
            max_free_rank = max(max_free_rank, _free_rank(aqi))
    actual = {
        "group_invariants": abelian_invariants(pres),
        "class_counts": counts,
        "invariants": invariant_lists,
        "free_rank_bound_holds": max_free_rank <= 1,
    }
    expected = {
        "group_invariants": [3],
        "class_counts": {str(i): GAMMA_INDEX_COUNTS[i] for i in range(2, 13)},
        "invariants": {str(i): GAMMA_INDEX_INVARIANTS[i] for i in range(2, 13)},
        "free_rank_bound_holds": True,
    }
    return _result("rank_bound", expected, actual)


# branches with free rank >= 1, keyed "index/invariants", with their index-5
# subgroup data; the 12/[0] branch has no independently attested values, so
# its numbers were computed by this tool and frozen after review
FREE_RANK_BRANCHES = {
    "6/[2, 0]": {
        "classes": 4,
        "invariants": [[2, 0], [2, 0, 0], [2, 0, 0], [2, 0, 0, 0]],
        "reaches_free_rank_5": False,
    },
    "10/[6, 0]": {
        "classes": 6,
        "invariants": [
            [2, 6, 0, 0], [3, 6, 0], [3, 6, 0], [3, 6, 0], [3, 6, 0, 0], [6, 0],
        ],
        "reaches_free_rank_5": False,
    },
    "12/[0]": {
        "classes": 4,
        "invariants": [[0, 0, 0], [2, 0, 0], [2, 0, 0], [11, 11, 0]],
        "reaches_free_rank_5": False,
    },
    "12/[2, 0]": {
        "classes": 4,
        "invariants": [[2, 0], [2, 0, 0, 0], [2, 0, 0, 0], [2, 0, 0, 0]],
        "reaches_free_rank_5": False,
    },
    "12/[5, 0]": {
        "classes": 8,
        "invariants": [
            [0, 0, 0], [0, 0, 0], [0, 0, 0, 0, 0], [5, 5, 0],
            [5, 5, 0], [5, 5, 0], [5, 5, 0], [5, 25, 0],
        ],
        "reaches_free_rank_5": True,
    },
}


def unique_free_rank_five():
    """Exactly one positive-rank subgroup class admits an index-5 subgroup
    of free rank >= 5, and it is the class with invariants [5, 0].

    Every index <= 12 class with free rank >= 1 is rewritten and its index-5
    subgroup classes are enumerated; the expected per-branch data (class
    counts, sorted invariant lists, and whether free rank 5 occurs) is
    frozen above.
    """
    pres = catalog("Gamma")
    records = low_index_subgroups(pres, 2, 12)
    actual_branches = {}
    rank5_branches = []
    for record in records:
        outer = _invariants_of_record(pres, record)
        if _free_rank(outer) < 1:
            continue
        key = f"{record.index}/{outer}"
        subgroup = reidemeister_schreier(pres, record.representative)
        inner = low_index_subgroups(subgroup, 5, 5)
        aqis = sorted(_invariants_of_record(subgroup, q) for q in inner)
        reaches = any(_free_rank(a) >= 5 for a in aqis)
        actual_branches[key] = {
            "classes": len(inner),
            "invariants": aqis,
            "reaches_free_rank_5": reaches,
        }
        if reaches:
            rank5_branches.append(key)
    actual = {"branches": actual_branches, "rank5_branches": rank5_branches}
    expected = {
        "branches": FREE_RANK_BRANCHES,
        "rank5_branches": ["12/[5, 0]"],
    }
    return _result("unique_free_rank_five", expected, actual)


def extension_counts():
    """Low-index statistics separating four degree-2 extensions pairwise.

    The right-angled-ish reflection group (Lambda0) has three index-2
    subgroup classes with invariants [2], [6], [2]; the [6] one (Lambda2,
    shipped in rewritten form) has no index-7 subgroup classes while the
    direct product extension has four, and the remaining pair differ at
    index 8.
    """
    lam0 = catalog("Lambda0")
    index2 = low_index_subgroups(lam0, 2, 2)
    index2_invariants = sorted(_invariants_of_record(lam0, r) for r in index2)
    actual = {
        "lambda0_invariants": abelian_invariants(lam0),
        "lambda0_index2_invariants": index2_invariants,
        "gamma0_invariants": abelian_invariants(catalog("Gamma0")),
        "lambda1_invariants": abelian_invariants(catalog("Lambda1")),
        "lambda2_invariants": abelian_invariants(catalog("Lambda2")),
        "product_invariants": abelian_invariants(catalog("GammaXC2")),
        "lambda2_index7_classes": len(low_index_subgroups(catalog("Lambda2"), 7, 7)),
        "product_index7_classes": len(low_index_subgroups(catalog("GammaXC2"), 7, 7)),
        "lambda1_index8_classes": len(low_index_subgroups(catalog("Lambda1"), 8, 8)),
        "gamma0_index8_classes": len(low_index_subgroups(catalog("Gamma0"), 8, 8)),
    }
    expected = {
        "lambda0_invariants": [2, 2],
        "lambda0_index2_invariants": [[2], [2], [6]],
        "gamma0_invariants": [2],
        "lambda1_invariants": [2],
        "lambda2_invariants": [6],
        "product_invariants": [6],
        "lambda2_index7_classes": 0,
        "product_index7_classes": 4,
        "lambda1_index8_classes": 1,
        "gamma0_index8_classes": 3,
    }
    return _result("extension_counts", expected, actual)


def coxeter_counts():
    """The reflection group and the other product extension differ in their
    number of index-8 subgroup classes (3 versus 5)."""
    actual = {
        "lambda0_index8_classes": len(low_index_subgroups(catalog("Lambda0"), 8, 8)),
        "product_index8_classes": len(low_index_subgroups(catalog("Gamma0XC2"), 8, 8)),
    }
    expected = {"lambda0_index8_classes": 3, "product_index8_classes": 5}
    return _result("coxeter_counts", expected, actual)


# (core order, invariant list) pairs of the 11 index-24 classes, sorted;
# the three largest cores share order 24!/2
_HALF_24_FACTORIAL = 310224200866619719680000
WEEKS_INDEX24_PAIRS = [
    [168, [2, 2, 2, 70, 70]],
    [1320, [5, 5, 10]],
    [6072, [2, 2, 2, 10, 110]],
    [6072, [5, 55, 0]],
    [2204496, [5, 30, 0]],
    [2204496, [5, 30, 0]],
    [2204496, [90, 90]],
    [2204496, [90, 90]],
    [_HALF_24_FACTORIAL, [5, 30]],
    [_HALF_24_FACTORIAL, [5, 30]],
    [_HALF_24_FACTORIAL, [5, 30]],
]


def weeks_covers():
    """Index-24 subgroup census of the two-generator hyperbolic group.

    Eleven classes; for each, the abelian invariants of the subgroup and the
    order of the coset-action image (the quotient by the normal core); the
    two images of order 6072 are simple.  At index 8 there is a single
    class, with invariants [5, 30].
    """
    pres = catalog("GammaW")
    records = low_index_subgroups(pres, 1, 24)
    at24 = [r for r in records if r.index == 24]
    pairs = []
    simple_6072 = []
    for record in at24:
        aqi = _invariants_of_record(pres, record)
        core = core_table(pres, record.representative)
        order = core.order()
        pairs.append([order, aqi])
        if order == 6072:
            simple_6072.append(core.is_simple())
    pairs.sort()
    at8 = [r for r in records if r.index == 8]
    actual = {
        "group_invariants": abelian_invariants(pres),
        "index24_classes": len(at24),
        "core_order_and_invariants": pairs,
        "order_6072_cores_simple": sorted(simple_6072),
        "index8_classes": len(at8),
        "index8_invariants": [_invariants_of_record(pres, r) for r in at8],
    }
    expected = {
        "group_invariants": [5, 5],
        "index24_classes": 11,
        "core_order_and_invariants": WEEKS_INDEX24_PAIRS,
        "order_6072_cores_simple": [True, True],
        "index8_classes": 1,
        "index8_invariants": [[5, 30]],
    }
    return _result("weeks_covers", expected, actual)


def fibered_homology():
    """Homology of cyclic covers of two fibered bundles.

    The genus-2 action: its sixth power, characteristic polynomial, and the
    homology of the 6-fold cover (torsion order 275).  The torus bundle:
    torsion orders 5, 5, 45 at powers 1, 2, 4, and strictly increasing
    values above 5 for powers 3 through 10.
    """
    sixth = mat_pow([list(row) for row in FIBER_ACTION], 6)
    h1 = mapping_torus_h1([list(row) for row in FIBER_ACTION], 6)
    torsion_order = 1
    for d in h1:
        if d != 0:
            torsion_order *= d
    torus = [list(row) for row in TORUS_MONODROMY]
    torsion_by_power = [torus_bundle_torsion(torus, d) for d in range(1, 11)]
    tail = torsion_by_power[2:]
    actual = {
        "sixth_power": sixth,
        "char_poly": char_poly([list(row) for row in FIBER_ACTION]),
        "cover_h1": h1,
        "cover_torsion_order": torsion_order,
        "torus_torsion_1_2_4": [
            torsion_by_power[0], torsion_by_power[1], torsion_by_power[3],
        ],
        "torus_torsion_3_to_10_increasing_above_5": (
            all(v > 5 for v in tail)
            and all(a < b for a, b in zip(tail, tail[1:]))
        ),
    }
    expected = {
        "sixth_power": [list(row) for row in FIBER_ACTION_SIXTH],
        "char_poly": [1, -3, 3, -3, 1],
        "cover_h1": [5, 55, 0],
        "cover_torsion_order": 275,
        "torus_torsion_1_2_4": [5, 5, 45],
        "torus_torsion_3_to_10_increasing_above_5": True,
    }
    return _result("fibered_homology", expected, actual)


SCENARIOS = {
    "rank_bound": rank_bound,
    "unique_free_rank_five": unique_free_rank_five,
    "extension_counts": extension_counts,
    "coxeter_counts": coxeter_counts,
    "weeks_covers": weeks_covers,
    "fibered_homology": fibered_homology,
}


def scenario_names():
    return list(SCENARIOS)


def run_scenario(name):
    """Run one scenario by name."""
    if name not in SCENARIOS:
        known = ", ".join(SCENARIOS)
        raise KeyError(f"no scenario {name!r} (known: {known})")
    return SCENARIOS[name]()


def run_all():
    """Run every scenario, in declaration order."""
    return [fn() for fn in SCENARIOS.values()]
