"""Manifest-driven verification: replay a frozen list of checks as a report.

A manifest is a UTF-8 JSON file with one top-level object holding a "checks"
array.  Each check is an object with a "type" field naming one of the
supported check kinds, that kind's parameters, an expected value, and an
optional free-form "notes" string.  Group references are catalog names or
paths (relative to the manifest file) of presentation files.

Running a manifest executes every check — failures never abort the run — and
produces an order-preserving report.  The rendered report depends only on
the check outcomes, never on scheduling, so runs with different worker
counts are byte-identical apart from the per-check timing suffix.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from grpkit.arith import split_prime
from grpkit.errors import ResourceLimitError
from grpkit.intlinalg import (
    abelian_invariants,
    char_poly,
    format_invariants,
    mapping_torus_h1,
)
from grpkit.low_index import core_table, low_index_subgroups
from grpkit.presentations import catalog, catalog_keys, load_presentation
from grpkit.quotients import builtin_target, count_epimorphisms
from grpkit.rewrite import reidemeister_schreier


class ManifestError(ValueError):
    """The manifest file is malformed or references something unknown."""


def _compact(value):
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


# per check type: (ordered parameter fields, expected-value fields)
CHECK_SCHEMAS = {
    "LowIndexCount": (("group", "index"), ("expected_classes",)),
    "AqiOfClass": (("group", "index", "class_ordinal"), ("expected_invariants",)),
    "AqiOfGroup": (("group",), ("expected_invariants",)),
    "NestedLowIndex": (
        ("group", "outer_index", "outer_class_ordinal", "inner_index"),
        ("expected_classes", "expected_invariants_multiset"),
    ),
    "CosetImageOrder": (("group", "index", "class_ordinal"), ("expected_order",)),
    "SimpleCore": (("group", "index", "class_ordinal"), ("expected_simple",)),
    "MappingTorusH1": (("matrix", "power"), ("expected_invariants",)),
    "CharPoly": (("matrix",), ("expected_coeffs",)),
    "PrimeSplit": (("field", "p"), ("expected_pattern",)),
    "EpiClasses": (("group", "target", "aut_order"), ("expected_classes",)),
}


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one manifest check."""

    position: int
    check_type: str
    params: str
    status: str  # "ok", "FAIL", or "ERROR"
    expected: str
    actual: str
    seconds: float
    resource_limited: bool = False

    def render(self, include_timing=True):
        line = (
            f"{self.status:<5} {self.position:>3} {self.check_type} "
            f"{self.params} expected={self.expected} actual={self.actual}"
        )
        if include_timing:
            line += f" [{self.seconds:.3f}s]"
        return line


@dataclass(frozen=True)
class VerificationReport:
    """All check outcomes of one manifest run, in manifest order."""

    manifest_name: str
    results: tuple

    @property
    def all_passed(self):
        return all(r.status == "ok" for r in self.results)

    def counts(self):
        passed = sum(1 for r in self.results if r.status == "ok")
        failed = sum(1 for r in self.results if r.status == "FAIL")
        errors = sum(1 for r in self.results if r.status == "ERROR")
        return passed, failed, errors

    def render(self, include_timing=True):
        passed, failed, errors = self.counts()
        lines = [f"manifest: {self.manifest_name}", f"checks: {len(self.results)}"]
        lines.extend(r.render(include_timing) for r in self.results)
        lines.append(f"passed: {passed} failed: {failed} errors: {errors}")
        lines.append("result: " + ("PASS" if self.all_passed else "FAIL"))
        return "\n".join(lines) + "\n"

    def exit_code(self):
        """0 if everything passed, 1 on any failed check, 3 if the only
        problems were checks cut short by resource limits."""
        if self.all_passed:
            return 0
        if any(r.status == "FAIL" for r in self.results):
            return 1
        if any(r.resource_limited for r in self.results):
            return 3
        return 1


def load_manifest(path):
    """Parse and validate the manifest; returns the raw check dicts."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or "checks" not in data:
        raise ManifestError('manifest must be an object with a "checks" array')
    checks = data["checks"]
    if not isinstance(checks, list):
        raise ManifestError('"checks" must be an array')
    for i, check in enumerate(checks, start=1):
        if not isinstance(check, dict):
            raise ManifestError(f"check {i} is not an object")
        kind = check.get("type")
        if kind not in CHECK_SCHEMAS:
            known = ", ".join(sorted(CHECK_SCHEMAS))
            raise ManifestError(f"check {i}: unknown type {kind!r} (known: {known})")
        params, expected = CHECK_SCHEMAS[kind]
        for field_name in params + expected:
            if field_name not in check:
                raise ManifestError(f"check {i} ({kind}): missing field {field_name!r}")
    return checks


class _Runner:
    """Executes checks against resolved groups with shared budgets."""

    def __init__(self, base_dir, node_budget=None, max_cosets=None):
        self.base_dir = Path(base_dir)
        self.node_budget = node_budget
        self.max_cosets = max_cosets
        self._groups = {}

    def resolve_group(self, reference):
        if reference in self._groups:
            return self._groups[reference]
        if reference in catalog_keys():
            presentation = catalog(reference)
        else:
            candidate = self.base_dir / reference
            if not candidate.is_file():
                raise ManifestError(
                    f"group {reference!r} is neither a catalog name nor a file"
                )
            presentation = load_presentation(candidate)
        self._groups[reference] = presentation
        return presentation

    def validate_references(self, checks):
        """Resolve every group/field/target/matrix reference up front."""
        from grpkit.arith import field_spec

        for i, check in enumerate(checks, start=1):
            try:
                if "group" in check:
                    self.resolve_group(check["group"])
                if "field" in check:
                    field_spec(check["field"])
                if "target" in check:
                    builtin_target(check["target"])
                if "matrix" in check:
                    matrix = check["matrix"]
                    size = len(matrix)
                    if size == 0 or any(len(row) != size for row in matrix):
                        raise ManifestError("matrix must be square and nonempty")
            except ManifestError as exc:
                raise ManifestError(f"check {i} ({check['type']}): {exc}") from exc
            except (KeyError, TypeError) as exc:
                raise ManifestError(
                    f"check {i} ({check['type']}): unresolvable reference: {exc}"
                ) from exc

    def classes(self, reference, index):
        presentation = self.resolve_group(reference)
        records = low_index_subgroups(
            presentation, index, index, node_budget=self.node_budget
        )
        return presentation, records

    def class_at(self, reference, index, ordinal):
        presentation, records = self.classes(reference, index)
        if not 1 <= ordinal <= len(records):
            raise ManifestError(
                f"class_ordinal {ordinal} out of range: {len(records)} classes "
                f"of index {index} in {reference}"
            )
        return presentation, records[ordinal - 1]

    # ---- one executor per check type; each returns (expected, actual) as
    # rendered strings, the comparison having already been made canonical

    def run_check(self, check):
        kind = check["type"]
        handler = getattr(self, "_check_" + kind.lower())
        return handler(check)

    def _check_lowindexcount(self, check):
        _, records = self.classes(check["group"], check["index"])
        return str(check["expected_classes"]), str(len(records))

    def _check_aqiofclass(self, check):
        presentation, record = self.class_at(
            check["group"], check["index"], check["class_ordinal"]
        )
        subgroup = reidemeister_schreier(presentation, record.representative)
        actual = abelian_invariants(subgroup)
        return (
            format_invariants(check["expected_invariants"]),
            format_invariants(actual),
        )

    def _check_aqiofgroup(self, check):
        presentation = self.resolve_group(check["group"])
        return (
            format_invariants(check["expected_invariants"]),
            format_invariants(abelian_invariants(presentation)),
        )

    def _check_nestedlowindex(self, check):
        presentation, record = self.class_at(
            check["group"], check["outer_index"], check["outer_class_ordinal"]
        )
        subgroup = reidemeister_schreier(presentation, record.representative)
        inner = low_index_subgroups(
            subgroup,
            check["inner_index"],
            check["inner_index"],
            node_budget=self.node_budget,
        )
        multiset = sorted(
            abelian_invariants(reidemeister_schreier(subgroup, r.representative))
            for r in inner
        )
        actual = {"classes": len(inner), "invariants": multiset}
        expected = {
            "classes": check["expected_classes"],
            "invariants": sorted(list(x) for x in check["expected_invariants_multiset"]),
        }
        return _compact(expected), _compact(actual)

    def _check_cosetimageorder(self, check):
        presentation, record = self.class_at(
            check["group"], check["index"], check["class_ordinal"]
        )
        order = core_table(presentation, record.representative).order()
        return str(check["expected_order"]), str(order)

    def _check_simplecore(self, check):
        presentation, record = self.class_at(
            check["group"], check["index"], check["class_ordinal"]
        )
        simple = core_table(presentation, record.representative).is_simple()
        return _compact(check["expected_simple"]), _compact(simple)

    def _check_mappingtorush1(self, check):
        actual = mapping_torus_h1(check["matrix"], check["power"])
        return (
            format_invariants(check["expected_invariants"]),
            format_invariants(actual),
        )

    def _check_charpoly(self, check):
        return _compact(check["expected_coeffs"]), _compact(char_poly(check["matrix"]))

    def _check_primesplit(self, check):
        splitting = split_prime(check["field"], check["p"])
        actual = [list(pair) for pair in splitting.factors]
        expected = [list(pair) for pair in check["expected_pattern"]]
        return _compact(expected), _compact(actual)

    def _check_epiclasses(self, check):
        presentation = self.resolve_group(check["group"])
        target = builtin_target(check["target"])
        census = count_epimorphisms(presentation, target, aut_order=check["aut_order"])
        return str(check["expected_classes"]), str(census.classes)


def _params_string(check):
    fields, _ = CHECK_SCHEMAS[check["type"]]
    return " ".join(f"{name}={_compact(check[name])}" for name in fields)


def run_manifest(path, jobs=1, node_budget=None, max_cosets=None):
    """Execute every check in the manifest; returns a VerificationReport.

    ``jobs`` sizes the worker pool; the report is assembled in manifest
    order regardless.  ``node_budget`` and ``max_cosets`` override the
    search budgets for all checks in this run.
    """
    path = Path(path)
    checks = load_manifest(path)
    runner = _Runner(path.parent, node_budget=node_budget, max_cosets=max_cosets)
    runner.validate_references(checks)
    if jobs < 1:
        raise ValueError("jobs must be at least 1")

    def execute(item):
        position, check = item
        start = time.perf_counter()
        limited = False
        try:
            expected, actual = runner.run_check(check)
            status = "ok" if expected == actual else "FAIL"
        except ResourceLimitError as exc:
            status, expected, actual = "ERROR", "-", f"resource limit: {exc}"
            limited = True
        except Exception as exc:  # a check must never abort the run
            status, expected, actual = "ERROR", "-", f"{type(exc).__name__}: {exc}"
        seconds = time.perf_counter() - start
        return CheckResult(
            position=position,
            check_type=check["type"],
            params=_params_string(check),
            status=status,
            expected=expected,
            actual=actual,
            seconds=seconds,
            resource_limited=limited,
        )

    numbered = list(enumerate(checks, start=1))
    if jobs == 1:
        results = [execute(item) for item in numbered]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(execute, numbered))
    return VerificationReport(manifest_name=path.name, results=tuple(results))
