"""JSON documents for empirical models, knowledgebases, and CSPs.

The format is strict: unknown fields are rejected, every referenced name must
be declared in the universe, and probability values are exact rationals
written as integers or "p/q" strings (floats are refused so that parsing
never rounds). Serialization is canonical: fixed key order, domains sorted,
rows sorted, rationals in lowest terms, so identical inputs produce
byte-identical documents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Knowledgebase
from .contextuality import (
    POSSIBILISTIC,
    PROBABILISTIC,
    EmpiricalModel,
    MeasurementScenario,
)
from .core import (
    Assignment,
    BOOLEAN,
    Domain,
    NONNEG_RATIONAL,
    VariableUniverse,
    enumerate_assignments,
)
from .errors import ParseError, ValkitError
from .logic import CSPInstance, Constraint
from .potentials import Potential
from .relations import Relation

KINDS = ("empirical-model", "knowledgebase", "csp")


@dataclass(frozen=True)
class ParsedInput:
    kind: str
    payload: object  # EmpiricalModel | Knowledgebase | CSPDocumentPayload
    document: dict


@dataclass(frozen=True)
class CSPDocumentPayload:
    csp: CSPInstance
    covers: tuple[Domain, ...]


def format_rational(value: Fraction) -> int | str:
    value = Fraction(value)
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def parse_signed_rational(raw, where: str) -> Fraction:
    if isinstance(raw, bool):
        raise ParseError(f"{where}: booleans are not rational values")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float):
        raise ParseError(f"{where}: floats are not exact; write the value as a 'p/q' string")
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{where}: cannot parse {raw!r} as a rational") from None
    raise ParseError(f"{where}: expected an integer or 'p/q' string, got {type(raw).__name__}")


def parse_rational(raw, where: str) -> Fraction:
    value = parse_signed_rational(raw, where)
    if value < 0:
        raise ParseError(f"{where}: negative value {raw!r}")
    return value


def _expect_mapping(obj, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object, got {type(obj).__name__}")
    return obj


def _expect_list(obj, where: str) -> list:
    if not isinstance(obj, list):
        raise ParseError(f"{where}: expected a list, got {type(obj).__name__}")
    return obj


def _expect_keys(obj: dict, required: tuple[str, ...], optional: tuple[str, ...], where: str) -> None:
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise ParseError(f"{where}: unknown fields {sorted(unknown)}")
    missing = set(required) - set(obj)
    if missing:
        raise ParseError(f"{where}: missing fields {sorted(missing)}")


def _expect_label(obj, where: str) -> str:
    if not isinstance(obj, str) or not obj:
        raise ParseError(f"{where}: expected a nonempty string")
    if "," in obj:
        raise ParseError(f"{where}: {obj!r} must not contain a comma (reserved as the key separator)")
    return obj


def _parse_universe(raw, where: str) -> VariableUniverse:
    entries = []
    for k, item in enumerate(_expect_list(raw, where)):
        spot = f"{where}[{k}]"
        item = _expect_mapping(item, spot)
        _expect_keys(item, ("name", "frame"), (), spot)
        name = _expect_label(item["name"], f"{spot}.name")
        frame = [_expect_label(v, f"{spot}.frame") for v in _expect_list(item["frame"], f"{spot}.frame")]
        entries.append((name, tuple(frame)))
    try:
        return VariableUniverse.of(entries)
    except ValkitError as err:
        raise ParseError(f"{where}: {err}") from None


def _parse_name_list(raw, universe: VariableUniverse, where: str) -> tuple[str, ...]:
    names = tuple(_expect_label(v, where) for v in _expect_list(raw, where))
    for name in names:
        if name not in universe.vars:
            raise ParseError(f"{where}: {name!r} is not declared in the universe")
    return names


def _outcome_assignment(key: str, context: tuple[str, ...], universe: VariableUniverse, where: str) -> Assignment:
    labels = key.split(",")
    if len(labels) != len(context):
        raise ParseError(f"{where}: key {key!r} must have {len(context)} comma-separated labels")
    for name, label in zip(context, labels):
        if label not in universe.frame(name):
            raise ParseError(f"{where}: label {label!r} is not in the frame of {name!r}")
    return Assignment.of(dict(zip(context, labels)))


def _parse_empirical_model(doc: dict) -> EmpiricalModel:
    _expect_keys(doc, ("kind", "universe", "model-kind", "contexts", "sections"), (), "document")
    universe = _parse_universe(doc["universe"], "universe")
    model_kind = doc["model-kind"]
    if model_kind not in (PROBABILISTIC, POSSIBILISTIC):
        raise ParseError(f"model-kind must be 'probabilistic' or 'possibilistic', got {model_kind!r}")
    contexts = [
        _parse_name_list(ctx, universe, f"contexts[{k}]") for k, ctx in enumerate(_expect_list(doc["contexts"], "contexts"))
    ]
    sections_raw = _expect_mapping(doc["sections"], "sections")
    keys = {",".join(ctx): ctx for ctx in contexts}
    if set(sections_raw) != set(keys):
        extra = sorted(set(sections_raw) - set(keys))
        missing = sorted(set(keys) - set(sections_raw))
        detail = []
        if extra:
            detail.append(f"unknown section keys {extra}")
        if missing:
            detail.append(f"missing sections {missing}")
        raise ParseError("sections: " + "; ".join(detail))
    sections = []
    for ctx in contexts:
        key = ",".join(ctx)
        where = f"sections[{key!r}]"
        raw = _expect_mapping(sections_raw[key], where)
        if not raw:
            raise ParseError(f"{where}: a section must list at least one outcome")
        table = {}
        for outcome_key, raw_value in raw.items():
            spot = f"{where}[{outcome_key!r}]"
            outcome = _outcome_assignment(outcome_key, ctx, universe, spot)
            if outcome in table:
                raise ParseError(f"{spot}: duplicate outcome")
            if model_kind == PROBABILISTIC:
                table[outcome] = parse_rational(raw_value, spot)
            else:
                if type(raw_value) is not int or raw_value not in (0, 1):
                    raise ParseError(f"{spot}: possibilistic values must be the integers 0 or 1")
                table[outcome] = raw_value
        domain = frozenset(ctx)
        semiring = NONNEG_RATIONAL if model_kind == PROBABILISTIC else BOOLEAN
        default = Fraction(0) if model_kind == PROBABILISTIC else 0
        try:
            sections.append(Potential.from_table(universe, domain, semiring, table, default=default))
        except ValkitError as err:
            raise ParseError(f"{where}: {err}") from None
    try:
        scenario = MeasurementScenario(universe, tuple(tuple(c) for c in contexts))
        return EmpiricalModel(scenario, model_kind, tuple(sections))
    except ValkitError as err:
        raise ParseError(str(err)) from None


def _parse_knowledgebase(doc: dict) -> Knowledgebase:
    _expect_keys(doc, ("kind", "universe", "valuations"), (), "document")
    universe = _parse_universe(doc["universe"], "universe")
    raw_valuations = _expect_list(doc["valuations"], "valuations")
    if not raw_valuations:
        raise ParseError("valuations: a knowledgebase needs at least one valuation")
    valuations = []
    styles = set()
    for k, item in enumerate(raw_valuations):
        where = f"valuations[{k}]"
        item = _expect_mapping(item, where)
        _expect_keys(item, ("domain",), ("tuples", "values"), where)
        domain_names = _parse_name_list(item["domain"], universe, f"{where}.domain")
        if len(set(domain_names)) != len(domain_names):
            raise ParseError(f"{where}.domain: repeated variable")
        has_tuples = "tuples" in item
        has_values = "values" in item
        if has_tuples == has_values:
            raise ParseError(f"{where}: exactly one of 'tuples' or 'values' is required")
        styles.add("tuples" if has_tuples else "values")
        if len(styles) > 1:
            raise ParseError("valuations: cannot mix relations ('tuples') and potentials ('values') in one knowledgebase")
        if has_tuples:
            rows = []
            for r, row in enumerate(_expect_list(item["tuples"], f"{where}.tuples")):
                row = _expect_list(row, f"{where}.tuples[{r}]")
                labels = [_expect_label(v, f"{where}.tuples[{r}]") for v in row]
                rows.append(labels)
            try:
                valuations.append(Relation.from_rows(universe, domain_names, rows))
            except ValkitError as err:
                raise ParseError(f"{where}: {err}") from None
        else:
            raw_values = _expect_mapping(item["values"], f"{where}.values")
            table = {}
            for outcome_key, raw_value in raw_values.items():
                spot = f"{where}.values[{outcome_key!r}]"
                outcome = _outcome_assignment(outcome_key, domain_names, universe, spot)
                if outcome in table:
                    raise ParseError(f"{spot}: duplicate assignment")
                table[outcome] = parse_rational(raw_value, spot)
            try:
                valuations.append(
                    Potential.from_table(universe, frozenset(domain_names), NONNEG_RATIONAL, table, default=Fraction(0))
                )
            except ValkitError as err:
                raise ParseError(f"{where}: {err}") from None
    try:
        return Knowledgebase(universe, tuple(valuations))
    except ValkitError as err:
        raise ParseError(str(err)) from None


def _parse_csp(doc: dict) -> CSPDocumentPayload:
    _expect_keys(doc, ("kind", "universe", "constraints"), ("covers",), "document")
    universe = _parse_universe(doc["universe"], "universe")
    constraints = []
    for k, item in enumerate(_expect_list(doc["constraints"], "constraints")):
        where = f"constraints[{k}]"
        item = _expect_mapping(item, where)
        _expect_keys(item, ("scheme", "allowed"), (), where)
        scheme = _parse_name_list(item["scheme"], universe, f"{where}.scheme")
        if len(set(scheme)) != len(scheme):
            raise ParseError(f"{where}.scheme: repeated variable")
        rows = []
        for r, row in enumerate(_expect_list(item["allowed"], f"{where}.allowed")):
            row = _expect_list(row, f"{where}.allowed[{r}]")
            rows.append([_expect_label(v, f"{where}.allowed[{r}]") for v in row])
        try:
            constraints.append(Constraint(scheme, Relation.from_rows(universe, scheme, rows)))
        except ValkitError as err:
            raise ParseError(f"{where}: {err}") from None
    if "covers" in doc:
        covers = [
            frozenset(_parse_name_list(cover, universe, f"covers[{k}]"))
            for k, cover in enumerate(_expect_list(doc["covers"], "covers"))
        ]
    else:
        covers = []
        for c in constraints:
            if c.scheme_set not in covers:
                covers.append(c.scheme_set)
    try:
        return CSPDocumentPayload(CSPInstance(universe, tuple(constraints)), tuple(covers))
    except ValkitError as err:
        raise ParseError(str(err)) from None


def parse_document_text(text: str) -> ParsedInput:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"invalid JSON: {err.msg}", line=err.lineno, column=err.colno) from None
    doc = _expect_mapping(doc, "document")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ParseError(f"document 'kind' must be one of {list(KINDS)}, got {kind!r}")
    if kind == "empirical-model":
        return ParsedInput(kind, _parse_empirical_model(doc), doc)
    if kind == "knowledgebase":
        return ParsedInput(kind, _parse_knowledgebase(doc), doc)
    return ParsedInput(kind, _parse_csp(doc), doc)


def _universe_document(universe: VariableUniverse) -> list[dict]:
    return [{"name": name, "frame": list(frame.values)} for name, frame in universe.entries]


def model_document(model: EmpiricalModel) -> dict:
    sections = {}
    for ctx, section in zip(model.scenario.contexts, model.sections):
        entries = {}
        for assignment in enumerate_assignments(frozenset(ctx), model.scenario.universe):
            value = section.table[assignment]
            key = ",".join(assignment.values_in(ctx))
            if model.kind == PROBABILISTIC:
                entries[key] = format_rational(value)
            elif value != 0:
                entries[key] = 1
        sections[",".join(ctx)] = entries
    return {
        "kind": "empirical-model",
        "universe": _universe_document(model.scenario.universe),
        "model-kind": model.kind,
        "contexts": [list(ctx) for ctx in model.scenario.contexts],
        "sections": sections,
    }


def knowledgebase_document(kb: Knowledgebase) -> dict:
    valuations = []
    for v in kb:
        names = sorted(v.domain)
        if isinstance(v, Relation):
            rows = [list(t.values_in(names)) for t in v.sorted_tuples()]
            valuations.append({"domain": names, "tuples": rows})
        else:
            values = {
                ",".join(a.values_in(names)): format_rational(v.table[a])
                for a in enumerate_assignments(v.domain, kb.universe)
            }
            valuations.append({"domain": names, "values": values})
    return {
        "kind": "knowledgebase",
        "universe": _universe_document(kb.universe),
        "valuations": valuations,
    }


def csp_document(payload: CSPDocumentPayload) -> dict:
    constraints = []
    for c in payload.csp.constraints:
        rows = [list(t.values_in(c.scheme)) for t in c.allowed.sorted_tuples()]
        constraints.append({"scheme": list(c.scheme), "allowed": rows})
    return {
        "kind": "csp",
        "universe": _universe_document(payload.csp.universe),
        "constraints": constraints,
        "covers": [sorted(cover) for cover in payload.covers],
    }


def document_for(payload) -> dict:
    if isinstance(payload, EmpiricalModel):
        return model_document(payload)
    if isinstance(payload, Knowledgebase):
        return knowledgebase_document(payload)
    if isinstance(payload, CSPDocumentPayload):
        return csp_document(payload)
    raise ParseError(f"no document form for {type(payload).__name__}")


def canonical_json(document: dict) -> str:
    return json.dumps(document, indent=2, ensure_ascii=True) + "\n"
