"""HTTP API over a trained engine.

Endpoints (JSON): POST /recommend, GET /health, GET /rules?field=...,
GET /templates. Malformed bodies and contract violations return 400;
well-formed requests never return 500. State is read-only per request and
swapped atomically on retrain, so concurrent requests do not interfere.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .engine import EngineState, StateHolder
from .errors import FieldSuggestError
from .model import FieldSlot, FieldValuePair, TermRef, ValueAtom, make_context
from .recommender import RecommendOptions, recommend
from .ruleindex import rule_to_json, select_rules


def _bad_request(reason: str) -> HTTPException:
    return HTTPException(status_code=400, detail=reason)


def _parse_slot(obj: Any, what: str) -> FieldSlot:
    if not isinstance(obj, dict):
        raise _bad_request(f"{what} must be an object")
    label = obj.get("fieldLabel")
    if not isinstance(label, str) or not label.strip():
        raise _bad_request(f"{what}.fieldLabel must be a non-empty string")
    field_type = obj.get("fieldType")
    if field_type is not None and not isinstance(field_type, str):
        raise _bad_request(f"{what}.fieldType must be a string or null")
    try:
        return FieldSlot(label, TermRef(field_type) if field_type else None)
    except ValueError as exc:
        raise _bad_request(f"{what}: {exc}") from exc


def _parse_context_pair(obj: Any, position: int) -> FieldValuePair:
    slot = _parse_slot(obj, f"context[{position}]")
    value_label = obj.get("valueLabel")
    if not isinstance(value_label, str) or not value_label.strip():
        raise _bad_request(f"context[{position}].valueLabel must be a non-empty string")
    value_type = obj.get("valueType")
    if value_type is not None and not isinstance(value_type, str):
        raise _bad_request(f"context[{position}].valueType must be a string or null")
    try:
        return FieldValuePair(slot, ValueAtom(value_label, TermRef(value_type) if value_type else None))
    except ValueError as exc:
        raise _bad_request(f"context[{position}]: {exc}") from exc


def _parse_options(obj: Any) -> RecommendOptions:
    if obj is None:
        return RecommendOptions()
    if not isinstance(obj, dict):
        raise _bad_request("options must be an object")
    cutoff = obj.get("scoreCutoff")
    limit = obj.get("maxResults")
    if cutoff is not None and not isinstance(cutoff, (int, float)):
        raise _bad_request("options.scoreCutoff must be a number")
    if limit is not None and not isinstance(limit, int):
        raise _bad_request("options.maxResults must be an integer")
    try:
        return RecommendOptions(score_cutoff=cutoff, max_results=limit)
    except ValueError as exc:
        raise _bad_request(f"options: {exc}") from exc


def _template_inventory(state: EngineState) -> list[dict]:
    templates: dict[str, dict[tuple, FieldSlot]] = {}
    for rule in state.index.rules:
        slots = templates.setdefault(rule.template_id, {})
        for pair in rule.antecedent + (rule.consequent,):
            slot = pair.field
            ident = (
                slot.field_type.uri if slot.field_type else slot.field_label.casefold(),
            )
            slots.setdefault(ident, slot)
    return [
        {
            "templateId": template_id,
            "fields": [
                {
                    "fieldLabel": slot.field_label,
                    "fieldType": slot.field_type.uri if slot.field_type else None,
                }
                for slot in sorted(slots.values(), key=lambda s: s.field_label.casefold())
            ],
        }
        for template_id, slots in sorted(templates.items())
    ]


def create_app(holder: StateHolder | EngineState, demo_dir: str | None = None) -> FastAPI:
    if isinstance(holder, EngineState):
        holder = StateHolder(holder)
    app = FastAPI(title="fieldsuggest")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.holder = holder

    @app.exception_handler(FieldSuggestError)
    async def _domain_error(_request: Request, exc: FieldSuggestError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health")
    async def health() -> dict:
        state = holder.get()
        return {"status": "ok", "rules": len(state.index)}

    @app.get("/templates")
    async def templates() -> dict:
        return {"templates": _template_inventory(holder.get())}

    @app.get("/rules")
    async def rules(field: str, fieldType: str | None = None) -> dict:
        state = holder.get()
        try:
            target = FieldSlot(field, TermRef(fieldType) if fieldType else None)
        except ValueError as exc:
            raise _bad_request(str(exc)) from exc
        matched = select_rules(state.index, target)
        return {"rules": [rule_to_json(r, state.mappings) for r in matched]}

    @app.post("/recommend")
    async def recommend_endpoint(request: Request) -> dict:
        try:
            payload = await request.json()
        except Exception as exc:
            raise _bad_request(f"body is not valid JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise _bad_request("body must be a JSON object")
        target = _parse_slot(payload.get("targetField"), "targetField")
        raw_context = payload.get("context", [])
        if not isinstance(raw_context, list):
            raise _bad_request("context must be a list")
        pairs = [_parse_context_pair(obj, i) for i, obj in enumerate(raw_context)]
        options = _parse_options(payload.get("options"))
        state = holder.get()
        context = make_context(pairs)
        results = recommend(
            context,
            target,
            state.index,
            state.mappings,
            options,
            state.train_counts,
        )
        return {
            "recommendations": [
                {
                    "valueLabel": r.value.value_label,
                    "valueType": r.value.value_type.uri if r.value.value_type else None,
                    "score": float(r.score),
                    "rank": r.rank,
                }
                for r in results
            ]
        }

    if demo_dir:
        app.mount("/demo", StaticFiles(directory=demo_dir, html=True), name="demo")

    return app
