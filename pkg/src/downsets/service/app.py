"""HTTP service over the core library.

Each endpoint wraps one plain handler function; the command-line client
calls the same handlers in process, so both fronts share behavior exactly.
Library errors map to HTTP statuses here: malformed documents and violated
preconditions to 422, a tripped enumeration cap to 413.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..antichains import extend_maximal_antichain, extend_maximal_strong_antichain
from ..gadgets import (
    BUILDERS,
    TWO_TABLE_FAMILIES,
    GadgetInstance,
    decode_ext,
    decode_range_strong,
    decode_sep,
    decode_two_chain,
    decode_wkl,
    decode_wpo,
)
from ..generators import census_identity_report
from ..ideals import et_decompose
from ..io import DocumentError, poset_from_document, poset_to_document
from ..itree import DEFAULT_MAX_ENUM, EnumerationCapError, count_intervals, enumerate_intervals
from ..poset import OrderViolationError, Poset
from ..priority import (
    evaluator_from_rules,
    log_to_json,
    prio_run,
    prio_verify,
    toy_evaluator_pool,
)
from ..separation import separate_down, separation_tree
from .models import (
    CensusRequest,
    CensusResponse,
    DecomposeRequest,
    DecomposeResponse,
    GadgetMeta,
    GadgetRequest,
    GadgetResponse,
    IntervalsRequest,
    IntervalsResponse,
    PosetDoc,
    PriorityRequest,
    PriorityResponse,
    SeparateRequest,
    SeparateResponse,
    ValidateRequest,
    ValidateResponse,
    Violation,
)


def _to_poset(doc: PosetDoc) -> Poset:
    raw = doc.model_dump()
    raw["leq"] = [list(p) for p in raw["leq"]]
    return poset_from_document(raw)


def handle_validate(req: ValidateRequest) -> ValidateResponse:
    try:
        P = _to_poset(req.poset)
    except OrderViolationError as err:
        return ValidateResponse(
            valid=False, violation=Violation(axiom=err.axiom, witness=list(err.witness))
        )
    return ValidateResponse(
        valid=True,
        n=P.n,
        ids=list(P.ids),
        maximal=sorted(P.ids_of(P.maximal_mask())),
        minimal=sorted(P.ids_of(P.minimal_mask())),
    )


def handle_intervals(req: IntervalsRequest) -> IntervalsResponse:
    P = _to_poset(req.poset)
    count = count_intervals(P)
    if req.mode == "count":
        return IntervalsResponse(count=count)
    cap = DEFAULT_MAX_ENUM if req.max_enum is None else req.max_enum
    ivals = enumerate_intervals(P, cap)
    listed = sorted((sorted(v) for v in ivals), key=lambda v: (len(v), v))
    return IntervalsResponse(count=count, intervals=listed)


def _rebuild_gadget(meta: GadgetMeta) -> GadgetInstance:
    if meta.family in TWO_TABLE_FAMILIES:
        return BUILDERS[meta.family](meta.f, meta.g or [], meta.horizon)
    if meta.family == "truefalse":
        return BUILDERS[meta.family](meta.f, meta.copies, meta.horizon)
    return BUILDERS[meta.family](meta.f, meta.horizon)


def _decode_with(inst: GadgetInstance, P: Poset) -> tuple[list[int] | None, dict]:
    fam = inst.family
    roles = inst.roles
    nh = inst.horizon
    if fam == "two-chain":
        return sorted(decode_two_chain(inst, et_decompose(P))), {"method": "ideal-cover"}
    if fam == "omega-omegastar":
        return sorted(decode_wpo(inst, et_decompose(P))), {"method": "ideal-cover"}
    if fam == "range-strong":
        s = extend_maximal_strong_antichain(P, [])
        return sorted(decode_range_strong(inst, s)), {"method": "strong-antichain"}
    if fam == "antichain-ext":
        seed = [roles[f"b{n}"] for n in range(nh)]
        e = extend_maximal_antichain(P, seed)
        return sorted(decode_ext(inst, e)), {"method": "antichain-extension"}
    if fam == "sep":
        a = [roles[f"a{n}"] for n in range(nh)]
        b = [roles[f"b{n}"] for n in range(nh)]
        ival = separate_down(P, a, b)
        return sorted(decode_sep(inst, ival)), {"method": "separating-interval"}
    if fam == "wkl":
        a = [roles[f"a{n}"] for n in range(nh)]
        ival = separate_down(P, a, [])
        decoded, n0 = decode_wkl(inst, ival)
        return sorted(decoded), {"method": "separating-interval", "tail_start": n0}
    return None, {"note": "family has no decoder; inspect the poset directly"}


def handle_decompose(req: DecomposeRequest) -> DecomposeResponse:
    P = _to_poset(req.poset)
    dec = et_decompose(P)
    witness = sorted(dec.witness)
    parts = sorted((sorted(p) for p in dec.parts), key=lambda v: (len(v), v))
    decoded = None
    decoder = None
    if req.gadget is not None:
        inst = _rebuild_gadget(req.gadget)
        if inst.poset.ids != P.ids or inst.poset.up != P.up:
            raise ValueError("gadget metadata does not rebuild the submitted poset")
        decoded, decoder = _decode_with(inst, P)
    return DecomposeResponse(
        witness=witness, parts=parts, decoded=decoded, decoder=decoder
    )


def handle_separate(req: SeparateRequest) -> SeparateResponse:
    P = _to_poset(req.poset)
    ival = separate_down(P, req.a, req.b)
    tree = None
    if req.depth is not None:
        tree = list(separation_tree(P, req.a, req.b, req.depth))
    return SeparateResponse(interval=sorted(ival), tree=tree)


def handle_gadget(req: GadgetRequest) -> GadgetResponse:
    if req.family in TWO_TABLE_FAMILIES:
        inst = BUILDERS[req.family](req.f, req.g or [], req.horizon)
    elif req.family == "truefalse":
        inst = BUILDERS[req.family](req.f, req.copies, req.horizon)
    else:
        inst = BUILDERS[req.family](req.f, req.horizon)
    doc = poset_to_document(inst.poset)
    meta: dict = {"family": inst.family, "f": list(req.f), "horizon": inst.horizon}
    if req.family in TWO_TABLE_FAMILIES:
        meta["g"] = list(req.g or [])
    if req.family == "truefalse":
        meta["copies"] = req.copies
    doc["gadget"] = meta
    return GadgetResponse(
        document=doc,
        roles=dict(inst.roles),
        horizon=inst.horizon,
        family=inst.family,
    )


def handle_priority(req: PriorityRequest) -> PriorityResponse:
    if req.rules is None:
        ev = toy_evaluator_pool()
    else:
        ev = evaluator_from_rules([r.model_dump() for r in req.rules])
    log = prio_run(req.horizon, req.stages, ev)
    n_slice = req.slice_size if req.slice_size is not None else 100
    verify = prio_verify(log, ev, n_slice)
    return PriorityResponse(
        transcript=json.loads(log_to_json(log)), verify=verify, slice_size=n_slice
    )


def handle_census(req: CensusRequest) -> CensusResponse:
    report = census_identity_report(
        req.max_n,
        check_factorization=req.factorization,
        check_restriction=req.restriction,
        random_count=req.random_count,
        random_sizes=(req.random_min, req.random_max),
        seed=req.seed,
    )
    return CensusResponse(report=report)


app = FastAPI(title="downsets", version="0.1.0")


@app.exception_handler(DocumentError)
async def _doc_error(request: Request, exc: DocumentError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"error": "document", "detail": str(exc)})


@app.exception_handler(OrderViolationError)
async def _order_error(request: Request, exc: OrderViolationError) -> JSONResponse:
    return JSONResponse(
        status_code=422,
        content={"error": "order-axioms", "axiom": exc.axiom, "witness": list(exc.witness)},
    )


@app.exception_handler(EnumerationCapError)
async def _cap_error(request: Request, exc: EnumerationCapError) -> JSONResponse:
    return JSONResponse(status_code=413, content={"error": "enumeration-cap", "detail": str(exc)})


@app.exception_handler(ValueError)
async def _value_error(request: Request, exc: ValueError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"error": "precondition", "detail": str(exc)})


@app.exception_handler(RuntimeError)
async def _runtime_error(request: Request, exc: RuntimeError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"error": "evaluator", "detail": str(exc)})


@app.post("/validate", response_model=ValidateResponse)
async def post_validate(req: ValidateRequest) -> ValidateResponse:
    return handle_validate(req)


@app.post("/intervals", response_model=IntervalsResponse)
async def post_intervals(req: IntervalsRequest) -> IntervalsResponse:
    return handle_intervals(req)


@app.post("/decompose", response_model=DecomposeResponse)
async def post_decompose(req: DecomposeRequest) -> DecomposeResponse:
    return handle_decompose(req)


@app.post("/separate", response_model=SeparateResponse)
async def post_separate(req: SeparateRequest) -> SeparateResponse:
    return handle_separate(req)


@app.post("/gadget", response_model=GadgetResponse)
async def post_gadget(req: GadgetRequest) -> GadgetResponse:
    return handle_gadget(req)


@app.post("/priority", response_model=PriorityResponse)
async def post_priority(req: PriorityRequest) -> PriorityResponse:
    return handle_priority(req)


@app.post("/census", response_model=CensusResponse)
async def post_census(req: CensusRequest) -> CensusResponse:
    return handle_census(req)
